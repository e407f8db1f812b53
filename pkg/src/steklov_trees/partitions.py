"""Boundary-balanced tree partitions and the test functions built on them.

Everything combinatorial here is carried in exact rational arithmetic
(:class:`fractions.Fraction`); floats appear only when a finished
construction is evaluated as a vertex function.  The guaranteed interval
for every produced boundary fraction is part of the certificate and is
checked exactly, never through floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    DegenerateSystemError,
    InfeasibleKError,
    InvariantViolationError,
    PartTooSmallError,
)
from .graph_core import (
    BoundaryTree,
    SubtreeRef,
    branch_components,
    diameter,
    make_subtree,
)
from .harmonic import VertexFunction

Edge = tuple[int, int]


@dataclass(frozen=True, eq=False)
class PartitionCertificate:
    """Removed edges plus exact boundary-fraction witnesses for a split.

    ``fractions[j]`` is ``|parts[j] ∩ boundary| / |boundary|`` and must
    lie in the closed ``interval``; :meth:`validate` re-derives every
    fraction from scratch and checks disjointness, so a certificate that
    validates is a complete proof of the split.
    """

    tree: BoundaryTree
    removed_edges: tuple[Edge, ...]
    parts: tuple[SubtreeRef, ...]
    fractions: tuple[Fraction, ...]
    interval: tuple[Fraction, Fraction]

    def validate(self) -> None:
        t = self.tree
        if not (len(self.parts) == len(self.fractions) == len(self.removed_edges)):
            raise InvariantViolationError("certificate field lengths disagree")
        if len(set(self.removed_edges)) != len(self.removed_edges):
            raise InvariantViolationError("removed edges are not distinct")
        eset = set(t.edges)
        for e in self.removed_edges:
            if e not in eset:
                raise InvariantViolationError(f"{e} is not an edge of the tree")
        lo, hi = self.interval
        seen: set[int] = set()
        m = t.n_boundary
        for ref, frac in zip(self.parts, self.fractions):
            if ref.vertices & seen:
                raise InvariantViolationError("parts are not pairwise disjoint")
            seen |= ref.vertices
            make_subtree(t, ref.vertices)  # connectivity re-check
            true_frac = Fraction(len(ref.relative_boundary), m)
            if frac != true_frac:
                raise InvariantViolationError(
                    f"declared fraction {frac} but found {true_frac}")
            if not lo <= frac <= hi:
                raise InvariantViolationError(
                    f"fraction {frac} outside [{lo}, {hi}]")

    def to_json_dict(self) -> dict:
        return {
            "removed_edges": [list(e) for e in self.removed_edges],
            "parts": [sorted(ref.vertices) for ref in self.parts],
            "fractions": [f"{f.numerator}/{f.denominator}" for f in self.fractions],
            "interval": [f"{b.numerator}/{b.denominator}" for b in self.interval],
        }


# -- descent machinery --------------------------------------------------------------

def _boundary_fraction(t: BoundaryTree, vertices: frozenset[int]) -> Fraction:
    cnt = sum(1 for v in vertices if t.boundary_pos[v] >= 0)
    return Fraction(cnt, t.n_boundary)


def _component_within(
    t: BoundaryTree, allowed: frozenset[int], start: int, blocked: int,
) -> frozenset[int]:
    """Component of ``start`` inside ``allowed`` after deleting ``blocked``."""
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in t.neighbors[x]:
            if y != blocked and y in allowed and y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def _pick(
    candidates: list[tuple[frozenset[int], Fraction, Edge]],
    ports: frozenset[int],
) -> tuple[frozenset[int], Fraction, Edge]:
    """The candidate with maximal fraction.

    Ties prefer components that avoid ``ports`` (vertices incident to
    previously removed edges: keeping a later part away from them keeps
    the multiway gradients on disjoint edge sets), then the component
    holding the smallest vertex id.
    """
    best = max(f for _, f, _ in candidates)
    pool = [c for c in candidates if c[1] == best]
    if len(pool) > 1:
        clean = [c for c in pool if not (c[0] & ports)]
        if clean:
            pool = clean
    return min(pool, key=lambda c: min(c[0]))


def _descend(
    t: BoundaryTree,
    allowed: frozenset[int],
    tau: Fraction,
    *,
    enter_at_equal: bool,
    ports: frozenset[int] = frozenset(),
) -> tuple[frozenset[int], Fraction, Edge]:
    """One balanced-part extraction inside the subtree induced on ``allowed``.

    Starts from the smallest edge, walks toward larger boundary mass
    while a side exceeds ``tau`` (``enter_at_equal`` controls whether a
    side exactly at ``tau`` is still descended into), and returns the
    maximal child strictly below the threshold when the walk stops.
    Descending strictly shrinks the active side, so at most ``n`` steps
    occur.  Returns ``(part vertices, fraction, cut edge)``.
    """
    inner = [e for e in t.edges if e[0] in allowed and e[1] in allowed]
    assert inner, "descent needs at least one edge"
    u0, v0 = inner[0]
    side_u = _component_within(t, allowed, u0, v0)
    side_v = allowed - side_u
    cands = [(side_u, _boundary_fraction(t, side_u), (u0, v0)),
             (side_v, _boundary_fraction(t, side_v), (u0, v0))]
    big, frac, edge = _pick(cands, ports)
    over = (frac >= tau) if enter_at_equal else (frac > tau)
    if not over:
        return big, frac, edge

    # walk into the heavy side;  v is its entry vertex, u the vertex left behind
    u, v = edge
    if v not in big:
        u, v = v, u
    steps = 0
    while True:
        steps += 1
        assert steps <= t.n, "descent failed to terminate"
        children = []
        for w in t.neighbors[v]:
            if w == u or w not in allowed:
                continue
            comp = _component_within(t, allowed, w, v)
            children.append((comp, _boundary_fraction(t, comp), (v, w)))
        assert children, "heavy side cannot be a single vertex"
        comp, frac, edge = _pick(children, ports)
        over = (frac >= tau) if enter_at_equal else (frac > tau)
        if not over:
            return comp, frac, edge
        u, v = edge


def partition_two(t: BoundaryTree) -> PartitionCertificate:
    """A one-edge split whose small side holds a guaranteed boundary share.

    The certified part ``H`` satisfies
    ``1/(2(D-1)) <= |H ∩ boundary|/|boundary| <= 1/2``: starting from an
    arbitrary edge, descend into any side holding strictly more than half
    of the boundary; when no side does, the current maximal child works
    because its parent vertex spreads more than half of the boundary over
    at most ``D - 1`` child components.
    """
    allowed = frozenset(range(t.n))
    part, frac, edge = _descend(t, allowed, Fraction(1, 2), enter_at_equal=False)
    d = t.max_degree
    cert = PartitionCertificate(
        tree=t,
        removed_edges=((min(edge), max(edge)),),
        parts=(make_subtree(t, part),),
        fractions=(frac,),
        interval=(Fraction(1, 2 * (d - 1)), Fraction(1, 2)),
    )
    cert.validate()
    return cert


def partition_two_optimal(t: BoundaryTree) -> PartitionCertificate:
    """Exhaustive counterpart of :func:`partition_two`.

    Scans all ``n - 1`` edges and keeps the split maximizing the smaller
    boundary share; by optimality the result is never worse than the
    descent's certified part, which makes this the oracle for it.
    """
    best: tuple[Fraction, Edge, frozenset[int]] | None = None
    full = frozenset(range(t.n))
    for u, v in t.edges:
        side_u = _component_within(t, full, u, v)
        side_v = full - side_u
        fu = _boundary_fraction(t, side_u)
        small, frac = (side_u, fu) if fu <= Fraction(1, 2) else (side_v, 1 - fu)
        if fu == Fraction(1, 2):
            small = min(side_u, side_v, key=min)
        if best is None or frac > best[0]:
            best = (frac, (u, v), small)
    assert best is not None
    frac, edge, part = best
    d = t.max_degree
    cert = PartitionCertificate(
        tree=t,
        removed_edges=(edge,),
        parts=(make_subtree(t, part),),
        fractions=(frac,),
        interval=(Fraction(1, 2 * (d - 1)), Fraction(1, 2)),
    )
    cert.validate()
    return cert


def partition_k(t: BoundaryTree, k: int) -> PartitionCertificate:
    """Peel off ``k - 1`` disjoint subtrees with balanced boundary shares.

    Each extraction runs the descent with threshold ``1/(k-1)`` inside
    whatever remains (always a connected tree: the extracted part is one
    side of an edge split), so every fraction lands in
    ``[1/((D-1)(k-1)), 1/(k-1)]``.  Unlike the two-way split, a side
    exactly at the threshold is still descended into, otherwise a star
    would surrender half its boundary in one part.
    """
    m = t.n_boundary
    if not 3 <= k <= m:
        raise InfeasibleKError(f"need 3 <= k <= {m}, got {k}")
    d = t.max_degree
    tau = Fraction(1, k - 1)
    remaining = frozenset(range(t.n))
    removed: list[Edge] = []
    parts: list[SubtreeRef] = []
    fractions: list[Fraction] = []
    ports: frozenset[int] = frozenset()
    for _ in range(k - 1):
        part, frac, edge = _descend(
            t, remaining, tau, enter_at_equal=True, ports=ports)
        parts.append(make_subtree(t, part))
        fractions.append(frac)
        removed.append((min(edge), max(edge)))
        remaining -= part
        ports |= {edge[0], edge[1]} & remaining
    cert = PartitionCertificate(
        tree=t,
        removed_edges=tuple(removed),
        parts=tuple(parts),
        fractions=tuple(fractions),
        interval=(Fraction(1, (d - 1) * (k - 1)), tau),
    )
    cert.validate()
    return cert


# -- test functions -----------------------------------------------------------------

def two_level_rayleigh_exact(cert: PartitionCertificate) -> Fraction:
    """Exact Rayleigh quotient of the two-level function: 1/(m β(1-β)).

    The only nonzero gradient sits on the removed edge and equals 1, and
    the boundary mass is ``m β(1-β)`` on the nose.
    """
    beta = cert.fractions[0]
    m = cert.tree.n_boundary
    return Fraction(1) / (m * beta * (1 - beta))


def two_level_test_function(
    t: BoundaryTree,
    cert: PartitionCertificate,
    tol: Tolerances = DEFAULT_TOL,
) -> VertexFunction:
    """``1 - β`` on the certified part, ``-β`` elsewhere.

    β is the part's exact boundary fraction, so the boundary sum vanishes
    by construction and ``R(f) = 1/(m β(1-β)) <= 4(D-1)/m``.
    """
    beta = cert.fractions[0]
    part = cert.parts[0].vertices
    vals = np.full(t.n, float(-beta))
    vals[sorted(part)] = float(1 - beta)
    f = VertexFunction(t, vals)
    bsum = float(f.boundary_values().sum())
    if abs(bsum) > tol.boundary_sum * t.n_boundary:
        raise InvariantViolationError(f"boundary sum {bsum:.3e} not ~0")
    return f


def multiway_test_functions(
    t: BoundaryTree,
    cert: PartitionCertificate,
    tol: Tolerances = DEFAULT_TOL,
) -> list[VertexFunction]:
    """One sum-zero function per extracted part, constant on a sub-split.

    Part ``G_j`` is itself split two ways with threshold 1/2 relative to
    its own boundary share; ``f_j`` is ``+|B_2|/|B_j|`` on the first
    piece, ``-|B_1|/|B_j|`` on the second, zero off ``G_j``.  Supports
    are pairwise disjoint by part disjointness.

    Raises:
        PartTooSmallError: some part holds a single boundary vertex, so
            every sum-zero function constant on a sub-split of it has
            zero boundary mass and an unbounded Rayleigh quotient.  Stars
            near ``k = 3`` genuinely hit this; callers treat the bound as
            witness-free there.
    """
    out: list[VertexFunction] = []
    for ref in cert.parts:
        rb = ref.relative_boundary
        if len(rb) < 2:
            raise PartTooSmallError(
                f"part with boundary {rb} cannot carry a sum-zero test function")
        rb_set = frozenset(rb)
        total = len(rb)

        def frac_in_part(vs: frozenset[int]) -> Fraction:
            return Fraction(sum(1 for v in vs if v in rb_set), total)

        # two-way descent local to the part, against its own boundary
        inner = [e for e in t.edges if e[0] in ref.vertices and e[1] in ref.vertices]
        assert inner, "a part with 2+ boundary vertices has an edge"
        u0, v0 = inner[0]
        side_u = _component_within(t, ref.vertices, u0, v0)
        cands = [(side_u, frac_in_part(side_u), (u0, v0)),
                 (ref.vertices - side_u, frac_in_part(ref.vertices - side_u), (u0, v0))]
        piece, pfrac, edge = _pick(cands, frozenset())
        while pfrac > Fraction(1, 2):
            u, v = edge
            if v not in piece:
                u, v = v, u
            children = []
            for w in t.neighbors[v]:
                if w == u or w not in ref.vertices:
                    continue
                comp = _component_within(t, ref.vertices, w, v)
                children.append((comp, frac_in_part(comp), (v, w)))
            assert children, "heavy piece cannot be a single vertex"
            piece, pfrac, edge = _pick(children, frozenset())

        b1 = pfrac
        b2 = 1 - pfrac
        vals = np.zeros(t.n)
        vals[sorted(piece)] = float(b2)
        vals[sorted(ref.vertices - piece)] = float(-b1)
        f = VertexFunction(t, vals)
        bsum = float(f.boundary_values().sum())
        if abs(bsum) > tol.boundary_sum * t.n_boundary:
            raise InvariantViolationError(f"boundary sum {bsum:.3e} not ~0")
        out.append(f)
    return out


def gradient_supports_disjoint(fns: list[VertexFunction]) -> bool:
    """Do the functions place nonzero gradients on pairwise disjoint edges?

    The combination inequality ``R(Σ b_j f_j) <= max R(f_j)`` needs this;
    it usually holds for peeled parts but an extraction can be forced to
    absorb the port vertex of an earlier cut, so it is checked, not
    assumed.
    """
    if not fns:
        return True
    t = fns[0].tree
    supports = []
    for f in fns:
        d = f.values[t.edge_u] - f.values[t.edge_v]
        supports.append(np.nonzero(d != 0.0)[0])
    for i in range(len(supports)):
        si = set(supports[i].tolist())
        for j in range(i + 1, len(supports)):
            if si & set(supports[j].tolist()):
                return False
    return True


# -- diameter test function ----------------------------------------------------------

def _nullspace_vector(a: np.ndarray) -> np.ndarray:
    """A nonzero null vector of a wide matrix with more columns than rows.

    Gaussian elimination with partial pivoting; the first non-pivot
    column's variable is set to 1 and the pivots back-substituted.  The
    result is scaled by its largest-magnitude entry.
    """
    rows, cols = a.shape
    if cols <= rows:
        raise DegenerateSystemError(f"system {a.shape} has no guaranteed null space")
    work = a.astype(np.float64).copy()
    scale = np.abs(work).max(initial=0.0)
    if scale == 0.0:
        out = np.zeros(cols)
        out[0] = 1.0
        return out
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        lead = r + int(np.abs(work[r:, c]).argmax())
        if abs(work[lead, c]) <= 1e-13 * scale:
            continue
        work[[r, lead]] = work[[lead, r]]
        others = [i for i in range(rows) if i != r]
        factors = work[others, c] / work[r, c]
        work[others] -= np.outer(factors, work[r])
        work[others, c] = 0.0
        pivot_cols.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivot_cols]
    assert free, "wide system always has a free column"
    x = np.zeros(cols)
    x[free[0]] = 1.0
    for i in reversed(range(len(pivot_cols))):
        c = pivot_cols[i]
        x[c] = -(work[i] @ x - work[i, c] * x[c]) / work[i, c]
    lead = int(np.abs(x).argmax())
    if x[lead] == 0.0:
        raise DegenerateSystemError("extracted null vector vanishes")
    x = x / x[lead]
    resid = float(np.abs(a @ x).max(initial=0.0))
    if resid > 1e-8 * scale * float(np.abs(x).max()):
        raise DegenerateSystemError(f"null-space residual {resid:.3e} too large")
    return x


def diameter_system(t: BoundaryTree) -> tuple[np.ndarray, list[int], list[int]]:
    """The homogeneous system tying branch plateau values to the spine.

    For a diameter path ``x_0 .. x_L`` with ``n_k`` boundary vertices
    hanging at ``x_k``, a function constant on each branch with equal
    increments along the spine and zero boundary sum must satisfy, for
    each ``k``::

        (L - 2k) a_0 - k * Σ_i n_i a_i - L a_k = 0

    in the unknowns ``a_0 .. a_{L-1}`` (``a_k`` doubling as the plateau
    on branch ``k``; ``a_0 = f(x_0)``).  ``L - 1`` equations in ``L``
    unknowns, so a nonzero solution always exists.  Returns the matrix,
    the path, and the counts ``n_k``.
    """
    dia = diameter(t)
    L = dia.length
    comps = branch_components(t, list(dia.path))
    counts = [len(ref.relative_boundary) for ref in comps]
    a = np.zeros((L - 1, L))
    for k in range(1, L):
        a[k - 1, 0] += L - 2 * k
        for i in range(1, L):
            a[k - 1, i] -= k * counts[i - 1]
        a[k - 1, k] -= L
    return a, list(dia.path), counts


def diameter_test_function(t: BoundaryTree) -> VertexFunction:
    """A sum-zero function with Rayleigh quotient at most ``2/L``.

    Solves :func:`diameter_system` for the plateau values, then sets
    ``f = a_0 - k g`` on branch ``k`` (``g`` the common spine increment
    ``(2 a_0 + Σ n_i a_i)/L``), ``f(x_0) = a_0`` and
    ``f(x_L) = -a_0 - Σ n_k a_k``.  All gradient lives on the spine,
    every increment equals ``g``, and the endpoint values alone make the
    quotient at most ``2/L``.
    """
    a, path, counts = diameter_system(t)
    L = len(path) - 1
    sol = _nullspace_vector(a)
    a0 = sol[0]
    weighted = float(np.dot(counts, sol[1:]))
    g = (2.0 * a0 + weighted) / L

    vals = np.empty(t.n)
    comps = branch_components(t, path)
    for k in range(1, L):
        vals[sorted(comps[k - 1].vertices)] = a0 - k * g
    vals[path[0]] = a0
    vals[path[-1]] = -a0 - weighted
    f = VertexFunction(t, vals)

    scale = 1.0 + float(np.abs(vals).max())
    bsum = float(f.boundary_values().sum())
    if abs(bsum) > 1e-9 * scale * t.n_boundary:
        raise InvariantViolationError(f"boundary sum {bsum:.3e} not ~0")
    diffs = vals[t.edge_u] - vals[t.edge_v]
    num = float(diffs @ diffs)
    den = float(f.boundary_values() @ f.boundary_values())
    # construction guarantees 2/L up to roundoff, independent of bound_slack
    if den <= 0.0 or num / den > 2.0 / L + 1e-9:
        raise InvariantViolationError(
            f"diameter quotient {num / den if den else float('inf'):.6g} "
            f"exceeds 2/{L}")
    return f
