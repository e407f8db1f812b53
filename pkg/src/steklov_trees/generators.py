"""Tree family generators: balls, refined balls, paths, extremal
caterpillars, and seeded random trees for the verification harness.

Every generator is deterministic: the random families draw from
``random.Random(seed)`` only, so a (family, parameters, seed) triple
always reproduces the same edge list bit for bit.
"""
from __future__ import annotations

import heapq
import random
from functools import lru_cache

from .errors import (
    BadParamsError,
    InfeasibleDegreeCapError,
    NoExtremalShapeFoundError,
)
from .graph_core import BoundaryTree, build_tree
from .spectra import steklov_eigenvalue_bisect

Edge = tuple[int, int]


def gen_ball(d: int, r: int) -> BoundaryTree:
    """Ball of radius ``r`` in the degree-``d`` homogeneous tree.

    Vertex ids are breadth-first from the center (id 0): the center has
    ``d`` children, every other internal vertex ``d - 1``.  The boundary
    is the depth-``r`` level, of size ``d (d-1)^{r-1}``.
    """
    if d < 3 or r < 1:
        raise BadParamsError(f"ball needs degree >= 3 and radius >= 1, got ({d}, {r})")
    edges: list[Edge] = []
    level = [0]
    nxt = 1
    for depth in range(r):
        new_level = []
        for v in level:
            fanout = d if depth == 0 else d - 1
            for _ in range(fanout):
                edges.append((v, nxt))
                new_level.append(nxt)
                nxt += 1
        level = new_level
    return build_tree(edges)


def gen_refined(l: int) -> BoundaryTree:
    """Degree-3 ball of radius ``l`` with depth-graded edge subdivision.

    The edge from depth ``k`` to depth ``k+1`` is subdivided by ``k``
    extra vertices (edges at the center, ``k = 0``, stay single), which
    stretches the tree radially while keeping the same boundary.  Extra
    ids follow the ball's, in the ball's edge order.
    """
    if l < 2:
        raise BadParamsError(f"refined ball needs radius >= 2, got {l}")
    ball_edges: list[tuple[int, int, int]] = []  # (parent, child, child depth)
    level = [0]
    nxt = 1
    for depth in range(l):
        new_level = []
        for v in level:
            fanout = 3 if depth == 0 else 2
            for _ in range(fanout):
                ball_edges.append((v, nxt, depth + 1))
                new_level.append(nxt)
                nxt += 1
        level = new_level

    edges: list[Edge] = []
    for parent, child, child_depth in ball_edges:
        k = child_depth - 1
        if k == 0:
            edges.append((parent, child))
            continue
        chain = [parent] + [nxt + i for i in range(k)] + [child]
        nxt += k
        edges.extend(zip(chain, chain[1:]))
    return build_tree(edges)


def gen_path(length: int) -> BoundaryTree:
    """Path with ``length`` edges, vertices ``0 .. length`` in a line."""
    if length < 2:
        raise BadParamsError(f"path needs length >= 2, got {length}")
    return build_tree([(i, i + 1) for i in range(length)])


# -- extremal middle-attachment caterpillars ------------------------------------------

@lru_cache(maxsize=None)
def _rooted_shapes(n: int) -> tuple[tuple, ...]:
    """All rooted tree shapes on ``n`` nodes as canonical nested tuples.

    A shape is the sorted tuple of its child shapes; building every
    (child, rest-of-root) combination and deduplicating the canonical
    forms yields each shape exactly once (1, 1, 2, 4, 9, 20, 48, ... ).
    """
    if n == 1:
        return ((),)
    found = set()
    for k in range(1, n):
        for child in _rooted_shapes(k):
            for rest in _rooted_shapes(n - k):
                found.add(tuple(sorted(rest + (child,))))
    return tuple(sorted(found))


def _attach_shape(edges: list[Edge], root: int, shape: tuple, next_id: int) -> int:
    for child in shape:
        edges.append((root, next_id))
        cid = next_id
        next_id += 1
        next_id = _attach_shape(edges, cid, child, next_id)
    return next_id


_EXTREMAL_SIZES = {"A": 3, "B": 7}


@lru_cache(maxsize=None)
def gen_extremal_middle(length: int, variant: str, lhat: int | None = None) -> BoundaryTree:
    """Spine of even length ``L`` with one attachment at the midpoint.

    The attachment has 3 vertices (variant A), 7 (variant B), or is a
    depth-``lhat`` binary brush (variant C, needing ``L/2 >= 2^lhat - 1``
    so the spine still carries the slowest mode), all counted including
    the midpoint vertex itself.  A and B search the rooted shapes of the
    declared size in canonical order and return the first one whose tree
    attains the extremal value ``lambda_2 = 2/L`` (the target shapes are
    only characterized by that property); C builds its single shape and
    validates it the same way.
    """
    if length % 2 != 0 or length < 2:
        raise BadParamsError(f"spine length must be even and >= 2, got {length}")
    mid = length // 2
    if variant in _EXTREMAL_SIZES:
        if lhat is not None:
            raise BadParamsError(f"variant {variant} takes no depth parameter")
        size = _EXTREMAL_SIZES[variant]
        if mid < (size - 1) // 2:
            raise BadParamsError(
                f"variant {variant} needs L/2 >= {(size - 1) // 2}, got L={length}")
        candidates = _rooted_shapes(size)
    elif variant == "C":
        if lhat is None or lhat < 1:
            raise BadParamsError("variant C needs a depth lhat >= 1")
        if mid < 2 ** lhat - 1:
            raise BadParamsError(
                f"variant C needs L/2 >= {2 ** lhat - 1}, got L={length}")
        brush: tuple = ()
        for _ in range(lhat - 1):
            brush = (brush, brush)
        candidates = ((brush,),)
    else:
        raise BadParamsError(f"unknown variant {variant!r}")

    spine = [(i, i + 1) for i in range(length)]
    for shape in candidates:
        edges = list(spine)
        _attach_shape(edges, mid, shape, length + 1)
        t = build_tree(edges)
        lam2 = steklov_eigenvalue_bisect(t, 2)
        if abs(lam2 - 2.0 / length) <= 1e-9:
            return t
    raise NoExtremalShapeFoundError(
        f"no variant-{variant} attachment at L={length} reaches 2/L")


# -- random families -------------------------------------------------------------------

def _prufer_decode(seq: list[int], n: int) -> list[Edge]:
    deg = [1] * n
    for s in seq:
        deg[s] += 1
    leaves = [v for v in range(n) if deg[v] == 1]
    heapq.heapify(leaves)
    edges: list[Edge] = []
    for s in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, s))
        deg[s] -= 1
        if deg[s] == 1:
            heapq.heappush(leaves, s)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return edges


_PRUFER_DRAW_CAP = 10 ** 6


def gen_random_tree(n: int, max_degree: int, seed: int) -> BoundaryTree:
    """Seeded uniform random tree, rejection-sampled to the degree cap.

    Uniform labelled trees come from random Prüfer sequences; a sequence
    is rejected while some vertex would exceed ``max_degree``.  If the
    cap is so tight that 10^6 draws all fail, falls back to sequential
    attachment onto vertices with spare capacity (biased, but guaranteed
    to terminate).  ``max_degree = 2`` forces a path, built directly as a
    seeded random vertex order.
    """
    if n < 3:
        raise BadParamsError(f"need n >= 3, got {n}")
    if max_degree < 2:
        raise InfeasibleDegreeCapError(f"no tree on {n} vertices has max degree"
                                       f" {max_degree}")
    rng = random.Random(seed)
    if max_degree == 2:
        perm = list(range(n))
        rng.shuffle(perm)
        return build_tree([(perm[i], perm[i + 1]) for i in range(n - 1)])

    for _ in range(_PRUFER_DRAW_CAP):
        seq = [rng.randrange(n) for _ in range(n - 2)]
        counts = [1] * n
        for s in seq:
            counts[s] += 1
        if max(counts) <= max_degree:
            return build_tree(_prufer_decode(seq, n))

    edges: list[Edge] = []
    deg = [0] * n
    for v in range(1, n):
        open_slots = [u for u in range(v) if deg[u] < max_degree]
        u = rng.choice(open_slots)
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1
    return build_tree(edges)


def gen_random_interior3(n_target: int, max_degree: int, seed: int) -> BoundaryTree:
    """Seeded random tree whose interior degrees are all at least 3.

    Grows from a 3-star by promoting a random leaf into an interior
    vertex with 2 .. max_degree - 1 fresh leaves, so promoted vertices
    get degree >= 3 and the vertex count overshoots ``n_target`` by less
    than ``max_degree``.
    """
    if max_degree < 3:
        raise BadParamsError(f"interior degree 3 needs max_degree >= 3, got {max_degree}")
    if n_target < 1:
        raise BadParamsError(f"need a positive target size, got {n_target}")
    rng = random.Random(seed)
    edges: list[Edge] = [(0, 1), (0, 2), (0, 3)]
    leaves = [1, 2, 3]
    n = 4
    while n < n_target:
        idx = rng.randrange(len(leaves))
        v = leaves[idx]
        leaves[idx] = leaves[-1]
        leaves.pop()
        fanout = rng.randint(2, max_degree - 1)
        for _ in range(fanout):
            edges.append((v, n))
            leaves.append(n)
            n += 1
    return build_tree(edges)


# -- family dispatch -------------------------------------------------------------------

FAMILIES = ("BALL", "REFINED", "PATH", "EXTREMAL_MIDDLE", "RANDOM", "RANDOM_INTERIOR3")


def generate_family(spec: dict) -> BoundaryTree:
    """Build a tree from a family description dict (the CLI's ``--family``).

    Examples: ``{"family": "BALL", "D": 3, "r": 2}``,
    ``{"family": "RANDOM", "n": 30, "max_degree": 4, "seed": 7}``,
    ``{"family": "EXTREMAL_MIDDLE", "L": 6, "variant": "B"}``.
    """
    if not isinstance(spec, dict) or "family" not in spec:
        raise BadParamsError("family spec must be a dict with a 'family' key")
    fam = spec["family"]
    args = {k: v for k, v in spec.items() if k != "family"}

    def take(required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict:
        missing = [k for k in required if k not in args]
        extra = [k for k in args if k not in required + optional]
        if missing or extra:
            raise BadParamsError(
                f"{fam} takes {required}{' + optional ' + str(optional) if optional else ''};"
                f" missing {missing}, unexpected {extra}")
        for k, v in args.items():
            if not isinstance(v, int) and not (k == "variant" and isinstance(v, str)):
                raise BadParamsError(f"parameter {k}={v!r} must be an integer")
        return args

    # deterministic families tolerate (and ignore) a seed key
    if fam == "BALL":
        a = take(("D", "r"), ("seed",))
        return gen_ball(a["D"], a["r"])
    if fam == "REFINED":
        a = take(("l",), ("seed",))
        return gen_refined(a["l"])
    if fam == "PATH":
        a = take(("L",), ("seed",))
        return gen_path(a["L"])
    if fam == "EXTREMAL_MIDDLE":
        a = take(("L", "variant"), ("lhat", "seed"))
        return gen_extremal_middle(a["L"], a["variant"], a.get("lhat"))
    if fam == "RANDOM":
        a = take(("n", "max_degree", "seed"))
        return gen_random_tree(a["n"], a["max_degree"], a["seed"])
    if fam == "RANDOM_INTERIOR3":
        a = take(("n_target", "max_degree", "seed"))
        return gen_random_interior3(a["n_target"], a["max_degree"], a["seed"])
    raise BadParamsError(f"unknown family {fam!r}; expected one of {FAMILIES}")


def family_label(spec: dict) -> str:
    """Stable one-line identifier for report rows."""
    fam = spec.get("family", "?")
    rest = ",".join(f"{k}={spec[k]}" for k in sorted(spec) if k != "family")
    return f"{fam}({rest})"
