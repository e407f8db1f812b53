from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from steklov_trees import (
    BadParamsError,
    FAMILIES,
    InfeasibleDegreeCapError,
    diameter,
    family_label,
    gen_ball,
    gen_extremal_middle,
    gen_path,
    gen_random_interior3,
    gen_random_tree,
    gen_refined,
    generate_family,
    steklov_eigenvalue_bisect,
)


def ball_size(d: int, r: int) -> int:
    return 1 + d * ((d - 1) ** r - 1) // (d - 2)


# -- deterministic families ----------------------------------------------------------

@pytest.mark.parametrize("d", [3, 4, 5, 6])
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_ball_counts(d, r):
    t = gen_ball(d, r)
    assert t.n == ball_size(d, r)
    assert t.n_boundary == d * (d - 1) ** (r - 1)
    assert t.max_degree == d if r >= 2 else t.max_degree == d
    assert diameter(t).length == 2 * r
    # every interior vertex of the homogeneous ball has full degree
    assert all(t.degrees[v] == d for v in t.interior)


def test_ball_frozen_small():
    t = gen_ball(3, 2)
    assert t.n == 10 and t.n_boundary == 6
    assert t.edges == ((0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 6), (2, 7),
                       (3, 8), (3, 9))


@pytest.mark.parametrize("d,r", [(2, 2), (1, 1), (3, 0), (3, -1)])
def test_ball_rejects(d, r):
    with pytest.raises(BadParamsError):
        gen_ball(d, r)


@pytest.mark.parametrize("l,n", [(2, 16), (3, 52), (4, 148), (5, 388)])
def test_refined_counts(l, n):
    t = gen_refined(l)
    assert t.n == n
    assert t.n_boundary == 3 * 2 ** (l - 1)
    assert t.max_degree == 3
    # volume sandwiched by boundary: l * m <= n <= 2 * l * m
    assert l * t.n_boundary <= t.n <= 2 * l * t.n_boundary


def test_refined_rejects():
    with pytest.raises(BadParamsError):
        gen_refined(1)


@pytest.mark.parametrize("length", [2, 3, 10, 57])
def test_path(length):
    t = gen_path(length)
    assert t.n == length + 1
    assert t.n_boundary == 2
    assert t.max_degree == 2
    assert diameter(t).length == length


def test_path_rejects():
    with pytest.raises(BadParamsError):
        gen_path(1)


# -- extremal middle attachments -------------------------------------------------------

@pytest.mark.parametrize("variant,length,n", [("A", 4, 7), ("A", 6, 9), ("B", 6, 13)])
def test_extremal_hits_two_over_l(variant, length, n):
    t = gen_extremal_middle(length, variant)
    assert t.n == n
    assert diameter(t).length == length
    lam2 = steklov_eigenvalue_bisect(t, 2)
    assert lam2 == pytest.approx(2.0 / length, abs=1e-9)


def test_extremal_variant_c():
    t = gen_extremal_middle(6, "C", lhat=2)
    assert t.n == 10
    lam2 = steklov_eigenvalue_bisect(t, 2)
    assert lam2 == pytest.approx(2.0 / 6.0, abs=1e-9)


def test_extremal_rejects():
    with pytest.raises(BadParamsError):
        gen_extremal_middle(5, "A")  # odd length has no midpoint
    with pytest.raises(BadParamsError):
        gen_extremal_middle(6, "Z")
    with pytest.raises(BadParamsError):
        gen_extremal_middle(4, "B")  # 7 extra vertices cannot hide at L=4
    with pytest.raises(BadParamsError):
        gen_extremal_middle(4, "C", lhat=2)  # needs L/2 >= 2^lhat - 1
    with pytest.raises(BadParamsError):
        gen_extremal_middle(6, "A", lhat=1)  # depth only applies to C


# -- random families ---------------------------------------------------------------------

def test_random_tree_golden():
    assert gen_random_tree(5, 3, 42).edges == ((0, 1), (0, 2), (0, 3), (2, 4))


def test_random_tree_reproducible():
    a = gen_random_tree(30, 4, 7)
    b = gen_random_tree(30, 4, 7)
    assert a.edges == b.edges
    assert gen_random_tree(30, 4, 8).edges != a.edges


def test_random_tree_rejects():
    with pytest.raises(BadParamsError):
        gen_random_tree(2, 3, 0)
    with pytest.raises(InfeasibleDegreeCapError):
        gen_random_tree(10, 1, 0)


def test_random_tree_cap_two_is_path():
    t = gen_random_tree(12, 2, 5)
    assert t.n == 12
    assert t.max_degree == 2
    assert diameter(t).length == 11


@given(n=st.integers(3, 60), cap=st.integers(2, 6), seed=st.integers(0, 2**63 - 1))
def test_random_tree_respects_cap(n, cap, seed):
    t = gen_random_tree(n, cap, seed)
    assert t.n == n
    assert t.max_degree <= cap


@given(n=st.integers(5, 60), cap=st.integers(3, 6), seed=st.integers(0, 2**63 - 1))
def test_random_interior3(n, cap, seed):
    t = gen_random_interior3(n, cap, seed)
    assert t.max_degree <= cap
    assert all(t.degrees[v] >= 3 for v in t.interior)
    # boundary-volume sandwich for interior degrees >= 3, exact in integers
    assert 2 * t.n_boundary >= t.n + 2
    assert t.n_boundary <= t.n


def test_random_interior3_rejects():
    with pytest.raises(BadParamsError):
        gen_random_interior3(30, 2, 0)


# -- family registry -----------------------------------------------------------------------

def test_generate_family_dispatch():
    assert generate_family({"family": "BALL", "D": 3, "r": 2}).n == 10
    assert generate_family({"family": "BALL", "D": 3, "r": 2, "seed": 0}).n == 10
    assert generate_family({"family": "REFINED", "l": 2}).n == 16
    assert generate_family({"family": "PATH", "L": 5}).n == 6
    assert generate_family(
        {"family": "EXTREMAL_MIDDLE", "L": 4, "variant": "A"}).n == 7
    assert generate_family(
        {"family": "RANDOM", "n": 5, "max_degree": 3, "seed": 42}).edges == (
        (0, 1), (0, 2), (0, 3), (2, 4))
    t = generate_family(
        {"family": "RANDOM_INTERIOR3", "n_target": 20, "max_degree": 4, "seed": 1})
    assert all(t.degrees[v] >= 3 for v in t.interior)


@pytest.mark.parametrize("spec", [
    {"family": "NOSUCH"},
    {"family": "BALL", "D": 3},                      # missing r
    {"family": "BALL", "D": 3, "r": 2, "x": 1},      # unexpected key
    {"family": "PATH", "L": "4"},                    # non-integer
    {"family": "RANDOM", "n": 5, "max_degree": 3},   # random needs a seed
    {"no_family": True},
    "BALL",
])
def test_generate_family_rejects(spec):
    with pytest.raises(BadParamsError):
        generate_family(spec)


def test_family_registry_and_label():
    assert FAMILIES == ("BALL", "REFINED", "PATH", "EXTREMAL_MIDDLE", "RANDOM",
                        "RANDOM_INTERIOR3")
    assert family_label({"family": "BALL", "D": 3, "r": 2}) == "BALL(D=3,r=2)"
    assert family_label({"family": "RANDOM", "seed": 1, "n": 5, "max_degree": 3}) \
        == "RANDOM(max_degree=3,n=5,seed=1)"
