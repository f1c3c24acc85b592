import pytest
from hypothesis import given
from hypothesis import strategies as st

from lietower.cdgl import (Cdgl, FiniteGradedLie, NotMaurerCartan,
                           UnsupportedInput, acts_nilpotently, bch, component,
                           differential_check, dgl_homology, exp_ad, gauge_transform,
                           is_degreewise_nilpotent, is_homologically_nilpotent, is_mc,
                           lcs_quotient, mc_element, perturb, rotation_algebra)
from lietower.freelie import FreeLieAlgebra, Generator
from lietower.lscosimplicial import ls_interval, simplex_model
from lietower.qalgebra import Q

from oracles import conjugate, log_exp

XY = FreeLieAlgebra([Generator("x", 0), Generator("y", 0)])


def test_zero_differential_is_ok():
    L = Cdgl(FreeLieAlgebra([Generator("x", 0)]), 3)
    assert differential_check(L).ok


def test_interval_differential_squares_to_zero():
    assert differential_check(ls_interval(6)).ok


def test_wrong_degree_is_named():
    L = ls_interval(3)
    x = L.algebra.letter("a01")
    corrupt = dict(L.differential_tensors[x])
    corrupt[(x,)] = Q(1)
    rep = differential_check(L.with_differential({**L.differential_tensors, x: corrupt}))
    assert not rep.ok
    assert rep.violations[0].generator == "a01"
    assert rep.violations[0].kind == "degree"


def test_vertices_are_mc():
    L = simplex_model(2, 3)
    for v in ("a0", "a1", "a2"):
        assert is_mc(L, L.gen(v))
    assert is_mc(L, L.zero())
    assert not is_mc(L, L.gen("a01"))
    with pytest.raises(NotMaurerCartan):
        mc_element(L, "a01")


def test_perturb_by_zero_is_identity():
    L = ls_interval(4)
    P = perturb(L, L.zero())
    assert all(P.dgen(g.name) == L.dgen(g.name) for g in L.gens)


def test_perturbed_interval_squares_to_zero():
    L = ls_interval(5)
    for v in ("a0", "a1"):
        assert differential_check(perturb(L, mc_element(L, v))).ok


def test_component_requires_reduced_input():
    with pytest.raises(UnsupportedInput):
        component(ls_interval(3), ls_interval(3).gen("a0"))


def test_component_of_positive_algebra_is_itself():
    alg = FreeLieAlgebra([Generator("u", 1), Generator("w", 2)])
    L = Cdgl(alg, 3, {"w": alg.gen("u", 3).bracket(alg.gen("u", 3))})
    C = component(L, L.zero())
    assert [g.name for g in C.gens] == ["u", "w"]
    assert C.dgen("w") == L.dgen("w")


def test_lcs_quotients():
    x = FreeLieAlgebra([Generator("x", 0)])
    assert len(lcs_quotient(Cdgl(x, 3), 2).basis(0)) == 1
    assert len(lcs_quotient(Cdgl(XY, 4), 3).basis(0)) == 3
    assert len(lcs_quotient(Cdgl(XY, 4), 2).basis(0)) == 2


# -- BCH and exponential action --------------------------------------------------------------


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_bch_matches_log_exp(N):
    got = bch(XY.gen("x", N), XY.gen("y", N)).tensor
    want = log_exp(N)
    assert {w: c for w, c in got.items()} == {w: Q(c.numerator, c.denominator)
                                              for w, c in want.items()}


def test_bch_low_order_terms():
    x, y = XY.gen("x", 3), XY.gen("y", 3)
    z = bch(x, y)
    assert z.length_part(2) == x.bracket(y) / 2
    assert z.length_part(3) == (x.bracket(x.bracket(y)) + y.bracket(y.bracket(x))) / 12
    assert bch(x, XY.element(3)) == x
    assert bch(x, -x).is_zero()


def test_bch_rejects_odd_elements():
    alg = FreeLieAlgebra([Generator("u", 1)])
    with pytest.raises(ValueError):
        bch(alg.gen("u", 2), alg.gen("u", 2))


def test_exp_ad_is_conjugation():
    N = 5
    got = exp_ad(XY.gen("x", N), XY.gen("y", N)).tensor
    want = conjugate(0, {(1,): 1}, N)
    assert got == {w: Q(c.numerator, c.denominator) for w, c in want.items() if c}
    assert exp_ad(XY.element(N), XY.gen("y", N)) == XY.gen("y", N)


coeffs = st.integers(-2, 2)


@given(coeffs, coeffs, coeffs, coeffs)
def test_exp_ad_is_a_homomorphism_of_bch(a, b, c, e):
    N = 4
    x, y = XY.gen("x", N), XY.gen("y", N)
    alpha, gamma = x * a + y * b, x * c + x.bracket(y) * e
    for probe in (x, y, x.bracket(y)):
        assert exp_ad(bch(alpha, gamma), probe) == exp_ad(alpha, exp_ad(gamma, probe))


@given(coeffs, coeffs, coeffs)
def test_bch_is_associative(a, b, c):
    N = 4
    x, y = XY.gen("x", N), XY.gen("y", N)
    u, v, w = x * a + y, y * b - x, x.bracket(y) * c + x
    assert bch(bch(u, v), w) == bch(u, bch(v, w))


# -- gauge action ----------------------------------------------------------------------


def test_gauge_by_zero():
    L = ls_interval(4)
    a = mc_element(L, "a0")
    assert gauge_transform(a, L.zero()).value == a.value


def test_gauge_in_abelian_algebra():
    alg = FreeLieAlgebra([Generator("a", -1), Generator("x", 0)])
    L = Cdgl(alg, 1, {"x": alg.gen("a", 1)})
    a = mc_element(L, L.zero())
    x = L.gen("x")
    assert gauge_transform(a, x).value == -L.d(x)


@given(st.integers(-2, 2), st.integers(-2, 2))
def test_gauge_preserves_mc(c1, c2):
    L = simplex_model(2, 4)
    x = L.gen("a01") * c1 + L.gen("a12") * c2 + L.gen("a01").bracket(L.gen("a02"))
    for v in ("a0", "a1", "a2"):
        assert is_mc(L, gauge_transform(mc_element(L, v), x).value)


def test_edge_gauges_its_endpoints():
    L = ls_interval(6)
    moved = gauge_transform(mc_element(L, "a1"), L.gen("a01"))
    assert moved.value == L.gen("a0")


# -- homology and nilpotency -------------------------------------------------------------


def test_homology_of_free_odd_generator():
    alg = FreeLieAlgebra([Generator("u", 1)])
    H = dgl_homology(Cdgl(alg, 3), [1, 2, 3])
    assert (H.dim(1), H.dim(2), H.dim(3)) == (1, 1, 0)


def test_homology_of_zero_algebra():
    H = dgl_homology(Cdgl(FreeLieAlgebra([]), 2), [0, 1])
    assert H.dim(0) == H.dim(1) == 0


def test_torus_stage_truncation_cycles():
    # dz = [x,y] at N = 4: the 8 single-z brackets of length 4 are cycles
    # because their boundaries have length 5; with the Jacobi cycle in
    # length 3 and 3 boundaries from [z,z], H_1 has dimension 6.
    alg = FreeLieAlgebra([Generator("x", 0), Generator("y", 0), Generator("z", 1)])
    x, y = alg.gen("x", 4), alg.gen("y", 4)
    H = dgl_homology(Cdgl(alg, 4, {"z": x.bracket(y)}), [0, 1])
    assert H.dim(0) == 2
    assert H.dim(1) == 6


def test_abelian_is_nilpotent_of_class_one():
    G = FiniteGradedLie({0: 2})
    v = is_degreewise_nilpotent(G, [0])
    assert v.nilpotent and v.nilpotency_class == 1


def test_heisenberg_class_two():
    G = FiniteGradedLie({0: 3}, {(0, 0, 0, 1): {2: Q(1)}, (0, 1, 0, 0): {2: Q(-1)}})
    assert G.check_axioms() == []
    assert is_degreewise_nilpotent(G, [0]).nilpotency_class == 2
    assert acts_nilpotently(G, [0]).nilpotent


def test_rotation_algebra_is_not_nilpotent():
    G = rotation_algebra()
    assert G.check_axioms() == []
    v = is_homologically_nilpotent(G, [0])
    assert not v.nilpotent
    assert not v.route_ii.nilpotent and not v.route_iii.nilpotent


def test_stage_of_sphere_is_homologically_nilpotent():
    alg = FreeLieAlgebra([Generator("s", 1)])
    assert is_homologically_nilpotent(Cdgl(alg, 3), [0, 1, 2, 3]).nilpotent


def test_non_nilpotent_action_seen_by_both_routes():
    # [h, e] = e: degree 0 is abelian but acts on degree 1 by the identity
    G = FiniteGradedLie({0: 1, 1: 1}, {(0, 0, 1, 0): {0: Q(1)}, (1, 0, 0, 0): {0: Q(-1)}})
    assert G.check_axioms() == []
    v = is_homologically_nilpotent(G, [0, 1])
    assert not v.nilpotent
    assert not v.route_ii.nilpotent and not v.route_iii.nilpotent
