import itertools

import pytest

from lietower.cdgl import differential_check, is_mc
from lietower.lscosimplicial import (bernoulli, coface, codegeneracy, cosimplicial_operator,
                                     faces_of, gen_name, ls_interval, simplex_model,
                                     verify_simplex_model)
from lietower.qalgebra import Q


def test_bernoulli_numbers():
    assert [bernoulli(k) for k in range(7)] == [1, Q(-1, 2), Q(1, 6), 0, Q(-1, 30), 0, Q(1, 42)]


def test_point_model():
    L = simplex_model(0, 3)
    a = L.gen("a0")
    assert L.dgen("a0") == -a.bracket(a) / 2


def test_interval():
    L = ls_interval(6)
    a, b = L.gen("a0"), L.gen("a1")
    assert L.linear_part("a01") == b - a
    assert L.dgen("a0") == -a.bracket(a) / 2
    assert L.dgen("a1") == -b.bracket(b) / 2
    assert L.d(L.dgen("a01")).is_zero()


def test_triangle_linear_part():
    L = simplex_model(2, 4)
    assert L.linear_part("a012") == L.gen("a12") - L.gen("a02") + L.gen("a01")
    assert differential_check(L).ok


def test_tetrahedron_generators():
    L = simplex_model(3, 3)
    degrees = sorted(g.degree for g in L.gens)
    assert degrees == [-1] * 4 + [0] * 6 + [1] * 4 + [2]


@pytest.mark.parametrize("n,N", [(n, N) for n in range(4) for N in range(1, 6)] + [(4, 3)])
def test_defining_conditions(n, N):
    r = verify_simplex_model(n, N)
    assert r.differential_ok and r.vertices_mc and r.linear_part_ok
    assert r.bad_operators == []


def test_codegeneracy_of_interval():
    s = codegeneracy(0, 1, 3)
    assert s.image("a0") == s.target.gen("a0")
    assert s.image("a1") == s.target.gen("a0")
    assert s.image("a01").is_zero()
    assert not s.commutation_defects()


def test_cofaces_commute_with_d():
    for i in range(3):
        assert not cosimplicial_operator("coface", i, 1, 4).commutation_defects()


@pytest.mark.parametrize("n", [0, 1, 2])
def test_cosimplicial_identities(n):
    N = 2
    for i, j in itertools.combinations(range(n + 3), 2):
        lhs = coface(j, n + 1, N).compose(coface(i, n, N))
        rhs = coface(i, n + 1, N).compose(coface(j - 1, n, N))
        assert lhs.same_as(rhs)


def test_faces_carry_transported_differentials():
    L3, L2 = simplex_model(3, 4), simplex_model(2, 4)
    for k in range(4):
        d = coface(k, 2, 4)
        g = gen_name(tuple(i for i in range(4) if i != k))
        assert d.apply(L2.dgen("a012")) == L3.dgen(g)


def test_model_is_deterministic():
    simplex_model.cache_clear()
    first = simplex_model(3, 4).differential_tensors
    simplex_model.cache_clear()
    assert simplex_model(3, 4).differential_tensors == first


def test_all_vertices_mc_in_four_simplex():
    L = simplex_model(4, 2)
    assert all(is_mc(L, L.gen(gen_name((i,)))) for i in range(5))
    assert len(faces_of(4)) == 31
