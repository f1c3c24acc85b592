import pytest

from lietower.cdgl import dgl_homology, is_homologically_nilpotent, lcs_quotient
from lietower.tower import (bch_coords, completion_tower, fundamental_group_data,
                            report_document, stabilization_report, tower_homotopy)
from lietower.verify import fixture


@pytest.fixture(scope="module")
def reports():
    return {"s1": tower_homotopy(fixture("s1"), 5, 4),
            "s2": tower_homotopy(fixture("s2"), 5, 4),
            "s3": tower_homotopy(fixture("s3"), 4, 4),
            "point": tower_homotopy(fixture("point"), 4, 3),
            "wedge": tower_homotopy(fixture("wedge"), 5, 2)}


def test_circle_stages():
    T = completion_tower(fixture("s1"), 4)
    assert [s.n for s in T.stages] == [2, 3, 4]
    for s in T.stages:
        assert dgl_homology(s.cdgl, [0]).dim(0) == 1


def test_point_stages_are_trivial():
    for s in completion_tower(fixture("point"), 4).stages:
        assert dgl_homology(s.cdgl, [0, 1, 2]).dims == {0: 0, 1: 0, 2: 0}


def test_wedge_degree_zero_dimensions():
    T = completion_tower(fixture("wedge"), 5)
    assert [len(s.cdgl.basis(0)) for s in T.stages] == [2, 3, 5, 8]


def test_stage_consistency_and_surjectivity():
    T = completion_tower(fixture("wedge"), 4)
    for n in (2, 3):
        lo, hi = T.stage(n).cdgl, lcs_quotient(T.stage(n + 1).cdgl, n)
        assert all(hi.dgen(g.name) .tensor == lo.dgen(g.name).tensor for g in lo.gens)
        assert T.projection_surjective(n, [0, 1])


def test_circle_homotopy(reports):
    R = reports["s1"]
    assert R.dims[1] == {n: 1 for n in range(2, 6)}
    for i in (2, 3, 4):
        assert set(R.dims[i].values()) == {0}
    assert all(e["stabilized_at"] == 2 for e in R.stabilization.values())


def test_two_sphere_homotopy(reports):
    R = reports["s2"]
    assert R.dims[2] == {2: 1, 3: 1, 4: 1, 5: 1}
    assert R.dims[3] == {2: 0, 3: 1, 4: 1, 5: 1}
    assert set(R.dims[4].values()) == {0}
    assert R.stabilization[2]["stabilized_at"] == 2
    assert R.stabilization[3]["stabilized_at"] == 3


def test_three_sphere_homotopy(reports):
    R = reports["s3"]
    assert set(R.dims[3].values()) == {1}
    assert set(R.dims[4].values()) == {0}


def test_wedge_is_not_stable(reports):
    R = reports["wedge"]
    assert R.dims[1] == {2: 2, 3: 3, 4: 5, 5: 8}
    assert R.stabilization[1]["stabilized_at"] is None


def test_stages_are_homologically_nilpotent(reports):
    for R in reports.values():
        for n in R.stages:
            v = R.nilpotency[n]
            assert v["nilpotent"]


def test_circle_group():
    g = fundamental_group_data(completion_tower(fixture("s1"), 3).stage(3).cdgl)
    assert (g.dimension, g.nilpotency_class, g.abelianization) == (1, 1, 1)
    assert g.multiply({0: 1}, {0: 2}) == {0: 3}


def test_heisenberg_stage():
    g = fundamental_group_data(completion_tower(fixture("wedge"), 3).stage(3).cdgl)
    assert (g.dimension, g.nilpotency_class, g.abelianization) == (3, 2, 2)
    assert all(g.axioms.values())
    G = g.lie
    central = [k for k in range(3) if all(not G.bracket_basis(0, k, 0, j) for j in range(3))]
    assert len(central) == 1
    # e_0 e_1 e_0^{-1} e_1^{-1} is a nonzero central element
    a, b = {0: 1}, {1: 1}
    inv = lambda v: {k: -c for k, c in v.items()}  # noqa: E731
    comm = g.multiply(g.multiply(a, b), g.multiply(inv(a), inv(b)))
    assert set(comm) == set(central)


def test_sphere_group_is_trivial():
    g = fundamental_group_data(completion_tower(fixture("s2"), 3).stage(3).cdgl)
    assert g.dimension == 0


def test_bch_coords_abelian():
    G = fundamental_group_data(completion_tower(fixture("torus"), 3).stage(3).cdgl).lie
    assert bch_coords(G, {0: 1}, {1: 1}, 2) == {0: 1, 1: 1}


def test_pi1_acts_nilpotently(reports):
    for R in reports.values():
        for n in R.stages:
            assert all(k is not None for k in R.action[n].values())


def test_report_document_is_deterministic(reports):
    again = tower_homotopy(fixture("s2"), 5, 4)
    assert report_document(again) == report_document(reports["s2"])
    assert stabilization_report(again) == reports["s2"].stabilization


def test_stage_homology_nilpotency_on_cdgl():
    st = completion_tower(fixture("s2"), 4).stage(4).cdgl
    assert is_homologically_nilpotent(st, [0, 1, 2, 3]).nilpotent
