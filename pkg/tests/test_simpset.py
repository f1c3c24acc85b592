import json

import pytest

from lietower.simpset import (SimplicialSetError, euler_characteristic, face_of_degeneracy,
                              load_simplicial_set, normalize_word, normalized_chains,
                              simplicial_homology)
from lietower.verify import fixture

CIRCLE = {"name": "S1", "simplices": {"0": ["v"], "1": [{"id": "e", "faces": [[[], "v"], [[], "v"]]}]}}


def test_circle_document():
    X = load_simplicial_set(CIRCLE)
    assert X.reduced
    C = normalized_chains(X)
    assert C.boundary(1).is_zero()


def test_json_text_input():
    assert load_simplicial_set(json.dumps(CIRCLE)).name == "S1"


def test_sphere_boundary_is_zero():
    X = fixture("s2")
    assert X.reduced
    assert normalized_chains(X).boundary(2).is_zero()


def test_wedge_chains():
    C = normalized_chains(fixture("wedge"))
    assert C.dim(1) == 2 and C.boundary(1).is_zero()


@pytest.mark.parametrize("name,reduced", [
    ("point", {0: 0}), ("s1", {0: 0, 1: 1}), ("wedge", {0: 0, 1: 2}),
    ("s2", {0: 0, 1: 0, 2: 1}), ("s3", {0: 0, 1: 0, 2: 0, 3: 1}),
    ("torus", {0: 0, 1: 2, 2: 1}),
])
def test_fixture_homology(name, reduced):
    X = fixture(name)
    H = simplicial_homology(X, reduced=True)
    assert H == reduced
    full = simplicial_homology(X)
    assert euler_characteristic(X) == sum((-1) ** p * h for p, h in full.items())


def test_missing_face_names_edge():
    with pytest.raises(SimplicialSetError) as err:
        fixture("broken")
    assert err.value.simplex == "e"
    assert "e" in str(err.value)


def test_wrong_face_count():
    doc = {"simplices": {"0": ["v"], "1": [{"id": "e", "faces": [[[], "v"]]}]}}
    with pytest.raises(SimplicialSetError) as err:
        load_simplicial_set(doc)
    assert err.value.simplex == "e"


def test_identity_violation_is_reported():
    doc = {"simplices": {"0": ["p", "q"],
                         "1": [{"id": "e", "faces": [[[], "q"], [[], "p"]]},
                               {"id": "f", "faces": [[[], "q"], [[], "p"]]}],
                         "2": [{"id": "t", "faces": [[[], "e"], [[], "f"], [[0], "q"]]}]}}
    with pytest.raises(SimplicialSetError) as err:
        load_simplicial_set(doc)
    assert err.value.simplex == "t"


def test_degeneracy_words():
    assert normalize_word([0, 0]) == (1, 0)
    assert normalize_word([1, 0]) == (1, 0)
    assert face_of_degeneracy(0, (0,)) == ((), None)
    assert face_of_degeneracy(2, (0,)) == ((0,), 1)


def test_missing_file(tmp_path):
    with pytest.raises(SimplicialSetError):
        load_simplicial_set(tmp_path / "nothing.json")


def test_directory_input(tmp_path):
    (tmp_path / "simplicial_set.json").write_text(json.dumps(CIRCLE))
    assert load_simplicial_set(tmp_path).name == "S1"
