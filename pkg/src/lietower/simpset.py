"""Finite simplicial sets given by nondegenerate simplices and face data.

A face of a nondegenerate k-simplex is recorded as ``(word, target)``: the
target is a nondegenerate simplex and ``word`` a degeneracy word
``[j_1, ..., j_r]`` (weakly decreasing) meaning ``s_{j_1} ... s_{j_r}``
applied to it.  Every simplex of the set is a pair ``(word, target)`` in
canonical form, where the word is strictly decreasing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Mapping, Sequence

from .qalgebra import ChainComplexSlice, SparseMatrix, chain_homology


class SimplicialSetError(ValueError):
    """Invalid simplicial-set document; ``simplex`` names the offender."""

    def __init__(self, message: str, simplex: str | None = None):
        super().__init__(message)
        self.simplex = simplex


# -- degeneracy words ---------------------------------------------------------------


def normalize_word(word: Sequence[int]) -> tuple:
    """Rewrite ``s_{j_1} ... s_{j_r}`` into strictly decreasing form using
    ``s_i s_j = s_{j+1} s_i`` for ``i <= j``."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            i, j = w[k], w[k + 1]
            if i <= j:
                w[k], w[k + 1] = j + 1, i
                changed = True
    return tuple(w)


def face_of_degeneracy(i: int, word: tuple) -> tuple:
    """``d_i s_{word}`` as ``(remaining_word, face_index or None)``.

    ``word`` is strictly decreasing; ``None`` means the face operator was
    absorbed (the result is ``s_{remaining}`` of the same simplex).
    """
    out = []
    for pos, j in enumerate(word):
        if i < j:
            out.append(j - 1)
        elif i == j or i == j + 1:
            return tuple(out) + tuple(word[pos + 1:]), None
        else:
            out.append(j)
            i -= 1
    return tuple(out), i


@dataclass(frozen=True)
class Simplex:
    name: str
    dim: int
    faces: tuple  # ((word, target), ...) normalized


@dataclass
class SimplicialSetSpec:
    name: str
    simplices: dict  # name -> Simplex
    order: list  # names in dimension-then-document order

    @property
    def dimension(self) -> int:
        return max((s.dim for s in self.simplices.values()), default=-1)

    def of_dim(self, k: int) -> list:
        return [n for n in self.order if self.simplices[n].dim == k]

    @property
    def vertices(self) -> list:
        return self.of_dim(0)

    @property
    def reduced(self) -> bool:
        return len(self.vertices) == 1

    def face(self, name: str, i: int, word: tuple = ()) -> tuple:
        """``d_i`` of the simplex ``s_word(name)``, in canonical form."""
        rest, j = face_of_degeneracy(i, word)
        if j is None:
            return normalize_word(rest), name
        w2, target = self.simplices[name].faces[j]
        return normalize_word(rest + w2), target

    def vertex_map(self, name: str) -> list:
        """The vertices ``0..k`` of ``name``, as nondegenerate vertex names."""
        s = self.simplices[name]
        out = []
        for v in range(s.dim + 1):
            word, cur = (), name
            # d of all other vertices: keep vertex v
            for i in range(s.dim, v, -1):
                word, cur = self.face(cur, i, word)
            for _ in range(v):
                word, cur = self.face(cur, 0, word)
            out.append(cur)
        return out


def _parse_face(raw, owner: str, k: int):
    if not (isinstance(raw, (list, tuple)) and len(raw) == 2):
        raise SimplicialSetError(f"face of {owner} must be [degeneracy-word, target]", owner)
    word, target = raw
    if not isinstance(word, list) or not all(isinstance(j, int) and j >= 0 for j in word):
        raise SimplicialSetError(f"bad degeneracy word {word!r} in {owner}", owner)
    if any(word[t] < word[t + 1] for t in range(len(word) - 1)):
        raise SimplicialSetError(f"degeneracy word {word} of {owner} is not weakly decreasing",
                                 owner)
    if not isinstance(target, str):
        raise SimplicialSetError(f"face target of {owner} must be a name", owner)
    return tuple(word), target


def load_simplicial_set(document) -> SimplicialSetSpec:
    """Build and validate a spec from a parsed document, JSON text or path."""
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        p = Path(document)
        if p.is_dir():
            p = p / "simplicial_set.json"
        elif not p.exists() and p.with_suffix(".json").exists():
            p = p.with_suffix(".json")
        try:
            document = json.loads(p.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise SimplicialSetError(f"no such document: {p}") from None
        except json.JSONDecodeError as exc:
            raise SimplicialSetError(f"{p}: malformed JSON at line {exc.lineno}") from None
    elif isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SimplicialSetError(f"malformed JSON at line {exc.lineno}") from None
    if not isinstance(document, Mapping) or "simplices" not in document:
        raise SimplicialSetError("document needs a top-level 'simplices' object")
    name = str(document.get("name", "unnamed"))
    raw = document["simplices"]
    if not isinstance(raw, Mapping):
        raise SimplicialSetError("'simplices' must map dimensions to arrays")
    try:
        dims = sorted((int(k), v) for k, v in raw.items())
    except ValueError:
        raise SimplicialSetError("dimension keys must be integers") from None
    simplices: dict = {}
    order: list = []
    for k, entries in dims:
        if k < 0 or not isinstance(entries, list):
            raise SimplicialSetError(f"bad entry list for dimension {k}")
        for e in entries:
            if k == 0:
                if not isinstance(e, str):
                    raise SimplicialSetError("0-simplices are given by name strings")
                sname, faces = e, ()
            else:
                if not isinstance(e, Mapping) or "id" not in e or "faces" not in e:
                    raise SimplicialSetError(f"{k}-simplex entries need 'id' and 'faces'")
                sname = str(e["id"])
                fl = e["faces"]
                if not isinstance(fl, list) or len(fl) != k + 1:
                    raise SimplicialSetError(
                        f"{sname} has {len(fl) if isinstance(fl, list) else '?'} faces, "
                        f"expected {k + 1}", sname)
                faces = tuple(_parse_face(f, sname, k) for f in fl)
            if sname in simplices:
                raise SimplicialSetError(f"duplicate simplex name {sname}", sname)
            simplices[sname] = Simplex(sname, k, faces)
            order.append(sname)
    # targets and dimensions
    for s in simplices.values():
        norm = []
        for i, (word, target) in enumerate(s.faces):
            t = simplices.get(target)
            if t is None:
                raise SimplicialSetError(
                    f"face {i} of {s.name} names unknown simplex {target!r}", s.name)
            if t.dim + len(word) != s.dim - 1:
                raise SimplicialSetError(
                    f"face {i} of {s.name}: {target} of dimension {t.dim} with "
                    f"{len(word)} degeneracies is not a {s.dim - 1}-simplex", s.name)
            nw = normalize_word(word)
            if nw and nw[0] > t.dim + len(nw) - 1:
                raise SimplicialSetError(
                    f"face {i} of {s.name}: degeneracy index out of range", s.name)
            norm.append((nw, target))
        simplices[s.name] = Simplex(s.name, s.dim, tuple(norm))
    X = SimplicialSetSpec(name, simplices, order)
    problems = identity_violations(X)
    if problems:
        sname, msg = problems[0]
        raise SimplicialSetError(msg, sname)
    return X


def identity_violations(X: SimplicialSetSpec) -> list:
    """``d_i d_j = d_{j-1} d_i`` (i < j) on every nondegenerate simplex."""
    bad = []
    for s in X.simplices.values():
        if s.dim < 2:
            continue
        for i, j in combinations(range(s.dim + 1), 2):
            w, t = s.faces[j]
            lhs = X.face(t, i, w)
            w, t = s.faces[i]
            rhs = X.face(t, j - 1, w)
            if lhs != rhs:
                bad.append((s.name, f"simplicial identity d{i}d{j} = d{j - 1}d{i} fails on "
                                    f"{s.name}: {lhs} != {rhs}"))
    return bad


def normalized_chains(X: SimplicialSetSpec) -> ChainComplexSlice:
    """Chains on nondegenerate simplices; degenerate faces contribute 0."""
    index = {k: {n: i for i, n in enumerate(X.of_dim(k))} for k in range(X.dimension + 1)}
    dims = {k: len(v) for k, v in index.items()}
    bounds = {}
    for k in range(1, X.dimension + 1):
        entries: dict = {}
        for n, col in index[k].items():
            for i, (word, target) in enumerate(X.simplices[n].faces):
                if word:
                    continue
                r = index[k - 1][target]
                entries[(r, col)] = entries.get((r, col), 0) + (-1) ** i
        bounds[k] = SparseMatrix(dims[k - 1], dims[k], entries)
    return ChainComplexSlice(dims, bounds)


def simplicial_homology(X: SimplicialSetSpec, reduced: bool = False) -> dict:
    """Rational homology dimensions in degrees ``0..dim X``."""
    C = normalized_chains(X)
    H = chain_homology(C, range(0, X.dimension + 1))
    out = {p: h.dimension for p, h in H.items()}
    if reduced and out.get(0):
        out[0] -= 1
    return out


def euler_characteristic(X: SimplicialSetSpec) -> int:
    return sum((-1) ** X.simplices[n].dim for n in X.order)
