"""The cosimplicial cdgl of simplex models.

``simplex_model(n, N)`` is the free Lie algebra on generators ``a_S`` for
nonempty ``S`` in ``{0..n}``, ``|a_S| = |S| - 2``, truncated at length
``N``.  Vertices are Maurer-Cartan, the linear part of ``d`` is the
desuspended simplicial boundary, and cofaces/codegeneracies commute with
``d``.

Write ``D = d + ad_{a0}``.  For ``n >= 2`` the top differential is
``d a_{0..n} = Psi - [a0, a_{0..n}]`` where ``Psi`` is a ``D``-cycle whose
linear part is the boundary; this squares to zero because ``a0`` is
Maurer-Cartan.  For ``n = 2`` ``Psi`` is the BCH loop around the triangle.
For ``n = 3`` it lifts the identity between the four triangle loops, with
face 0 transported to vertex 0 by ``e^{ad a01}``.  Beyond that the faces are
summed (face 0 transported the same way) and the remaining obstruction is
removed length by length: it is a cycle for the linear part, contracted with
the cone-on-vertex-0 homotopy extended to tensors and pushed back into the
Lie algebra by the Dynkin projector.  Every step commutes with
codegeneracies, so degenerate images stay zero.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Mapping

from .cdgl import (Cdgl, InvariantViolation, _block_sequences, bch, differential_check,
                   exp_ad, is_mc)
from .freelie import FreeLieAlgebra, Generator, LieElement, t_add
from .qalgebra import ONE, Q

# -- naming ------------------------------------------------------------------------


def gen_name(S) -> str:
    return "a" + "".join(str(i) for i in S) if max(S) < 10 else \
        "a" + "_".join(str(i) for i in S)


def faces_of(n: int) -> list:
    """All nonempty subsets of ``{0..n}`` as sorted tuples."""
    return [S for k in range(1, n + 2) for S in combinations(range(n + 1), k)]


def simplex_algebra(n: int) -> FreeLieAlgebra:
    return FreeLieAlgebra([Generator(gen_name(S), len(S) - 2) for S in faces_of(n)])


def bernoulli(k: int) -> "Q":
    """Bernoulli numbers with ``B_1 = -1/2``."""
    B = [Q(1)]
    for m in range(1, k + 1):
        B.append(-sum(math.comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return B[k]


# -- morphisms ------------------------------------------------------------------


@dataclass
class CdglMorphism:
    """Lie morphism determined on generators; missing generators go to 0."""

    source: Cdgl
    target: Cdgl
    images: dict  # source generator name -> LieElement of target

    def _letter_images(self) -> dict:
        src = self.source.algebra
        return {src.letter(g): v.tensor for g, v in self.images.items() if not v.is_zero()}

    def apply(self, x: LieElement) -> LieElement:
        t = self.source.algebra.substitute(x.tensor, self._letter_images(), self.target.N,
                                           target=self.target.algebra)
        return self.target.element(t)

    def image(self, name: str) -> LieElement:
        return self.images.get(name, self.target.zero())

    def compose(self, other: "CdglMorphism") -> "CdglMorphism":
        """``self o other``."""
        return CdglMorphism(other.source, self.target,
                            {g: self.apply(v) for g, v in other.images.items()})

    def commutation_defects(self) -> dict:
        """Generators ``g`` with ``f(dg) != d(fg)``, mapped to the difference."""
        bad = {}
        for g in self.source.gens:
            lhs = self.apply(self.source.dgen(g.name))
            rhs = self.target.d(self.image(g.name))
            if lhs != rhs:
                bad[g.name] = lhs - rhs
        return bad

    def check(self) -> None:
        bad = self.commutation_defects()
        if bad:
            g, v = next(iter(bad.items()))
            raise InvariantViolation(f"morphism does not commute with d on {g}: {v}")

    def same_as(self, other: "CdglMorphism") -> bool:
        names = set(self.images) | set(other.images)
        return all(self.image(g) == other.image(g) for g in names)


def vertex_map_morphism(source: Cdgl, target: Cdgl, vmap, name_of=gen_name) -> CdglMorphism:
    """Morphism induced by a monotone map of vertex sets; non-injective images
    (degenerate simplices) go to 0."""
    images = {}
    for g in source.gens:
        S = _parse(g.name)
        T = tuple(vmap(i) for i in S)
        if len(set(T)) == len(T):
            images[g.name] = target.gen(name_of(T))
    return CdglMorphism(source, target, images)


def _parse(name: str) -> tuple:
    body = name[1:]
    return tuple(int(p) for p in body.split("_")) if "_" in body else tuple(int(c) for c in body)


# -- simplex models ------------------------------------------------------------------


def ls_interval(N: int) -> Cdgl:
    """The Lawrence-Sullivan interval: vertices ``a0, a1``, edge ``a01``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    alg = simplex_algebra(1)
    a, b, x = (alg.gen(s, N) for s in ("a0", "a1", "a01"))
    dx = x.bracket(b)
    term = b - a
    k = 0
    while not term.is_zero():
        Bk = bernoulli(k)
        if Bk:
            dx = dx + term * (Bk / math.factorial(k))
        term = x.bracket(term)
        k += 1
    L = Cdgl(alg, N, {"a0": -a.bracket(a) / 2, "a1": -b.bracket(b) / 2, "a01": dx},
             mc=("a0", "a1"), name="L1")
    return L


class _Contraction:
    """Cone-on-vertex-0 homotopy on generators, extended to tensor words."""

    def __init__(self, alg: FreeLieAlgebra):
        self.alg = alg
        self.a0 = alg.letter("a0")
        self.h = {}
        self.vertex = set()
        for i, g in enumerate(alg.gens):
            S = _parse(g.name)
            if len(S) == 1:
                self.vertex.add(i)
            if S[0] != 0:
                self.h[i] = alg.letter(gen_name((0,) + S))

    def __call__(self, t: Mapping) -> dict:
        degs = self.alg.gens.degrees
        out: dict = {}
        for w, c in t.items():
            m = len(w)
            pre = [0]
            for x in w:
                pre.append(pre[-1] + degs[x])
            j = m - 1
            while j >= 0:
                hj = self.h.get(w[j])
                if hj is not None:
                    nw = w[:j] + (hj,) + (self.a0,) * (m - j - 1)
                    t_add(out, {nw: -c if pre[j] % 2 else c})
                if w[j] not in self.vertex:
                    break
                j -= 1
        return out


class _Dynkin:
    """``w -> [w1, [w2, ... wm]] / m`` on tensors; identity on Lie elements."""

    def __init__(self, alg: FreeLieAlgebra):
        self.alg = alg
        self.cache: dict = {}

    def nested(self, w) -> dict:
        hit = self.cache.get(w)
        if hit is None:
            if len(w) == 1:
                hit = {w: ONE}
            else:
                hit = self.alg.commutator({w[:1]: ONE}, self.nested(w[1:]))
            self.cache[w] = hit
        return hit

    def __call__(self, t: Mapping) -> dict:
        out: dict = {}
        for w, c in t.items():
            t_add(out, self.nested(w), c / len(w))
        return out


@lru_cache(maxsize=None)
def simplex_model(n: int, N: int) -> Cdgl:
    """The cdgl ``L_n`` truncated at bracket length ``N``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if N < 1:
        raise ValueError("N must be at least 1")
    if n == 0:
        alg = simplex_algebra(0)
        a = alg.gen("a0", N)
        return Cdgl(alg, N, {"a0": -a.bracket(a) / 2}, mc=("a0",), name="L0")
    if n == 1:
        return ls_interval(N)
    alg = simplex_algebra(n)
    d: dict = {}
    # proper faces: transport the top differential of the smaller model
    for S in faces_of(n):
        if len(S) == n + 1:
            continue
        k = len(S) - 1
        small = simplex_model(k, N)
        top = small.algebra.letter(gen_name(tuple(range(k + 1))))
        letters = {small.algebra.letter(gen_name(T)): alg.letter(gen_name(tuple(S[i] for i in T)))
                   for T in faces_of(k)}
        d[alg.letter(gen_name(S))] = small.algebra.relabel(small.differential_tensors.get(top, {}),
                                                           letters, N)
    top = alg.letter(gen_name(tuple(range(n + 1))))
    g = lambda *S: alg.gen(gen_name(S), N)  # noqa: E731
    if n == 2:
        psi = _triangle(g, 0, 1, 2).tensor
    elif n == 3:
        a01 = g(0, 1)
        psi = (_lifted_bch(exp_ad(a01, g(1, 2, 3)), g(0, 1, 3),
                           exp_ad(a01, _triangle(g, 1, 2, 3)), _triangle(g, 0, 1, 3))
               - _lifted_bch(g(0, 1, 2), g(0, 2, 3),
                             _triangle(g, 0, 1, 2), _triangle(g, 0, 2, 3))).tensor
    else:
        psi = _corrected_boundary(alg, N, n, d, top)
    a0 = g(0)
    d[top] = (alg.element(N, psi) - a0.bracket(g(*range(n + 1)))).tensor
    L = Cdgl(alg, N, {}, mc=[gen_name((i,)) for i in range(n + 1)], name=f"L{n}")
    L._d = {i: t for i, t in d.items() if t}
    return L


def _triangle(g, i, j, k) -> LieElement:
    """``log(e^{a_ij} e^{a_jk} e^{-a_ik})``, a cycle for ``d + ad_{a_i}``."""
    return bch(bch(g(i, j), g(j, k)), -g(i, k))


@lru_cache(maxsize=None)
def _bch_words(N: int) -> tuple:
    """Dynkin's series as ``((word, coef), ...)`` over letters 0 and 1."""
    acc: dict = {}
    for seq in _block_sequences(N):
        word = tuple(itertools.chain.from_iterable((0,) * r + (1,) * s for r, s in seq))
        if len(word) > 1 and word[-1] == word[-2]:
            continue
        denom = len(word)
        for r, s in seq:
            denom *= math.factorial(r) * math.factorial(s)
        acc[word] = acc.get(word, 0) + Q((-1) ** (len(seq) - 1), len(seq) * denom)
    return tuple((w, c) for w, c in sorted(acc.items()) if c)


def _lifted_bch(U: LieElement, V: LieElement, u: LieElement, v: LieElement) -> LieElement:
    """A preimage of ``bch(u, v)`` when ``u = DU``, ``v = DV`` are cycles of a
    derivation ``D``: the first letter of each nested bracket is lifted."""
    lifts, cycles = (U, V), (u, v)
    nested: dict = {}

    def inner(w):
        hit = nested.get(w)
        if hit is None:
            hit = cycles[w[0]] if len(w) == 1 else cycles[w[0]].bracket(inner(w[1:]))
            nested[w] = hit
        return hit

    acc: dict = {}
    for w, c in _bch_words(U.N):
        term = lifts[w[0]] if len(w) == 1 else lifts[w[0]].bracket(inner(w[1:]))
        if term:
            t_add(acc, term.tensor, c)
    return U.algebra.element(U.N, acc)


def _corrected_boundary(alg: FreeLieAlgebra, N: int, n: int, d: dict, top: int) -> dict:
    """A cycle of ``d + ad_{a0}`` whose linear part is the boundary of the top
    generator: faces based at vertex 0, face 0 transported by ``e^{ad a01}``,
    then corrected length by length with the contraction."""
    a0 = alg.gen("a0", N)
    a01 = alg.gen("a01", N)
    psi = alg.element(N)
    for k in range(n + 1):
        face = alg.gen(gen_name(tuple(i for i in range(n + 1) if i != k)), N)
        psi = psi + (exp_ad(a01, face) if k == 0 else face) * ((-1) ** k)
    perturbed = {i: t_add(dict(t), a0.bracket(alg.element(N, {(i,): ONE})).tensor)
                 for i, t in d.items()}
    for i in range(alg.size):
        if i not in perturbed and i != top:
            perturbed[i] = a0.bracket(alg.element(N, {(i,): ONE})).tensor
    linear = {i: {w: c for w, c in t.items() if len(w) == 1} for i, t in d.items()}
    linear[top] = {w: c for w, c in psi.tensor.items() if len(w) == 1}
    h = _Contraction(alg)
    dyn = _Dynkin(alg)
    phi = dict(psi.tensor)
    for m in range(2, N + 1):
        perturbed[top] = phi
        R = {w: c for w, c in alg.derivation(phi, perturbed, m).items() if len(w) == m}
        if not R:
            continue
        step = {w: -c for w, c in dyn(h(R)).items()}
        check = alg.derivation(step, linear, m)
        if t_add(check, R):
            raise InvariantViolation(f"obstruction at length {m} of L{n} is not a boundary")
        t_add(phi, step)
    return phi


# -- cosimplicial structure -------------------------------------------------------------


def coface(i: int, n: int, N: int) -> CdglMorphism:
    """``delta^i : L_n -> L_{n+1}``, skipping vertex ``i``."""
    if not 0 <= i <= n + 1:
        raise ValueError(f"coface index {i} out of range for n={n}")
    return vertex_map_morphism(simplex_model(n, N), simplex_model(n + 1, N),
                               lambda v: v if v < i else v + 1)


def codegeneracy(j: int, n: int, N: int) -> CdglMorphism:
    """``sigma^j : L_n -> L_{n-1}``, identifying vertices ``j`` and ``j+1``."""
    if not 0 <= j <= n - 1:
        raise ValueError(f"codegeneracy index {j} out of range for n={n}")
    return vertex_map_morphism(simplex_model(n, N), simplex_model(n - 1, N),
                               lambda v: v if v <= j else v - 1)


def cosimplicial_operator(kind: str, i: int, n: int, N: int, check: bool = True) -> CdglMorphism:
    """Coface ``L_n -> L_{n+1}`` or codegeneracy ``L_n -> L_{n-1}``, verified."""
    if kind == "coface":
        f = coface(i, n, N)
    elif kind == "codegeneracy":
        f = codegeneracy(i, n, N)
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    if check:
        f.check()
    return f


@dataclass
class SimplexModelReport:
    n: int
    N: int
    differential_ok: bool
    vertices_mc: bool
    linear_part_ok: bool
    bad_operators: list

    @property
    def ok(self) -> bool:
        return self.differential_ok and self.vertices_mc and self.linear_part_ok \
            and not self.bad_operators


def verify_simplex_model(n: int, N: int) -> SimplexModelReport:
    """Mechanical check of the three defining conditions."""
    L = simplex_model(n, N)
    dok = differential_check(L).ok
    mc = all(is_mc(L, L.gen(gen_name((i,)))) for i in range(n + 1))
    lin = True
    for S in faces_of(n):
        expected = L.zero()
        if len(S) > 1:
            for k in range(len(S)):
                expected = expected + L.gen(gen_name(S[:k] + S[k + 1:])) * ((-1) ** k)
        if L.linear_part(gen_name(S)) != expected:
            lin = False
    bad = []
    ops = [("coface", i, n - 1) for i in range(n + 1)] if n >= 1 else []
    ops += [("codegeneracy", j, n) for j in range(n)]
    for kind, i, src in ops:
        if cosimplicial_operator(kind, i, src, N, check=False).commutation_defects():
            bad.append((kind, i, src))
    return SimplexModelReport(n, N, dok, mc, lin, bad)
