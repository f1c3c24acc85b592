"""Presented complete dgl's and their elementary homotopy theory.

A :class:`Cdgl` is ``(L(V) / L^{>N}(V), d)``: free on ordered generators,
differential given on generators, truncated at bracket length ``N``.  The
filtration is always the bracket-length one, so truncation *is* the quotient
by the N+1-st filtration stage.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .freelie import FreeLieAlgebra, GeneratorSet, LieElement, t_add
from .qalgebra import (ONE, ZERO, ChainComplexSlice, Q, SparseMatrix, Span,
                       chain_homology, scalar, solve_columns)

HALF = Q(1, 2)


class NotMaurerCartan(ValueError):
    pass


class UnsupportedInput(ValueError):
    pass


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; indicates a bug, never bad input."""


class Cdgl:
    """Free cdgl truncated at bracket length ``N``.

    ``differential`` maps generator names to :class:`LieElement` (or raw
    tensor dictionaries); generators not listed have zero differential.
    ``mc`` names degree -1 generators known to be Maurer-Cartan.
    """

    def __init__(self, algebra, N: int, differential: Mapping | None = None,
                 mc: Iterable[str] = (), name: str = ""):
        self.algebra = algebra if isinstance(algebra, FreeLieAlgebra) else FreeLieAlgebra(algebra)
        self.N = N
        self.name = name
        dt: dict = {}
        for g, v in (differential or {}).items():
            i = self.algebra.letter(g) if isinstance(g, str) else g
            t = v.tensor if isinstance(v, LieElement) else v
            t = {w: scalar(c) for w, c in t.items() if len(w) <= N and c}
            if t:
                dt[i] = t
        self._d = dt
        self.mc = frozenset(self.algebra.letter(m) for m in mc)
        self._basis_d: dict = {}

    # -- accessors ------------------------------------------------------------

    @property
    def gens(self) -> GeneratorSet:
        return self.algebra.gens

    def gen(self, name: str) -> LieElement:
        return self.algebra.gen(name, self.N)

    def zero(self) -> LieElement:
        return self.algebra.element(self.N)

    def element(self, tensor: Mapping) -> LieElement:
        return self.algebra.element(self.N, tensor)

    def dgen(self, name: str) -> LieElement:
        i = self.algebra.letter(name)
        return self.algebra.element(self.N, self._d.get(i, {}))

    @property
    def differential_tensors(self) -> dict:
        return self._d

    def differential(self) -> dict:
        return {g.name: self.dgen(g.name) for g in self.gens}

    def d(self, x: LieElement) -> LieElement:
        self._own(x)
        return self.algebra.element(self.N, self.algebra.derivation(x.tensor, self._d, self.N))

    def _own(self, x: LieElement):
        if x.algebra != self.algebra or x.N != self.N:
            raise ValueError("element does not belong to this cdgl")

    def with_differential(self, tensors: Mapping, mc=None, name=None) -> "Cdgl":
        out = Cdgl(self.algebra, self.N, {}, (), name if name is not None else self.name)
        out._d = {i: t for i, t in tensors.items() if t}
        out.mc = self.mc if mc is None else frozenset(mc)
        return out

    def truncated(self, N: int) -> "Cdgl":
        out = Cdgl(self.algebra, N, {}, (), self.name)
        out._d = {i: {w: c for w, c in t.items() if len(w) <= N} for i, t in self._d.items()}
        out._d = {i: t for i, t in out._d.items() if t}
        out.mc = self.mc
        return out

    def linear_part(self, name: str) -> LieElement:
        return self.dgen(name).length_part(1)

    def mc_generators(self) -> list:
        return [self.algebra.name(i) for i in sorted(self.mc)]

    # -- homology support --------------------------------------------------------

    def basis(self, degree: int, upper: int | None = None) -> list:
        return self.algebra.basis_up_to(self.N, degree, upper)

    def d_basis(self, w) -> dict:
        """Differential of a basis bracket, as a tensor dictionary (cached)."""
        hit = self._basis_d.get(w)
        if hit is None:
            hit = self.algebra.derivation(self.algebra.expand(w), self._d, self.N)
            self._basis_d[w] = hit
        return hit

    def __repr__(self):
        return f"Cdgl({self.name or '?'}, {self.gens!r}, N={self.N})"


# -- differential check --------------------------------------------------------

@dataclass
class Violation:
    generator: str
    kind: str  # "degree" | "square"
    residue: LieElement | None
    message: str


@dataclass
class DifferentialReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return "; ".join(v.message for v in self.violations)


def differential_check(L: Cdgl) -> DifferentialReport:
    """Check that ``d`` has degree -1 on generators and ``d(dg) = 0`` mod length > N."""
    rep = DifferentialReport()
    alg = L.algebra
    for i, g in enumerate(L.gens):
        dg = L._d.get(i, {})
        bad = sorted({alg.word_degree(w) for w in dg} - {g.degree - 1})
        if bad:
            rep.violations.append(Violation(
                g.name, "degree", alg.element(L.N, dg),
                f"d({g.name}) has terms of degree {bad}, expected {g.degree - 1}"))
            continue
        ddg = alg.derivation(dg, L._d, L.N)
        if ddg:
            res = alg.element(L.N, ddg)
            rep.violations.append(Violation(
                g.name, "square", res, f"d(d({g.name})) = {res} != 0"))
    return rep


# -- Maurer-Cartan --------------------------------------------------------------

def is_mc(L: Cdgl, v: LieElement) -> bool:
    L._own(v)
    if v.is_zero():
        return True
    if v.degrees() != {-1}:
        return False
    return (L.d(v) + HALF * v.bracket(v)).is_zero()


@dataclass(frozen=True)
class MCElement:
    cdgl: Cdgl
    value: LieElement

    def __post_init__(self):
        if not is_mc(self.cdgl, self.value):
            raise NotMaurerCartan(f"{self.value} is not a Maurer-Cartan element")


def mc_element(L: Cdgl, v: LieElement | str | None = None) -> MCElement:
    if v is None:
        v = L.zero()
    elif isinstance(v, str):
        v = L.gen(v)
    return MCElement(L, v)


def perturb(L: Cdgl, a: MCElement | LieElement) -> Cdgl:
    """``(L, d_a)`` with ``d_a = d + ad_a``."""
    av = a.value if isinstance(a, MCElement) else a
    if not is_mc(L, av):
        raise NotMaurerCartan(f"{av} is not a Maurer-Cartan element")
    alg = L.algebra
    new = {}
    for i in range(alg.size):
        t = dict(L._d.get(i, {}))
        t_add(t, alg.commutator(av.tensor, {(i,): ONE}, L.N))
        if t:
            new[i] = t
    P = L.with_differential(new, mc=(), name=f"{L.name}^a" if L.name else "")
    rep = differential_check(P)
    if not rep.ok:
        raise InvariantViolation(f"perturbed differential does not square to zero: {rep}")
    return P


def component(L: Cdgl, a: MCElement | LieElement) -> Cdgl:
    """Connected component of ``L`` at ``a``.

    Supported presentations have at most one negative generator, of degree
    -1, which must be ``a`` itself.  The returned cdgl is presented on the
    remaining (non-negative) generators with the perturbed differential;
    this requires the subalgebra they generate to be ``d_a``-stable, which is
    checked exactly.  Its degree-0 part is ``ker d_a`` (computed, and equal
    to the whole degree-0 part since nothing of degree -1 survives).
    """
    av = a.value if isinstance(a, MCElement) else a
    alg = L.algebra
    negative = [i for i, g in enumerate(alg.gens) if g.degree < 0]
    if any(alg.gens.degrees[i] < -1 for i in negative):
        raise UnsupportedInput("generators of degree below -1 are not supported")
    if len(negative) > 1:
        names = [alg.name(i) for i in negative]
        raise UnsupportedInput(f"several degree -1 generators {names}: input is not reduced")
    if negative:
        (ai,) = negative
        if av.tensor != {(ai,): ONE}:
            raise UnsupportedInput(
                f"component must be taken at the degree -1 generator {alg.name(ai)}")
    elif not av.is_zero():
        raise UnsupportedInput("no degree -1 generator, so only a = 0 is possible")
    P = perturb(L, av) if negative else L
    keep = [i for i in range(alg.size) if i not in negative]
    sub = FreeLieAlgebra(GeneratorSet([alg.gens.gens[i] for i in keep], sort=False))
    relabel = {i: j for j, i in enumerate(keep)}
    new = {}
    for i in keep:
        t = P._d.get(i, {})
        if any(x not in relabel for w in t for x in w):
            raise UnsupportedInput(
                f"d_a({alg.name(i)}) leaves the subalgebra of non-negative generators")
        img = alg.relabel(t, relabel)
        if img:
            new[relabel[i]] = img
    C = Cdgl(sub, L.N, {}, (), name=f"{L.name}^a" if L.name else "")
    C._d = new
    kernel = degree_zero_kernel(C)
    if kernel != len(C.basis(0)):
        raise InvariantViolation("degree-0 kernel of d_a is not the whole degree-0 part")
    C.degree0_kernel_dim = kernel
    return C


def degree_zero_kernel(L: Cdgl) -> int:
    basis = L.basis(0)
    if not basis:
        return 0
    cols = [L.d_basis(w) for w in basis]
    rank = len(Span(cols))
    return len(basis) - rank


def lcs_quotient(L: Cdgl, n: int) -> Cdgl:
    """``L / L^n`` for a free presentation: truncation at length ``n - 1``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n - 1 > L.N:
        raise ValueError(f"cannot form L/L^{n} from a truncation at N={L.N}")
    return L.truncated(n - 1)


def project(x: LieElement, N: int) -> LieElement:
    """The canonical projection ``L/L^{M+1} -> L/L^{N+1}`` (coefficient restriction)."""
    if N > x.N:
        raise ValueError("projection must lower the truncation order")
    return x.truncate(N)


# -- BCH, exponential action, gauge ------------------------------------------------

def _require_degree0(*xs: LieElement):
    for x in xs:
        if not x.is_zero() and x.degrees() != {0}:
            raise ValueError(f"{x} is not of degree 0")


def ad_power(alpha: LieElement, beta: LieElement, k: int) -> LieElement:
    out = beta
    for _ in range(k):
        if out.is_zero():
            break
        out = alpha.bracket(out)
    return out


def exp_ad(alpha: LieElement, beta: LieElement) -> LieElement:
    """``e^{ad_alpha}(beta)``, a finite sum in the truncation."""
    _require_degree0(alpha)
    total = beta
    term = beta
    k = 0
    while True:
        k += 1
        term = alpha.bracket(term) / k
        if term.is_zero():
            return total
        total = total + term


def _block_sequences(N: int):
    """Sequences ((r1, s1), ..., (rm, sm)) with r_i + s_i >= 1, total <= N."""
    blocks = [(r, s) for r in range(N + 1) for s in range(N + 1) if 1 <= r + s <= N]

    def rec(remaining):
        yield ()
        for r, s in blocks:
            if r + s <= remaining:
                for rest in rec(remaining - r - s):
                    yield ((r, s),) + rest
    for seq in rec(N):
        if seq:
            yield seq


def bch(x: LieElement, y: LieElement) -> LieElement:
    """Baker-Campbell-Hausdorff product by Dynkin's explicit series."""
    _require_degree0(x, y)
    x._check(y)
    N = x.N
    letters = (x, y)
    nested: dict = {}

    def right_nested(word):
        hit = nested.get(word)
        if hit is None:
            if len(word) == 1:
                hit = letters[word[0]]
            else:
                hit = letters[word[0]].bracket(right_nested(word[1:]))
            nested[word] = hit
        return hit

    acc: dict = {}
    for seq in _block_sequences(N):
        m = len(seq)
        word = tuple(itertools.chain.from_iterable((0,) * r + (1,) * s for r, s in seq))
        if len(word) > 1 and word[-1] == word[-2]:
            continue  # ends in [z, z] with z of degree 0
        denom = len(word)
        for r, s in seq:
            denom *= math.factorial(r) * math.factorial(s)
        coef = Q((-1) ** (m - 1), m * denom)
        term = right_nested(word)
        if term:
            t_add(acc, term.tensor, coef)
    return x.algebra.element(N, acc)


def gauge_transform(a: MCElement, x: LieElement) -> MCElement:
    """Gauge action ``x . a = e^{ad_x}(a) - ((e^{ad_x} - 1)/ad_x)(dx)``."""
    L = a.cdgl
    _require_degree0(x)
    L._own(x)
    dx = L.d(x)
    total = exp_ad(x, a.value)
    term = dx
    k = 0
    while not term.is_zero():
        total = total - term / math.factorial(k + 1)
        k += 1
        term = x.bracket(term)
    try:
        return MCElement(L, total)
    except NotMaurerCartan as exc:
        raise InvariantViolation(f"gauge action produced a non-MC element: {exc}") from None


# -- finite graded Lie algebras ------------------------------------------------------

@dataclass
class FiniteGradedLie:
    """Finite-dimensional graded Lie algebra by structure constants.

    ``dims[p]`` is the dimension in degree ``p``; ``brackets[(p, i, q, j)]``
    is ``{k: c}``, the bracket of basis vectors ``e_{p,i}`` and ``e_{q,j}`` in
    degree ``p + q``.  Missing entries are zero.
    """

    dims: dict
    brackets: dict = field(default_factory=dict)

    def dim(self, p: int) -> int:
        return self.dims.get(p, 0)

    def degrees(self) -> list:
        return sorted(p for p, n in self.dims.items() if n)

    def bracket_basis(self, p, i, q, j) -> dict:
        return self.brackets.get((p, i, q, j), {})

    def bracket(self, p: int, u: Mapping, q: int, v: Mapping) -> dict:
        out: dict = {}
        for i, cu in u.items():
            for j, cv in v.items():
                t_add(out, self.bracket_basis(p, i, q, j), cu * cv)
        return out

    def check_axioms(self) -> list:
        """Return a list of failed antisymmetry/Jacobi instances (empty if ok)."""
        bad = []
        basis = [(p, i) for p in self.degrees() for i in range(self.dim(p))]
        for (p, i), (q, j) in itertools.product(basis, repeat=2):
            a = self.bracket_basis(p, i, q, j)
            b = self.bracket_basis(q, j, p, i)
            s = -1 if (p * q) % 2 == 0 else 1
            if t_add(dict(a), b, -s):
                bad.append(("antisymmetry", (p, i), (q, j)))
        for (p, i), (q, j), (r, k) in itertools.product(basis, repeat=3):
            lhs = self.bracket(p, {i: ONE}, q + r, self.bracket_basis(q, j, r, k))
            rhs = self.bracket(p + q, self.bracket_basis(p, i, q, j), r, {k: ONE})
            sign = -1 if (p * q) % 2 else 1
            t_add(rhs, self.bracket(q, {j: ONE}, p + r, self.bracket_basis(p, i, r, k)), sign)
            if t_add(lhs, rhs, -1):
                bad.append(("jacobi", (p, i), (q, j), (r, k)))
        return bad


def rotation_algebra() -> FiniteGradedLie:
    """``so(3)`` in degree 0: ``[e_i, e_j] = e_k`` for cyclic ``(i, j, k)``."""
    br = {}
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        br[(0, i, 0, j)] = {k: ONE}
        br[(0, j, 0, i)] = {k: -ONE}
    return FiniteGradedLie({0: 3}, br)


def _span_dim(vectors) -> tuple:
    sp = Span()
    kept = []
    for v in vectors:
        if sp.add(v):
            kept.append(v)
    return kept


def lower_central_series(G: FiniteGradedLie, degrees: Sequence[int], max_terms: int = 64):
    """Spanning sets of ``G^n`` per degree, n = 1, 2, ... until zero or stable.

    Returns ``(terms, stable)`` where ``terms[n-1][p]`` is a basis (list of
    coordinate dicts) of ``(G^n)_p`` and ``stable`` tells whether the series
    stopped at a nonzero fixed point.
    """
    all_deg = sorted(set(G.degrees()) | set(degrees))
    current = {p: [{i: ONE} for i in range(G.dim(p))] for p in all_deg}
    terms = [current]
    for _ in range(max_terms):
        if all(not current.get(p) for p in all_deg):
            return terms, False
        nxt = {}
        for p in all_deg:
            vecs = []
            for q in G.degrees():
                for v in current.get(p - q, []):
                    for i in range(G.dim(q)):
                        b = G.bracket(q, {i: ONE}, p - q, v)
                        if b:
                            vecs.append(b)
            nxt[p] = _span_dim(vecs)
        if all(len(nxt[p]) == len(current.get(p, [])) for p in all_deg):
            return terms, True
        current = nxt
        terms.append(current)
    return terms, True


@dataclass
class NilpotencyVerdict:
    nilpotent: bool
    nilpotency_class: int | None
    series_lengths: dict  # degree -> first n with (G^n)_p = 0, or None

    def __bool__(self):
        return self.nilpotent


def is_degreewise_nilpotent(G: FiniteGradedLie, degrees: Iterable[int]) -> NilpotencyVerdict:
    """Whether each requested degree of the lower central series reaches 0.

    The class is the usual one: the largest ``c`` with ``G^c != 0`` in the
    requested degrees (so abelian nonzero algebras have class 1).
    """
    degrees = list(degrees)
    terms, stable = lower_central_series(G, degrees)
    lengths = {}
    for p in degrees:
        first = None
        for n, t in enumerate(terms, start=1):
            if not t.get(p):
                first = n
                break
        lengths[p] = first
    ok = all(v is not None for v in lengths.values())
    cls = (max(lengths.values(), default=1) - 1) if ok else None
    return NilpotencyVerdict(ok, cls, lengths)


def acts_nilpotently(G: FiniteGradedLie, degrees: Iterable[int]) -> NilpotencyVerdict:
    """Route (ii): ``G_0`` nilpotent and ``ad(G_0)`` nilpotent on each ``G_p``."""
    degrees = list(degrees)
    zero_part = FiniteGradedLie({0: G.dim(0)}, {k: v for k, v in G.brackets.items()
                                               if k[0] == 0 and k[2] == 0})
    v0 = is_degreewise_nilpotent(zero_part, [0])
    lengths = {}
    for p in degrees:
        if p == 0:
            lengths[p] = v0.series_lengths[0]
            continue
        current = [{i: ONE} for i in range(G.dim(p))]
        n = 1
        while current and n <= 64:
            vecs = [G.bracket(0, {i: ONE}, p, v) for v in current for i in range(G.dim(0))]
            nxt = _span_dim([v for v in vecs if v])
            if len(nxt) == len(current):
                n = None
                break
            current = nxt
            n += 1
        lengths[p] = n if not current else None
    ok = v0.nilpotent and all(v is not None for v in lengths.values())
    cls = (max(lengths.values(), default=1) - 1) if ok else None
    return NilpotencyVerdict(ok, cls, lengths)


# -- homology of a cdgl -------------------------------------------------------------

@dataclass
class DglHomology:
    cdgl: Cdgl
    dims: dict
    representatives: dict  # degree -> list[LieElement]
    lie: FiniteGradedLie
    cycle_dims: dict
    boundary_ranks: dict
    boundaries: dict = field(default_factory=dict, repr=False)  # degree -> tensors

    def dim(self, p: int) -> int:
        return self.dims.get(p, 0)

    def class_of(self, x: LieElement, p: int) -> dict:
        """Coordinates of the class of the cycle ``x`` in the basis of ``H_p``."""
        if x.is_zero():
            return {}
        targets = [r.tensor for r in self.representatives[p]]
        sol = solve_columns(targets + self.boundaries.get(p, []), x.tensor)
        if sol is None:
            raise InvariantViolation(f"{x} is not a cycle of degree {p}")
        return {k: c for k, c in enumerate(sol[: len(targets)]) if c}


def _degree_complex(L: Cdgl, degrees: Sequence[int]):
    bases = {p: L.basis(p) for p in degrees}
    index = {p: {w: i for i, w in enumerate(b)} for p, b in bases.items()}
    bounds = {}
    for p in degrees:
        if p - 1 not in bases or not bases[p]:
            continue
        cols = []
        for w in bases[p]:
            coords = L.algebra.decompose(L.d_basis(w))
            col = {}
            for u, c in coords.items():
                j = index[p - 1].get(u)
                if j is None:
                    raise InvariantViolation(f"d lands outside the degree {p - 1} basis")
                col[j] = c
            cols.append(col)
        bounds[p] = SparseMatrix.from_columns(len(bases[p - 1]), cols)
    return bases, ChainComplexSlice({p: len(b) for p, b in bases.items()}, bounds)


def dgl_homology(L: Cdgl, degrees: Iterable[int]) -> DglHomology:
    """Exact homology of the truncated cdgl, with the induced graded bracket."""
    degrees = sorted(set(degrees))
    if not degrees:
        return DglHomology(L, {}, {}, FiniteGradedLie({}), {}, {})
    span = list(range(degrees[0] - 1, degrees[-1] + 2))
    bases, C = _degree_complex(L, span)
    H = chain_homology(C, degrees)
    alg = L.algebra
    reps = {}
    for p in degrees:
        reps[p] = [alg.from_terms(L.N, {bases[p][i]: c for i, c in enumerate(v) if c})
                   for v in H[p].representatives]
    bnd = {p: [L.d_basis(w) for w in bases.get(p + 1, [])] for p in degrees}
    out = DglHomology(L, {p: H[p].dimension for p in degrees}, reps, FiniteGradedLie({}),
                      {p: H[p].cycle_dim for p in degrees},
                      {p: H[p].boundary_rank for p in degrees}, bnd)
    brackets = {}
    for p, q in itertools.product(degrees, repeat=2):
        r = p + q
        if not reps.get(r):
            continue
        for i, u in enumerate(reps[p]):
            for j, v in enumerate(reps[q]):
                coords = out.class_of(u.bracket(v), r)
                if coords:
                    brackets[(p, i, q, j)] = coords
    out.lie = FiniteGradedLie({p: H[p].dimension for p in degrees}, brackets)
    return out


@dataclass
class HomologicalNilpotency:
    nilpotent: bool
    route_ii: NilpotencyVerdict
    route_iii: NilpotencyVerdict
    homology: DglHomology | None

    def __bool__(self):
        return self.nilpotent


def is_homologically_nilpotent(L, degrees: Iterable[int]) -> HomologicalNilpotency:
    """Evaluate both characterizations of nilpotence on ``H(L)`` and require
    them to agree.  ``L`` may be a :class:`Cdgl` or a :class:`FiniteGradedLie`
    standing for the homology directly."""
    degrees = sorted(set(degrees))
    if isinstance(L, FiniteGradedLie):
        H, G = None, L
    else:
        rng = list(range(min(0, degrees[0]), degrees[-1] + 1))
        H = dgl_homology(L, rng)
        G = H.lie
    ii = acts_nilpotently(G, degrees)
    iii = is_degreewise_nilpotent(G, degrees)
    if ii.nilpotent != iii.nilpotent:
        raise InvariantViolation(
            f"nilpotency routes disagree: (ii)={ii.nilpotent}, (iii)={iii.nilpotent}")
    return HomologicalNilpotency(iii.nilpotent, ii, iii, H)
