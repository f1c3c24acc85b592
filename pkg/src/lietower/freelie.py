"""Free graded Lie algebras over Q, truncated by bracket length.

Elements are stored through their image in the tensor algebra, where the
bracket is the graded commutator ``[u, v] = uv - (-1)^{|u||v|} vu``; the
embedding is injective in characteristic zero, so equality, brackets,
derivations and morphisms are all computed on tensor words.  The normal
form is the super-Lyndon basis: standard bracketings of Lyndon words over
the generator order, plus ``[w, w]`` for every Lyndon ``w`` of odd degree.
It is recovered from the tensor image by leading-word elimination: the
smallest word in the support of a Lie polynomial is always a basis word.

Words are tuples of generator indices.  A truncation order ``N`` means all
arithmetic happens modulo brackets of length > N.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .qalgebra import ONE, ZERO, Q, Span, format_scalar, scalar

Word = tuple


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    upper: int = 1


class AlgebraMismatch(ValueError):
    pass


class NotALieElement(ValueError):
    pass


class GeneratorSet:
    """Ordered graded generators.  Order is ``(degree, name)`` unless
    ``sort=False`` is passed with an already ordered sequence."""

    def __init__(self, gens: Iterable, *, sort: bool = True):
        gl = [g if isinstance(g, Generator) else Generator(*g) for g in gens]
        if sort:
            gl.sort(key=lambda g: (g.degree, g.name))
        names = [g.name for g in gl]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for g in gl:
            if g.upper < 1:
                raise ValueError(f"upper degree of {g.name} must be positive")
        self.gens = tuple(gl)
        self.index = {g.name: i for i, g in enumerate(gl)}
        self.degrees = tuple(g.degree for g in gl)
        self.uppers = tuple(g.upper for g in gl)

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __eq__(self, other):
        return isinstance(other, GeneratorSet) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.gens)
        return f"GeneratorSet({inner})"


# -- words ------------------------------------------------------------------

def is_lyndon(w: Word) -> bool:
    n = len(w)
    if n == 0:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, n))


def standard_factorization(w: Word) -> tuple:
    """Split a Lyndon word as ``uv`` with ``v`` its longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


def lyndon_words(k: int, length: int) -> list:
    """All Lyndon words of the given length over letters ``0..k-1``, ascending
    (Duval's generation)."""
    if length < 1 or k < 1:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == length:
            out.append(tuple(w))
        while len(w) < length:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


# -- tensor algebra helpers -------------------------------------------------

def t_add(acc: dict, t: Mapping, coef=ONE) -> dict:
    for w, c in t.items():
        v = acc.get(w, ZERO) + coef * c
        if v:
            acc[w] = v
        else:
            acc.pop(w, None)
    return acc


def t_scale(t: Mapping, coef) -> dict:
    coef = scalar(coef)
    if not coef:
        return {}
    return {w: c * coef for w, c in t.items()}


def t_truncate(t: Mapping, N: int) -> dict:
    return {w: c for w, c in t.items() if len(w) <= N and c}


class FreeLieAlgebra:
    """The free graded Lie algebra on a :class:`GeneratorSet`.

    Holds the caches (tensor expansions, degrees of words) shared by all
    elements; caches are pure functions of their keys.
    """

    def __init__(self, gens):
        self.gens = gens if isinstance(gens, GeneratorSet) else GeneratorSet(gens)
        self._expansion: dict = {}
        self._wdeg: dict = {}
        self._basis_cache: dict = {}

    # identity is structural so that equal presentations interoperate
    def __eq__(self, other):
        return isinstance(other, FreeLieAlgebra) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return f"FreeLieAlgebra({self.gens!r})"

    @property
    def size(self) -> int:
        return len(self.gens)

    def letter(self, name: str) -> int:
        return self.gens.index[name]

    def name(self, i: int) -> str:
        return self.gens.gens[i].name

    def word_degree(self, w: Word) -> int:
        d = self._wdeg.get(w)
        if d is None:
            degs = self.gens.degrees
            d = sum(degs[i] for i in w)
            self._wdeg[w] = d
        return d

    def word_upper(self, w: Word) -> int:
        ups = self.gens.uppers
        return sum(ups[i] for i in w)

    # -- basis --------------------------------------------------------------

    def is_basis_word(self, w: Word) -> bool:
        if is_lyndon(w):
            return True
        n = len(w)
        if n % 2 == 0 and n > 0:
            h = w[: n // 2]
            return h == w[n // 2:] and is_lyndon(h) and self.word_degree(h) % 2 != 0
        return False

    def tree(self, w: Word):
        """Bracketing of a basis word: an int for a letter, a pair otherwise."""
        if len(w) == 1:
            return w[0]
        if is_lyndon(w):
            u, v = standard_factorization(w)
            return (self.tree(u), self.tree(v))
        h = w[: len(w) // 2]
        t = self.tree(h)
        return (t, t)

    def expand(self, w: Word) -> dict:
        """Tensor image of the basis bracket with basis word ``w``."""
        e = self._expansion.get(w)
        if e is not None:
            return e
        if len(w) == 1:
            e = {w: ONE}
        elif is_lyndon(w):
            u, v = standard_factorization(w)
            e = self.commutator(self.expand(u), self.expand(v))
        else:
            h = w[: len(w) // 2]
            if not (h == w[len(w) // 2:] and is_lyndon(h) and self.word_degree(h) % 2):
                raise ValueError(f"{w} is not a basis word")
            eh = self.expand(h)
            e = self.commutator(eh, eh)
        self._expansion[w] = e
        return e

    def lyndon_basis(self, length: int, degree: int | None = None) -> list:
        """Basis words of bracket length ``length`` (optionally one degree)."""
        key = (length, degree)
        hit = self._basis_cache.get(key)
        if hit is not None:
            return hit
        if length < 1:
            raise ValueError("length must be at least 1")
        words = list(lyndon_words(self.size, length))
        if length % 2 == 0:
            for h in lyndon_words(self.size, length // 2):
                if self.word_degree(h) % 2:
                    words.append(h + h)
        if degree is not None:
            words = [w for w in words if self.word_degree(w) == degree]
        words.sort()
        self._basis_cache[key] = words
        return words

    def basis_up_to(self, N: int, degree: int, upper: int | None = None) -> list:
        out = []
        for q in range(1, N + 1):
            for w in self.lyndon_basis(q, degree):
                if upper is None or self.word_upper(w) == upper:
                    out.append(w)
        return out

    def bracket_str(self, w: Word) -> str:
        def s(t):
            if isinstance(t, int):
                return self.name(t)
            return f"[{s(t[0])},{s(t[1])}]"
        return s(self.tree(w))

    # -- tensor arithmetic ---------------------------------------------------

    def _buckets(self, b: Mapping, with_degree: bool = False) -> list:
        """Terms of ``b`` grouped by word length, shortest first."""
        wd = self.word_degree
        by: dict = {}
        for v, cv in b.items():
            by.setdefault(len(v), []).append((v, cv, wd(v) % 2) if with_degree else (v, cv))
        return sorted(by.items())

    def product(self, a: Mapping, b: Mapping, N: int | None = None) -> dict:
        out: dict = {}
        buckets = self._buckets(b)
        for u, cu in a.items():
            room = None if N is None else N - len(u)
            for lv, terms in buckets:
                if room is not None and lv > room:
                    break
                for v, cv in terms:
                    w = u + v
                    x = out.get(w, ZERO) + cu * cv
                    if x:
                        out[w] = x
                    else:
                        out.pop(w, None)
        return out

    def commutator(self, a: Mapping, b: Mapping, N: int | None = None) -> dict:
        out: dict = {}
        get, pop = out.get, out.pop
        buckets = self._buckets(b, with_degree=True)
        wd = self.word_degree
        for u, cu in a.items():
            room = None if N is None else N - len(u)
            du = wd(u) % 2
            for lv, terms in buckets:
                if room is not None and lv > room:
                    break
                for v, cv, dv in terms:
                    c = cu * cv
                    w = u + v
                    x = get(w, ZERO) + c
                    if x:
                        out[w] = x
                    else:
                        pop(w, None)
                    w = v + u
                    x = get(w, ZERO) + c if du & dv else get(w, ZERO) - c
                    if x:
                        out[w] = x
                    else:
                        pop(w, None)
        return out

    def derivation(self, t: Mapping, images: Mapping, N: int | None = None,
                   degree: int = -1) -> dict:
        """Apply the derivation of the given degree determined on letters by
        ``images`` (letter -> tensor dict); missing letters map to 0."""
        out: dict = {}
        get, pop = out.get, out.pop
        degs = self.gens.degrees
        odd = degree % 2 != 0
        sorted_images = {}
        for w, c in t.items():
            n = len(w)
            room = None if N is None else N - n + 1
            pre = 0
            for i, x in enumerate(w):
                img = images.get(x)
                if img:
                    terms = sorted_images.get(x)
                    if terms is None:
                        terms = sorted(((len(v), v, cv) for v, cv in img.items()),
                                       key=lambda e: e[0])
                        sorted_images[x] = terms
                    coef = -c if (odd and pre % 2) else c
                    head, tail = w[:i], w[i + 1:]
                    for lv, v, cv in terms:
                        if room is not None and lv > room:
                            break
                        key = head + v + tail
                        y = get(key, ZERO) + coef * cv
                        if y:
                            out[key] = y
                        else:
                            pop(key, None)
                pre += degs[x]
        return out

    def substitute(self, t: Mapping, images: Mapping, N: int | None = None,
                   target: "FreeLieAlgebra | None" = None) -> dict:
        """Algebra morphism on tensor words: letter -> tensor dict (target
        algebra words).  Letters missing from ``images`` map to 0."""
        target = target or self
        out: dict = {}
        for w, c in t.items():
            acc = {(): c}
            for x in w:
                img = images.get(x)
                if not img:
                    acc = {}
                    break
                acc = target.product(acc, img, N)
                if not acc:
                    break
            t_add(out, acc)
        return out

    def relabel(self, t: Mapping, letters: Mapping, N: int | None = None) -> dict:
        """Morphism sending letters to letters (or to 0 when absent)."""
        out: dict = {}
        for w, c in t.items():
            try:
                nw = tuple(letters[x] for x in w)
            except KeyError:
                continue
            if N is not None and len(nw) > N:
                continue
            x = out.get(nw, ZERO) + c
            if x:
                out[nw] = x
            else:
                out.pop(nw, None)
        return out

    def decompose(self, t: Mapping) -> dict:
        """Coordinates of a Lie polynomial (given in the tensor algebra) in the
        basis.  Raises :class:`NotALieElement` if ``t`` is not Lie."""
        t = {w: c for w, c in t.items() if c}
        out = {}
        heap = list(t)
        heapq.heapify(heap)
        while heap:
            w = heapq.heappop(heap)
            c = t.get(w)
            if not c:
                continue
            if not self.is_basis_word(w):
                raise NotALieElement(f"leading word {self.word_str(w)} is not a basis word")
            e = self.expand(w)
            f = c / e[w]
            out[w] = f
            for u, cu in e.items():
                old = t.get(u)
                nv = (old if old is not None else ZERO) - f * cu
                if nv:
                    t[u] = nv
                    if old is None:
                        heapq.heappush(heap, u)
                else:
                    t.pop(u, None)
        return out

    def word_str(self, w: Word) -> str:
        return "".join(self.name(i) if len(self.name(i)) == 1 else f"({self.name(i)})" for i in w)

    # -- element constructors -----------------------------------------------

    def element(self, N: int, tensor: Mapping | None = None) -> "LieElement":
        return LieElement(self, N, tensor or {})

    def gen(self, name: str, N: int) -> "LieElement":
        return LieElement(self, N, {(self.letter(name),): ONE})

    def from_terms(self, N: int, terms: Mapping) -> "LieElement":
        """Element from basis coordinates ``{basis word or BasisBracket: coef}``."""
        acc: dict = {}
        for w, c in terms.items():
            if isinstance(w, BasisBracket):
                w = w.word
            if not self.is_basis_word(w):
                raise ValueError(f"{w} is not a basis word")
            t_add(acc, self.expand(w), scalar(c))
        return LieElement(self, N, acc)


@dataclass(frozen=True)
class BasisBracket:
    """A normal-basis bracket together with its cached gradings."""

    algebra: FreeLieAlgebra
    word: Word

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def degree(self) -> int:
        return self.algebra.word_degree(self.word)

    @property
    def upper(self) -> int:
        return self.algebra.word_upper(self.word)

    @property
    def tree(self):
        return self.algebra.tree(self.word)

    def __str__(self):
        return self.algebra.bracket_str(self.word)

    def __lt__(self, other):
        return (len(self.word), self.word) < (len(other.word), other.word)


class LieElement:
    """An element of ``L(V) / L^{>N}(V)`` held as a tensor-algebra polynomial."""

    __slots__ = ("algebra", "N", "_t", "_terms")

    def __init__(self, algebra: FreeLieAlgebra, N: int, tensor: Mapping):
        if N < 1:
            raise ValueError("truncation order must be at least 1")
        self.algebra = algebra
        self.N = N
        self._t = {w: scalar(c) for w, c in tensor.items() if len(w) <= N and c}
        if () in self._t:
            raise NotALieElement("constant term in a Lie element")
        self._terms = None

    # -- views ----------------------------------------------------------------

    @property
    def tensor(self) -> dict:
        return self._t

    @property
    def terms(self) -> dict:
        """Normal form: ``{basis word: coefficient}``."""
        if self._terms is None:
            self._terms = self.algebra.decompose(self._t)
        return self._terms

    def basis_terms(self) -> list:
        """``[(BasisBracket, coef)]`` in (length, word) order."""
        return [(BasisBracket(self.algebra, w), c)
                for w, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))]

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def degrees(self) -> set:
        return {self.algebra.word_degree(w) for w in self._t}

    def lengths(self) -> set:
        return {len(w) for w in self._t}

    @property
    def degree(self) -> int | None:
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError(f"element is not homogeneous (degrees {sorted(ds)})")
        return ds.pop() if ds else None

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, degree: int) -> "LieElement":
        wd = self.algebra.word_degree
        return self._new({w: c for w, c in self._t.items() if wd(w) == degree})

    def length_part(self, q: int) -> "LieElement":
        return self._new({w: c for w, c in self._t.items() if len(w) == q})

    def min_length(self) -> int | None:
        return min((len(w) for w in self._t), default=None)

    # -- arithmetic -------------------------------------------------------------

    def _new(self, t) -> "LieElement":
        return LieElement(self.algebra, self.N, t)

    def _check(self, other: "LieElement"):
        if not isinstance(other, LieElement):
            raise TypeError(f"expected LieElement, got {type(other).__name__}")
        if other.algebra != self.algebra or other.N != self.N:
            raise AlgebraMismatch("elements live in different truncated algebras")

    def __add__(self, other):
        self._check(other)
        return self._new(t_add(dict(self._t), other._t))

    def __sub__(self, other):
        self._check(other)
        return self._new(t_add(dict(self._t), other._t, -ONE))

    def __neg__(self):
        return self._new(t_scale(self._t, -1))

    def __mul__(self, c):
        return self._new(t_scale(self._t, c))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self._new(t_scale(self._t, ONE / scalar(c)))

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.algebra == other.algebra and self.N == other.N and self._t == other._t

    def __hash__(self):
        return hash((self.algebra, self.N, frozenset(self._t.items())))

    def bracket(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return self._new(self.algebra.commutator(self._t, other._t, self.N))

    def truncate(self, N: int) -> "LieElement":
        return LieElement(self.algebra, N, self._t)

    def __str__(self):
        if not self._t:
            return "0"
        out = ""
        for b, c in self.basis_terms():
            sign = "-" if c < 0 else "+"
            mag = format_scalar(abs(c))
            body = str(b) if mag == "1" else f"{mag}*{b}"
            out += f"{'-' if sign == '-' else ''}{body}" if not out else f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LieElement({self}, N={self.N})"


# -- public operations ---------------------------------------------------------

def lyndon_basis(gens, length: int, degree_filter: int | None = None) -> list:
    alg = gens if isinstance(gens, FreeLieAlgebra) else FreeLieAlgebra(gens)
    return [BasisBracket(alg, w) for w in alg.lyndon_basis(length, degree_filter)]


def normalize_bracket(u: LieElement, v: LieElement) -> LieElement:
    """Graded bracket of two elements, in normal form and truncated."""
    return u.bracket(v)


def graded_witt_dimension(gens, length: int) -> int:
    """Dimension of the length-``q`` part, by exact rank of all right-normed
    brackets of letters expanded in the tensor algebra.  Independent of the
    Lyndon machinery."""
    if length < 1:
        raise ValueError("length must be at least 1")
    gs = gens.gens if isinstance(gens, FreeLieAlgebra) else gens
    gs = gs if isinstance(gs, GeneratorSet) else GeneratorSet(gs)
    degs = gs.degrees
    k = len(gs)

    def wdeg(w):
        return sum(degs[i] for i in w)

    def comm(a, b):
        out: dict = {}
        for u, cu in a.items():
            for v, cv in b.items():
                t_add(out, {u + v: cu * cv})
                s = -1 if (wdeg(u) * wdeg(v)) % 2 == 0 else 1
                t_add(out, {v + u: s * cu * cv})
        return out

    span = Span()
    cache: dict = {}

    def right_normed(seq):
        if len(seq) == 1:
            return {seq: ONE}
        hit = cache.get(seq)
        if hit is None:
            hit = comm({seq[:1]: ONE}, right_normed(seq[1:]))
            cache[seq] = hit
        return hit

    for seq in itertools.product(range(k), repeat=length):
        span.add(right_normed(seq))
    return len(span)
