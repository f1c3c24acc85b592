"""The completion tower ``{L/L^n}`` of a reduced simplicial set.

Stage ``n`` is the based component model truncated at bracket length
``n - 1``, so its arithmetic is exactly that of ``L/L^n``.  Homotopy groups
of the realization of a stage are read off as ``pi_i = H_{i-1}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .cdgl import (Cdgl, DglHomology, FiniteGradedLie, InvariantViolation,
                   UnsupportedInput, _block_sequences, dgl_homology, exp_ad,
                   is_degreewise_nilpotent, is_homologically_nilpotent, lcs_quotient)
from .freelie import t_add
from .model import based_component_model
from .qalgebra import ONE, Q, format_scalar
from .simpset import SimplicialSetSpec

# Rational homotopy ranks of the nilpotent fixtures, by fixture name.
KNOWN_RATIONAL_HOMOTOPY = {
    "point": {},
    "S1": {1: 1},
    "S2": {2: 1, 3: 1},
    "S3": {3: 1},
}


@dataclass
class Stage:
    n: int
    cdgl: Cdgl

    @property
    def N(self) -> int:
        return self.cdgl.N


@dataclass
class Tower:
    space: SimplicialSetSpec
    stages: list  # Stage, n = 2 .. n_max

    def stage(self, n: int) -> Stage:
        for s in self.stages:
            if s.n == n:
                return s
        raise KeyError(n)

    def projection(self, n: int):
        """``q_n : L/L^{n+1} -> L/L^n`` on elements (coefficient restriction)."""
        lo = self.stage(n).cdgl

        def q(x):
            return lo.element({w: c for w, c in x.tensor.items() if len(w) <= lo.N})
        return q

    def projection_surjective(self, n: int, degrees) -> bool:
        hi, lo = self.stage(n + 1).cdgl, self.stage(n).cdgl
        for p in degrees:
            hi_basis = set(hi.basis(p))
            if not set(lo.basis(p)) <= hi_basis:
                return False
        return True


def completion_tower(X: SimplicialSetSpec, n_max: int) -> Tower:
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if not X.reduced:
        raise UnsupportedInput(f"{X.name} is not reduced")
    return Tower(X, [Stage(n, based_component_model(X, n - 1)) for n in range(2, n_max + 1)])


# -- finite nilpotent Lie groups via BCH ------------------------------------------------


def _nested(G: FiniteGradedLie, vecs) -> dict:
    """Right-nested bracket ``[v1, [v2, ... vk]]`` in degree 0."""
    acc = vecs[-1]
    for v in reversed(vecs[:-1]):
        acc = G.bracket(0, v, 0, acc)
        if not acc:
            return {}
    return acc


def bch_coords(G: FiniteGradedLie, u: dict, v: dict, depth: int) -> dict:
    """BCH product on the degree-0 part of ``G``, exact when brackets of
    length ``> depth`` vanish."""
    out: dict = {}
    letters = (u, v)
    cache: dict = {}
    for seq in _block_sequences(depth):
        word = tuple(itertools.chain.from_iterable((0,) * r + (1,) * s for r, s in seq))
        if len(word) > 1 and word[-1] == word[-2]:
            continue
        term = cache.get(word)
        if term is None:
            term = _nested(G, [letters[k] for k in word])
            cache[word] = term
        if not term:
            continue
        m = len(seq)
        denom = len(word)
        for r, s in seq:
            denom *= math.factorial(r) * math.factorial(s)
        t_add(out, term, Q((-1) ** (m - 1), m * denom))
    return out


@dataclass
class NilpotentGroupData:
    dimension: int
    basis: list  # representatives (LieElement) of H_0
    table: dict  # (i, j) -> coordinates of e_i * e_j
    nilpotency_class: int
    abelianization: int
    group_class: int
    axioms: dict = field(default_factory=dict)
    lie: FiniteGradedLie | None = None

    def multiply(self, u: dict, v: dict) -> dict:
        return bch_coords(self.lie, u, v, max(self.nilpotency_class, 1))


def _degree0(G: FiniteGradedLie) -> FiniteGradedLie:
    return FiniteGradedLie({0: G.dim(0)}, {k: v for k, v in G.brackets.items()
                                          if k[0] == 0 and k[2] == 0})


def _group_axioms(G0: FiniteGradedLie, depth: int) -> dict:
    n = G0.dim(0)
    probes = [{}] + [{i: ONE} for i in range(n)] + [{i: Q(-1, 2)} for i in range(n)]
    if n >= 2:
        probes.append({0: ONE, 1: Q(3)})

    def mul(a, b):
        return bch_coords(G0, a, b, depth)
    assoc = all(mul(mul(a, b), c) == mul(a, mul(b, c))
                for a, b, c in itertools.product(probes, repeat=3))
    ident = all(mul(a, {}) == a and mul({}, a) == a for a in probes)
    inv = all(not mul(a, {k: -c for k, c in a.items()}) for a in probes)
    return {"associativity": assoc, "identity": ident, "inverses": inv}


def _group_class(G0: FiniteGradedLie, depth: int) -> int:
    """Smallest ``c`` such that all group commutators of ``c + 1`` basis
    elements are trivial (route through the BCH group)."""
    n = G0.dim(0)
    if n == 0:
        return 0

    def mul(a, b):
        return bch_coords(G0, a, b, depth)

    def comm(a, b):
        ia = {k: -c for k, c in a.items()}
        ib = {k: -c for k, c in b.items()}
        return mul(mul(mul(a, b), ia), ib)
    basis = [{i: ONE} for i in range(n)]
    level = basis
    c = 1
    while True:
        nxt = []
        seen = set()
        for a in level:
            for b in basis:
                x = comm(a, b)
                key = tuple(sorted(x.items()))
                if x and key not in seen:
                    seen.add(key)
                    nxt.append(x)
        if not nxt:
            return c
        c += 1
        if c > depth + 1:
            raise InvariantViolation("group commutator series does not terminate")
        level = nxt


def fundamental_group_data(stage: Cdgl, homology: DglHomology | None = None) -> NilpotentGroupData:
    H = homology if homology is not None else dgl_homology(stage, [0])
    G0 = _degree0(H.lie)
    n = G0.dim(0)
    v = is_degreewise_nilpotent(G0, [0])
    if not v.nilpotent:
        raise InvariantViolation("H_0 of a stage is not nilpotent")
    cls = v.nilpotency_class
    depth = max(cls, 1)
    table = {}
    for i, j in itertools.product(range(n), repeat=2):
        table[(i, j)] = bch_coords(G0, {i: ONE}, {j: ONE}, depth)
    derived = set()
    from .qalgebra import Span
    sp = Span()
    for i, j in itertools.product(range(n), repeat=2):
        b = G0.bracket_basis(0, i, 0, j)
        if b:
            sp.add(b)
    data = NilpotentGroupData(n, H.representatives.get(0, []), table, cls, n - len(sp),
                              _group_class(G0, depth), lie=G0)
    data.axioms = _group_axioms(G0, depth)
    return data


# -- pi_1 action --------------------------------------------------------------------


def action_nilpotency(H: DglHomology, degrees) -> dict:
    """For each degree ``p``, the least ``k`` with every composite of ``k``
    operators ``exp(ad_alpha) - id`` (alpha a basis class of ``H_0``) zero on
    ``H_p``.  Computed on representatives and read back in homology."""
    out = {}
    alphas = H.representatives.get(0, [])
    for p in degrees:
        reps = H.representatives.get(p, [])
        if not reps:
            out[p] = 0
            continue
        mats = []
        for a in alphas:
            cols = []
            for r in reps:
                img = exp_ad(a, r) - r
                cols.append(H.class_of(img, p))
            mats.append(cols)
        current = [{j: ONE} for j in range(len(reps))]
        k = 0
        while current and k <= len(reps) + 1:
            nxt = []
            for cols in mats:
                for vec in current:
                    acc: dict = {}
                    for j, c in vec.items():
                        t_add(acc, cols[j], c)
                    if acc:
                        nxt.append(acc)
            current = nxt
            k += 1
        if current:
            raise InvariantViolation(f"pi_1 does not act nilpotently on H_{p}")
        out[p] = k
    return out


# -- reports --------------------------------------------------------------------------


@dataclass
class TowerReport:
    name: str
    base_vertex: str
    stages: list  # n values
    degrees: list  # i values
    dims: dict  # i -> {n: dim pi_i}
    group: dict  # n -> NilpotentGroupData
    nilpotency: dict  # n -> {"nilpotent", "route_ii", "route_iii"}
    action: dict  # n -> {p: k}
    surjective: dict  # n -> bool for q_n
    stabilization: dict = field(default_factory=dict)

    def dim(self, i: int, n: int) -> int:
        return self.dims[i][n]


def tower_homotopy(X: SimplicialSetSpec, n_max: int, d_max: int) -> TowerReport:
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    T = completion_tower(X, n_max)
    degrees = list(range(1, d_max + 1))
    dims = {i: {} for i in degrees}
    group, nil, action, surj = {}, {}, {}, {}
    for st in T.stages:
        H = dgl_homology(st.cdgl, range(0, d_max))
        for i in degrees:
            dims[i][st.n] = H.dim(i - 1)
        group[st.n] = fundamental_group_data(st.cdgl, H)
        hn = is_homologically_nilpotent(H.lie, range(0, d_max))
        nil[st.n] = {"nilpotent": hn.nilpotent,
                     "route_ii": hn.route_ii.series_lengths,
                     "route_iii": hn.route_iii.series_lengths,
                     "class": hn.route_iii.nilpotency_class}
        action[st.n] = action_nilpotency(H, range(0, d_max))
        if st.n < n_max:
            surj[st.n] = T.projection_surjective(st.n, range(0, d_max))
    rep = TowerReport(X.name, X.vertices[0], [s.n for s in T.stages], degrees, dims,
                      group, nil, action, surj)
    rep.stabilization = stabilization_report(rep)
    return rep


def stabilization_report(report: TowerReport) -> dict:
    """Per degree, the first stage from which the dimension stays constant
    through the last stage (at least two stages), or ``None``.  Stabilized
    values of known nilpotent fixtures are compared with their rational
    homotopy."""
    out = {}
    known = KNOWN_RATIONAL_HOMOTOPY.get(report.name)
    last = report.stages[-1]
    for i in report.degrees:
        row = report.dims[i]
        start = None
        for n in report.stages:
            if n < last and all(row[m] == row[last] for m in report.stages if m >= n):
                start = n
                break
        entry = {"stabilized_at": start, "value": row[last] if start is not None else None}
        if known is not None and start is not None:
            entry["expected"] = known.get(i, 0)
            entry["agrees"] = row[last] == known.get(i, 0)
        out[i] = entry
    return out


def report_document(report: TowerReport) -> dict:
    """Machine form of a tower report (stable ordering, exact rationals as text)."""
    def coords(v):
        return {str(k): format_scalar(c) for k, c in sorted(v.items())}
    return {
        "name": report.name,
        "base_vertex": report.base_vertex,
        "stages": report.stages,
        "degrees": report.degrees,
        "pi_dims": {str(i): {str(n): report.dims[i][n] for n in report.stages}
                    for i in report.degrees},
        "stabilization": {str(i): report.stabilization[i] for i in report.degrees},
        "fundamental_group": {
            str(n): {
                "dimension": g.dimension,
                "nilpotency_class": g.nilpotency_class,
                "group_class": g.group_class,
                "abelianization": g.abelianization,
                "axioms": g.axioms,
                "bch_table": {f"{i},{j}": coords(v) for (i, j), v in sorted(g.table.items())},
            } for n, g in sorted(report.group.items())},
        "nilpotency": {str(n): {"nilpotent": v["nilpotent"], "class": v["class"],
                                "route_ii": {str(p): k for p, k in sorted(v["route_ii"].items())},
                                "route_iii": {str(p): k for p, k in sorted(v["route_iii"].items())}}
                       for n, v in sorted(report.nilpotency.items())},
        "pi1_action_length": {str(n): {str(p): k for p, k in sorted(v.items())}
                              for n, v in sorted(report.action.items())},
        "projections_surjective": {str(n): v for n, v in sorted(report.surjective.items())},
    }
