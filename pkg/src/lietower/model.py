"""Lie models of finite simplicial sets and minimal models of tower stages."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cdgl import (Cdgl, InvariantViolation, UnsupportedInput, component,
                   differential_check, dgl_homology, mc_element)
from .freelie import FreeLieAlgebra, Generator, GeneratorSet, LieElement, t_add
from .lscosimplicial import faces_of, gen_name, simplex_model
from .qalgebra import (ONE, ChainComplexSlice, SparseMatrix, Span, chain_homology,
                       format_scalar, solve_columns)
from .simpset import SimplicialSetSpec

MAX_SIMPLEX_DIM = 6


@dataclass
class GlobalModel:
    cdgl: Cdgl
    space: SimplicialSetSpec
    characteristic: dict  # simplex name -> {a_S name: generator name}

    def characteristic_morphism(self, simplex: str):
        from .lscosimplicial import CdglMorphism
        k = self.space.simplices[simplex].dim
        src = simplex_model(k, self.cdgl.N)
        return CdglMorphism(src, self.cdgl, {s: self.cdgl.gen(t)
                                             for s, t in self.characteristic[simplex].items()})


def face_spanned(X: SimplicialSetSpec, simplex: str, S) -> tuple:
    """The face of ``simplex`` on the vertex subset ``S`` as ``(word, target)``."""
    k = X.simplices[simplex].dim
    word, cur = (), simplex
    for i in sorted(set(range(k + 1)) - set(S), reverse=True):
        word, cur = X.face(cur, i, word)
    return word, cur


def global_model(X: SimplicialSetSpec, N: int) -> GlobalModel:
    """One generator of degree ``dim - 1`` per nondegenerate simplex; the
    differential is transported from the simplex models."""
    if X.dimension > MAX_SIMPLEX_DIM:
        raise UnsupportedInput(
            f"simplices of dimension {X.dimension} exceed the supported limit {MAX_SIMPLEX_DIM}")
    alg = FreeLieAlgebra([Generator(n, X.simplices[n].dim - 1) for n in X.order])
    diff = {}
    chars = {}
    for name in X.order:
        k = X.simplices[name].dim
        char = {}
        for S in faces_of(k):
            word, target = face_spanned(X, name, S)
            if not word:
                char[gen_name(S)] = target
        chars[name] = char
        src = simplex_model(k, N)
        letters = {src.algebra.letter(s): alg.letter(t) for s, t in char.items()}
        top = src.algebra.letter(gen_name(tuple(range(k + 1))))
        t = src.algebra.relabel(src.differential_tensors.get(top, {}), letters, N)
        if t:
            diff[alg.letter(name)] = t
    L = Cdgl(alg, N, {}, mc=X.vertices, name=X.name)
    L._d = diff
    rep = differential_check(L)
    if not rep.ok:
        raise InvariantViolation(f"global model of {X.name}: {rep}")
    return GlobalModel(L, X, chars)


def based_component_model(X: SimplicialSetSpec, N: int) -> Cdgl:
    """Component of the global model at its unique vertex."""
    if not X.reduced:
        raise UnsupportedInput(f"{X.name} has {len(X.vertices)} vertices; a reduced "
                               "simplicial set is required")
    G = global_model(X, N).cdgl
    C = component(G, mc_element(G, X.vertices[0]))
    C.name = X.name
    return C


# -- indecomposables ------------------------------------------------------------------


def indecomposables_homology(L: Cdgl) -> dict:
    """Homology of ``(V, d_0)``: generators with the linear part of ``d``."""
    gens = list(L.gens)
    if not gens:
        return {}
    by_deg: dict = {}
    for g in gens:
        by_deg.setdefault(g.degree, []).append(g.name)
    index = {p: {nm: i for i, nm in enumerate(v)} for p, v in by_deg.items()}
    lo, hi = min(by_deg), max(by_deg)
    bounds = {}
    for p in range(lo, hi + 1):
        if not by_deg.get(p) or not by_deg.get(p - 1):
            continue
        entries = {}
        for nm, col in index[p].items():
            for w, c in L.linear_part(nm).tensor.items():
                entries[(index[p - 1][L.algebra.name(w[0])], col)] = c
        bounds[p] = SparseMatrix(len(by_deg[p - 1]), len(by_deg[p]), entries)
    C = ChainComplexSlice({p: len(v) for p, v in by_deg.items()}, bounds)
    H = chain_homology(C, range(lo, hi + 1))
    return {p: h.dimension for p, h in H.items()}


# -- dumps ---------------------------------------------------------------------------------


def element_terms(x: LieElement) -> list:
    return [[str(b), format_scalar(c)] for b, c in x.basis_terms()]


def dump_cdgl(L: Cdgl) -> dict:
    """Stable structured description: generators, differential, MC marks."""
    return {
        "name": L.name,
        "truncation": L.N,
        "generators": [{"name": g.name, "degree": g.degree} for g in L.gens],
        "differential": {g.name: element_terms(L.dgen(g.name)) for g in L.gens
                         if not L.dgen(g.name).is_zero()},
        "mc": L.mc_generators(),
    }


# -- stage minimal models ---------------------------------------------------------------


class _Presentation:
    """Growing free presentation with names, degrees and upper degrees.

    Differentials and maps are stored on names so that the algebra can be
    rebuilt (and re-sorted) whenever a generator is added.
    """

    def __init__(self):
        self.gens: list = []
        self.d: dict = {}  # name -> {tuple of names: coef}
        self._alg = None

    def add(self, name, degree, upper, d_named=None):
        self.gens.append(Generator(name, degree, upper))
        if d_named:
            self.d[name] = d_named
        self._alg = None

    @property
    def alg(self) -> FreeLieAlgebra:
        if self._alg is None:
            self._alg = FreeLieAlgebra(self.gens)
        return self._alg

    def to_letters(self, named: dict) -> dict:
        ix = self.alg.gens.index
        return {tuple(ix[x] for x in w): c for w, c in named.items()}

    def to_names(self, t: dict) -> dict:
        nm = self.alg.name
        return {tuple(nm(i) for i in w): c for w, c in t.items()}

    def d_letters(self, part=None) -> dict:
        out = {}
        for g, t in self.d.items():
            lt = self.to_letters(t)
            if part is not None:
                lt = part(g, lt)
            if lt:
                out[self.alg.letter(g)] = lt
        return out


def _upper_filter(alg: FreeLieAlgebra, t: dict, m: int) -> dict:
    return {w: c for w, c in t.items() if alg.word_upper(w) == m}


def _bigraded_piece(alg, N, p, m):
    return alg.basis_up_to(N, p, m) if m >= 1 else []


def _coords(alg, basis_index, t):
    coords = alg.decompose(t)
    out = {}
    for w, c in coords.items():
        j = basis_index.get(w)
        if j is None:
            raise InvariantViolation("element leaves the expected bigraded piece")
        out[j] = c
    return out


class _BigradedHomology:
    """Homology of a free presentation whose differential raises the upper
    degree by exactly one, one bigraded piece at a time."""

    def __init__(self, alg, dmap, N):
        self.alg, self.dmap, self.N = alg, dmap, N
        self._basis = {}

    def basis(self, p, m):
        key = (p, m)
        if key not in self._basis:
            b = _bigraded_piece(self.alg, self.N, p, m)
            self._basis[key] = (b, {w: i for i, w in enumerate(b)})
        return self._basis[key]

    def image_columns(self, p, m):
        """Columns of ``d: C_{p,m} -> C_{p-1,m+1}``."""
        src, _ = self.basis(p, m)
        _, tix = self.basis(p - 1, m + 1)
        cols = []
        for w in src:
            t = self.alg.derivation(self.alg.expand(w), self.dmap, self.N)
            t = _upper_filter(self.alg, t, m + 1)
            cols.append(_coords(self.alg, tix, t))
        return cols

    def homology(self, p, m):
        """``(cycle basis reps as tensors, boundary columns, dims)``."""
        from .qalgebra import kernel_basis
        src, _ = self.basis(p, m)
        if not src:
            return [], 0, 0
        tgt, _ = self.basis(p - 1, m + 1)
        M = SparseMatrix.from_columns(len(tgt), self.image_columns(p, m))
        cycles = kernel_basis(M)
        bounds = self.image_columns(p + 1, m - 1) if m - 1 >= 1 else []
        span = Span(bounds)
        brank = len(span)
        reps = []
        for z in cycles:
            zd = {i: v for i, v in enumerate(z) if v}
            if span.add(zd):
                reps.append(zd)
        return reps, brank, len(cycles)

    def to_tensor(self, p, m, coords):
        src, _ = self.basis(p, m)
        acc = {}
        for i, c in coords.items():
            t_add(acc, self.alg.expand(src[i]), c)
        return acc


@dataclass
class ModelGenerator:
    name: str
    degree: int
    upper: int
    kind: str  # "V", "U" or "W"
    round: int = 0


@dataclass
class StageMinimalModel:
    """Minimal model ``(L(V + Z), d) -> L/L^n`` certified on a finite window."""

    stage: Cdgl
    n: int
    degree_cutoff: int
    upper_cutoff: int
    generators: list  # ModelGenerator
    cdgl: Cdgl  # the model, truncated at bracket length upper_cutoff + 1
    phi: dict  # generator name -> LieElement of the stage
    ledger: dict  # m -> {generator name: LieElement}  (d = sum_m d_m)
    checks: dict = field(default_factory=dict)

    @property
    def Z(self) -> list:
        return [g for g in self.generators if g.kind != "V"]

    def adjoined(self, kind=None) -> list:
        return [g for g in self.Z if kind is None or g.kind == kind]

    def d(self, name: str) -> LieElement:
        return self.cdgl.dgen(name)

    @property
    def ok(self) -> bool:
        return all(v.get("ok", False) for v in self.checks.values())


def _fresh(prefix, k, taken):
    name = f"{prefix}{k}"
    while name in taken:
        name += "'"
    return name


def minimal_model_of_stage(L: Cdgl, n: int, degree_cutoff: int = 3,
                           upper_cutoff: int | None = None) -> StageMinimalModel:
    """Minimal model of the stage ``L/L^n`` through homological degree
    ``degree_cutoff`` and upper degree ``upper_cutoff`` (default ``n + 1``).

    ``L`` is a free presentation with decomposable differential; only its
    length ``<= n - 1`` part matters.
    """
    if n < 2:
        raise ValueError("stage index n must be at least 2")
    D = degree_cutoff
    M = upper_cutoff if upper_cutoff is not None else n + 1
    if M < n:
        raise ValueError("upper cutoff must be at least n")
    if any(g.degree < 0 for g in L.gens):
        raise UnsupportedInput("stage must be connected (no negative generators)")
    stage = L.truncated(n - 1) if L.N >= n - 1 else None
    if stage is None:
        raise ValueError(f"presentation truncated at N={L.N} cannot give stage {n}")
    for g in stage.gens:
        if not stage.linear_part(g.name).is_zero():
            raise UnsupportedInput(f"differential of {g.name} has a linear part; "
                                   "a minimal (decomposable) presentation is required")
    salg = stage.algebra
    Nm = M + 1
    P = _Presentation()
    taken = {g.name for g in stage.gens}
    for g in stage.gens:
        P.add(g.name, g.degree, 1)
    gens_info = {g.name: ModelGenerator(g.name, g.degree, 1, "V") for g in stage.gens}
    vnames = [g.name for g in stage.gens]

    # full differential on V, split by length: d_m V lies in length m + 1
    dV = {g: stage.algebra.relabel(stage.differential_tensors.get(salg.letter(g), {}),
                                   {i: i for i in range(salg.size)})
          for g in vnames}
    dV_named = {g: {tuple(salg.name(i) for i in w): c for w, c in t.items()} for g, t in dV.items()}
    for g, t in dV_named.items():
        if t:
            P.d[g] = t

    def quad_part(g, lt):
        # upper-degree +1 component (d_1)
        up = gens_info[g].upper
        return {w: c for w, c in lt.items() if P.alg.word_upper(w) == up + 1}

    phi_named: dict = {g: {(g,): ONE} for g in vnames}

    # stage side: bigraded homology of (L/L^n, d_1); upper = length there
    s_d1 = {salg.letter(g): {w: c for w, c in t.items() if len(w) == 2}
            for g, t in dV.items()}
    s_d1 = {k: v for k, v in s_d1.items() if v}
    SH = _BigradedHomology(salg, s_d1, n - 1)
    # L (untruncated) quadratic complex in upper n - 1 -> n, for the U layer
    TH = _BigradedHomology(salg, s_d1, n)

    rounds: dict = {g: 0 for g in vnames}
    ucount = wcount = 0
    for p in range(0, D + 1):
        # U^{n-1} in degree p: complement of the cycles of L^{n-1}_p
        src, _ = TH.basis(p, n - 1)
        if src:
            from .qalgebra import kernel_basis
            tgt, _ = TH.basis(p - 1, n)
            Mx = SparseMatrix.from_columns(len(tgt), TH.image_columns(p, n - 1))
            span = Span({i: v for i, v in enumerate(z) if v} for z in kernel_basis(Mx))
            for i in range(len(src)):
                if span.add({i: ONE}):
                    ucount += 1
                    name = _fresh("u", ucount, taken)
                    taken.add(name)
                    P.add(name, p, n - 1)
                    gens_info[name] = ModelGenerator(name, p, n - 1, "U", 1)
                    phi_named[name] = {tuple(salg.name(x) for x in w): c
                                       for w, c in salg.expand(src[i]).items()}
        # W layers: kill H^{m+1}_p for m = n-1 .. M-1
        for m in range(n - 1, M):
            H = _BigradedHomology(P.alg, P.d_letters(quad_part), Nm)
            reps, _, _ = H.homology(p, m + 1)
            new = []
            for z in reps:
                t = H.to_tensor(p, m + 1, z)
                named = P.to_names(t)
                r = 1 + max((rounds.get(x, 0) for w in named for x in w
                             if gens_info[x].kind == "W"), default=0)
                wcount += 1
                name = _fresh("z", wcount, taken)
                taken.add(name)
                new.append((name, named, r))
            for name, named, r in new:
                P.add(name, p + 1, m, named)
                gens_info[name] = ModelGenerator(name, p + 1, m, "W", r)
                rounds[name] = r

    # phase 2: perturb d = d_1 + d_2 + ... on the adjoined generators
    alg = P.alg
    zs = sorted((g for g in gens_info.values() if g.kind != "V"),
                key=lambda g: (g.degree, g.upper, g.name))
    ledger: dict = {}
    full = {}  # letter -> tensor (all components found so far)
    for g in vnames:
        lt = P.to_letters(dV_named[g])
        if lt:
            full[alg.letter(g)] = lt
    for z in zs:
        t = P.to_letters(P.d.get(z.name, {}))
        if t:
            full[alg.letter(z.name)] = dict(t)
    d1 = {k: {w: c for w, c in t.items()
              if alg.word_upper(w) == alg.gens.uppers[k] + 1} for k, t in full.items()}
    d1 = {k: v for k, v in d1.items() if v}
    solver = _BigradedHomology(alg, d1, Nm)
    for z in zs:
        zi = alg.letter(z.name)
        for mstep in range(2, M - z.upper + 1):
            # d_1(d_m z) = -(sum_{i=2}^{m} d_i d_{m+1-i} z)
            dz = full.get(zi, {})
            rhs = alg.derivation(dz, full, Nm)
            rhs = _upper_filter(alg, rhs, z.upper + mstep + 1)
            if not rhs:
                continue
            p = z.degree - 2
            tgt, tix = solver.basis(p, z.upper + mstep + 1)
            src, _ = solver.basis(p + 1, z.upper + mstep)
            cols = solver.image_columns(p + 1, z.upper + mstep)
            b = _coords(alg, tix, rhs)
            sol = solve_columns(cols, {k: -v for k, v in b.items()})
            if sol is None:
                raise InvariantViolation(
                    f"perturbation obstruction for {z.name} at m={mstep} is not a boundary")
            step = {}
            for j, c in enumerate(sol):
                if c:
                    t_add(step, alg.expand(src[j]), c)
            if step:
                t_add(full.setdefault(zi, {}), step)
                ledger.setdefault(mstep, {})[z.name] = alg.element(Nm, step)
    for k, t in full.items():
        ledger.setdefault(1, {})
        q = _upper_filter(alg, t, alg.gens.uppers[k] + 1)
        if q:
            ledger[1][alg.name(k)] = alg.element(Nm, q)
    for k, t in full.items():
        up = alg.gens.uppers[k]
        for w in t:
            mstep = alg.word_upper(w) - up
            if mstep >= 2 and alg.name(k) in vnames:
                ledger.setdefault(mstep, {}).setdefault(
                    alg.name(k), alg.element(Nm, _upper_filter(alg, t, up + mstep)))
    model = Cdgl(alg, Nm, {}, (), name=f"{stage.name}_min{n}" if stage.name else f"min{n}")
    model._d = {k: v for k, v in full.items() if v}
    phi = {g: stage.element({tuple(salg.letter(x) for x in w): c for w, c in t.items()})
           for g, t in phi_named.items()}
    gens = sorted(gens_info.values(), key=lambda g: (g.kind != "V", g.degree, g.upper, g.name))
    out = StageMinimalModel(stage, n, D, M, gens, model, phi, ledger)
    out.checks = _certify(out, SH)
    return out


def _certify(mm: StageMinimalModel, SH: _BigradedHomology) -> dict:
    """Run the window checks and return ``{name: {"ok": bool, ...}}``."""
    alg = mm.cdgl.algebra
    M, D, n = mm.upper_cutoff, mm.degree_cutoff, mm.n
    Nm = mm.cdgl.N
    info = {g.name: g for g in mm.generators}
    full = mm.cdgl.differential_tensors
    checks = {}

    # decomposable
    lin = [g.name for g in mm.generators if not mm.d(g.name).length_part(1).is_zero()]
    checks["decomposable"] = {"ok": not lin, "offenders": lin}

    # d^2 = 0 modulo upper degree > M
    bad = []
    for k, t in full.items():
        dd = alg.derivation(t, full, Nm)
        dd = {w: c for w, c in dd.items() if alg.word_upper(w) <= M}
        if dd:
            bad.append(alg.name(k))
    checks["square_zero"] = {"ok": not bad, "offenders": bad, "window_upper": M}

    # phi is a chain map: phi(d g) = d(phi g) in the stage
    stage = mm.stage
    images = {alg.letter(g): v.tensor for g, v in mm.phi.items() if not v.is_zero()}
    bad = []
    for g in mm.generators:
        lhs = alg.substitute(mm.d(g.name).tensor, images, stage.N, target=stage.algebra)
        rhs = stage.d(mm.phi.get(g.name, stage.zero())).tensor
        if t_add(dict(lhs), rhs, -1):
            bad.append(g.name)
    checks["chain_map"] = {"ok": not bad, "offenders": bad}

    # E_1 comparison: H^m_p(model, d_1) -> H^m_p(stage, d_1) bijective
    d1 = {k: {w: c for w, c in t.items() if alg.word_upper(w) == alg.gens.uppers[k] + 1}
          for k, t in full.items()}
    d1 = {k: v for k, v in d1.items() if v}
    MH = _BigradedHomology(alg, d1, Nm)
    table = {}
    iso = True
    vanishing = True
    for p in range(0, D + 1):
        for m in range(1, M + 1):
            reps, _, _ = MH.homology(p, m)
            if m >= n:
                dim_s = 0
                if reps:
                    vanishing = False
            else:
                sreps, _, _ = SH.homology(p, m)
                dim_s = len(sreps)
            ok = len(reps) == dim_s
            if ok and reps and m < n:
                sb, six = SH.basis(p, m)
                bounds = SH.image_columns(p + 1, m - 1) if m > 1 else []
                span = Span(bounds)
                for z in reps:
                    t = MH.to_tensor(p, m, z)
                    img = alg.substitute(t, images, stage.N, target=stage.algebra)
                    if not span.add(_coords(stage.algebra, six, img)):
                        ok = False
                        break
            iso = iso and ok
            table[f"{p},{m}"] = [len(reps), dim_s]
    checks["e1_isomorphism"] = {"ok": iso, "dims": table, "window": [D, M]}
    checks["vanishing"] = {"ok": vanishing, "window": [D, M]}

    # property (7) for Z^{n-1}: terms in [V, Z^{n-1}] or pure V of length n
    bad = []
    for g in mm.generators:
        if g.kind == "V" or g.upper != n - 1:
            continue
        q = _upper_filter(alg, full.get(alg.letter(g.name), {}), n)
        for w in alg.decompose(q):
            kinds = [info[alg.name(x)].kind for x in w]
            zcount = sum(k != "V" for k in kinds)
            if not ((zcount == 0 and len(w) == n) or
                    (zcount == 1 and len(w) == 2 and info[alg.name(w[0] if kinds[0] != "V" else w[1])].upper == n - 1)):
                bad.append(g.name)
                break
    checks["property_7"] = {"ok": not bad, "offenders": bad}

    checks["concentration"] = _prop_concentration(mm, d1)
    return checks


def _prop_concentration(mm: StageMinimalModel, d1: dict) -> dict:
    """``H(L(Z), dbar)`` equals ``Z^{n-1}`` inside the window."""
    alg = mm.cdgl.algebra
    zgens = [g for g in mm.generators if g.kind != "V"]
    n, D, M = mm.n, mm.degree_cutoff, mm.upper_cutoff
    if not zgens:
        return {"ok": True, "dims": {}}
    zalg = FreeLieAlgebra([Generator(g.name, g.degree, g.upper) for g in zgens])
    keep = {alg.letter(g.name): zalg.letter(g.name) for g in zgens}
    dbar = {}
    for g in zgens:
        t = alg.relabel(d1.get(alg.letter(g.name), {}), keep)
        if t:
            dbar[zalg.letter(g.name)] = t
    H = _BigradedHomology(zalg, dbar, M + 1)
    dims = {}
    ok = True
    for p in range(1, D + 1):
        for m in range(n - 1, M + 1):
            reps, _, _ = H.homology(p, m)
            expect = sum(1 for g in zgens if g.degree == p and g.upper == n - 1) if m == n - 1 else 0
            dims[f"{p},{m}"] = [len(reps), expect]
            ok = ok and len(reps) == expect
    return {"ok": ok, "dims": dims, "window": [D, M]}


def dump_stage_model(mm: StageMinimalModel) -> dict:
    return {
        "stage": mm.n,
        "window": {"degree": mm.degree_cutoff, "upper": mm.upper_cutoff},
        "generators": [{"name": g.name, "degree": g.degree, "upper": g.upper,
                        "kind": g.kind if g.kind == "V" else (
                            "U" if g.kind == "U" else f"W[{g.round}]")}
                       for g in mm.generators],
        "differential": {g.name: element_terms(mm.d(g.name)) for g in mm.generators
                         if not mm.d(g.name).is_zero()},
        "phi": {g: element_terms(v) for g, v in sorted(mm.phi.items()) if not v.is_zero()},
        "ledger": {str(m): {g: element_terms(v) for g, v in sorted(e.items())}
                   for m, e in sorted(mm.ledger.items())},
        "checks": {k: v["ok"] for k, v in sorted(mm.checks.items())},
    }
