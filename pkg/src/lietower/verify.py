"""The invariant suite run by ``lietower verify``.

Each check returns a :class:`CheckResult`.  The oracles used here avoid the
code paths they test: Lie dimensions are compared with the necklace formula
and with ranks of expanded brackets, BCH with ``log(e^x e^y)`` computed in
the truncated free associative algebra.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from .cdgl import (bch, differential_check, is_homologically_nilpotent, lcs_quotient,
                   rotation_algebra)
from .freelie import FreeLieAlgebra, Generator, graded_witt_dimension, t_add
from .lscosimplicial import CdglMorphism, faces_of, gen_name, verify_simplex_model
from .model import (based_component_model, global_model, indecomposables_homology,
                    minimal_model_of_stage)
from .qalgebra import ONE, Q
from .simpset import (euler_characteristic, identity_violations, load_simplicial_set,
                      simplicial_homology)
from .tower import completion_tower, report_document, tower_homotopy

NILPOTENT_FIXTURES = ("point", "s1", "s2", "s3")
FIXTURES = ("point", "s1", "wedge", "s2", "s3", "torus")

# (n, N) pairs of simplex models checked by the suite.  n = 4 beyond N = 4 is
# far outside the suite's time budget.
SIMPLEX_GRID = tuple((n, N) for n in range(5) for N in range(1, 7) if n < 4 or N <= 4)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)


def fixture(name: str):
    """Load a bundled fixture by short name (``s2``) or file name."""
    stem = name[:-5] if name.endswith(".json") else name
    text = resources.files("lietower.fixtures").joinpath(f"{stem}.json").read_text("utf-8")
    return load_simplicial_set(json.loads(text))


def fixture_names() -> list:
    return sorted(p.name[:-5] for p in resources.files("lietower.fixtures").iterdir()
                  if p.name.endswith(".json"))


# -- oracles ---------------------------------------------------------------------------


def necklace_count(k: int, q: int) -> int:
    """Witt's formula ``(1/q) sum_{d | q} mu(d) k^{q/d}``."""
    def mu(d):
        out, m, p = 1, d, 2
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                out = -out
            p += 1
        return -out if m > 1 else out
    return sum(mu(d) * k ** (q // d) for d in range(1, q + 1) if q % d == 0) // q


def log_exp_oracle(N: int) -> dict:
    """``log(e^x e^y)`` on letters 0, 1 of the free associative algebra,
    truncated at length ``N``."""
    def mul(a, b):
        out: dict = {}
        for u, cu in a.items():
            for v, cv in b.items():
                if len(u) + len(v) <= N:
                    t_add(out, {u + v: cu * cv})
        return out

    def exp(letter):
        return {(letter,) * k: Q(1, math.factorial(k)) for k in range(N + 1)}

    z = mul(exp(0), exp(1))
    z.pop((), None)
    out: dict = {}
    power = {(): ONE}
    for k in range(1, N + 1):
        power = mul(power, z)
        t_add(out, power, Q((-1) ** (k + 1), k))
    return out


# -- checks ---------------------------------------------------------------------------------


def check_lie_dimensions() -> CheckResult:
    bad = []
    sets = [[("x", 0)], [("x", 0), ("y", 0)], [("x", 0), ("y", 0), ("z", 0)],
            [("x", 0), ("u", 1)], [("a", -1), ("x", 0)], [("u", 1), ("v", 1), ("x", 0)]]
    for spec in sets:
        alg = FreeLieAlgebra([Generator(n, d) for n, d in spec])
        even = all(d % 2 == 0 for _, d in spec)
        for q in range(1, 7):
            got = len(alg.lyndon_basis(q))
            rank = graded_witt_dimension(alg, q)
            if got != rank or (even and got != necklace_count(len(spec), q)):
                bad.append(f"{[n for n, _ in spec]} length {q}: {got} vs {rank}")
    return CheckResult("free Lie dimensions", not bad, "; ".join(bad))


def check_bch() -> CheckResult:
    bad = []
    for N in range(1, 6):
        alg = FreeLieAlgebra([Generator("x", 0), Generator("y", 0)])
        got = bch(alg.gen("x", N), alg.gen("y", N)).tensor
        want = log_exp_oracle(N)
        if t_add(dict(got), want, -1):
            bad.append(f"N={N}")
    return CheckResult("BCH against log(e^x e^y)", not bad, ", ".join(bad))


def check_simplex_models(grid=SIMPLEX_GRID) -> CheckResult:
    bad = [f"L{n} at N={N}" for n, N in grid if not verify_simplex_model(n, N).ok]
    return CheckResult("simplex models (n<=3 N<=6, n=4 N<=4)", not bad, ", ".join(bad))


def check_simplicial_sets() -> CheckResult:
    bad = []
    for name in FIXTURES:
        X = fixture(name)
        if identity_violations(X):
            bad.append(f"{name}: simplicial identities")
        H = simplicial_homology(X)
        if euler_characteristic(X) != sum((-1) ** p * h for p, h in H.items()):
            bad.append(f"{name}: Euler characteristic")
    return CheckResult("simplicial sets", not bad, "; ".join(bad))


def check_global_models(N: int = 3) -> CheckResult:
    """Differential, linear part and characteristic-map invariants."""
    bad = []
    for name in FIXTURES:
        X = fixture(name)
        G = global_model(X, N)
        L = G.cdgl
        if not differential_check(L).ok:
            bad.append(f"{name}: d^2")
        for s in X.order:
            expected = L.zero()
            for i, (word, target) in enumerate(X.simplices[s].faces):
                if not word and X.simplices[s].dim > 0:
                    expected = expected + L.gen(target) * ((-1) ** i)
            if L.linear_part(s) != expected:
                bad.append(f"{name}: linear part of {s}")
            f = G.characteristic_morphism(s)
            top = gen_name(tuple(range(X.simplices[s].dim + 1)))
            if f.apply(f.source.dgen(top)) != L.dgen(s):
                bad.append(f"{name}: characteristic map of {s}")
    return CheckResult("global models", not bad, "; ".join(bad))


def check_functoriality(N: int = 3) -> CheckResult:
    """Inclusions circle -> wedge, circle -> torus and point -> sphere."""
    cases = [("s1", "wedge", {"v": "v", "e": "e1"}),
             ("s1", "torus", {"v": "v", "e": "a"}),
             ("point", "s2", {"v": "v"})]
    bad = []
    for small, big, gmap in cases:
        A, B = global_model(fixture(small), N).cdgl, global_model(fixture(big), N).cdgl
        f = CdglMorphism(A, B, {s: B.gen(t) for s, t in gmap.items()})
        if f.commutation_defects():
            bad.append(f"{small} -> {big}")
    return CheckResult("functoriality of the model", not bad, ", ".join(bad))


def check_indecomposables(N: int = 3) -> CheckResult:
    bad = []
    for name in ("point", "s1", "wedge", "s2", "s3"):
        X = fixture(name)
        ind = indecomposables_homology(based_component_model(X, N))
        red = simplicial_homology(X, reduced=True)
        for p in range(-1, X.dimension):
            if ind.get(p, 0) != red.get(p + 1, 0):
                bad.append(f"{name} degree {p}")
    return CheckResult("indecomposables vs reduced homology", not bad, ", ".join(bad))


def check_towers() -> CheckResult:
    expect = {
        "s1": (5, 4, {1: {n: 1 for n in range(2, 6)}, 2: {n: 0 for n in range(2, 6)},
                      3: {n: 0 for n in range(2, 6)}, 4: {n: 0 for n in range(2, 6)}}),
        "s2": (5, 4, {2: {n: 1 for n in range(2, 6)}, 3: {2: 0, 3: 1, 4: 1, 5: 1},
                      4: {n: 0 for n in range(2, 6)}}),
        "s3": (4, 4, {3: {n: 1 for n in range(2, 5)}, 4: {n: 0 for n in range(2, 5)}}),
        "point": (4, 3, {i: {n: 0 for n in range(2, 5)} for i in (1, 2, 3)}),
    }
    bad = []
    for name, (n_max, d_max, table) in expect.items():
        R = tower_homotopy(fixture(name), n_max, d_max)
        for i, row in table.items():
            if R.dims[i] != row:
                bad.append(f"{name} pi_{i} = {R.dims[i]}")
        for i, e in R.stabilization.items():
            if e.get("agrees") is False or e["stabilized_at"] is None:
                bad.append(f"{name} stabilization in degree {i}")
    return CheckResult("tower homotopy of nilpotent fixtures", not bad, "; ".join(bad))


def check_wedge() -> CheckResult:
    R = tower_homotopy(fixture("wedge"), 5, 2)
    bad = []
    if R.dims[1] != {2: 2, 3: 3, 4: 5, 5: 8}:
        bad.append(f"pi_1 dims {R.dims[1]}")
    if R.stabilization[1]["stabilized_at"] is not None:
        bad.append("degree 1 reported stable")
    g = R.group[3]
    if (g.dimension, g.nilpotency_class) != (3, 2):
        bad.append(f"stage 3 group dim {g.dimension} class {g.nilpotency_class}")
    # the commutator class is central
    G = g.lie
    center = [k for k in range(G.dim(0))
              if all(not G.bracket_basis(0, k, 0, j) for j in range(G.dim(0)))]
    if len(center) != 1:
        bad.append(f"center of stage 3 has dimension {len(center)}")
    return CheckResult("wedge of circles", not bad, "; ".join(bad),
                       data={"pi1": R.dims[1]})


def check_groups_and_nilpotency() -> CheckResult:
    bad = []
    for name in ("point", "s1", "wedge", "s2", "s3", "torus"):
        R = tower_homotopy(fixture(name), 4, 3)
        for n in R.stages:
            if not all(R.group[n].axioms.values()):
                bad.append(f"{name} stage {n}: group axioms")
            if not R.nilpotency[n]["nilpotent"]:
                bad.append(f"{name} stage {n}: not homologically nilpotent")
            if not R.surjective.get(n, True):
                bad.append(f"{name} q_{n} not surjective")
    verdict = is_homologically_nilpotent(rotation_algebra(), [0])
    if verdict.nilpotent or verdict.route_ii.nilpotent or verdict.route_iii.nilpotent:
        bad.append("so(3) reported nilpotent")
    return CheckResult("group structure and nilpotency", not bad, "; ".join(bad))


def check_stage_consistency() -> CheckResult:
    bad = []
    for name in ("s1", "wedge", "s2"):
        T = completion_tower(fixture(name), 4)
        for n in (2, 3):
            hi = lcs_quotient(T.stage(n + 1).cdgl, n)
            lo = T.stage(n).cdgl
            for g in lo.gens:
                if hi.dgen(g.name).tensor != lo.dgen(g.name).tensor:
                    bad.append(f"{name} stage {n} generator {g.name}")
    return CheckResult("stage consistency", not bad, ", ".join(bad))


def check_minimal_model() -> CheckResult:
    alg = FreeLieAlgebra([Generator("x", 0), Generator("y", 0)])
    from .cdgl import Cdgl
    L = Cdgl(alg, 1, {}, name="L(x,y)")
    mm = minimal_model_of_stage(L, 2, degree_cutoff=1)
    bad = []
    z = mm.adjoined()
    if len(z) != 1:
        bad.append(f"{len(z)} generators adjoined")
    else:
        x, y = alg.gen("x", mm.cdgl.N), alg.gen("y", mm.cdgl.N)
        want = x.bracket(y)
        got = mm.d(z[0].name)
        if got.tensor != mm.cdgl.algebra.substitute(
                want.tensor, {alg.letter(n): {(mm.cdgl.algebra.letter(n),): ONE}
                              for n in ("x", "y")}, mm.cdgl.N, target=mm.cdgl.algebra):
            bad.append(f"d{z[0].name} = {got}")
    failed = [k for k, v in mm.checks.items() if not v["ok"]]
    if failed:
        bad.append("failed: " + ", ".join(failed))
    return CheckResult("stage minimal model of L(x,y)", not bad, "; ".join(bad))


def check_determinism() -> CheckResult:
    a = json.dumps(report_document(tower_homotopy(fixture("s2"), 4, 3)), sort_keys=True)
    b = json.dumps(report_document(tower_homotopy(fixture("s2"), 4, 3)), sort_keys=True)
    return CheckResult("deterministic reports", a == b)


SUITE: tuple = (check_lie_dimensions, check_bch, check_simplicial_sets, check_global_models,
                check_functoriality, check_indecomposables, check_simplex_models,
                check_towers, check_wedge, check_groups_and_nilpotency,
                check_stage_consistency, check_minimal_model, check_determinism)


def run_suite(checks=SUITE, progress: Callable | None = None) -> list:
    results = []
    for check in checks:
        t = time.perf_counter()
        try:
            r = check()
        except Exception as exc:  # a crash is a failed check, reported as such
            r = CheckResult(check.__name__, False, f"{type(exc).__name__}: {exc}")
        r.seconds = time.perf_counter() - t
        results.append(r)
        if progress:
            progress(r)
    return results
