"""Command-line entry point.

Exit status: 0 on success, 1 on invalid input (the offending simplex is
named when known), 2 when an internal invariant fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cdgl import InvariantViolation, UnsupportedInput, dgl_homology
from .lscosimplicial import simplex_model
from .model import (based_component_model, dump_cdgl, dump_stage_model, global_model,
                    indecomposables_homology, minimal_model_of_stage)
from .simpset import SimplicialSetError, load_simplicial_set, simplicial_homology
from .tower import report_document, tower_homotopy

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2

DEFAULTS = {"N": 4, "stages": 5, "degrees": 4, "cutoff": 3}


class InputError(Exception):
    pass


def resolve_input(path: str):
    """A document path, or a bundled fixture (``fixtures/s2``, ``s2``)."""
    p = Path(path)
    if p.exists() or p.with_suffix(".json").exists():
        return load_simplicial_set(p)
    from .verify import fixture, fixture_names
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    if stem in fixture_names():
        return fixture(stem)
    raise InputError(f"no such input document: {path}")


# -- commands ----------------------------------------------------------------------------


def cmd_model(args) -> dict:
    X = resolve_input(args.input)
    doc = {"space": X.name, "global": dump_cdgl(global_model(X, args.N).cdgl)}
    if X.reduced:
        doc["component"] = dump_cdgl(based_component_model(X, args.N))
    return doc


def cmd_homology(args) -> dict:
    X = resolve_input(args.input)
    doc = {"space": X.name,
           "simplicial_reduced": _keys(simplicial_homology(X, reduced=True))}
    if X.reduced:
        C = based_component_model(X, args.N)
        doc["indecomposables"] = _keys(indecomposables_homology(C))
        H = dgl_homology(C, range(0, args.degrees))
        doc["component_homology"] = {str(p): H.dim(p) for p in range(0, args.degrees)}
        doc["truncation"] = args.N
    else:
        doc["indecomposables"] = _keys(indecomposables_homology(global_model(X, args.N).cdgl))
    return doc


def cmd_tower(args) -> dict:
    return report_document(tower_homotopy(resolve_input(args.input), args.stages, args.degrees))


def cmd_pi(args) -> dict:
    full = report_document(tower_homotopy(resolve_input(args.input), args.stages, args.degrees))
    return {k: full[k] for k in ("name", "stages", "degrees", "pi_dims", "stabilization",
                                 "fundamental_group")}


def cmd_minimal(args) -> dict:
    X = resolve_input(args.input)
    L = based_component_model(X, args.stage - 1)
    mm = minimal_model_of_stage(L, args.stage, degree_cutoff=args.cutoff)
    doc = {"space": X.name, **dump_stage_model(mm)}
    if not mm.ok:
        failed = ", ".join(k for k, v in mm.checks.items() if not v["ok"])
        doc["warning"] = f"certification failed: {failed}"
    return doc


def cmd_dump_simplex_model(args) -> dict:
    return dump_cdgl(simplex_model(args.n, args.N))


def cmd_verify(args) -> dict:
    from .verify import run_suite

    def progress(r):
        if args.format == "human":
            print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}  ({r.seconds:.1f}s)"
                  + (f"  {r.detail}" if r.detail else ""), file=sys.stderr, flush=True)
    results = run_suite(progress=progress)
    return {"checks": [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results],
            "ok": all(r.ok for r in results)}


def _keys(d: dict) -> dict:
    return {str(k): v for k, v in sorted(d.items())}


# -- rendering -----------------------------------------------------------------------------


def render_human(command: str, doc: dict) -> str:
    if command == "verify":
        lines = [f"{'PASS' if c['ok'] else 'FAIL'}  {c['name']}" +
                 (f"  ({c['detail']})" if c["detail"] else "") for c in doc["checks"]]
        lines.append("all checks passed" if doc["ok"] else "some checks FAILED")
        return "\n".join(lines)
    if command in ("tower", "pi"):
        return _render_tower(doc)
    if command == "homology":
        out = [f"space {doc['space']}"]
        for key in ("simplicial_reduced", "indecomposables", "component_homology"):
            if key in doc:
                row = ", ".join(f"{p}: {v}" for p, v in sorted(doc[key].items(),
                                                               key=lambda kv: int(kv[0])))
                out.append(f"{key.replace('_', ' ')}: {row}")
        return "\n".join(out)
    if command in ("model", "dump-simplex-model"):
        parts = [doc] if command == "dump-simplex-model" else \
            [doc["global"]] + ([doc["component"]] if "component" in doc else [])
        return "\n\n".join(_render_cdgl(c) for c in parts)
    if command == "minimal":
        return _render_minimal(doc)
    return json.dumps(doc, indent=2, sort_keys=True)


def _render_cdgl(c: dict) -> str:
    out = [f"{c['name']} (truncated at length {c['truncation']})"]
    out.append("generators: " + ", ".join(f"{g['name']}[{g['degree']}]" for g in c["generators"]))
    out.append("Maurer-Cartan: " + (", ".join(c["mc"]) or "none"))
    for g, terms in c["differential"].items():
        out.append(f"  d {g} = {_terms(terms)}")
    return "\n".join(out)


def _terms(terms) -> str:
    s = ""
    for b, c in terms:
        neg = c.startswith("-")
        mag = c[1:] if neg else c
        piece = b if mag == "1" else f"{mag}*{b}"
        s += (" - " if neg else " + ") + piece if s else ("-" if neg else "") + piece
    return s or "0"


def _render_tower(doc: dict) -> str:
    stages = doc["stages"]
    out = [f"{doc['name']}: stages {stages[0]}..{stages[-1]}"]
    out.append("        " + "".join(f"n={n:<5}" for n in stages) + " stabilized")
    for i in (str(i) for i in doc["degrees"]):
        row = doc["pi_dims"][i]
        st = doc["stabilization"][i]
        verdict = f"at n={st['stabilized_at']}" if st["stabilized_at"] is not None \
            else "not stabilized"
        out.append(f"pi_{i:<5} " + "".join(f"{row[str(n)]:<7}" for n in stages) + verdict)
    out.append("fundamental group (dimension, class, abelianization, BCH axioms):")
    for n, g in doc["fundamental_group"].items():
        ok = "ok" if all(g["axioms"].values()) else "FAILED"
        out.append(f"  n={n}: {g['dimension']}, {g['nilpotency_class']}, "
                   f"{g['abelianization']}, {ok}")
    if "nilpotency" in doc:
        flags = ", ".join(f"n={n}: {'yes' if v['nilpotent'] else 'no'}"
                          for n, v in doc["nilpotency"].items())
        out.append(f"homologically nilpotent: {flags}")
    return "\n".join(out)


def _render_minimal(doc: dict) -> str:
    out = [f"{doc['space']}: minimal model of stage {doc['stage']} "
           f"(degree <= {doc['window']['degree']}, upper <= {doc['window']['upper']})"]
    for g in doc["generators"]:
        out.append(f"  {g['name']}  degree {g['degree']}  upper {g['upper']}  {g['kind']}")
    for g, terms in doc["differential"].items():
        out.append(f"  d {g} = {_terms(terms)}")
    out.append("checks: " + ", ".join(f"{k} {'ok' if v else 'FAILED'}"
                                      for k, v in doc["checks"].items()))
    if "warning" in doc:
        out.append(doc["warning"])
    return "\n".join(out)


# -- argument parsing ---------------------------------------------------------------------


def _positive(name, minimum=1):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be at least {minimum}")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "machine"), default="human")
    common.add_argument("--output", "-o", help="write the report to this file")
    p = argparse.ArgumentParser(prog="lietower", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(name, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("input", help="simplicial-set document or bundled fixture name")
        return s

    s = with_input("model", "global and based-component models")
    s.add_argument("--N", type=_positive("N"), default=DEFAULTS["N"])
    s = with_input("homology", "simplicial, indecomposable and model homology")
    s.add_argument("--N", type=_positive("N"), default=DEFAULTS["N"])
    s.add_argument("--degrees", type=_positive("degrees"), default=DEFAULTS["degrees"])
    for name, help_ in (("tower", "homotopy of the completion tower"),
                        ("pi", "homotopy dimensions and fundamental groups per stage")):
        s = with_input(name, help_)
        s.add_argument("--stages", type=_positive("stages", 2), default=DEFAULTS["stages"])
        s.add_argument("--degrees", type=_positive("degrees"), default=DEFAULTS["degrees"])
    s = with_input("minimal", "minimal model of a tower stage")
    s.add_argument("--stage", type=_positive("stage", 2), default=2)
    s.add_argument("--cutoff", type=_positive("cutoff", 0), default=DEFAULTS["cutoff"])
    s = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    s = sub.add_parser("dump-simplex-model", parents=[common], help="print L_n")
    s.add_argument("n", type=_positive("n", 0))
    s.add_argument("--N", type=_positive("N"), default=DEFAULTS["N"])
    return p


COMMANDS = {"model": cmd_model, "homology": cmd_homology, "tower": cmd_tower, "pi": cmd_pi,
            "minimal": cmd_minimal, "verify": cmd_verify,
            "dump-simplex-model": cmd_dump_simplex_model}


def run(argv=None) -> tuple:
    """Parse and execute; returns ``(exit status, report text or None)``."""
    args = build_parser().parse_args(argv)
    try:
        doc = COMMANDS[args.command](args)
    except SimplicialSetError as exc:
        where = f" (simplex {exc.simplex})" if exc.simplex else ""
        print(f"lietower: invalid input: {exc}{where}", file=sys.stderr)
        return EXIT_INPUT, None
    except (UnsupportedInput, InputError) as exc:
        print(f"lietower: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT, None
    except InvariantViolation as exc:
        print(f"lietower: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT, None
    if args.format == "machine":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        text = render_human(args.command, doc) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    status = EXIT_OK
    if args.command == "verify" and not doc["ok"]:
        status = EXIT_INVARIANT
    return status, text


def main(argv=None) -> int:
    status, _ = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
