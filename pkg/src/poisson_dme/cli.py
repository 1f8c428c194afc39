"""Command line front end: ``poisson-dme <command> document.json [options]``."""

from __future__ import annotations

import argparse
import sys
from typing import List

from . import dme, hopf
from .dvariety import DVariety, d_closure, d_core, full_prolongation, prolongation_equations
from .groebner import ResourceError, order_from_name, step_budget
from .parsing import ParseError
from .poisson import NotPoissonError, check_jacobi, d_constants_upto, poisson_center_upto
from .schema import SpecError, load_spec

OK, MATH_FAIL, INPUT_ERROR = 0, 1, 2


class Outcome:
    """A JSON-ready payload plus whether every mathematical check passed."""

    def __init__(self, payload, ok: bool = True):
        self.payload = payload
        self.ok = ok


def _ideal(spec, name):
    if name is None:
        if len(spec.ideals) == 1:
            return next(iter(spec.ideals.values())).ideal
        raise SpecError("choose an ideal with --ideal", "ideals")
    if name not in spec.ideals:
        raise SpecError(f"unknown ideal {name!r}", "ideals")
    return spec.ideals[name].ideal


def _gb(I, args):
    return [str(g) for g in I.groebner(order_from_name(getattr(args, "order", "grevlex")))]


def _family(spec, args):
    return dme.derivation_family(spec, getattr(args, "family", "auto") or "auto")


def cmd_check_jacobi(spec, args) -> Outcome:
    res = check_jacobi(spec.poisson)
    return Outcome({"jacobi": res.ok, "failing_triple": list(res.witness) if res.witness else None}, res.ok)


def cmd_check_poisson_hopf(spec, args) -> Outcome:
    if spec.hopf is None:
        raise SpecError("the document declares no Hopf kinds", "variables")
    res = hopf.is_poisson_hopf(spec.poisson, spec.hopf)
    D = hopf.prop_key_derivations(spec.poisson, spec.hopf)
    dres = hopf.is_differential_hopf(D, spec.hopf)
    return Outcome({"poisson_hopf": res.ok, "failing_pair": list(res.witness) if res.witness else None,
                    "prop_key_differential_hopf": dres.ok,
                    "equivalence_holds": res.ok == dres.ok}, res.ok)


def cmd_derivations(spec, args) -> Outcome:
    fam, D, cert = _family(spec, args)
    return Outcome({"family": fam, "derivations": [d.as_dict() for d in D], "span_certificate": cert})


def cmd_prolongation(spec, args) -> Outcome:
    I = _ideal(spec, args.ideal)
    m = args.m or (len(spec.derivations) if spec.derivations else 1)
    P = full_prolongation(I, m)
    out = {"ring": list(P.ring.names), "generators": [str(g) for g in P.generators]}
    if args.verbose:
        out["equations"] = [eq.verbose() for mu in range(1, m + 1)
                            for eq in prolongation_equations(I, mu)]
    return Outcome(out)


def cmd_d_closure(spec, args) -> Outcome:
    I = _ideal(spec, args.ideal)
    _, D, _ = _family(spec, args)
    V = DVariety.affine(spec.ring, D)
    seeds = [spec.ring.parse(s) for s in args.seed]
    C = d_closure(V, list(I.generators) + seeds)
    return Outcome({"closure": _gb(C, args)})


def cmd_d_core(spec, args) -> Outcome:
    I = _ideal(spec, args.ideal)
    _, D, _ = _family(spec, args)
    res = d_core(DVariety.affine(spec.ring, D), I, args.core_cap)
    out = {"status": res.status, "iterations": res.iterations, "ideal": _gb(res.ideal, args),
           "cap": args.core_cap}
    if args.verbose:
        out["trace"] = res.trace
    return Outcome(out)


def cmd_center(spec, args) -> Outcome:
    I = _ideal(spec, args.ideal)
    fam = getattr(args, "family", "auto")
    if fam in (None, "auto", "hamiltonian"):
        try:
            basis = poisson_center_upto(spec.poisson, I, args.degree_bound)
        except NotPoissonError as exc:
            return Outcome({"error": str(exc)}, False)
    else:
        _, D, _ = _family(spec, args)
        basis = d_constants_upto(D, I, args.degree_bound)
    return Outcome({"degree_bound": args.degree_bound, "basis": [str(p) for p in basis]})


def cmd_forcom(spec, args) -> Outcome:
    if spec.hopf is None:
        raise SpecError("the document declares no Hopf kinds", "variables")
    D = spec.derivations if spec.derivations else hopf.prop_key_derivations(spec.poisson, spec.hopf)
    if not hopf.d_group_check(spec.hopf, D):
        return Outcome({"d_group": False}, False)
    comps = hopf.forcom_map(spec.hopf, D)
    image, kernel = hopf.forcom_image_kernel(spec.hopf, D)
    return Outcome({"d_group": True, "components": [str(c) for c in comps],
                    "image": _gb(image, args), "kernel": _gb(kernel, args)})


def _config(args) -> dme.DMEConfig:
    return dme.DMEConfig(degree_bound=args.degree_bound, core_cap=args.core_cap,
                         step_budget=args.step_budget, family=getattr(args, "family", "auto") or "auto",
                         max_points=getattr(args, "max_points", 16))


def cmd_dme_report(spec, args) -> Outcome:
    names = [args.ideal] if args.ideal else sorted(n for n, e in spec.ideals.items() if e.prime)
    cfg = _config(args)
    reports = {n: dme.dme_report(spec, n, cfg) for n in names}
    ok = all(c["ok"] for r in reports.values() for c in r["consistency"])
    return Outcome({"reports": reports}, ok)


def _task_args(spec, base, task):
    ns = argparse.Namespace(**vars(base))
    a = task.get("args") or {}
    ns.ideal = a.get("ideal", base.ideal)
    ns.seed = a.get("seeds", [])
    ns.m = a.get("m")
    if "degree" in a:
        ns.degree_bound = a["degree"]
    if "cap" in a:
        ns.core_cap = a["cap"]
    if "family" in a:
        ns.family = a["family"]
    return ns


def cmd_run(spec, args) -> Outcome:
    table = {"jacobi": cmd_check_jacobi, "poisson_hopf": cmd_check_poisson_hopf,
             "differential_hopf": _cmd_differential_hopf, "prop_key": cmd_derivations,
             "prolongation": cmd_prolongation, "d_closure": cmd_d_closure, "d_core": cmd_d_core,
             "center": cmd_center, "forcom": cmd_forcom, "dme": cmd_dme_report}
    results = {}
    ok = True
    for k, task in enumerate(spec.tasks):
        ns = _task_args(spec, args, task)
        if task["kind"] == "prop_key":
            ns.family = "prop_key"
        res = table[task["kind"]](spec, ns)
        results[f"{k:02d}_{task['kind']}"] = res.payload
        ok = ok and res.ok
    return Outcome({"tasks": results}, ok)


def _cmd_differential_hopf(spec, args) -> Outcome:
    if spec.hopf is None:
        raise SpecError("the document declares no Hopf kinds", "variables")
    _, D, _ = dme.derivation_family(spec, "explicit" if spec.derivations else "prop_key")
    res = hopf.is_differential_hopf(D, spec.hopf)
    return Outcome({"differential_hopf": res.ok, "failing": list(res.witness) if res.witness else None},
                   res.ok)


COMMANDS = {
    "check-jacobi": cmd_check_jacobi,
    "check-poisson-hopf": cmd_check_poisson_hopf,
    "derivations": cmd_derivations,
    "prolongation": cmd_prolongation,
    "d-closure": cmd_d_closure,
    "d-core": cmd_d_core,
    "center": cmd_center,
    "forcom": cmd_forcom,
    "dme-report": cmd_dme_report,
    "run": cmd_run,
}


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="poisson-dme", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("document", help="JSON algebra document")
        s.add_argument("--ideal", help="name of an ideal declared in the document")
        s.add_argument("--seed", action="append", default=[], help="extra generator (d-closure)")
        s.add_argument("--m", type=int, help="number of derivations (prolongation)")
        s.add_argument("--family", choices=["auto", "hamiltonian", "prop_key", "explicit"], default="auto")
        s.add_argument("--degree-bound", type=int, default=4)
        s.add_argument("--core-cap", type=int, default=10)
        s.add_argument("--max-points", type=int, default=16)
        s.add_argument("--step-budget", type=int)
        s.add_argument("--order", choices=["grevlex", "lex"], default="grevlex")
        s.add_argument("--format", choices=["json", "text"], default="json")
        s.add_argument("--verbose", action="store_true")
    return p


def main(argv: List[str] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.document, check_jacobi_eagerly=args.command not in ("check-jacobi", "run"))
        with step_budget(args.step_budget):
            res = COMMANDS[args.command](spec, args)
    except (SpecError, ParseError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return INPUT_ERROR
    print(dme.render_json(res.payload) if args.format == "json" else render_text(res.payload))
    return OK if res.ok else MATH_FAIL


if __name__ == "__main__":
    sys.exit(main())
