"""Semi-decision probes for rationality, primitivity and local closedness.

Every verdict that rests on a finite search carries its bound in the status
string, e.g. ``rational_up_to_bound(4)`` or ``inconclusive(cap=10,points=16)``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .dvariety import DVariety, d_closure, d_core
from .exactpoly import Derivation, Poly, RingSpec, apply_derivation, substitute
from .groebner import Ideal, intersect, step_budget
from .poisson import (NotPoissonError, PoissonStructure, d_constants_upto, generator_hamiltonians,
                      is_poisson_ideal, poisson_center_upto)

RATIONAL = "rational_up_to_bound"
NONCONSTANT_CENTER = "nonconstant_center_element_found"
CERTIFIED = "certified"
REFUTED = "refuted_up_to_bound"  # reserved: a finite point search never refutes
INCONCLUSIVE = "inconclusive"
WITNESSED = "witnessed_relative_to_candidates"
NOT_WITNESSED = "not_witnessed"

DEFAULT_BOX = (-2, -1, 0, 1, 2)


@dataclass
class DMEConfig:
    degree_bound: int = 4
    core_cap: int = 10
    box: Sequence[int] = DEFAULT_BOX
    max_points: Optional[int] = 16
    step_budget: Optional[int] = None
    family: str = "auto"  # auto | hamiltonian | prop_key | explicit
    candidates: Optional[List[str]] = None  # ideal names; None = every other declared prime
    seeds: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "degree_bound": self.degree_bound,
            "core_cap": self.core_cap,
            "box": list(self.box),
            "max_points": self.max_points,
            "step_budget": self.step_budget,
            "family": self.family,
            "candidates": self.candidates,
            "seeds": list(self.seeds),
        }


def _is_d_stable(derivs: Sequence[Derivation], I: Ideal) -> bool:
    return all(apply_derivation(d, g) in I for d in derivs for g in I.generators)


def _nonconstant_mod(p: Poly, I: Ideal) -> bool:
    return not I.reduce(p).is_constant()


def center_witness(basis: Sequence[Poly], I: Ideal) -> Optional[Poly]:
    """Lowest-degree element of a centre basis that is not a scalar modulo ``I``."""
    cands = [p for p in basis if _nonconstant_mod(p, I)]
    if not cands:
        return None
    return min(cands, key=lambda p: (p.degree(), len(p.terms), str(p)))


def rationality_report(P: PoissonStructure, I: Ideal, d: int, derivs: Sequence[Derivation] = None) -> dict:
    """Search the degree-``<= d`` Poisson centre of ``A/I`` for a nonconstant element.

    ``derivs`` swaps in another family spanning the Hamiltonians.
    """
    if not is_poisson_ideal(P, I):
        raise NotPoissonError("the ideal is not a Poisson ideal")
    basis = poisson_center_upto(P, I, d) if derivs is None else d_constants_upto(derivs, I, d)
    w = center_witness(basis, I)
    if w is None:
        return {"status": f"{RATIONAL}({d})", "witness": None, "bound": d}
    return {"status": NONCONSTANT_CENTER, "witness": str(w), "bound": d}


def _evaluate(f: Poly, point: Dict[str, int]):
    return substitute(f, point, f.ring).constant_value()


def rational_points(I: Ideal, box: Sequence[int] = DEFAULT_BOX, limit: int = None) -> List[Dict[str, int]]:
    """Box points on ``V(I)``, smallest height first; invertible coordinates avoid 0."""
    ring = I.ring
    inv = set(ring.invertible_indices)
    values = sorted(set(box), key=lambda v: (abs(v), v))
    axes = [[v for v in values if v != 0] if i in inv else values for i in range(ring.nvars)]
    pts = sorted(itertools.product(*axes), key=lambda p: (max((abs(v) for v in p), default=0),
                                                             sum(abs(v) for v in p), p))
    out = []
    for p in pts:
        pt = dict(zip(ring.names, p))
        if all(_evaluate(g, pt) == 0 for g in I.generators):
            out.append(pt)
            if limit is not None and len(out) >= limit:
                break
    return out


def point_ideal(ring: RingSpec, point: Dict[str, int]) -> Ideal:
    return Ideal(ring, [ring.var(n) - point[n] for n in ring.names])


def primitivity_probe(derivs: Sequence[Derivation], I: Ideal, box: Sequence[int] = DEFAULT_BOX,
                      cap: int = 10, max_points: int = None, center: Poly = None) -> dict:
    """Look for a box point whose maximal ideal has D-core exactly ``I``.

    ``center``, when given, is central modulo ``I`` and nonconstant there;
    then ``I + (center - center(a))`` is a D-ideal inside every ``m_a`` that
    strictly contains ``I``, so no point can certify and the core
    computation is skipped.
    """
    if I.is_unit():
        raise ValueError("the ideal must be proper")
    ring = I.ring
    V = DVariety.affine(ring, derivs)
    pts = rational_points(I, box, max_points)
    records = []
    for pt in pts:
        m = point_ideal(ring, pt)
        rec = {"point": _fmt_point(pt)}
        if center is not None:
            lam = _evaluate(center, pt)
            rec.update(status="excluded_by_center", lower_bound=str(I + [center - lam]))
            records.append(rec)
            continue
        res = d_core(V, m, cap)
        rec.update(status=res.status, iterations=res.iterations, core_upper_bound=str(res.ideal),
                   core_equals_ideal=res.exact and res.ideal.equals(I))
        records.append(rec)
        if rec["core_equals_ideal"]:
            return {"status": CERTIFIED, "point": rec["point"], "core_result": rec,
                    "cap": cap, "points_examined": len(records)}
    best = next((r for r in records if r["status"] == "upper_bound"), records[0] if records else None)
    tag = f"{INCONCLUSIVE}(cap={cap},points={len(records)})"
    return {"status": tag, "point": best["point"] if best else None, "core_result": best,
            "cap": cap, "points_examined": len(records),
            "interval": [str(I), best.get("core_upper_bound", best.get("lower_bound"))] if best else None}


def _fmt_point(pt: Dict[str, int]) -> Dict[str, int]:
    return {k: int(v) for k, v in pt.items()}


def candidate_fingerprint(cands: Sequence[Ideal]) -> str:
    blob = json.dumps(sorted(json.dumps(c.basis_strings()) for c in cands))
    return hashlib.sha256(blob.encode()).hexdigest()[:10]


def local_closedness_probe(derivs: Sequence[Derivation], I: Ideal, candidates: Sequence[Ideal] = (),
                           seeds: Sequence = ()) -> dict:
    """Intersect candidate D-primes strictly above ``I`` and test whether it exceeds ``I``.

    Explicit candidates must be D-stable, proper and strictly contain ``I``.
    Seeds are expanded to D-closures of ``I + (seed)``.
    """
    used: List[Ideal] = []
    for k, C in enumerate(candidates):
        if C.is_unit() or not C.contains_ideal(I) or C.equals(I):
            raise ValueError(f"candidate {k} must be proper and strictly contain the ideal")
        if not _is_d_stable(derivs, C):
            raise ValueError(f"candidate {k} is not stable under the derivations")
        used.append(C)
    V = DVariety.affine(I.ring, derivs)
    for s in seeds:
        C = d_closure(V, list(I.groebner()) + [s])
        if C.is_unit() or C.equals(I):
            continue
        used.append(C)
    fp = candidate_fingerprint(used)
    out = {"candidates_used": [str(C) for C in used], "fingerprint": fp}
    if not used:
        return {**out, "status": f"{NOT_WITNESSED}[{fp}]", "witness": None}
    meet = used[0]
    for C in used[1:]:
        meet = intersect(meet, C)
    w = next((g for g in meet.groebner() if g not in I), None)
    if w is None:
        return {**out, "status": f"{NOT_WITNESSED}[{fp}]", "witness": None}
    return {**out, "status": f"{WITNESSED}[{fp}]", "witness": str(w),
            "caveat": "relative to the listed candidates only"}


# ---------------------------------------------------------------------------


def derivation_family(spec, family: str = "auto"):
    """``(name, derivations, span certificate or None)`` for a parsed document."""
    from .hopf import prop_key_derivations, span_certificate

    P = spec.poisson
    if family == "auto":
        family = "prop_key" if spec.hopf is not None else "hamiltonian"
    if family == "prop_key":
        if spec.hopf is None:
            raise ValueError("the prop_key family needs a Hopf signature")
        D = prop_key_derivations(P, spec.hopf)
        cert = span_certificate(D, P, spec.hopf)
        return family, D, [str(cert[i][i]) for i in range(len(cert))]
    if family == "hamiltonian":
        return family, generator_hamiltonians(P), None
    if family == "explicit":
        if not spec.derivations:
            raise ValueError("the document has no explicit derivations")
        return family, list(spec.derivations), None
    raise ValueError(f"unknown derivation family {family!r}")


def _default_candidates(spec, name: str, I: Ideal, derivs) -> List[Ideal]:
    out = []
    for other in sorted(spec.ideals):
        entry = spec.ideals[other]
        if other == name or not entry.prime:
            continue
        C = entry.ideal
        if C.is_unit() or not C.contains_ideal(I) or C.equals(I) or not _is_d_stable(derivs, C):
            continue
        out.append(C)
    return out


def dme_report(spec, name: str, config: DMEConfig = None) -> dict:
    config = config or DMEConfig()
    with step_budget(config.step_budget):
        return _dme_report(spec, name, config)


def _dme_report(spec, name: str, config: DMEConfig) -> dict:
    if name not in spec.ideals:
        raise KeyError(f"unknown ideal {name!r}")
    entry = spec.ideals[name]
    I = entry.ideal
    P = spec.poisson
    fam, D, cert = derivation_family(spec, config.family)
    report = {
        "ideal": name,
        "generators": [str(g) for g in I.generators],
        "prime_asserted": entry.prime,
        "derivation_family": fam,
        "derivations": [d.as_dict() for d in D],
        "span_certificate": cert,
        "config": config.as_dict(),
    }
    poisson = is_poisson_ideal(P, I)
    d_stable = _is_d_stable(D, I)
    report["poisson_stable"] = poisson
    checks = [{"name": "poisson_iff_d_stable", "ok": poisson == d_stable,
               "detail": f"poisson={poisson}, d_stable={d_stable}"}]
    report["consistency"] = checks
    if not poisson:
        report["rationality"] = report["primitivity"] = report["local_closedness"] = None
        report["note"] = "not a Poisson ideal; probes skipped"
        return report

    d = config.degree_bound
    basis = d_constants_upto(D, I, d)
    w = center_witness(basis, I)
    rat = {"status": f"{RATIONAL}({d})", "witness": None, "bound": d} if w is None else \
        {"status": NONCONSTANT_CENTER, "witness": str(w), "bound": d}
    report["rationality"] = rat
    if fam != "hamiltonian":
        ham = rationality_report(P, I, d)
        checks.append({"name": "family_center_matches_hamiltonians",
                       "ok": ham["status"] == rat["status"] and
                       _same_span(basis, poisson_center_upto(P, I, d), I),
                       "detail": f"hamiltonian status {ham['status']}"})

    prim = primitivity_probe(D, I, config.box, config.core_cap, config.max_points, center=w)
    report["primitivity"] = prim

    if config.candidates is None:
        cands = _default_candidates(spec, name, I, D)
    else:
        cands = [spec.ideals[c].ideal for c in config.candidates]
    seeds = [spec.ring.parse(s) for s in config.seeds]
    lc = local_closedness_probe(D, I, cands, seeds)
    report["local_closedness"] = lc

    certified = prim["status"] == CERTIFIED
    checks.append({"name": "no_certificate_with_center_element",
                   "ok": not (certified and rat["status"] == NONCONSTANT_CENTER),
                   "detail": "a nonconstant central element rules out primitivity"
                   if rat["status"] == NONCONSTANT_CENTER else "no central obstruction found"})
    # read off the point record itself, not the status string
    stabilized_at_ideal = bool((prim.get("core_result") or {}).get("core_equals_ideal"))
    lc_witnessed = lc["status"].startswith(WITNESSED)
    checks.append({"name": "locally_closed_and_stable_point_gives_certificate",
                   "ok": (not (lc_witnessed and stabilized_at_ideal)) or certified,
                   "detail": "applicable" if lc_witnessed and stabilized_at_ideal else "not applicable"})
    return report


def _same_span(a: Sequence[Poly], b: Sequence[Poly], I: Ideal) -> bool:
    from .linalg import rank

    polys = [I.reduce(p) for p in list(a) + list(b)]
    cols = sorted({e for p in polys for e in p.terms})
    idx = {e: k for k, e in enumerate(cols)}

    def vec(p):
        v = [0] * len(cols)
        for e, c in p.terms.items():
            v[idx[e]] = c
        return v

    ra = rank([vec(p) for p in polys[:len(a)]], len(cols))
    rb = rank([vec(p) for p in polys[len(a):]], len(cols))
    return ra == rb == rank([vec(p) for p in polys], len(cols))


def render_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
