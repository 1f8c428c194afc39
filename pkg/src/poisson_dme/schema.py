"""JSON documents describing a Poisson algebra, its ideals and tasks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .exactpoly import INVERTIBLE, POLYNOMIAL, Derivation, RingSpec
from .groebner import Ideal
from .hopf import GROUPLIKE, PRIMITIVE, HopfError, HopfSignature
from .parsing import ParseError, parse_poly
from .poisson import AntisymmetryError, PoissonStructure, check_jacobi


class SpecError(ValueError):
    """Invalid document; ``location`` is a JSON-path-like pointer."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class JacobiError(SpecError):
    def __init__(self, triple):
        self.triple = tuple(triple)
        super().__init__(f"Jacobi identity fails on {self.triple}", "bracket")


@dataclass
class IdealEntry:
    ideal: Ideal
    prime: bool = False


@dataclass
class AlgebraSpec:
    ring: RingSpec
    poisson: PoissonStructure
    hopf: Optional[HopfSignature] = None
    derivations: Optional[List[Derivation]] = None
    ideals: Dict[str, IdealEntry] = field(default_factory=dict)
    tasks: List[dict] = field(default_factory=list)


TASK_KINDS = ("jacobi", "poisson_hopf", "differential_hopf", "prop_key", "prolongation",
              "d_closure", "d_core", "center", "forcom", "dme")


def _parse(text, ring, where):
    try:
        return parse_poly(text, ring)
    except ParseError as exc:
        raise SpecError(str(exc), where) from None


def _pair(key: str, ring: RingSpec, where: str):
    parts = [p.strip() for p in key.split(",")]
    if len(parts) != 2:
        raise SpecError("bracket keys look like 'x,y'", where)
    out = []
    for p in parts:
        if p.isdigit():
            k = int(p)
            if not 1 <= k <= ring.nvars:
                raise SpecError(f"index {k} out of range", where)
            out.append(ring.names[k - 1])
        elif p in ring:
            out.append(p)
        else:
            raise SpecError(f"unknown variable {p!r}", where)
    return tuple(out)


def _ring(doc) -> RingSpec:
    vs = doc.get("variables")
    if not isinstance(vs, list) or not vs:
        raise SpecError("at least one variable is required", "variables")
    pairs = []
    for k, v in enumerate(vs):
        where = f"variables[{k}]"
        if isinstance(v, str):
            v = {"name": v}
        if not isinstance(v, dict) or "name" not in v:
            raise SpecError("each variable needs a name", where)
        kind = v.get("kind", POLYNOMIAL)
        if kind not in (POLYNOMIAL, INVERTIBLE):
            raise SpecError(f"kind must be {POLYNOMIAL!r} or {INVERTIBLE!r}", where)
        pairs.append((v["name"], kind))
    try:
        return RingSpec(tuple(pairs))
    except ValueError as exc:
        raise SpecError(str(exc), "variables") from None


def _hopf(doc, ring) -> Optional[HopfSignature]:
    kinds = [v.get("hopf") if isinstance(v, dict) else None for v in doc["variables"]]
    if all(k is None for k in kinds):
        return None
    if any(k is None for k in kinds):
        raise SpecError("give a Hopf kind for every variable or for none", "variables")
    bad = [k for k in kinds if k not in (PRIMITIVE, GROUPLIKE)]
    if bad:
        raise SpecError(f"unknown Hopf kind {bad[0]!r}", "variables")
    try:
        return HopfSignature(ring, tuple(kinds))
    except HopfError as exc:
        raise SpecError(str(exc), "variables") from None


def _bracket(doc, ring) -> PoissonStructure:
    if "bracket" in doc and "lie_structure_constants" in doc:
        raise SpecError("give either 'bracket' or 'lie_structure_constants'", "bracket")
    entries = {}
    if "lie_structure_constants" in doc:
        src, label = doc["lie_structure_constants"], "lie_structure_constants"
        for key, val in src.items():
            where = f"{label}[{key!r}]"
            pair = _pair(key, ring, where)
            if isinstance(val, dict):
                expr = ring.zero()
                for n, c in val.items():
                    if n not in ring:
                        raise SpecError(f"unknown variable {n!r}", where)
                    expr = expr + ring.var(n).scale(Fraction(str(c)))
            else:
                expr = _parse(val, ring, where)
            if any(sum(e) != 1 or min(e) < 0 for e in expr.terms):
                raise SpecError("structure constants must give a linear form", where)
            entries[pair] = (expr, where)
    else:
        for key, val in (doc.get("bracket") or {}).items():
            where = f"bracket[{key!r}]"
            entries[_pair(key, ring, where)] = (_parse(val, ring, where), where)
    n = ring.nvars
    B = [[ring.zero()] * n for _ in range(n)]
    seen = {}
    for (a, b), (expr, where) in entries.items():
        i, j = ring.index(a), ring.index(b)
        if i == j:
            if expr:
                raise SpecError(f"{{{a},{a}}} must be 0", where)
            continue
        if (j, i) in seen:
            if seen[(j, i)] != -expr:
                raise SpecError(f"bracket is not antisymmetric on ({a},{b})", where)
        seen[(i, j)] = expr
        B[i][j], B[j][i] = expr, -expr
    try:
        return PoissonStructure(ring, B)
    except AntisymmetryError as exc:
        raise SpecError(str(exc), "bracket") from None


def parse_algebra_spec(text, check_jacobi_eagerly: bool = True) -> AlgebraSpec:
    """Validate a JSON document (text or already-decoded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise SpecError("the document must be a JSON object")
    ring = _ring(doc)
    hopf = _hopf(doc, ring)
    P = _bracket(doc, ring)
    if check_jacobi_eagerly:
        res = check_jacobi(P)
        if not res:
            raise JacobiError(res.witness)
    derivs = None
    if doc.get("derivations") is not None:
        derivs = []
        for k, dmap in enumerate(doc["derivations"]):
            where = f"derivations[{k}]"
            if not isinstance(dmap, dict):
                raise SpecError("a derivation is a map variable -> expression", where)
            unknown = [v for v in dmap if v not in ring]
            if unknown:
                raise SpecError(f"unknown variable {unknown[0]!r}", where)
            derivs.append(Derivation.from_map(ring, {v: _parse(e, ring, f"{where}[{v!r}]")
                                                     for v, e in dmap.items()}))
    ideals = {}
    for name, entry in (doc.get("ideals") or {}).items():
        where = f"ideals[{name!r}]"
        if isinstance(entry, list):
            entry = {"generators": entry}
        gens = [_parse(g, ring, f"{where}.generators[{k}]") for k, g in enumerate(entry.get("generators", []))]
        ideals[name] = IdealEntry(Ideal(ring, gens), bool(entry.get("prime", False)))
    tasks = list(doc.get("tasks") or [])
    for k, t in enumerate(tasks):
        if not isinstance(t, dict) or t.get("kind") not in TASK_KINDS:
            raise SpecError(f"task kind must be one of {', '.join(TASK_KINDS)}", f"tasks[{k}]")
    return AlgebraSpec(ring, P, hopf, derivs, ideals, tasks)


def load_spec(path: str, check_jacobi_eagerly: bool = True) -> AlgebraSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra_spec(fh.read(), check_jacobi_eagerly)
