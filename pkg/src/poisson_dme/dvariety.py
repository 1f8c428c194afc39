"""Affine D-varieties: prolongations, D-subvarieties, D-morphisms, closures
and cores of ideals under a finite family of derivations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .exactpoly import (Derivation, Poly, RingMismatchError, RingSpec, POLYNOMIAL,
                        apply_derivation, change_ring, coeff_derivative, partial_derivative,
                        substitute)
from .groebner import (Ideal, ResourceError, _clear, eliminate,
                       intersect, syzygies)
from .poisson import CheckResult


class DVarietyError(ValueError):
    pass


# prolongations ---------------------------------------------------------------

@dataclass(frozen=True)
class ProlongationNaming:
    """Fiber coordinate for variable ``i`` and derivation ``mu`` (both 1-based)
    is ``{prefix}[mu,i]``."""

    prefix: str = "u"

    @classmethod
    def fresh_for(cls, ring: RingSpec) -> "ProlongationNaming":
        prefix = "u"
        while any(n.startswith(prefix + "[") for n in ring.names):
            prefix += "u"
        return cls(prefix)

    def name(self, mu: int, i: int) -> str:
        return f"{self.prefix}[{mu},{i}]"


def prolongation_ring(ring: RingSpec, mus: Sequence[int],
                      naming: ProlongationNaming = None) -> Tuple[RingSpec, ProlongationNaming]:
    naming = naming or ProlongationNaming.fresh_for(ring)
    extra = [(naming.name(mu, i + 1), POLYNOMIAL) for mu in mus for i in range(ring.nvars)]
    return ring.extend(extra), naming


@dataclass(frozen=True)
class ProlongationEquation:
    """``f`` together with ``sum_i df/dx_i * u[mu,i] + f^delta``."""

    f: Poly
    linear: Poly
    coeff_term: Poly

    @property
    def equation(self) -> Poly:
        return self.linear + self.coeff_term

    def verbose(self) -> str:
        return f"{self.f} = 0 ; {self.linear} + ({self.coeff_term}) = 0"


def prolongation_equations(I: Ideal, mu: int, ring: RingSpec = None,
                           naming: ProlongationNaming = None) -> List[ProlongationEquation]:
    base = I.ring
    if ring is None:
        ring, naming = prolongation_ring(base, [mu], naming)
    naming = naming or ProlongationNaming.fresh_for(base)
    u = [ring.var(naming.name(mu, i + 1)) for i in range(base.nvars)]
    out = []
    for f in I.generators:
        F = change_ring(f, ring)
        lin = ring.zero()
        for i in range(base.nvars):
            df = partial_derivative(f, i)
            if df:
                lin = lin + change_ring(df, ring) * u[i]
        out.append(ProlongationEquation(F, lin, change_ring(coeff_derivative(f), ring)))
    return out


def prolongation_ideal(I: Ideal, mu: int = 1) -> Ideal:
    """The delta_mu-prolongation equations on the given generators."""
    eqs = prolongation_equations(I, mu)
    ring = eqs[0].f.ring if eqs else prolongation_ring(I.ring, [mu])[0]
    gens = []
    for eq in eqs:
        gens += [eq.f, eq.equation]
    return Ideal(ring, gens)


def full_prolongation(I: Ideal, m: int) -> Ideal:
    """Fibred product of the ``m`` prolongations over the base variables."""
    if m < 1:
        raise ValueError("need at least one derivation")
    ring, naming = prolongation_ring(I.ring, range(1, m + 1))
    gens = [change_ring(f, ring) for f in I.generators]
    for mu in range(1, m + 1):
        gens += [eq.equation for eq in prolongation_equations(I, mu, ring, naming)]
    return Ideal(ring, gens)


def validate_dvariety(I: Ideal, derivations: Sequence[Derivation]) -> CheckResult:
    """Every derivation maps every generator of ``I`` into ``I``."""
    for mu, d in enumerate(derivations, start=1):
        if d.ring != I.ring:
            raise RingMismatchError("derivation lives in a different ring")
        for g in I.generators:
            if apply_derivation(d, g) not in I:
                return CheckResult(False, (str(g), mu))
    return CheckResult(True)


def section_satisfies_prolongation(I: Ideal, derivations: Sequence[Derivation]) -> bool:
    """The point ``(z, d_1 z, ..., d_m z)`` satisfies the full prolongation
    modulo ``I``; equivalent to :func:`validate_dvariety`."""
    m = len(derivations)
    if m == 0:
        return True
    P = full_prolongation(I, m)
    naming = ProlongationNaming.fresh_for(I.ring)
    assignment = {n: I.ring.var(n) for n in I.ring.names}
    for mu, d in enumerate(derivations, start=1):
        for i, v in enumerate(d.values):
            assignment[naming.name(mu, i + 1)] = v
    return all(substitute(g, assignment, I.ring) in I for g in P.generators)


# D-varieties -----------------------------------------------------------------

class DVariety:
    """An ideal ``I(V)`` with derivations that preserve it."""

    def __init__(self, ideal: Ideal, derivations: Sequence[Derivation]):
        check = validate_dvariety(ideal, derivations)
        if not check:
            g, mu = check.witness
            raise DVarietyError(f"derivation {mu} does not preserve the ideal (generator {g})")
        self.ring = ideal.ring
        self.ideal = ideal
        self.derivations: Tuple[Derivation, ...] = tuple(derivations)

    @classmethod
    def affine(cls, ring: RingSpec, derivations: Sequence[Derivation]) -> "DVariety":
        return cls(Ideal(ring), derivations)

    @property
    def m(self) -> int:
        return len(self.derivations)

    def with_ideal(self, J: Ideal) -> Ideal:
        return J + self.ideal


def is_d_subvariety(V: DVariety, J: Ideal) -> bool:
    if J.ring != V.ring:
        raise RingMismatchError("ideal lives in a different ring")
    if not J.contains_ideal(V.ideal):
        raise DVarietyError("the subvariety ideal must contain the ideal of V")
    return all(apply_derivation(d, g) in J for d in V.derivations for g in J.generators)


def _pullback(phi: Sequence[Poly], W: DVariety, f: Poly) -> Poly:
    if len(phi) != W.ring.nvars:
        raise DVarietyError("the map needs one image per target variable")
    source = phi[0].ring if phi else None
    return substitute(f, dict(zip(W.ring.names, phi)), source)


def _check_well_defined(phi: Sequence[Poly], V: DVariety, W: DVariety) -> None:
    for g in W.ideal.generators:
        if _pullback(phi, W, g) not in V.ideal:
            raise DVarietyError(f"the map does not land in W (pullback of {g} is not in I(V))")


def is_d_morphism(phi: Sequence[Poly], V: DVariety, W: DVariety) -> CheckResult:
    """Pullback commutes with the derivations modulo ``I(V)``.

    ``phi`` lists the images (in V's ring) of W's coordinates.
    """
    if V.m != W.m:
        raise DVarietyError("source and target carry different numbers of derivations")
    for p in phi:
        if p.ring != V.ring:
            raise RingMismatchError("images must live in the source ring")
    _check_well_defined(phi, V, W)
    for mu, (dV, dW) in enumerate(zip(V.derivations, W.derivations), start=1):
        for name, p in zip(W.ring.names, phi):
            lhs = apply_derivation(dV, p)
            rhs = _pullback(phi, W, dW[name])
            if lhs - rhs not in V.ideal:
                return CheckResult(False, (name, mu))
    return CheckResult(True)


@dataclass(frozen=True)
class StableIdeal:
    """An ideal together with the outcome of its D-stability check."""

    ideal: Ideal
    d_stable: bool
    note: str = ""


def _graph(phi: Sequence[Poly], V: DVariety, W: DVariety):
    # source variables get private names so identity-like maps do not clash
    src = [(f"src{i}__{n}", k) for i, (n, k) in enumerate(V.ring.variables)]
    combined = W.ring.extend(src)
    ren = {n: combined.var(s) for (n, _), (s, _) in zip(V.ring.variables, src)}
    gens = [substitute(g, ren, combined) for g in V.ideal.generators]
    for name, p in zip(W.ring.names, phi):
        gens.append(combined.var(name) - substitute(p, ren, combined))
    return Ideal(combined, gens), [s for s, _ in src]


def image_closure(phi: Sequence[Poly], V: DVariety, W: DVariety) -> StableIdeal:
    """Zariski closure of the image, by eliminating the source coordinates
    from the graph; reports whether it is a D-subvariety of ``W``."""
    graph, src = _graph(phi, V, W)
    img = eliminate(graph, src)
    img = Ideal(W.ring, [change_ring(g, W.ring) for g in img.generators])
    return StableIdeal(img, is_d_subvariety(W, img))


def preimage(phi: Sequence[Poly], V: DVariety, W: DVariety, X: Ideal) -> StableIdeal:
    """``I(V) + (phi^# X)``, with generator-level D-stability verified.

    The radical of a D-stable ideal is again D-stable, so the radical
    (not computed) is the ideal of a D-subvariety.
    """
    if not is_d_subvariety(W, X):
        raise DVarietyError("X is not a D-subvariety of the target")
    _check_well_defined(phi, V, W)
    J = V.ideal + [_pullback(phi, W, g) for g in X.generators]
    stable = is_d_subvariety(V, J)
    return StableIdeal(J, stable, "radical is D-stable since the ideal is" if stable else "")


# closure and core ------------------------------------------------------------

def d_closure(V: DVariety, S: Sequence, max_rounds: int = 100) -> Ideal:
    """Smallest D-stable ideal containing ``S`` and ``I(V)``."""
    J = V.ideal + [V.ring.parse(s) if isinstance(s, str) else s for s in S]
    for _ in range(max_rounds):
        gb = J.groebner()
        new = [apply_derivation(d, g) for d in V.derivations for g in gb]
        new = [h for h in new if h and h not in J]
        if not new:
            return Ideal(V.ring, gb)
        J = Ideal(V.ring, list(gb) + new)
    raise ResourceError(max_rounds, max_rounds, "D-closure")


EXACT = "exact"
UPPER_BOUND = "upper_bound"


@dataclass
class CoreResult:
    ideal: Ideal
    status: str
    iterations: int
    trace: List[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.status == EXACT


def _refine(J: Ideal, d: Derivation) -> Ideal:
    """``{f in J : d f in J}``.

    For the basis ``b`` of ``J``, ``sum g_i b_i`` qualifies iff
    ``sum g_i d(b_i) in J``; the admissible ``g`` are the first halves of the
    syzygies of ``(d b_1, ..., d b_r, b_1, ..., b_r)``.
    """
    ring = J.ring
    b = J.groebner()
    if not b:
        return J
    db = [apply_derivation(d, bi) for bi in b]
    if ring.is_laurent:
        # clear denominators in the derivative slots with one common unit
        shift = [0] * ring.nvars
        for p in db:
            _, s = _clear(p)
            shift = [max(a, c) for a, c in zip(shift, s)]
        db = [p.mul_monomial(tuple(shift)) for p in db]
    r = len(b)
    syz = syzygies(db + list(b))
    gens = []
    for v in syz:
        f = ring.zero()
        for gi, bi in zip(v[:r], b):
            if gi:
                f = f + gi * bi
        if f:
            gens.append(f)
    return Ideal(ring, gens)


def d_core(V: DVariety, I: Ideal, cap: int = 10) -> CoreResult:
    """Descending refinement towards the largest D-stable ideal inside ``I``.

    Stops with ``exact`` at a fixpoint and ``upper_bound`` after ``cap``
    strict refinements; the true core always lies inside the returned ideal.
    """
    if I.ring != V.ring:
        raise RingMismatchError("ideal lives in a different ring")
    J = I + V.ideal
    if J.is_unit():
        raise DVarietyError("the D-core is only defined here for proper ideals")
    trace = []
    for k in range(cap + 1):
        trace.append(f"J_{k} = {J}")
        if k == cap:
            break
        nxt = J
        for d in V.derivations:
            R = _refine(J, d)
            nxt = R if nxt is J else intersect(nxt, R)
        if nxt.equals(J):
            return CoreResult(J, EXACT, k, trace)
        J = Ideal(J.ring, nxt.groebner())
    return CoreResult(J, UPPER_BOUND, cap, trace)
