"""Hopf structures on k[G_a^s x G_m^t] and the derivation families they carry.

Primitive coordinates ``x`` have ``Dx = x_L + x_R``; grouplike coordinates
``y`` (invertible) have ``Dy = y_L y_R``.  Everything here is checked on
generators, which suffices because both sides of each identity are
derivations or algebra maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exactpoly import (INVERTIBLE, POLYNOMIAL, Derivation, Poly, RingMismatchError, RingSpec,
                        apply_derivation, change_ring, substitute)
from .groebner import Ideal, eliminate
from .poisson import (CheckResult, PoissonStructure, bracket, check_jacobi, hamiltonian,
                      tensor_bracket)

PRIMITIVE = "primitive"
GROUPLIKE = "grouplike"


class HopfError(ValueError):
    def __init__(self, message: str, where=None):
        self.where = where
        super().__init__(message)


@dataclass(frozen=True)
class HopfSignature:
    ring: RingSpec
    kinds: Tuple[str, ...]

    def __post_init__(self):
        if len(self.kinds) != self.ring.nvars:
            raise HopfError("one Hopf kind per variable is required")
        for (name, kind), h in zip(self.ring.variables, self.kinds):
            if h == PRIMITIVE and kind != POLYNOMIAL:
                raise HopfError(f"primitive variable {name} must be a polynomial variable")
            if h == GROUPLIKE and kind != INVERTIBLE:
                raise HopfError(f"grouplike variable {name} must be invertible")
            if h not in (PRIMITIVE, GROUPLIKE):
                raise HopfError(f"unknown Hopf kind {h!r} for {name}")

    @classmethod
    def standard(cls, ring: RingSpec) -> "HopfSignature":
        """Polynomial variables primitive, invertible ones grouplike."""
        return cls(ring, tuple(PRIMITIVE if k == POLYNOMIAL else GROUPLIKE for _, k in ring.variables))

    @property
    def primitives(self) -> List[str]:
        return [n for n, h in zip(self.ring.names, self.kinds) if h == PRIMITIVE]

    @property
    def grouplikes(self) -> List[str]:
        return [n for n, h in zip(self.ring.names, self.kinds) if h == GROUPLIKE]

    @property
    def s(self) -> int:
        return len(self.primitives)

    @property
    def t(self) -> int:
        return len(self.grouplikes)

    @property
    def tensor(self) -> RingSpec:
        return self.ring.doubled()

    def kind_of(self, name: str) -> str:
        return self.kinds[self.ring.index(name)]


def _require(H: HopfSignature, f: Poly) -> None:
    if f.ring != H.ring:
        raise RingMismatchError("element is not in the Hopf ring")


def coproduct(H: HopfSignature, f: Poly) -> Poly:
    _require(H, f)
    T = H.tensor
    img = {}
    for n, h in zip(H.ring.names, H.kinds):
        L, R = T.var(f"{n}_L"), T.var(f"{n}_R")
        img[n] = L + R if h == PRIMITIVE else L * R
    return substitute(f, img, T)


def counit(H: HopfSignature, f: Poly) -> Fraction:
    _require(H, f)
    # x -> 0, y -> 1: keep the terms with no primitive factor
    prim = [i for i, h in enumerate(H.kinds) if h == PRIMITIVE]
    return sum((c for e, c in f.terms.items() if all(e[i] == 0 for i in prim)), Fraction(0))


def antipode(H: HopfSignature, f: Poly) -> Poly:
    _require(H, f)
    img = {}
    for n, h in zip(H.ring.names, H.kinds):
        v = H.ring.var(n)
        img[n] = -v if h == PRIMITIVE else v.unit_inverse()
    return substitute(f, img, H.ring)


# tensor-square helpers used by the axiom tests

def apply_on_left(H: HopfSignature, u: Poly, fn) -> Poly:
    """``(fn (x) id)(u)`` for a map ``fn`` from the ring to itself, on the doubled ring."""
    T = H.tensor
    n = H.ring.nvars
    out = T.zero()
    for e, c in u.terms.items():
        a = fn(H.ring.monomial(e[:n]))
        b = T.monomial((0,) * n + e[n:], c)
        out = out + _embed_left(H, a) * b
    return out


def _embed_left(H: HopfSignature, a: Poly) -> Poly:
    n = H.ring.nvars
    return Poly(H.tensor, {e + (0,) * n: c for e, c in a.terms.items()})


def swap(H: HopfSignature, u: Poly) -> Poly:
    """Exchange the left and right tensor factors."""
    n = H.ring.nvars
    return Poly(H.tensor, {e[n:] + e[:n]: c for e, c in u.terms.items()})


def multiply_factors(H: HopfSignature, u: Poly) -> Poly:
    """The multiplication map ``a (x) b -> ab``."""
    n = H.ring.nvars
    out = {}
    for e, c in u.terms.items():
        m = tuple(a + b for a, b in zip(e[:n], e[n:]))
        out[m] = out.get(m, 0) + c
    return Poly(H.ring, {m: c for m, c in out.items() if c})


def lift_derivation(H: HopfSignature, d: Derivation) -> Derivation:
    """``d (x) 1 + 1 (x) d`` on the doubled ring."""
    if d.ring != H.ring:
        raise RingMismatchError("derivation is not on the Hopf ring")
    T = H.tensor
    n = H.ring.nvars
    lefts = [Poly(T, {e + (0,) * n: c for e, c in v.terms.items()}) for v in d.values]
    rights = [Poly(T, {(0,) * n + e: c for e, c in v.terms.items()}) for v in d.values]
    return Derivation(T, tuple(lefts + rights))


def is_poisson_hopf(P: PoissonStructure, H: HopfSignature) -> CheckResult:
    """Whether the coproduct is a Poisson map, checked on generator pairs.

    Witness: the first failing pair of variable names.
    """
    if P.ring != H.ring:
        raise RingMismatchError("Poisson structure and Hopf signature use different rings")
    if not check_jacobi(P):
        raise HopfError("the bracket fails the Jacobi identity")
    z = H.ring.gens()
    names = H.ring.names
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            lhs = coproduct(H, bracket(P, z[i], z[j]))
            rhs = tensor_bracket(P, coproduct(H, z[i]), coproduct(H, z[j]))
            if lhs != rhs:
                return CheckResult(False, (names[i], names[j]))
    return CheckResult(True)


def is_differential_hopf(D: Sequence[Derivation], H: HopfSignature) -> CheckResult:
    """Whether every derivation commutes with the coproduct.

    Witness: ``(index of the derivation, variable name)``.
    """
    for mu, d in enumerate(D):
        lifted = lift_derivation(H, d)
        for z in H.ring.names:
            v = H.ring.var(z)
            if apply_derivation(lifted, coproduct(H, v)) != coproduct(H, d(v)):
                return CheckResult(False, (mu, z))
    return CheckResult(True)


def prop_key_derivations(P: PoissonStructure, H: HopfSignature) -> List[Derivation]:
    """Hamiltonians of the primitives, then ``y^-1 {y, -}`` for each grouplike."""
    if P.ring != H.ring:
        raise RingMismatchError("Poisson structure and Hopf signature use different rings")
    out = [hamiltonian(P, H.ring.var(n)) for n in H.primitives]
    for n in H.grouplikes:
        y = H.ring.var(n)
        out.append(hamiltonian(P, y).scaled(y.unit_inverse()))
    return out


def span_certificate(D: Sequence[Derivation], P: PoissonStructure, H: HopfSignature = None) -> List[List[Poly]]:
    """Diagonal matrix ``M`` with ``D_k = M_kk * ham(z_k)`` in prop-key order.

    Only unit diagonal entries certify span equality; anything else raises.
    """
    H = H or HopfSignature.standard(P.ring)
    ring = P.ring
    order = H.primitives + H.grouplikes
    if len(D) != len(order):
        raise HopfError(f"expected {len(order)} derivations, got {len(D)}")
    diag = []
    for k, (d, n) in enumerate(zip(D, order)):
        z = ring.var(n)
        ham = hamiltonian(P, z)
        unit = ring.one() if H.kind_of(n) == PRIMITIVE else z.unit_inverse()
        if ham.is_zero():
            if not d.is_zero():
                raise HopfError(f"derivation {k} is not a unit multiple of the Hamiltonian of {n}")
            diag.append(unit)
            continue
        if d.is_zero() or ham.scaled(unit) != d:
            # the only units here are scalar multiples of Laurent monomials
            u = _unit_ratio(d, ham)
            if u is None:
                raise HopfError(f"derivation {k} is not a unit multiple of the Hamiltonian of {n}")
            unit = u
        diag.append(unit)
    size = len(diag)
    return [[diag[i] if i == j else ring.zero() for j in range(size)] for i in range(size)]


def _unit_ratio(d: Derivation, ham: Derivation):
    """A unit ``u`` with ``d = u * ham`` when one exists, else ``None``."""
    for a, b in zip(d.values, ham.values):
        if b:
            if not a:
                return None
            ea, ca = max(a.terms.items())
            eb, cb = max(b.terms.items())
            try:
                u = a.ring.monomial(tuple(x - y for x, y in zip(ea, eb)), ca / cb)
            except ValueError:
                return None
            return u if ham.scaled(u) == d else None
    return None


def d_group_check(H: HopfSignature, D: Sequence[Derivation]) -> bool:
    """Whether ``z -> (z, d_1 z, ..., d_m z)`` is a group homomorphism."""
    return bool(is_differential_hopf(D, H))


def isoadd_matrices(D: Sequence[Derivation], H: HopfSignature) -> List[List[List[Fraction]]]:
    """Matrices ``A`` with ``d(x_i) = sum_j A_ij x_j`` for each derivation."""
    if H.grouplikes:
        raise HopfError("linear matrices need an all-primitive signature")
    n = H.ring.nvars
    unit_vecs = [tuple(1 if k == j else 0 for k in range(n)) for j in range(n)]
    out = []
    for mu, d in enumerate(D):
        A = []
        for i, v in enumerate(d.values):
            if any(e not in unit_vecs for e in v.terms):
                raise HopfError(f"value of derivation {mu} on {H.ring.names[i]} is not linear homogeneous",
                                (mu, i))
            A.append([v.coefficient(unit_vecs[j]) for j in range(n)])
        out.append(A)
    return out


def forcom_map(H: HopfSignature, D: Sequence[Derivation]) -> List[Poly]:
    """Per derivation: ``(d x_1, ..., d x_s, y_1^-1 d y_1, ..., y_t^-1 d y_t)``."""
    if not d_group_check(H, D):
        raise HopfError("the section is not a group homomorphism")
    comps = []
    for mu, d in enumerate(D):
        for n in H.primitives:
            comps.append(d[n])
        for n in H.grouplikes:
            c = H.ring.var(n).unit_inverse() * d[n]
            if not c.is_polynomial():
                raise HopfError(f"component for derivation {mu} at {n} is not polynomial: {c}")
            comps.append(c)
    return comps


def forcom_target(H: HopfSignature, m: int) -> RingSpec:
    return RingSpec.of(*[f"w{k}" for k in range(1, m * H.ring.nvars + 1)])


def forcom_image_kernel(H: HopfSignature, D: Sequence[Derivation]) -> Tuple[Ideal, Ideal]:
    """Image closure (by elimination from the graph) and kernel of the forcom map."""
    comps = forcom_map(H, D)
    target = forcom_target(H, len(D))
    src = [(f"src{i}__{n}", k) for i, (n, k) in enumerate(H.ring.variables)]
    combined = target.extend(src)
    ren = {n: combined.var(s) for (n, _), (s, _) in zip(H.ring.variables, src)}
    graph = Ideal(combined, [combined.var(w) - substitute(c, ren, combined)
                             for w, c in zip(target.names, comps)])
    img = eliminate(graph, [s for s, _ in src])
    image = Ideal(target, [change_ring(g, target) for g in img.groebner()])
    kernel = Ideal(H.ring, comps)
    return image, kernel
