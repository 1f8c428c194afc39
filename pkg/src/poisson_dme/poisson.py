"""Poisson brackets given by a matrix of generator brackets."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exactpoly import (Derivation, Poly, RingMismatchError, RingSpec, apply_derivation,
                        monomials_upto, partial_derivative, ring_check)
from .groebner import Ideal
from .linalg import nullspace, rref


class AntisymmetryError(ValueError):
    pass


class NotPoissonError(ValueError):
    pass


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a generator-level check; ``witness`` names the first failure."""

    ok: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.ok


class PoissonStructure:
    """``B[i][j] = {z_i, z_j}``; the bracket is the induced biderivation."""

    def __init__(self, ring: RingSpec, B: Sequence[Sequence[Poly]]):
        n = ring.nvars
        if len(B) != n or any(len(row) != n for row in B):
            raise ValueError(f"bracket matrix must be {n}x{n}")
        for row in B:
            for b in row:
                if b.ring != ring:
                    raise RingMismatchError("bracket entry lives in a different ring")
        for i in range(n):
            if B[i][i]:
                raise AntisymmetryError(f"{{{ring.names[i]},{ring.names[i]}}} must vanish")
            for j in range(i + 1, n):
                if B[j][i] != -B[i][j]:
                    raise AntisymmetryError(
                        f"{{{ring.names[j]},{ring.names[i]}}} must equal -{{{ring.names[i]},{ring.names[j]}}}")
        self.ring = ring
        self.B: Tuple[Tuple[Poly, ...], ...] = tuple(tuple(r) for r in B)

    @classmethod
    def from_upper(cls, ring: RingSpec, brackets: Mapping[Tuple[str, str], object]) -> "PoissonStructure":
        """Build from ``{(a, b): {a, b}}``; missing pairs are zero and the
        lower triangle is filled by antisymmetry (conflicts are rejected)."""
        n = ring.nvars
        B: List[List[Optional[Poly]]] = [[None] * n for _ in range(n)]
        for (a, b), v in brackets.items():
            if isinstance(v, str):
                v = ring.parse(v)
            elif not isinstance(v, Poly):
                v = ring.const(v)
            i, j = ring.index(a), ring.index(b)
            if i == j:
                if v:
                    raise AntisymmetryError(f"{{{a},{a}}} must vanish")
                continue
            for (p, q, w) in ((i, j, v), (j, i, -v)):
                if B[p][q] is not None and B[p][q] != w:
                    raise AntisymmetryError(f"inconsistent entries for {{{a},{b}}}")
                B[p][q] = w
        zero = ring.zero()
        return cls(ring, [[zero if B[i][j] is None else B[i][j] for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, ring: RingSpec) -> "PoissonStructure":
        z = ring.zero()
        return cls(ring, [[z] * ring.nvars for _ in range(ring.nvars)])

    def __call__(self, f: Poly, g: Poly) -> Poly:
        return bracket(self, f, g)

    def entry(self, a: str, b: str) -> Poly:
        return self.B[self.ring.index(a)][self.ring.index(b)]

    def __eq__(self, other):
        return isinstance(other, PoissonStructure) and self.ring == other.ring and self.B == other.B

    def __hash__(self):
        return hash((self.ring, self.B))


def bracket(P: PoissonStructure, f: Poly, g: Poly) -> Poly:
    ring_check(f, g)
    if f.ring != P.ring:
        raise RingMismatchError("polynomials are not in the Poisson ring")
    n = P.ring.nvars
    df = [partial_derivative(f, i) for i in range(n)]
    dg = [partial_derivative(g, i) for i in range(n)]
    total = P.ring.zero()
    for i in range(n):
        for j in range(i + 1, n):
            b = P.B[i][j]
            if b:
                t = df[i] * dg[j] - df[j] * dg[i]
                if t:
                    total = total + b * t
    return total


def jacobiator(P: PoissonStructure, f: Poly, g: Poly, h: Poly) -> Poly:
    return (bracket(P, f, bracket(P, g, h)) + bracket(P, g, bracket(P, h, f))
            + bracket(P, h, bracket(P, f, g)))


def check_jacobi(P: PoissonStructure) -> CheckResult:
    """Jacobi on generator triples ``i < j < k``; this decides it everywhere,
    since the Jacobiator of a biderivation is a derivation in each slot."""
    z = P.ring.gens()
    names = P.ring.names
    n = len(z)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if jacobiator(P, z[i], z[j], z[k]):
                    return CheckResult(False, (names[i], names[j], names[k]))
    return CheckResult(True)


@dataclass(frozen=True)
class LieData:
    """Structure constants ``[x_i, x_j] = sum_k c[(i, j, k)] x_k`` (0-based)."""

    names: Tuple[str, ...]
    c: Mapping[Tuple[int, int, int], Fraction]

    @property
    def dim(self) -> int:
        return len(self.names)

    @classmethod
    def from_brackets(cls, names: Sequence[str], brackets: Mapping[Tuple[str, str], Mapping[str, object]]):
        """``{("e", "f"): {"h": 1}, ...}``; the antisymmetric partner of each
        listed pair is filled in when absent."""
        idx = {n: i for i, n in enumerate(names)}
        c: Dict[Tuple[int, int, int], Fraction] = {}
        for (a, b), combo in brackets.items():
            for k, v in combo.items():
                v = Fraction(v)
                if v:
                    c[(idx[a], idx[b], idx[k])] = v
        for (i, j, k), v in list(c.items()):
            c.setdefault((j, i, k), -v)
        return cls(tuple(names), c)

    def const(self, i, j, k) -> Fraction:
        return Fraction(self.c.get((i, j, k), 0))

    def is_antisymmetric(self) -> bool:
        n = self.dim
        return all(self.const(i, j, k) == -self.const(j, i, k)
                   for i in range(n) for j in range(n) for k in range(n))

    def satisfies_jacobi(self) -> bool:
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for m in range(n):
                        s = sum(self.const(j, k, l) * self.const(i, l, m)
                                + self.const(k, i, l) * self.const(j, l, m)
                                + self.const(i, j, l) * self.const(k, l, m) for l in range(n))
                        if s:
                            return False
        return True


def from_lie_algebra(L: LieData) -> PoissonStructure:
    """Symmetric-algebra bracket with ``{x_i, x_j} = [x_i, x_j]``."""
    if not L.is_antisymmetric():
        raise AntisymmetryError("structure constants must satisfy c_jik = -c_ijk")
    ring = RingSpec.of(*L.names)
    z = ring.gens()
    n = L.dim
    B = [[sum((z[k].scale(L.const(i, j, k)) for k in range(n)), ring.zero()) for j in range(n)]
         for i in range(n)]
    return PoissonStructure(ring, B)


def hamiltonian(P: PoissonStructure, a: Poly) -> Derivation:
    """The derivation ``{a, -}``."""
    if a.ring != P.ring:
        raise RingMismatchError("element is not in the Poisson ring")
    return Derivation(P.ring, tuple(bracket(P, a, z) for z in P.ring.gens()))


def generator_hamiltonians(P: PoissonStructure) -> List[Derivation]:
    return [hamiltonian(P, z) for z in P.ring.gens()]


def is_poisson_ideal(P: PoissonStructure, I: Ideal) -> bool:
    if I.ring != P.ring:
        raise RingMismatchError("ideal is not in the Poisson ring")
    z = P.ring.gens()
    return all(bracket(P, zi, g) in I for g in I.generators for zi in z)


def _constants_upto(derivs: Sequence[Derivation], I: Ideal, d: int) -> List[Poly]:
    """Basis modulo ``I`` of ``{p : deg p <= d, D(p) in I for all D}``."""
    ring = I.ring
    if ring.is_laurent:
        monos = monomials_upto(ring, d)
    else:
        leads = I.leading_monomials()
        monos = [m for m in monomials_upto(ring, d)
                 if not any(all(a <= b for a, b in zip(l, m)) for l in leads)]
    monos.sort(key=lambda e: (sum(abs(a) for a in e), tuple(-a for a in reversed(e))), reverse=True)
    if not monos:
        return []
    inv = ring.invertible_indices
    # one shift for every reduction keeps the coefficient maps linear
    reach = d + max((v.degree() for D in derivs for v in D.values), default=0) + 1
    shift = tuple(reach if i in inv else 0 for i in range(ring.nvars))
    basis_polys = [ring.monomial(m) for m in monos]

    def coords(polys):
        cols = {}
        rows = []
        for p in polys:
            r = {}
            for e, c in p.terms.items():
                if e not in cols:
                    cols[e] = len(cols)
                r[cols[e]] = c
            rows.append(r)
        return rows, len(cols)

    constraints = []
    for D in derivs:
        images = [I.reduce(apply_derivation(D, m), shift=shift) for m in basis_polys]
        rows, ncols = coords(images)
        # transpose: one equation per output monomial
        for col in range(ncols):
            constraints.append([r.get(col, Fraction(0)) for r in rows])
    sol = nullspace(constraints, len(monos))
    if not sol:
        return []
    sol, _ = rref(sol, len(monos))
    polys = [sum((basis_polys[j].scale(v[j]) for j in range(len(monos)) if v[j]), ring.zero())
             for v in sol]
    if I.is_zero() or not ring.is_laurent:
        return polys
    # keep representatives that stay independent modulo I
    reduced = [I.reduce(p, shift=shift) for p in polys]
    rows, ncols = coords(reduced)
    kept: List[Poly] = []
    current: List[List[Fraction]] = []
    for p, r in zip(polys, rows):
        vec = [r.get(c, Fraction(0)) for c in range(ncols)]
        if any(vec) and len(rref(current + [vec], ncols)[1]) > len(current):
            current.append(vec)
            kept.append(p)
    return kept


def poisson_center_upto(P: PoissonStructure, I: Ideal, d: int) -> List[Poly]:
    """Basis of the degree-``<= d`` part of the Poisson centre of ``A/I``.

    Representatives are reduced modulo ``I`` (standard monomials only) and
    returned in reduced echelon form with monic leading terms.
    """
    if not is_poisson_ideal(P, I):
        raise NotPoissonError("the ideal is not a Poisson ideal")
    return _constants_upto(generator_hamiltonians(P), I, d)


def d_constants_upto(derivs: Sequence[Derivation], I: Ideal, d: int) -> List[Poly]:
    """Same search for the joint kernel of an arbitrary derivation family."""
    return _constants_upto(list(derivs), I, d)


def tensor_ring(ring: RingSpec) -> RingSpec:
    return ring.doubled()


def left(f: Poly, doubled: RingSpec = None) -> Poly:
    """``f (x) 1`` in the doubled ring."""
    doubled = doubled or f.ring.doubled()
    n = f.ring.nvars
    return Poly(doubled, {e + (0,) * n: c for e, c in f.terms.items()})


def right(f: Poly, doubled: RingSpec = None) -> Poly:
    """``1 (x) f`` in the doubled ring."""
    doubled = doubled or f.ring.doubled()
    n = f.ring.nvars
    return Poly(doubled, {(0,) * n + e: c for e, c in f.terms.items()})


@functools.lru_cache(maxsize=64)
def doubled_structure(P: PoissonStructure) -> PoissonStructure:
    """Block-diagonal bracket: ``{a(x)b, a'(x)b'} = {a,a'}(x)bb' + aa'(x){b,b'}``."""
    D = P.ring.doubled()
    n = P.ring.nvars
    zero = D.zero()
    B = [[zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            B[i][j] = left(P.B[i][j], D)
            B[n + i][n + j] = right(P.B[i][j], D)
    return PoissonStructure(D, B)


def tensor_bracket(P: PoissonStructure, u: Poly, v: Poly) -> Poly:
    D = P.ring.doubled()
    if u.ring != D or v.ring != D:
        raise RingMismatchError("arguments must live in the doubled ring")
    return bracket(doubled_structure(P), u, v)
