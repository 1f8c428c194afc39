"""Exact sparse multivariate polynomials over the rationals.

A :class:`RingSpec` fixes an ordered list of variables, each either an
ordinary polynomial variable or an invertible (Laurent) one.  A :class:`Poly`
is an immutable map from integer exponent vectors to nonzero
:class:`fractions.Fraction` coefficients; two polynomials are equal exactly
when their term maps are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Scalar = Fraction
Exps = Tuple[int, ...]
Number = Union[int, Fraction]

POLYNOMIAL = "polynomial"
INVERTIBLE = "invertible"


class RingMismatchError(ValueError):
    pass


class NonUnitImageError(ValueError):
    """An invertible variable was sent to something that is not a unit."""


def _check_name(name: str) -> None:
    if not isinstance(name, str) or not name:
        raise ValueError(f"invalid variable name {name!r}")


@dataclass(frozen=True)
class RingSpec:
    """Ordered variables as ``(name, kind)`` pairs with ``kind`` in
    ``{"polynomial", "invertible"}``."""

    variables: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        seen = set()
        for name, kind in self.variables:
            _check_name(name)
            if kind not in (POLYNOMIAL, INVERTIBLE):
                raise ValueError(f"unknown variable kind {kind!r} for {name}")
            if name in seen:
                raise ValueError(f"duplicate variable name {name!r}")
            seen.add(name)

    @classmethod
    def of(cls, *names: str, invertible: Iterable[str] = ()) -> "RingSpec":
        inv = set(invertible)
        unknown = inv - set(names)
        if unknown:
            raise ValueError(f"invertible variables not in ring: {sorted(unknown)}")
        return cls(tuple((n, INVERTIBLE if n in inv else POLYNOMIAL) for n in names))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def invertible_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, (_, k) in enumerate(self.variables) if k == INVERTIBLE)

    @property
    def is_laurent(self) -> bool:
        return bool(self.invertible_indices)

    def kind(self, name: str) -> str:
        return self.variables[self.index(name)][1]

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.variables):
            if n == name:
                return i
        raise KeyError(f"unknown variable {name!r}")

    def __contains__(self, name) -> bool:
        return name in self.names

    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.var(n) for n in self.names)

    def var(self, name: str) -> "Poly":
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: Number) -> "Poly":
        c = Fraction(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exps: Sequence[int], coeff: Number = 1) -> "Poly":
        return Poly(self, {tuple(exps): Fraction(coeff)})

    def extend(self, variables: Iterable[Tuple[str, str]]) -> "RingSpec":
        return RingSpec(self.variables + tuple(variables))

    def fresh_name(self, stem: str) -> str:
        name = stem
        while name in self.names:
            name += "_"
        return name

    def doubled(self) -> "RingSpec":
        """The ring of ``A (x) A``: left copies ``z_L`` then right copies ``z_R``."""
        left = tuple((f"{n}_L", k) for n, k in self.variables)
        right = tuple((f"{n}_R", k) for n, k in self.variables)
        return RingSpec(left + right)

    def parse(self, text: str) -> "Poly":
        from .parsing import parse_poly

        return parse_poly(text, self)


class Poly:
    """Immutable sparse polynomial (Laurent in the invertible variables)."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping[Exps, Number] = None):
        self.ring = ring
        clean: Dict[Exps, Fraction] = {}
        if terms:
            n = ring.nvars
            inv = ring.invertible_indices
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent vector {e} has wrong length for {ring.names}")
                for i, a in enumerate(e):
                    if a < 0 and i not in inv:
                        raise ValueError(
                            f"negative exponent on non-invertible variable {ring.names[i]}")
                if c:
                    clean[tuple(e)] = Fraction(c)
        self.terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def _raw(cls, ring: RingSpec, terms: Dict[Exps, Fraction]) -> "Poly":
        # trusted, already clean
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"ring mismatch: {self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly._raw(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero scalar")
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, Poly) and other.is_unit_monomial():
            return self * other.unit_inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            if isinstance(n, int) and self.is_unit_monomial():
                return self.unit_inverse() ** (-n)
            raise ValueError("polynomial powers must be nonnegative integers")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Number) -> "Poly":
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return Poly._raw(self.ring, {e: v * c for e, v in self.terms.items()})

    def mul_monomial(self, exps: Exps, c: Number = 1) -> "Poly":
        c = Fraction(c)
        return Poly._raw(
            self.ring, {tuple(a + b for a, b in zip(e, exps)): v * c for e, v in self.terms.items()})

    # queries --------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[Exps, Fraction]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        zero = (0,) * self.ring.nvars
        return all(e == zero for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def is_unit_monomial(self) -> bool:
        """True for ``c * prod y_j^{n_j}`` with ``c != 0`` and only invertible ``y_j``."""
        if len(self.terms) != 1:
            return False
        (e,) = self.terms
        inv = self.ring.invertible_indices
        return all(a == 0 or i in inv for i, a in enumerate(e))

    def unit_inverse(self) -> "Poly":
        if not self.is_unit_monomial():
            raise NonUnitImageError(f"{self} is not a unit")
        ((e, c),) = self.terms.items()
        return Poly._raw(self.ring, {tuple(-a for a in e): 1 / c})

    def is_polynomial(self) -> bool:
        """No negative exponents anywhere."""
        return all(a >= 0 for e in self.terms for a in e)

    def degree(self) -> int:
        """Total degree, counting ``|exponent|`` for Laurent variables."""
        return max((sum(abs(a) for a in e) for e in self.terms), default=-1)

    def variables(self) -> Tuple[str, ...]:
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return tuple(self.ring.names[i] for i in sorted(used))

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    # presentation ---------------------------------------------------------

    def sorted_terms(self):
        """Terms in descending graded-reverse-lex order (by absolute degree)."""
        def key(item):
            e = item[0]
            return (sum(abs(a) for a in e), tuple(-a for a in reversed(e)))

        return sorted(self.terms.items(), key=key, reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for e, c in self.sorted_terms():
            mono = []
            for n, a in zip(names, e):
                if a == 1:
                    mono.append(n)
                elif a:
                    mono.append(f"{n}^{a}")
            m = "*".join(mono)
            mag = abs(c)
            if not m:
                body = str(mag)
            elif mag == 1:
                body = m
            else:
                body = f"{mag}*{m}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({str(self)!r})"


def ring_check(*polys: Poly) -> RingSpec:
    ring = polys[0].ring
    for p in polys[1:]:
        if p.ring != ring:
            raise RingMismatchError(f"ring mismatch: {ring.names} vs {p.ring.names}")
    return ring


def poly_arith(op: str, f: Poly, g=None) -> Poly:
    """``op`` in ``{"add", "mul", "pow"}``; for ``pow`` the second argument is
    a nonnegative integer."""
    if op == "add":
        ring_check(f, g)
        return f + g
    if op == "mul":
        ring_check(f, g)
        return f * g
    if op == "pow":
        if not isinstance(g, int) or g < 0:
            raise ValueError("pow exponent must be a nonnegative integer")
        return f ** g
    raise ValueError(f"unknown op {op!r}")


def partial_derivative(f: Poly, v: Union[str, int]) -> Poly:
    i = f.ring.index(v) if isinstance(v, str) else v
    if not 0 <= i < f.ring.nvars:
        raise KeyError(f"unknown variable index {v}")
    out = {}
    for e, c in f.terms.items():
        a = e[i]
        if a:
            e2 = list(e)
            e2[i] = a - 1
            out[tuple(e2)] = c * a
    return Poly._raw(f.ring, out)


@dataclass(frozen=True)
class Derivation:
    """A derivation given by its value on each ring variable."""

    ring: RingSpec
    values: Tuple[Poly, ...]

    def __post_init__(self):
        if len(self.values) != self.ring.nvars:
            raise ValueError("a derivation needs one value per ring variable")
        for v in self.values:
            if v.ring != self.ring:
                raise RingMismatchError("derivation value lives in a different ring")

    @classmethod
    def from_map(cls, ring: RingSpec, values: Mapping[str, Poly]) -> "Derivation":
        unknown = set(values) - set(ring.names)
        if unknown:
            raise KeyError(f"unknown variables {sorted(unknown)}")
        return cls(ring, tuple(values.get(n, ring.zero()) for n in ring.names))

    @classmethod
    def zero(cls, ring: RingSpec) -> "Derivation":
        return cls(ring, tuple(ring.zero() for _ in ring.names))

    def __call__(self, f: Poly) -> Poly:
        return apply_derivation(self, f)

    def __getitem__(self, name: str) -> Poly:
        return self.values[self.ring.index(name)]

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def scaled(self, a: Poly) -> "Derivation":
        """The derivation ``a * d``."""
        return Derivation(self.ring, tuple(a * v for v in self.values))

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.ring != self.ring:
            raise RingMismatchError("derivations over different rings")
        return Derivation(self.ring, tuple(a + b for a, b in zip(self.values, other.values)))

    def as_dict(self) -> Dict[str, str]:
        return {n: str(v) for n, v in zip(self.ring.names, self.values)}

    def __str__(self):
        return "(" + ", ".join(f"{n} -> {v}" for n, v in zip(self.ring.names, self.values)) + ")"


def apply_derivation(d: Derivation, f: Poly) -> Poly:
    if d.ring != f.ring:
        raise RingMismatchError("derivation and polynomial live in different rings")
    total = f.ring.zero()
    for i, v in enumerate(d.values):
        if v:
            df = partial_derivative(f, i)
            if df:
                total = total + df * v
    return total


def coeff_derivative(f: Poly) -> Poly:
    """Apply the base derivation to the coefficients of ``f``.

    Coefficients are rationals, which are constants, so this is the zero map.
    """
    return f.ring.zero()


def substitute(f: Poly, assignment: Mapping[str, Poly], target: RingSpec = None) -> Poly:
    """Ring homomorphism sending each variable of ``f`` to its image.

    Variables missing from ``assignment`` are sent to themselves when the
    target ring contains them.  Negative powers need unit images.
    """
    if target is None:
        images = [p for p in assignment.values() if isinstance(p, Poly)]
        target = images[0].ring if images else f.ring
    imgs = []
    for name, kind in f.ring.variables:
        if name in assignment:
            img = assignment[name]
            if not isinstance(img, Poly):
                img = target.const(img)
        elif name in target:
            img = target.var(name)
        else:
            img = None
        if img is not None and img.ring != target:
            raise RingMismatchError(f"image of {name} is in the wrong ring")
        imgs.append(img)
    cache: Dict[Tuple[int, int], Poly] = {}

    def power(i: int, a: int) -> Poly:
        key = (i, a)
        if key not in cache:
            img = imgs[i]
            if a >= 0:
                cache[key] = img ** a
            else:
                if not img.is_unit_monomial():
                    raise NonUnitImageError(
                        f"{f.ring.names[i]} appears with a negative power but its image {img} is not a unit")
                cache[key] = img.unit_inverse() ** (-a)
        return cache[key]

    total: Dict[Exps, Fraction] = {}
    for e, c in f.terms.items():
        term = target.const(c)
        for i, a in enumerate(e):
            if a:
                if imgs[i] is None:
                    raise KeyError(f"variable {f.ring.names[i]} has no image")
                term = term * power(i, a)
        for e2, c2 in term.terms.items():
            v = total.get(e2, 0) + c2
            if v:
                total[e2] = v
            else:
                total.pop(e2, None)
    return Poly._raw(target, total)


def change_ring(f: Poly, target: RingSpec) -> Poly:
    """Re-express ``f`` in a ring that contains all of its variables by name."""
    if f.ring == target:
        return f
    pos = {}
    for i, n in enumerate(f.ring.names):
        if n in target:
            pos[i] = target.index(n)
    out = {}
    for e, c in f.terms.items():
        e2 = [0] * target.nvars
        for i, a in enumerate(e):
            if a:
                if i not in pos:
                    raise KeyError(f"variable {f.ring.names[i]} is not in the target ring")
                e2[pos[i]] = a
        out[tuple(e2)] = c
    return Poly(target, out)


def monomials_upto(ring: RingSpec, d: int):
    """All monomials of (absolute) degree at most ``d``, Laurent-aware."""
    inv = set(ring.invertible_indices)
    n = ring.nvars
    out = []

    def rec(i, left, acc):
        if i == n:
            out.append(tuple(acc))
            return
        lo = -left if i in inv else 0
        for a in range(lo, left + 1):
            acc.append(a)
            rec(i + 1, left - abs(a), acc)
            acc.pop()

    rec(0, d, [])
    return out
