"""Ideals over polynomial and Laurent rings via Buchberger's algorithm.

Laurent ideals are handled through their polynomial "shadow": each generator
is multiplied by a monomial in the invertible variables until all exponents
are nonnegative, and the resulting ideal is saturated by the product of the
invertible variables.  All cached bases are bases of that saturated ideal.

The engine works on bare term maps ``{exponent tuple: Fraction}`` and is
shared by ideal and module (syzygy) computations; a module element is
encoded by prefixing each exponent with a one-hot position vector.
"""

from __future__ import annotations

import contextlib
import heapq
import contextvars
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .exactpoly import Exps, Poly, RingMismatchError, RingSpec, ring_check

Terms = Dict[Exps, Fraction]


class ResourceError(RuntimeError):
    """A computation exceeded its step budget."""

    def __init__(self, budget: int, consumed: int, what: str = "Groebner basis"):
        self.budget = budget
        self.consumed = consumed
        super().__init__(f"{what} computation exceeded step budget {budget} ({consumed} steps)")


_step_budget: contextvars.ContextVar[Optional[int]] = contextvars.ContextVar("step_budget", default=None)


@contextlib.contextmanager
def step_budget(n: Optional[int]):
    """Apply a reduction-step budget to every Groebner computation in the block."""
    token = _step_budget.set(n)
    try:
        yield
    finally:
        _step_budget.reset(token)


class _Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit=None):
        self.limit = _step_budget.get() if limit is None else limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise ResourceError(self.limit, self.used)


# monomial orders -------------------------------------------------------------

def grevlex_key(e: Exps):
    return (sum(e), tuple(-a for a in reversed(e)))


@dataclass(frozen=True)
class MonomialOrder:
    """``grevlex``, ``lex``, or ``block`` (grevlex on the first ``split``
    variables, ties broken by grevlex on the rest)."""

    kind: str = "grevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, e: Exps):
        if self.kind == "grevlex":
            return grevlex_key(e)
        if self.kind == "lex":
            return e
        return (grevlex_key(e[: self.split]), grevlex_key(e[self.split:]))

    def __str__(self):
        return self.kind if self.kind != "block" else f"block({self.split})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def order_from_name(name: str) -> MonomialOrder:
    if name.startswith("block(") and name.endswith(")"):
        return MonomialOrder("block", int(name[6:-1]))
    return MonomialOrder(name)


def _cached(key: Callable) -> Callable:
    cache = {}

    def k(e):
        v = cache.get(e)
        if v is None:
            v = cache[e] = key(e)
        return v

    return k


# engine ----------------------------------------------------------------------

_le = int.__le__


class _Desc:
    """Heap entry ordering monomials by descending key."""

    __slots__ = ("k", "e")

    def __init__(self, k, e):
        self.k, self.e = k, e

    def __lt__(self, other):
        return other.k < self.k

def _divides(a: Exps, b: Exps) -> bool:
    return all(map(_le, a, b))


def _lcm(a: Exps, b: Exps) -> Exps:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a: Exps, b: Exps) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _lead(p: Terms, key) -> Exps:
    return max(p, key=key)


def _reduce(p: Terms, basis: Sequence[Tuple[Exps, Terms]], key, budget: _Budget) -> Terms:
    """Full reduction of ``p`` by monic polynomials ``(lead, terms)``."""
    p = dict(p)
    rem: Terms = {}
    # leads pop off a heap; stale entries (cancelled terms) are skipped
    heap = [_Desc(key(e), e) for e in p]
    heapq.heapify(heap)
    queued = set(p)
    while heap:
        m = heapq.heappop(heap).e
        queued.discard(m)
        c = p.get(m)
        if c is None:
            continue
        for lm, g in basis:
            if all(map(_le, lm, m)):
                q = tuple(a - b for a, b in zip(m, lm))
                del p[m]
                for ge, gc in g.items():
                    if ge == lm:
                        continue
                    t = tuple(a + b for a, b in zip(ge, q))
                    v = p.get(t, 0) - c * gc
                    if v:
                        p[t] = v
                        if t not in queued:
                            queued.add(t)
                            heapq.heappush(heap, _Desc(key(t), t))
                    else:
                        p.pop(t, None)
                budget.tick()
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def _monic(p: Terms, key) -> Tuple[Exps, Terms]:
    lm = _lead(p, key)
    inv = 1 / p[lm]
    return lm, {e: c * inv for e, c in p.items()}


def buchberger(polys: Iterable[Terms], key, npos: int = 0, budget: _Budget = None) -> List[Terms]:
    """Reduced Groebner basis of the given term maps, sorted by descending lead.

    ``npos`` > 0 switches to module mode: the first ``npos`` exponent
    coordinates are a one-hot position and only same-position pairs are formed.
    """
    key = _cached(key)
    budget = budget or _Budget()
    store: List[Tuple[Exps, Terms]] = []
    G: List[int] = []
    B: List[Tuple[int, int, Exps]] = []

    def same_pos(a, b):
        return a[:npos] == b[:npos]

    def useless(a, b):
        # product criterion does not hold for modules
        return npos == 0 and _coprime(a, b)

    def update(h):
        nonlocal G, B
        hl = store[h][0]
        C = [g for g in G if same_pos(store[g][0], hl)]
        D: List[int] = []
        while C:
            g1 = C.pop(0)
            l1 = _lcm(hl, store[g1][0])
            if useless(hl, store[g1][0]) or not any(
                    _divides(_lcm(hl, store[g2][0]), l1) for g2 in C + D):
                D.append(g1)
        E = [(g, h, _lcm(store[g][0], hl)) for g in D if not useless(hl, store[g][0])]
        keep = []
        for a, b, l in B:
            if _divides(hl, l) and _lcm(store[a][0], hl) != l and _lcm(hl, store[b][0]) != l:
                continue
            keep.append((a, b, l))
        B = keep + E
        G = [g for g in G if not _divides(hl, store[g][0])] + [h]

    def add(p: Terms) -> bool:
        lm, p = _monic(p, key)
        if npos == 0 and not any(lm):
            return True
        store.append((lm, p))
        update(len(store) - 1)
        return False

    for f in polys:
        if f:
            f = _reduce(f, [store[g] for g in G], key, budget) if G else dict(f)
            if f and add(f):
                return [{(0,) * len(next(iter(f))): Fraction(1)}]

    while B:
        i = min(range(len(B)), key=lambda j: (key(B[j][2]), B[j][0], B[j][1]))
        a, b, l = B.pop(i)
        (la, pa), (lb, pb) = store[a], store[b]
        qa = tuple(x - y for x, y in zip(l, la))
        qb = tuple(x - y for x, y in zip(l, lb))
        s: Terms = {}
        for e, c in pa.items():
            s[tuple(x + y for x, y in zip(e, qa))] = c
        for e, c in pb.items():
            t = tuple(x + y for x, y in zip(e, qb))
            v = s.get(t, 0) - c
            if v:
                s[t] = v
            else:
                s.pop(t, None)
        budget.tick()
        h = _reduce(s, [store[g] for g in G], key, budget)
        if h and add(h):
            return [{(0,) * len(l): Fraction(1)}]

    final = []
    for g in G:
        others = [store[o] for o in G if o != g]
        lm, p = store[g]
        tail = dict(p)
        del tail[lm]
        tail = _reduce(tail, others, key, budget) if tail else tail
        tail[lm] = Fraction(1)
        final.append((lm, tail))
    final.sort(key=lambda t: key(t[0]), reverse=True)
    return [p for _, p in final]


def _spoly_reduces(pa: Terms, pb: Terms, basis: List[Terms], key) -> bool:
    key = _cached(key)
    la, lb = _lead(pa, key), _lead(pb, key)
    l = _lcm(la, lb)
    ca, cb = pa[la], pb[lb]
    s: Terms = {}
    qa = tuple(x - y for x, y in zip(l, la))
    qb = tuple(x - y for x, y in zip(l, lb))
    for e, c in pa.items():
        s[tuple(x + y for x, y in zip(e, qa))] = c / ca
    for e, c in pb.items():
        t = tuple(x + y for x, y in zip(e, qb))
        v = s.get(t, 0) - c / cb
        if v:
            s[t] = v
        else:
            s.pop(t, None)
    monic = [_monic(g, key) for g in basis]
    return not _reduce(s, monic, key, _Budget())


def _block_key(n: int, elim: Sequence[int], rest_key):
    elim = tuple(elim)
    es = set(elim)
    rest = tuple(i for i in range(n) if i not in es)
    width = max(rest, default=-1) + 1

    def key(e):
        r = [0] * width
        for i in rest:
            r[i] = e[i]
        return (grevlex_key(tuple(e[i] for i in elim)), rest_key(tuple(r)))

    return key


def _eliminating_basis(gens: List[Terms], n: int, elim: Iterable[int], rest_key,
                       sat: Optional[Terms] = None, budget: _Budget = None) -> List[Terms]:
    """Basis of ``(ideal(gens) : sat^inf) cap k[vars not in elim]``.

    ``gens`` live on ``n`` coordinates.  The returned term maps also have ``n``
    coordinates (eliminated ones are zero) and form the reduced basis for the
    order ``rest_key`` restricted to the surviving variables.
    """
    elim = sorted(set(elim))
    if sat is None and not elim:
        return buchberger(gens, rest_key, budget=budget)
    if sat is not None:
        lifted = [{e + (0,): c for e, c in g.items()} for g in gens]
        tpoly = {(0,) * (n + 1): Fraction(1)}
        for e, c in sat.items():
            t = e + (1,)
            tpoly[t] = tpoly.get(t, 0) - c
        lifted.append({e: c for e, c in tpoly.items() if c})
        m = n + 1
        elim_all = elim + [n]
    else:
        lifted, m, elim_all = gens, n, elim

    def rk(e):
        return rest_key(e[:n])

    gb = buchberger(lifted, _block_key(m, elim_all, rk), budget=budget)
    out = []
    for g in gb:
        if all(e[i] == 0 for e in g for i in elim_all):
            out.append({e[:n]: c for e, c in g.items()})
    return out


# ideals ----------------------------------------------------------------------

def _clear(p: Poly) -> Tuple[Terms, Exps]:
    """Shift a Laurent polynomial into the polynomial shadow.

    Returns the shifted terms and the (nonnegative) shift that was applied.
    """
    n = p.ring.nvars
    shift = [0] * n
    for e in p.terms:
        for i, a in enumerate(e):
            if a < 0 and -a > shift[i]:
                shift[i] = -a
    shift = tuple(shift)
    if not any(shift):
        return dict(p.terms), shift
    return {tuple(a + s for a, s in zip(e, shift)): c for e, c in p.terms.items()}, shift


def _unit_product(ring: RingSpec) -> Optional[Terms]:
    inv = ring.invertible_indices
    if not inv:
        return None
    return {tuple(1 if i in inv else 0 for i in range(ring.nvars)): Fraction(1)}


class Ideal:
    """An ideal given by generators, with cached reduced Groebner bases."""

    def __init__(self, ring: RingSpec, generators: Iterable = ()):
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            elif not isinstance(g, Poly):
                g = ring.const(g)
            if g.ring != ring:
                raise RingMismatchError("generator lives in a different ring")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators: Tuple[Poly, ...] = tuple(gens)
        self._cache: Dict[MonomialOrder, Tuple[Terms, ...]] = {}

    @classmethod
    def unit(cls, ring: RingSpec) -> "Ideal":
        return cls(ring, [ring.one()])

    # bases

    def _shadow_basis(self, order: MonomialOrder = GREVLEX) -> Tuple[Terms, ...]:
        if order not in self._cache:
            gens = [_clear(g)[0] for g in self.generators]
            gb = _eliminating_basis(gens, self.ring.nvars, (), order.key, _unit_product(self.ring))
            self._cache.setdefault(order, tuple(gb))
        return self._cache[order]

    def groebner(self, order: MonomialOrder = GREVLEX) -> Tuple[Poly, ...]:
        return tuple(Poly(self.ring, g) for g in self._shadow_basis(order))

    def is_unit(self) -> bool:
        gb = self._shadow_basis()
        return len(gb) == 1 and all(not any(e) for e in gb[0])

    def is_zero(self) -> bool:
        return not self._shadow_basis()

    def leading_monomials(self, order: MonomialOrder = GREVLEX) -> List[Exps]:
        k = order.key
        return [max(g, key=k) for g in self._shadow_basis(order)]

    # membership

    def reduce(self, f: Poly, order: MonomialOrder = GREVLEX, shift: Exps = None) -> Poly:
        """Remainder of ``f``; for Laurent ``f`` the remainder of its shifted
        shadow, shifted back.  A fixed ``shift`` makes this linear in ``f``."""
        if f.ring != self.ring:
            raise RingMismatchError("polynomial and ideal live in different rings")
        if shift is None:
            terms, shift = _clear(f)
        else:
            terms = {tuple(a + s for a, s in zip(e, shift)): c for e, c in f.terms.items()}
        gb = self._shadow_basis(order)
        k = _cached(order.key)
        basis = [(max(g, key=k), g) for g in gb]
        rem = _reduce(terms, basis, k, _Budget()) if basis else terms
        if any(shift):
            rem = {tuple(a - s for a, s in zip(e, shift)): c for e, c in rem.items()}
        return Poly(self.ring, rem)

    def __contains__(self, f) -> bool:
        if isinstance(f, str):
            f = self.ring.parse(f)
        elif not isinstance(f, Poly):
            f = self.ring.const(f)
        return self.reduce(f).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        if other.ring != self.ring:
            raise RingMismatchError("ideals live in different rings")
        return all(g in self for g in other.generators)

    def equals(self, other: "Ideal") -> bool:
        if other.ring != self.ring:
            raise RingMismatchError("ideals live in different rings")
        return self._shadow_basis(GREVLEX) == other._shadow_basis(GREVLEX)

    def __add__(self, other) -> "Ideal":
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatchError("ideals live in different rings")
            return Ideal(self.ring, self.generators + other.generators)
        return Ideal(self.ring, self.generators + tuple(other))

    def __str__(self):
        gb = self.groebner()
        return "(" + ", ".join(str(g) for g in gb) + ")" if gb else "(0)"

    def __repr__(self):
        return f"Ideal({self.ring.names}, {[str(g) for g in self.generators]})"

    def basis_strings(self) -> List[str]:
        return [str(g) for g in self.groebner()]


def groebner_basis(I: Ideal, order: MonomialOrder = GREVLEX) -> Ideal:
    """An ideal whose generators are the reduced basis, with cache filled."""
    gb = I.groebner(order)
    out = Ideal(I.ring, gb)
    out._cache[order] = I._cache[order]
    return out


def normal_form(f: Poly, I: Ideal, order: MonomialOrder = GREVLEX) -> Poly:
    return I.reduce(f, order)


def ideal_member(f: Poly, I: Ideal) -> bool:
    ring_check(f, I.ring.zero())
    return f in I


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    return I.contains_ideal(J)


def ideal_eq(I: Ideal, J: Ideal) -> bool:
    return I.equals(J)


def radical_member(f: Poly, I: Ideal) -> bool:
    """Rabinowitsch: ``f`` is in the radical iff ``1 in I + (1 - t f)``."""
    ring_check(f, I.ring.zero())
    n = I.ring.nvars
    gens = [{e + (0,): c for e, c in _clear(g)[0].items()} for g in I.generators]
    fc, _ = _clear(f)
    rab = {(0,) * (n + 1): Fraction(1)}
    for e, c in fc.items():
        t = e + (1,)
        rab[t] = rab.get(t, 0) - c
    gens.append({e: c for e, c in rab.items() if c})
    sat = _unit_product(I.ring)
    sat = {e + (0,): c for e, c in sat.items()} if sat else None
    gb = _eliminating_basis(gens, n + 1, (), grevlex_key, sat)
    return len(gb) == 1 and not any(next(iter(gb[0])))


def _drop_vars(ring: RingSpec, idx: Iterable[int]) -> RingSpec:
    idx = set(idx)
    return RingSpec(tuple(v for i, v in enumerate(ring.variables) if i not in idx))


def eliminate(I: Ideal, vars: Iterable[str], order: MonomialOrder = GREVLEX) -> Ideal:
    """``I cap k[remaining variables]`` as an ideal of the smaller ring."""
    names = list(vars)
    idx = sorted(I.ring.index(v) for v in names)
    if not idx:
        return I
    gens = [_clear(g)[0] for g in I.generators]
    n = I.ring.nvars
    gb = _eliminating_basis(gens, n, idx, order.key, _unit_product(I.ring))
    sub = _drop_vars(I.ring, idx)
    keep = [i for i in range(n) if i not in set(idx)]
    return Ideal(sub, [Poly(sub, {tuple(e[i] for i in keep): c for e, c in g.items()}) for g in gb])


def saturate(I: Ideal, f: Poly) -> Ideal:
    """``I : f^inf``, via elimination of ``t`` from ``I + (1 - t f)``."""
    ring_check(f, I.ring.zero())
    if f.is_zero():
        return Ideal.unit(I.ring)
    fc, _ = _clear(f)
    y = _unit_product(I.ring)
    if y:
        (ye, _), = y.items()
        fc = {tuple(a + b for a, b in zip(e, ye)): c for e, c in fc.items()}
    gens = [_clear(g)[0] for g in I.generators]
    gb = _eliminating_basis(gens, I.ring.nvars, (), grevlex_key, fc)
    out = Ideal(I.ring, [Poly(I.ring, g) for g in gb])
    out._cache[GREVLEX] = tuple(gb)
    return out


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I cap J`` by eliminating ``t`` from ``t I + (1 - t) J``."""
    if I.ring != J.ring:
        raise RingMismatchError("ideals live in different rings")
    n = I.ring.nvars
    gens = []
    for g in I.generators:
        gens.append({e + (1,): c for e, c in _clear(g)[0].items()})
    for h in J.generators:
        hc = _clear(h)[0]
        d = {}
        for e, c in hc.items():
            d[e + (0,)] = c
            d[e + (1,)] = -c
        gens.append(d)
    sat = _unit_product(I.ring)
    sat = {e + (0,): c for e, c in sat.items()} if sat else None
    gb = _eliminating_basis(gens, n + 1, [n], grevlex_key, sat)
    return Ideal(I.ring, [Poly(I.ring, {e[:n]: c for e, c in g.items()}) for g in gb])


# syzygies --------------------------------------------------------------------

@dataclass(frozen=True)
class SyzygyBasis:
    row: Tuple[Poly, ...]
    generators: Tuple[Tuple[Poly, ...], ...]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def syzygies(row: Sequence[Poly]) -> SyzygyBasis:
    """Generators of ``{g : sum g_i row_i = 0}``.

    Computed as the position-over-term basis of the module generated by
    ``(row_i, e_i)``; basis elements with empty first slot are the syzygies.
    """
    if not row:
        raise ValueError("syzygies of an empty row")
    ring = ring_check(*row)
    r = len(row)
    p = r + 1
    cleared = [_clear(a) for a in row]
    elems = []
    for i, (terms, _) in enumerate(cleared):
        d = {}
        head = (1,) + (0,) * r
        for e, c in terms.items():
            d[head + e] = c
        pos = tuple(1 if j == i + 1 else 0 for j in range(p))
        d[pos + (0,) * ring.nvars] = Fraction(1)
        elems.append(d)

    def key(e):
        return (e[:p], grevlex_key(e[p:]))

    gb = buchberger(elems, key, npos=p)
    gens = []
    for g in gb:
        if any(e[0] for e in g):
            continue
        vec = []
        for i in range(r):
            terms = {e[p:]: c for e, c in g.items() if e[i + 1]}
            shift = cleared[i][1]
            vec.append(Poly(ring, terms).mul_monomial(shift) if any(shift) else Poly(ring, terms))
        gens.append(tuple(vec))
    return SyzygyBasis(tuple(row), tuple(gens))


def is_groebner(basis: Sequence[Poly], order: MonomialOrder = GREVLEX) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    terms = [dict(_clear(b)[0]) for b in basis if b]
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            if not _spoly_reduces(terms[i], terms[j], terms, order.key):
                return False
    return True
