import pytest
from hypothesis import given, settings, strategies as st

from poisson_dme.exactpoly import Derivation, RingSpec, apply_derivation, substitute
from poisson_dme.hopf import (GROUPLIKE, PRIMITIVE, HopfError, HopfSignature, antipode,
                              apply_on_left, coproduct, counit, d_group_check, forcom_image_kernel,
                              forcom_map, is_differential_hopf, is_poisson_hopf, isoadd_matrices,
                              lift_derivation, multiply_factors, prop_key_derivations,
                              span_certificate, swap)
from poisson_dme.groebner import Ideal, ideal_eq
from poisson_dme.poisson import PoissonStructure, bracket, generator_hamiltonians, tensor_bracket
from corpus import HOPF_CORPUS, LAURENT_X, LAURENT_XY, SL2
from strategies import polys

L = RingSpec.of("x", "y", invertible=["y"])
H = HopfSignature.standard(L)
T = H.tensor
G2 = RingSpec.of("x1", "x2")
HG2 = HopfSignature.standard(G2)
GA = RingSpec.of("x")
GM = RingSpec.of("y", invertible=["y"])


def D(ring, **vals):
    return Derivation.from_map(ring, {k: ring.parse(v) for k, v in vals.items()})


PILLAY = D(L, y="x*y")


def test_signature_validation():
    with pytest.raises(HopfError):
        HopfSignature(L, (GROUPLIKE, GROUPLIKE))
    with pytest.raises(HopfError):
        HopfSignature(L, (PRIMITIVE, PRIMITIVE))
    assert (H.s, H.t) == (1, 1)


def test_coproduct_examples():
    assert coproduct(H, L.var("x")) == T.parse("x_L + x_R")
    assert coproduct(H, L.var("y")) == T.parse("y_L*y_R")
    assert coproduct(H, L.parse("x*y")) == T.parse("(x_L + x_R)*y_L*y_R")
    assert coproduct(H, L.parse("y^-2")) == T.parse("y_L^-2*y_R^-2")
    assert counit(H, L.parse("3*x*y + 2*y^-1 - 5")) == -3
    assert antipode(H, L.parse("x*y^2")) == L.parse("-x*y^-2")


def test_lift_examples():
    lifted = lift_derivation(H, D(L, y="x*y"))
    assert lifted.as_dict() == {"x_L": "0", "y_L": "x_L*y_L", "x_R": "0", "y_R": "x_R*y_R"}
    assert lift_derivation(H, Derivation.zero(L)).is_zero()
    d = D(L, x="y^-1", y="x")
    u = T.parse("x_L*y_R")
    assert apply_derivation(lift_derivation(H, d), u) == T.parse("y_L^-1*y_R + x_L*x_R")


def test_poisson_hopf_examples():
    assert is_poisson_hopf(SL2, HopfSignature.standard(SL2.ring))
    assert is_poisson_hopf(LAURENT_XY, H)
    res = is_poisson_hopf(LAURENT_X, H)
    assert not res and res.witness == ("x", "y")


def test_poisson_hopf_requires_jacobi():
    R3 = RingSpec.of("x", "y", "z")
    bad = PoissonStructure.from_upper(R3, {("x", "y"): "z + x^2", ("y", "z"): "x", ("z", "x"): "y"})
    with pytest.raises(HopfError):
        is_poisson_hopf(bad, HopfSignature.standard(R3))


def test_sl2_sweedler_chain():
    # Delta{x_i, x_j} = {x_i,x_j}_L + {x_i,x_j}_R = {Delta x_i, Delta x_j}
    Hs = HopfSignature.standard(SL2.ring)
    for a in SL2.ring.gens():
        for b in SL2.ring.gens():
            lhs = coproduct(Hs, bracket(SL2, a, b))
            mid = tensor_bracket(SL2, coproduct(Hs, a), coproduct(Hs, b))
            assert lhs == mid


def test_differential_hopf_examples():
    assert is_differential_hopf([PILLAY], H)
    res = is_differential_hopf([D(GA, x="x^2")], HopfSignature.standard(GA))
    assert not res and res.witness == (0, "x")
    assert is_differential_hopf([Derivation.zero(L)] * 2, H)


def test_prop_key_examples():
    Dk = prop_key_derivations(LAURENT_XY, H)
    assert [d.as_dict() for d in Dk] == [{"x": "0", "y": "x*y"}, {"x": "-x", "y": "0"}]
    Hs = HopfSignature.standard(SL2.ring)
    assert prop_key_derivations(SL2, Hs) == generator_hamiltonians(SL2)
    assert all(d.is_zero() for d in prop_key_derivations(PoissonStructure.zero(L), H))


def test_span_certificate_examples():
    Dk = prop_key_derivations(LAURENT_XY, H)
    M = span_certificate(Dk, LAURENT_XY, H)
    assert [str(M[i][j]) for i in range(2) for j in range(2)] == ["1", "0", "0", "y^-1"]
    Hs = HopfSignature.standard(SL2.ring)
    M = span_certificate(prop_key_derivations(SL2, Hs), SL2, Hs)
    assert all(M[i][j] == (1 if i == j else 0) for i in range(3) for j in range(3))
    with pytest.raises(HopfError):
        span_certificate([Derivation.zero(L), Dk[1]], LAURENT_XY, H)
    # a non-unit multiple is rejected as well
    with pytest.raises(HopfError):
        span_certificate([Dk[0].scaled(L.parse("x + 1")), Dk[1]], LAURENT_XY, H)


def test_d_group_examples():
    assert d_group_check(H, [PILLAY])
    assert not d_group_check(HopfSignature.standard(GM), [D(GM, y="y^2")])
    assert d_group_check(H, [Derivation.zero(L)])


def test_isoadd_examples():
    assert isoadd_matrices([D(G2, x1="x2")], HG2) == [[[0, 1], [0, 0]]]
    assert isoadd_matrices([Derivation.zero(G2)] * 2, HG2) == [[[0, 0], [0, 0]]] * 2
    with pytest.raises(HopfError) as err:
        isoadd_matrices([D(GA, x="x^2")], HopfSignature.standard(GA))
    assert err.value.where == (0, 0)
    assert not d_group_check(HopfSignature.standard(GA), [D(GA, x="x^2")])


def test_forcom_examples():
    assert forcom_map(H, [PILLAY]) == [L.zero(), L.var("x")]
    image, kernel = forcom_image_kernel(H, [PILLAY])
    W = image.ring
    assert ideal_eq(image, Ideal(W, ["w1"]))
    assert ideal_eq(kernel, Ideal(L, ["x"]))
    Dk = prop_key_derivations(LAURENT_XY, H)
    assert forcom_map(H, Dk) == [L.zero(), L.var("x"), -L.var("x"), L.zero()]
    image, kernel = forcom_image_kernel(H, Dk)
    assert ideal_eq(image, Ideal(image.ring, ["w1", "w4", "w2 + w3"]))
    assert ideal_eq(kernel, Ideal(L, ["x"]))
    zero = [Derivation.zero(L)]
    assert all(c == 0 for c in forcom_map(H, zero))
    image, kernel = forcom_image_kernel(H, zero)
    assert ideal_eq(image, Ideal(image.ring, ["w1", "w2"])) and kernel.is_zero()


def test_forcom_rejects_non_homomorphic_sections():
    with pytest.raises(HopfError):
        forcom_map(H, [D(L, y="x")])


# -- properties -----------------------------------------------------------------

SIGNATURES = [HopfSignature.standard(P.ring) for _, P, _, _ in HOPF_CORPUS] + [HG2, HopfSignature.standard(GM)]


@pytest.mark.parametrize("sig", SIGNATURES, ids=lambda s: ",".join(s.ring.names))
def test_hopf_axioms_on_generators(sig):
    from poisson_dme.poisson import right
    for z in sig.ring.gens():
        dz = coproduct(sig, z)
        # (counit x id) Delta = id, landing in the right factor
        assert apply_on_left(sig, dz, lambda a: sig.ring.const(counit(sig, a))) == right(z, sig.tensor)
        # m (S x id) Delta = unit * counit
        assert multiply_factors(sig, apply_on_left(sig, dz, lambda a: antipode(sig, a))) == \
            sig.ring.const(counit(sig, z))


def _triple_ring(sig):
    return RingSpec(tuple((f"{n}_{s}", k) for s in "abc" for n, k in sig.ring.variables))


@pytest.mark.parametrize("sig", SIGNATURES, ids=lambda s: ",".join(s.ring.names))
def test_coassociativity_on_generators(sig):
    R3 = _triple_ring(sig)
    for name, z in zip(sig.ring.names, sig.ring.gens()):
        a, b, c = (R3.var(f"{name}_{s}") for s in "abc")
        dz = coproduct(sig, z)
        # (Delta x id) Delta z against (id x Delta) Delta z, in three copies
        kind = sig.kind_of(name)
        ab = a + b if kind == PRIMITIVE else a * b
        bc = b + c if kind == PRIMITIVE else b * c
        first = substitute(dz, {f"{name}_L": ab, f"{name}_R": c}, R3)
        second = substitute(dz, {f"{name}_L": a, f"{name}_R": bc}, R3)
        assert first == second


@pytest.mark.parametrize("sig", SIGNATURES, ids=lambda s: ",".join(s.ring.names))
@settings(max_examples=25)
@given(data=st.data())
def test_cocommutativity(sig, data):
    f = data.draw(polys(sig.ring, 3, 4))
    assert swap(sig, coproduct(sig, f)) == coproduct(sig, f)


@pytest.mark.parametrize("name,P,sig,expected", HOPF_CORPUS, ids=[c[0] for c in HOPF_CORPUS])
def test_prop_key_equivalence(name, P, sig, expected):
    assert bool(is_poisson_hopf(P, sig)) == expected
    assert bool(is_differential_hopf(prop_key_derivations(P, sig), sig)) == expected


@pytest.mark.parametrize("name,P,sig,expected", [c for c in HOPF_CORPUS if c[3]],
                         ids=[c[0] for c in HOPF_CORPUS if c[3]])
@settings(max_examples=25)
@given(data=st.data())
def test_generator_check_lifts_to_random_pairs(name, P, sig, expected, data):
    a = data.draw(polys(sig.ring, 3, 3))
    b = data.draw(polys(sig.ring, 3, 3))
    assert coproduct(sig, bracket(P, a, b)) == tensor_bracket(P, coproduct(sig, a), coproduct(sig, b))
    for d in prop_key_derivations(P, sig):
        assert apply_derivation(lift_derivation(sig, d), coproduct(sig, a)) == coproduct(sig, d(a))


def _group_law(sig, c):
    """c evaluated on the product of two group elements, in the doubled ring."""
    img = {}
    for n in sig.ring.names:
        L_, R_ = sig.tensor.var(f"{n}_L"), sig.tensor.var(f"{n}_R")
        img[n] = L_ + R_ if sig.kind_of(n) == PRIMITIVE else L_ * R_
    return substitute(c, img, sig.tensor)


FORCOM_CASES = [
    (H, [PILLAY]),
    (H, prop_key_derivations(LAURENT_XY, H)),
    (HG2, [D(G2, x1="x2"), D(G2, x1="3*x1 - x2", x2="x1")]),
    (HopfSignature.standard(SL2.ring), prop_key_derivations(SL2, HopfSignature.standard(SL2.ring))),
]


@pytest.mark.parametrize("sig,derivs", FORCOM_CASES)
def test_forcom_is_additive(sig, derivs):
    from poisson_dme.poisson import left, right
    for c in forcom_map(sig, derivs):
        assert _group_law(sig, c) == left(c, sig.tensor) + right(c, sig.tensor)


ISOADD_CORPUS = [
    [D(G2, x1="x2")],
    [D(G2, x1="x1 + x2", x2="-x1")],
    [D(G2, x1="x1^2")],
    [D(G2, x2="1")],
    [D(G2, x1="x1*x2"), D(G2, x2="x2")],
    [Derivation.zero(G2)],
]


@pytest.mark.parametrize("derivs", ISOADD_CORPUS)
def test_isoadd_consistency(derivs):
    try:
        isoadd_matrices(derivs, HG2)
        linear = True
    except HopfError:
        linear = False
    assert linear == d_group_check(HG2, derivs)
