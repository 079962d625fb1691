import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conicgroups.geometry import ProjectivePoint, on_conic, tangent
from conicgroups.params import (
    INF,
    AbsorbingPair,
    Finite,
    NonInvertibleDenominator,
    ParabolaSlope,
    RedeiNorm,
    SlopeGeneralEll,
    SlopeSquareEll,
    compose,
    format_param,
    identity,
    inverse,
    param_to_point,
    parse_param,
    point_to_param,
)
from conicgroups.residue import Modulus, OpTally, Residue

M7 = Modulus.prime(7)
P61 = Modulus.prime(2**61 - 1)


def f(v, mod=M7):
    return Finite(Residue(v, mod))


def r(v, mod=M7):
    return Residue(v, mod)


def test_compose_examples():
    assert compose(RedeiNorm(r(3)), f(2), f(2)) == f(0)
    assert compose(SlopeSquareEll(r(3), r(1)), f(1), f(1)) == f(3)
    assert compose(RedeiNorm(r(3)), f(3), f(4)) is INF
    par = ParabolaSlope(r(4), r(0))
    for a in range(7):
        for b in range(7):
            assert compose(par, f(a), f(b)) == f(a + b)


def test_identity_examples():
    assert identity(SlopeSquareEll(r(3), r(1))) is INF
    assert identity(RedeiNorm(r(3))) is INF
    g = SlopeGeneralEll(r(3), r(5), r(1), r(1))
    assert identity(g) == f(5)
    assert identity(ParabolaSlope(r(3), r(2))) == f(12)


def test_general_identity_exhaustive():
    g = SlopeGeneralEll(r(3), r(5), r(1), r(1))
    for m in [INF] + [f(v) for v in range(7)]:
        assert compose(g, m, f(5)) == m
        assert compose(g, m, inverse(g, m)) == f(5)


def test_inverse_examples():
    red = RedeiNorm(r(3))
    for v in range(7):
        assert compose(red, f(v), inverse(red, f(v))) is INF
    par = ParabolaSlope(r(3), r(2))
    for v in range(7):
        assert compose(par, f(v), f(4 * 2 * 3 - v)) == f(12)


def test_param_to_point_examples():
    assert param_to_point(SlopeSquareEll(r(3), r(1)), f(1)) == ProjectivePoint.affine(2, 1, M7)
    assert param_to_point(RedeiNorm(r(3)), f(2)) == ProjectivePoint.affine(0, 4, M7)
    assert param_to_point(RedeiNorm(r(3)), INF) == ProjectivePoint.affine(1, 0, M7)
    par = ParabolaSlope(r(3), r(2), r(1))
    assert param_to_point(par, identity(par)) == par.base_point()


def test_point_to_param_examples():
    assert point_to_param(RedeiNorm(r(3)), ProjectivePoint.affine(0, 4, M7)) == f(2)
    assert point_to_param(SlopeSquareEll(r(3), r(1)), ProjectivePoint.affine(2, 1, M7)) == f(1)
    assert point_to_param(RedeiNorm(r(3)), ProjectivePoint.affine(1, 0, M7)) is INF


def test_general_infinity_is_the_vertical_chord():
    # INF is the slope of the vertical line through O = (alpha, beta),
    # which meets the conic again at (alpha, -beta)
    g = SlopeGeneralEll(r(3), r(5), r(1), r(1))
    assert param_to_point(g, INF) == ProjectivePoint.affine(1, 6, M7)


def test_identity_is_tangent_slope_at_base_point():
    for law in (SlopeGeneralEll(r(3), r(5), r(1), r(1)), ParabolaSlope(r(3), r(2), r(1))):
        O = law.base_point()
        a, b, _ = tangent(law.conic(), O)
        # tangent a x + b y + c u = 0 has slope -a/b
        assert identity(law) == Finite(-a * b.inverse())


def test_square_D_absorbing_pair():
    # D = 2 = 3^2 mod 7: parameters +-3 are absorbing, 3 (+) -3 is 0/0
    red = RedeiNorm(r(2))
    with pytest.raises(AbsorbingPair):
        compose(red, f(3), f(4))
    assert compose(red, f(3), f(1)) == f(3)


def test_composite_denominator_carries_gcd():
    mod = Modulus.composite(11, 23)
    red = RedeiNorm(Residue(3, mod))
    with pytest.raises(NonInvertibleDenominator) as exc:
        compose(red, Finite(Residue(5, mod)), Finite(Residue(6, mod)))
    assert exc.value.gcd == 11


def test_parabola_rejects_infinity():
    par = ParabolaSlope(r(3), r(2))
    with pytest.raises(ValueError):
        compose(par, INF, f(1))


def test_general_base_point_validated():
    with pytest.raises(ValueError):
        SlopeGeneralEll(r(3), r(5), r(2), r(1))


def test_format_parse():
    assert format_param(INF) == "INF"
    assert format_param(f(5)) == "5"
    assert parse_param("INF", M7) is INF
    assert parse_param("12", M7) == f(5)
    with pytest.raises(ValueError):
        parse_param("-1", M7)


def test_compose_tally():
    t = OpTally()
    compose(RedeiNorm(r(3)), f(1), f(2), t)
    assert t.as_tuple() == (2, 2, 1)
    t = OpTally()
    compose(SlopeGeneralEll(r(3), r(5), r(1), r(1)), f(1), f(2), t)
    assert t.as_tuple() == (4, 4, 1)
    t = OpTally()
    compose(ParabolaSlope(r(3), r(2)), f(1), f(2), t)
    assert t.as_tuple() == (0, 2, 0)


# --- property tests at p = 2^61 - 1 -------------------------------------

p61 = 2**61 - 1
elems = st.integers(0, p61 - 1)


def _laws(D, al, be, e):
    out = [RedeiNorm(r(D, P61)), SlopeSquareEll(r(D, P61), r(al or 1, P61)), ParabolaSlope(r(e, P61), r(al, P61))]
    ell = (al * al - D * be * be) % p61
    if al and be and ell:
        out.append(SlopeGeneralEll(r(D, P61), r(ell, P61), r(al, P61), r(be, P61)))
    return out


def _nonsquare(D):
    return pow(D, (p61 - 1) // 2, p61) == p61 - 1


@given(st.integers(1, p61 - 1), elems, elems, st.integers(1, p61 - 1), elems, elems, elems)
def test_group_axioms_random(D, al, be, e, a, b, c):
    assume(_nonsquare(D))
    for law in _laws(D, al, be, e):
        A, B, C = f(a, P61), f(b, P61), f(c, P61)
        try:
            assert compose(law, compose(law, A, B), C) == compose(law, A, compose(law, B, C))
        except NonInvertibleDenominator:
            pytest.fail("field denominators are always invertible")
        assert compose(law, A, B) == compose(law, B, A)
        assert compose(law, A, identity(law)) == A
        assert compose(law, A, inverse(law, A)) == identity(law)


@given(st.integers(1, p61 - 1), elems, elems, st.integers(1, p61 - 1), elems)
def test_point_roundtrip_random(D, al, be, e, a):
    assume(_nonsquare(D))
    for law in _laws(D, al, be, e):
        m = f(a, P61)
        P = param_to_point(law, m)
        assert on_conic(law.conic(), P)
        assert point_to_param(law, P) == m
