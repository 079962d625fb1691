"""Parameter groups: F_q u {inf} with the slope-induced composition laws.

A parameter m names the conic point where the line through the base point O
with "slope" m meets the conic again.  Four laws are provided:

* :class:`SlopeSquareEll`   x^2 - D y^2 = u^2, O = (u, 0)
* :class:`SlopeGeneralEll`  x^2 - D y^2 = ell, O = (alpha, beta), alpha*beta != 0
* :class:`ParabolaSlope`    y = e x^2 + k, O = (alpha, e alpha^2 + k)
* :class:`RedeiNorm`        m (+) n = (mn + D)/(m + n), the law of the Redei
  rational functions, parametrizing x^2 - D y^2 = 1 by m = (1 + x)/y

In every case the identity parameter is the slope of the tangent to the
conic at O: vertical (inf) for SlopeSquareEll and RedeiNorm, alpha/(D beta)
for SlopeGeneralEll and 2 alpha e for the parabola.

Finite operands go through the division-form kernels with D^-1 and
beta/alpha precomputed, and are counted on the tally.  Operands at infinity
are resolved with the projective form of the same law and cost nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .geometry import Central, ComponentLine, Parabola, ProjectivePoint
from .residue import (
    Modulus,
    NonInvertible,
    OpTally,
    Residue,
    mod_add,
    mod_inv,
    mod_mul,
    mod_sub,
    parse_int,
)


class NonInvertibleDenominator(NonInvertible):
    pass


class AbsorbingPair(ArithmeticError):
    """Both numerator and denominator vanish: the operands are +-sqrt(D)-type
    absorbing parameters that lie outside the group."""


class Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()


@dataclass(frozen=True)
class Finite:
    value: Residue

    def __str__(self):
        return str(self.value)


Param = Union[Finite, Infinity]


def finite(v: int, modulus: Modulus) -> Finite:
    return Finite(Residue(v, modulus))


def format_param(m: Param) -> str:
    return "INF" if m is INF else str(m.value.value)


def parse_param(text: str, modulus: Modulus) -> Param:
    s = text.strip()
    if s == "INF":
        return INF
    return Finite(Residue(parse_int(s), modulus))


def _ratio(num: Residue, den: Residue) -> Param:
    """[num : den] as a Param, without counting."""
    n = den.modulus.value
    if den.is_zero():
        if num.is_zero():
            raise AbsorbingPair("0/0 in parameter composition")
        return INF
    g = math.gcd(den.value, n)
    if g != 1:
        raise NonInvertibleDenominator(g, n, "denominator")
    return Finite(num * pow(den.value, -1, n))


def _divide(num: Residue, den: Residue, tally: Optional[OpTally]) -> Param:
    """num/den as one inversion plus one product; a zero den gives INF."""
    if den.is_zero():
        if num.is_zero():
            raise AbsorbingPair("0/0 in parameter composition")
        return INF
    n = den.modulus.value
    g = math.gcd(den.value, n)
    if g != 1:
        raise NonInvertibleDenominator(g, n, "denominator")
    return Finite(mod_mul(num, mod_inv(den, tally), tally))


def _homog(m: Param, modulus: Modulus) -> tuple:
    if m is INF:
        return (Residue(1, modulus), Residue(0, modulus))
    return (m.value, Residue(1, modulus))


def _check_mod(law, m: Param):
    if m is not INF and m.value.modulus.value != law.modulus.value:
        raise ValueError("parameter and law live over different moduli")


@dataclass(frozen=True)
class SlopeSquareEll:
    D: Residue
    u: Residue
    D_inv: Residue = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.u.is_zero() or self.D.is_zero():
            raise ValueError("u and D must be nonzero")
        object.__setattr__(self, "D_inv", mod_inv(self.D))

    @property
    def modulus(self) -> Modulus:
        return self.D.modulus

    def conic(self) -> Central:
        return Central(self.D, self.u * self.u)

    def base_point(self) -> ProjectivePoint:
        return ProjectivePoint(self.u, Residue(0, self.modulus), Residue(1, self.modulus))


@dataclass(frozen=True)
class SlopeGeneralEll:
    D: Residue
    ell: Residue
    alpha: Residue
    beta: Residue
    D_inv: Residue = field(init=False, repr=False, compare=False)
    ratio: Residue = field(init=False, repr=False, compare=False)  # beta/alpha
    D_ratio: Residue = field(init=False, repr=False, compare=False)  # D beta/alpha

    def __post_init__(self):
        if self.alpha.is_zero() or self.beta.is_zero():
            raise ValueError("base point needs alpha != 0 and beta != 0")
        if self.alpha * self.alpha - self.D * self.beta * self.beta != self.ell:
            raise ValueError("base point is not on x^2 - D y^2 = ell")
        object.__setattr__(self, "D_inv", mod_inv(self.D))
        r = self.beta * mod_inv(self.alpha)
        object.__setattr__(self, "ratio", r)
        object.__setattr__(self, "D_ratio", self.D * r)

    @property
    def modulus(self) -> Modulus:
        return self.D.modulus

    def conic(self) -> Central:
        return Central(self.D, self.ell)

    def base_point(self) -> ProjectivePoint:
        return ProjectivePoint(self.alpha, self.beta, Residue(1, self.modulus))


@dataclass(frozen=True)
class ParabolaSlope:
    e: Residue
    alpha: Residue
    k: Optional[Residue] = None
    shift: Residue = field(init=False, repr=False, compare=False)  # -2 alpha e

    def __post_init__(self):
        if self.e.is_zero():
            raise ValueError("e must be nonzero")
        if self.k is None:
            object.__setattr__(self, "k", Residue(0, self.e.modulus))
        object.__setattr__(self, "shift", -2 * self.alpha * self.e)

    @property
    def modulus(self) -> Modulus:
        return self.e.modulus

    def conic(self) -> Parabola:
        return Parabola(self.e, self.k)

    def base_point(self) -> ProjectivePoint:
        beta = self.e * self.alpha * self.alpha + self.k
        return ProjectivePoint(self.alpha, beta, Residue(1, self.modulus))


@dataclass(frozen=True)
class RedeiNorm:
    D: Residue

    def __post_init__(self):
        if self.D.is_zero():
            raise ValueError("D must be nonzero")

    @property
    def modulus(self) -> Modulus:
        return self.D.modulus

    def conic(self) -> Central:
        return Central(self.D, Residue(1, self.modulus))

    def base_point(self) -> ProjectivePoint:
        return ProjectivePoint.affine(1, 0, self.modulus)


GroupLaw = Union[SlopeSquareEll, SlopeGeneralEll, ParabolaSlope, RedeiNorm]


def line_component(law: GroupLaw) -> ComponentLine:
    """All four laws come from the chord construction through the line at infinity."""
    return ComponentLine.at_infinity(law.modulus)


def compose(law: GroupLaw, mA: Param, mB: Param, tally: Optional[OpTally] = None) -> Param:
    _check_mod(law, mA)
    _check_mod(law, mB)
    if isinstance(law, ParabolaSlope):
        if mA is INF or mB is INF:
            raise ValueError("the parabola law is defined on finite parameters only")
        s = mod_add(law.shift, mA.value, tally)
        return Finite(mod_add(s, mB.value, tally))

    if mA is INF or mB is INF:
        return _compose_projective(law, mA, mB)

    a, b = mA.value, mB.value
    if isinstance(law, RedeiNorm):
        num = mod_add(mod_mul(a, b, tally), law.D, tally)
        den = mod_add(a, b, tally)
        return _divide(num, den, tally)
    if isinstance(law, SlopeSquareEll):
        num = mod_add(mod_mul(a, b, tally), law.D_inv, tally)
        den = mod_add(a, b, tally)
        return _divide(num, den, tally)
    # SlopeGeneralEll
    s = mod_add(mod_mul(a, b, tally), law.D_inv, tally)
    t = mod_add(a, b, tally)
    num = mod_sub(s, mod_mul(t, law.ratio, tally), tally)
    den = mod_sub(t, mod_mul(s, law.D_ratio, tally), tally)
    return _divide(num, den, tally)


def _compose_projective(law: GroupLaw, mA: Param, mB: Param) -> Param:
    mod = law.modulus
    a1, a0 = _homog(mA, mod)
    b1, b0 = _homog(mB, mod)
    if isinstance(law, RedeiNorm):
        return _ratio(a1 * b1 + law.D * a0 * b0, a1 * b0 + a0 * b1)
    if isinstance(law, SlopeSquareEll):
        return _ratio(law.D * a1 * b1 + a0 * b0, law.D * (a1 * b0 + a0 * b1))
    P = law.D * a1 * b1 + a0 * b0
    S = a1 * b0 + a0 * b1
    num = P * law.alpha - S * law.beta * law.D
    den = law.D * (S * law.alpha - P * law.beta)
    return _ratio(num, den)


def identity(law: GroupLaw) -> Param:
    if isinstance(law, (SlopeSquareEll, RedeiNorm)):
        return INF
    if isinstance(law, SlopeGeneralEll):
        return Finite(law.alpha * mod_inv(law.D * law.beta))
    return Finite(2 * law.alpha * law.e)


def inverse(law: GroupLaw, m: Param) -> Param:
    _check_mod(law, m)
    if isinstance(law, (SlopeSquareEll, RedeiNorm)):
        return INF if m is INF else Finite(-m.value)
    if isinstance(law, ParabolaSlope):
        if m is INF:
            raise ValueError("the parabola law is defined on finite parameters only")
        return Finite(4 * law.alpha * law.e - m.value)
    # x solving compose(m, x) = alpha/(D beta) is the Moebius map
    # [(a^2 + D b^2) m - 2ab : 2Dab m - (a^2 + D b^2)]
    m1, m0 = _homog(m, law.modulus)
    al, be, D = law.alpha, law.beta, law.D
    s = al * al + D * be * be
    return _ratio(s * m1 - 2 * al * be * m0, 2 * D * al * be * m1 - s * m0)


def _point(x: Residue, y: Residue, u: Residue) -> ProjectivePoint:
    n = u.modulus.value
    g = math.gcd(u.value, n)
    if 1 < g < n:
        raise NonInvertibleDenominator(g, n, "point denominator")
    return ProjectivePoint(x, y, u).normalized()


def param_to_point(law: GroupLaw, m: Param) -> ProjectivePoint:
    """The conic point named by m, in homogeneous coordinates.

    Parameters whose affine denominator vanishes land on the conic's points
    at infinity.
    """
    _check_mod(law, m)
    m1, m0 = _homog(m, law.modulus)
    if isinstance(law, RedeiNorm):
        sq, dsq = m1 * m1, law.D * m0 * m0
        return _point(sq + dsq, 2 * m1 * m0, sq - dsq)
    if isinstance(law, SlopeSquareEll):
        dsq, sq = law.D * m1 * m1, m0 * m0
        return _point(law.u * (dsq + sq), 2 * law.u * m1 * m0, dsq - sq)
    if isinstance(law, SlopeGeneralEll):
        al, be, D = law.alpha, law.beta, law.D
        den = D * m1 * m1 - m0 * m0
        t = 2 * (al * m0 - be * D * m1)
        return _point(al * den + t * m0, be * den + t * m1, den)
    # parabola: x = (m - alpha e)/e, y = (alpha^2 e^2 - 2 alpha e m + e k + m^2)/e
    al, e, k = law.alpha, law.e, law.k
    ae = al * e
    x = m0 * (m1 - ae * m0)
    y = ae * ae * m0 * m0 - 2 * ae * m1 * m0 + e * k * m0 * m0 + m1 * m1
    return _point(x, y, e * m0 * m0)


def point_to_param(law: GroupLaw, P: ProjectivePoint) -> Param:
    """Inverse of :func:`param_to_point` (P must lie on the law's conic)."""
    x, y, z = P.coords_residues()
    if isinstance(law, RedeiNorm):
        # (1 + x)/y, or equivalently D y/(x - 1) on x^2 - D y^2 = 1
        num, den = z + x, y
        if num.is_zero() and den.is_zero():
            num, den = law.D * y, x - z
        return _ratio(num, den)
    if isinstance(law, SlopeSquareEll):
        # y/(x - u), or equivalently (x + u)/(D y)
        num, den = y, x - law.u * z
        if num.is_zero() and den.is_zero():
            num, den = x + law.u * z, law.D * y
        return _ratio(num, den)
    # slope of the chord from O
    num, den = y - law.base_point().y * z, x - law.alpha * z
    if num.is_zero() and den.is_zero():
        return identity(law)
    return _ratio(num, den)
