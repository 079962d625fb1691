"""Conics in homogeneous coordinates and the chord construction.

The group law on a conic C with identity O, relative to a line component L
of the degenerate cubic C + L: for points A, B take S = (line AB) . L, then
A * B is the second intersection of the line OS with C.  With L the line at
infinity and C the Pell conic this is the Brahmagupta product.

Every quadratic form here is handled through its polar (symmetric bilinear)
form, scaled by 2 so that no halving is needed:

    polar(P, Q) = 2 P^T M Q,      F(P) = polar(P, P) / 2.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .residue import Modulus, NonInvertible, Residue


class GeometryError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Central:
    """x^2 - D y^2 = ell (Pell conic when ell = 1)."""

    D: Residue
    ell: Residue

    def __post_init__(self):
        if self.D.is_zero() or self.ell.is_zero():
            raise ValueError("D and ell must be nonzero")

    @property
    def modulus(self) -> Modulus:
        return self.D.modulus


@dataclass(frozen=True)
class Parabola:
    """y = e x^2 + k."""

    e: Residue
    k: Residue

    def __post_init__(self):
        if self.e.is_zero():
            raise ValueError("e must be nonzero")

    @property
    def modulus(self) -> Modulus:
        return self.e.modulus


ConicSpec = Union[Central, Parabola]


class ProjectivePoint:
    """[x:y:u], equal up to an invertible scalar.  Treated as immutable."""

    __slots__ = ("x", "y", "u")

    def __init__(self, x: Residue, y: Residue, u: Residue):
        if x.is_zero() and y.is_zero() and u.is_zero():
            raise GeometryError("[0:0:0] is not a point")
        self.x, self.y, self.u = x, y, u

    @classmethod
    def affine(cls, x, y, modulus: Modulus) -> "ProjectivePoint":
        return cls(Residue(int(x), modulus), Residue(int(y), modulus), Residue(1, modulus))

    @property
    def modulus(self) -> Modulus:
        return self.x.modulus

    @property
    def at_infinity(self) -> bool:
        return self.u.is_zero()

    def coords(self) -> tuple:
        return (self.x.value, self.y.value, self.u.value)

    def coords_residues(self) -> tuple:
        return (self.x, self.y, self.u)

    def normalized(self) -> "ProjectivePoint":
        """Scale the last coordinate with an invertible entry to 1."""
        n = self.modulus.value
        for c in (self.u, self.y, self.x):
            if c.value and math.gcd(c.value, n) == 1:
                inv = pow(c.value, -1, n)
                return ProjectivePoint(self.x * inv, self.y * inv, self.u * inv)
        return self

    def affine_xy(self) -> tuple:
        if self.at_infinity:
            raise GeometryError("point at infinity has no affine coordinates")
        p = self.normalized()
        return (p.x.value, p.y.value)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        x1, y1, u1 = self.coords()
        x2, y2, u2 = other.coords()
        n = self.modulus.value
        return (
            (x1 * y2 - x2 * y1) % n == 0
            and (x1 * u2 - x2 * u1) % n == 0
            and (y1 * u2 - y2 * u1) % n == 0
        )

    def __hash__(self):
        return hash(self.normalized().coords())

    def __repr__(self):
        return f"ProjectivePoint{self}"

    def __str__(self):
        return f"[{self.x}:{self.y}:{self.u}]"


@dataclass(frozen=True)
class ComponentLine:
    """a x + b y + c u = 0."""

    a: Residue
    b: Residue
    c: Residue

    def __post_init__(self):
        if self.a.is_zero() and self.b.is_zero() and self.c.is_zero():
            raise ValueError("(a, b, c) must not all be zero")

    @classmethod
    def at_infinity(cls, modulus: Modulus) -> "ComponentLine":
        return cls(Residue(0, modulus), Residue(0, modulus), Residue(1, modulus))

    def contains(self, P: ProjectivePoint) -> bool:
        return (self.a * P.x + self.b * P.y + self.c * P.u).is_zero()


def parse_point(text: str, modulus: Modulus) -> ProjectivePoint:
    """Accept "[x:y:u]" or the affine shorthand "(x,y)"."""
    s = text.strip()
    m = re.fullmatch(r"\[\s*(\d+)\s*:\s*(\d+)\s*:\s*(\d+)\s*\]", s)
    if m:
        x, y, u = (Residue(int(g), modulus) for g in m.groups())
        return ProjectivePoint(x, y, u)
    m = re.fullmatch(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", s)
    if m:
        return ProjectivePoint.affine(int(m.group(1)), int(m.group(2)), modulus)
    raise ValueError(f"cannot parse point {text!r}")


def classify_conic(e, g, f, d, h, k) -> str:
    """'central' when g^2 - e f != 0, 'parabolic' otherwise.

    Arguments are Residues of e x^2 + 2g xy + f y^2 + d x + h y + k = 0.
    """
    if e.is_zero() and g.is_zero() and f.is_zero():
        raise ValueError("quadratic part vanishes")
    return "parabolic" if (g * g - e * f).is_zero() else "central"


def _polar(spec: ConicSpec, P: ProjectivePoint, Q: ProjectivePoint) -> Residue:
    if isinstance(spec, Central):
        return 2 * (P.x * Q.x - spec.D * P.y * Q.y - spec.ell * P.u * Q.u)
    # e x^2 - y u + k u^2
    return 2 * spec.e * P.x * Q.x - (P.y * Q.u + P.u * Q.y) + 2 * spec.k * P.u * Q.u


def form(spec: ConicSpec, P: ProjectivePoint) -> Residue:
    """The homogenized conic equation evaluated at P (zero iff P is on it)."""
    if isinstance(spec, Central):
        return P.x * P.x - spec.D * P.y * P.y - spec.ell * P.u * P.u
    return spec.e * P.x * P.x - P.y * P.u + spec.k * P.u * P.u


def on_conic(spec: ConicSpec, P: ProjectivePoint) -> bool:
    return form(spec, P).is_zero()


def tangent(spec: ConicSpec, P: ProjectivePoint) -> tuple:
    """Coefficients of the tangent line at P (the gradient of the form)."""
    if isinstance(spec, Central):
        t = (2 * P.x, -2 * spec.D * P.y, -2 * spec.ell * P.u)
    else:
        t = (2 * spec.e * P.x, -P.u, 2 * spec.k * P.u - P.y)
    assert not all(c.is_zero() for c in t), "zero gradient on a non-degenerate conic"
    return t


def _cross(a: tuple, b: tuple) -> tuple:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _is_null(v: tuple) -> bool:
    return all(c.is_zero() for c in v)


def _second_intersection(spec: ConicSpec, O: ProjectivePoint, S: tuple) -> ProjectivePoint:
    """Other point where the line through O (on the conic) and S meets it.

    On the line {lam*O + mu*S} the form is lam*mu*polar(O,S) + mu^2*F(S);
    the root besides O is (lam, mu) = (F(S), -polar(O,S)).  A tangent line
    at O gives back O; S already on the conic gives back S.
    """
    Sp = ProjectivePoint(*S)
    fs = form(spec, Sp)
    n = fs.modulus.value
    g = math.gcd(fs.value, n)
    if 1 < g < n:
        raise NonInvertible(g, n, "F(S)")
    pol = _polar(spec, O, Sp)
    coords = (fs * O.x - pol * Sp.x, fs * O.y - pol * Sp.y, fs * O.u - pol * Sp.u)
    if _is_null(coords):
        raise GeometryError("construction degenerates")
    return ProjectivePoint(*coords).normalized()


def _line_coeffs(line: ComponentLine) -> tuple:
    return (line.a, line.b, line.c)


def geometric_product(
    spec: ConicSpec,
    line: ComponentLine,
    O: ProjectivePoint,
    A: ProjectivePoint,
    B: ProjectivePoint,
) -> ProjectivePoint:
    """A * B by the chord construction through the component line."""
    chord = _cross(A.coords_residues(), B.coords_residues())
    if _is_null(chord):
        chord = tangent(spec, A)
    S = _cross(chord, _line_coeffs(line))
    if _is_null(S):
        raise GeometryError("chord coincides with the component line")
    return _second_intersection(spec, O, S)


def geometric_inverse(
    spec: ConicSpec, line: ComponentLine, O: ProjectivePoint, A: ProjectivePoint
) -> ProjectivePoint:
    """Intersect the tangent at O with the line, join to A, take the other point."""
    T = _cross(tangent(spec, O), _line_coeffs(line))
    if _is_null(T):
        raise GeometryError("tangent at O is the component line")
    return _second_intersection(spec, A, T)


def brahmagupta(A: ProjectivePoint, B: ProjectivePoint, D: Residue) -> ProjectivePoint:
    """[xw + yzD : xz + yw : uv]."""
    x, y, u = A.x, A.y, A.u
    w, z, v = B.x, B.y, B.u
    coords = (x * w + y * z * D, x * z + y * w, u * v)
    if _is_null(coords):
        raise GeometryError("product of the two singular points at infinity")
    return ProjectivePoint(*coords).normalized()


def conjugate(P: ProjectivePoint) -> ProjectivePoint:
    return ProjectivePoint(P.x, -P.y, P.u)


def norm(P: ProjectivePoint, D: Residue) -> Residue:
    """x^2 - D y^2 of the affine representative (u must be invertible)."""
    x, y = P.affine_xy()
    return Residue(x * x, D.modulus) - D * y * y


def lift_nonsquare_ell(
    pell_solution: ProjectivePoint, base: ProjectivePoint, D: Residue
) -> ProjectivePoint:
    """Move a solution of x^2 - D y^2 = ell along the Pell group."""
    if not on_conic(Central(D, Residue(1, D.modulus)), pell_solution):
        raise ValueError("first argument is not on the Pell conic")
    if base.at_infinity or norm(base, D).is_zero():
        raise ValueError("base must be an affine point with nonzero norm")
    return brahmagupta(pell_solution, base, D)
