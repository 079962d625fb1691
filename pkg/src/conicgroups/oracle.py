"""Brute-force checks over small prime fields.

Point enumeration, group-order census with a constructive cyclicity
certificate, and cross-validation of the parameter laws against the chord
construction.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Optional

from .geometry import (
    Central,
    ComponentLine,
    ConicSpec,
    Parabola,
    ProjectivePoint,
    geometric_inverse,
    geometric_product,
    on_conic,
)
from .params import (
    INF,
    AbsorbingPair,
    Finite,
    GroupLaw,
    ParabolaSlope,
    Param,
    RedeiNorm,
    SlopeGeneralEll,
    SlopeSquareEll,
    compose,
    format_param,
    identity,
    inverse,
    param_to_point,
    point_to_param,
)
from .residue import Modulus, Residue, legendre, sqrt_mod

MAX_PRIME = 10**5
CENSUS_HEADER = "p,D,ell,square_class,affine,infinity,total,cyclic,generator"


class CrossValidationError(AssertionError):
    def __init__(self, check: str, counterexample):
        self.check = check
        self.counterexample = counterexample
        super().__init__(f"{check} failed at {counterexample}")


def odd_primes(limit: int) -> list:
    """Odd primes p <= limit (sieve)."""
    if limit < 3:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(3, limit + 1) if sieve[i]]


def nonresidue(p: int) -> int:
    return next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)


def _square_roots(p: int) -> dict:
    roots = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    return roots


def enumerate_points(spec: ConicSpec, p: int) -> list:
    """All projective points: affine ones sorted by (x, y), then those at infinity."""
    if p > MAX_PRIME:
        raise ValueError(f"p = {p} too large to enumerate (limit {MAX_PRIME})")
    mod = spec.modulus
    if mod.value != p:
        raise ValueError("conic is defined over a different modulus")
    roots = _square_roots(p)
    affine, infinity = [], []
    if isinstance(spec, Central):
        D, ell = spec.D.value, spec.ell.value
        Dinv = pow(D, -1, p)
        for x in range(p):
            for y in roots.get((x * x - ell) * Dinv % p, []):
                affine.append((x, y))
        # x^2 = D y^2 at u = 0; y = 0 forces x = 0
        for x in roots.get(D % p, []):
            infinity.append(ProjectivePoint(Residue(x, mod), Residue(1, mod), Residue(0, mod)))
    else:
        e, k = spec.e.value, spec.k.value
        for x in range(p):
            affine.append((x, (e * x * x + k) % p))
        infinity.append(ProjectivePoint(Residue(0, mod), Residue(1, mod), Residue(0, mod)))
    pts = [ProjectivePoint.affine(x, y, mod) for x, y in sorted(affine)]
    return pts + sorted(infinity, key=lambda P: P.coords())


def law_for(spec: ConicSpec) -> GroupLaw:
    """The natural parameter law of a conic over a prime field."""
    mod = spec.modulus
    p = mod.value
    if isinstance(spec, Parabola):
        return ParabolaSlope(spec.e, Residue(0, mod), spec.k)
    if spec.ell == 1:
        return RedeiNorm(spec.D)
    u = sqrt_mod(spec.ell.value, p)
    if u is not None:
        return SlopeSquareEll(spec.D, Residue(u, mod))
    for P in enumerate_points(spec, p):
        if not P.at_infinity:
            x, y = P.affine_xy()
            if x and y:
                return SlopeGeneralEll(spec.D, spec.ell, Residue(x, mod), Residue(y, mod))
    raise ValueError("no admissible base point")


def absorbing_params(law: GroupLaw) -> set:
    """Parameters mapped to the conic's points at infinity (outside the group)."""
    p = law.modulus.value
    if isinstance(law, ParabolaSlope):
        return {INF}
    # m^2 = D for the Redei law, D m^2 = 1 for the slope laws
    target = law.D if isinstance(law, RedeiNorm) else law.D_inv
    r = sqrt_mod(target.value, p)
    if r is None:
        return set()
    return {Finite(Residue(r, law.modulus)), Finite(Residue(-r, law.modulus))}


def group_elements(law: GroupLaw) -> list:
    """F_p u {inf} minus the absorbing parameters."""
    mod = law.modulus
    everything = [INF] + [Finite(Residue(v, mod)) for v in range(mod.value)]
    bad = absorbing_params(law)
    return [m for m in everything if m not in bad]


def _power(law: GroupLaw, m: Param, n: int) -> Param:
    # plain right-to-left square-and-multiply over compose
    result = identity(law)
    base = m
    while n:
        if n & 1:
            result = compose(law, result, base)
        base = compose(law, base, base)
        n >>= 1
    return result


def _prime_factors(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def element_order(law: GroupLaw, m: Param, group_order: int) -> int:
    order = group_order
    e = identity(law)
    for q in _prime_factors(group_order):
        while order % q == 0 and _power(law, m, order // q) == e:
            order //= q
    return order


@dataclass
class GroupCensus:
    p: int
    spec: ConicSpec
    affine_count: int
    infinity_count: int
    total: int
    group_order: int
    is_cyclic: bool
    generator: Optional[Param]

    def csv_row(self) -> str:
        if isinstance(self.spec, Central):
            D, ell = self.spec.D.value, self.spec.ell.value
            cls = "square" if legendre(D, Modulus(self.p, "prime")) == 1 else "nonsquare"
        else:
            D, ell, cls = "", "", "parabola"
        gen = format_param(self.generator) if self.generator is not None else ""
        return ",".join(
            str(v)
            for v in (self.p, D, ell, cls, self.affine_count, self.infinity_count, self.total,
                      int(self.is_cyclic), gen)
        )


def order_census(spec: ConicSpec, p: int) -> GroupCensus:
    pts = enumerate_points(spec, p)
    inf = sum(1 for P in pts if P.at_infinity)
    law = law_for(spec)
    elems = group_elements(law)
    n = len(elems)
    generator = None
    for g in elems:
        if element_order(law, g, n) == n:
            generator = g
            break
    return GroupCensus(p, spec, len(pts) - inf, inf, len(pts), n, generator is not None, generator)


@dataclass
class CrossReport:
    law: str
    p: int
    elements: int
    pairs_checked: int
    exhaustive: bool


def cross_validate(
    law: GroupLaw,
    spec: Optional[ConicSpec] = None,
    O: Optional[ProjectivePoint] = None,
    p: Optional[int] = None,
    trials: int = 2000,
    compose_fn: Callable = compose,
    rng: Optional[random.Random] = None,
) -> CrossReport:
    """Check parameters against points; raise on the first mismatch.

    Exhaustive over pairs when there are at most 10**6 of them, otherwise
    ``trials`` random pairs.
    """
    spec = spec if spec is not None else law.conic()
    O = O if O is not None else law.base_point()
    p = p if p is not None else law.modulus.value
    line = ComponentLine.at_infinity(law.modulus)
    elems = group_elements(law)
    points = {}

    for m in elems:
        P = param_to_point(law, m)
        if P in points.values():
            raise CrossValidationError("param_to_point injective", m)
        if not on_conic(spec, P):
            raise CrossValidationError("param_to_point lands on conic", m)
        if point_to_param(law, P) != m:
            raise CrossValidationError("point_to_param round trip", m)
        points[m] = P

    # points at infinity carry no group parameter (absorbing, or the
    # parabola's [0:1:0], which its finite parameter group leaves out)
    listed = [P for P in enumerate_points(spec, p) if not P.at_infinity]
    if len(listed) != len(elems):
        raise CrossValidationError("parametrization is onto", (len(listed), len(elems)))

    e = identity(law)
    if param_to_point(law, e) != O:
        raise CrossValidationError("identity parameter maps to O", e)
    for m in elems:
        if points[m] != O and geometric_inverse(spec, line, O, points[m]) != param_to_point(law, inverse(law, m)):
            raise CrossValidationError("inverse agrees with geometric inverse", m)

    if len(elems) ** 2 <= 10**6:
        pairs = itertools.product(elems, repeat=2)
        exhaustive = True
    else:
        rng = rng or random.Random(p)
        pairs = ((rng.choice(elems), rng.choice(elems)) for _ in range(trials))
        exhaustive = False
    count = 0
    for a, b in pairs:
        try:
            c = compose_fn(law, a, b)
        except AbsorbingPair:
            raise CrossValidationError("compose total on the group", (a, b)) from None
        got = param_to_point(law, c)
        want = geometric_product(spec, line, O, points[a], points[b])
        if got != want:
            raise CrossValidationError("compose transports to geometric product", (a, b))
        if isinstance(law, SlopeSquareEll):
            red = RedeiNorm(law.D)
            if _phi(law, c) != compose(red, _phi(law, a), _phi(law, b)):
                raise CrossValidationError("phi(m) = D m is a homomorphism to the Redei law", (a, b))
        count += 1
    return CrossReport(type(law).__name__, p, len(elems), count, exhaustive)


def _phi(law: SlopeSquareEll, m: Param) -> Param:
    return INF if m is INF else Finite(law.D * m.value)

