"""Instrumented square-and-multiply engines for parameter powers m^(+)n.

Three algorithms are provided, each returning an :class:`EngineReport` with
the exact operation tally of the run:

* :func:`direct_power` -- store the doublings m^(2^j), then fold the ones
  selected by the bits of n.  Works for every law.
* :func:`more_power` -- More's left-to-right evaluation of the Redei
  function for t(x) = x^2 - a x - b, with one division per step.
* :func:`modified_more_power` -- the same recursion carried on a pair
  (A, B) with R = A/B, so that only the final quotient needs an inversion.

Loop convention shared by all three: the leading bit of n is consumed by
initialization, so there are ell = floor(log2 n) doubling steps and
w' = w(n) - 1 multiply (or compose) steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .params import (
    INF,
    AbsorbingPair,
    Finite,
    GroupLaw,
    NonInvertibleDenominator,
    Param,
    RedeiNorm,
    SlopeGeneralEll,
    SlopeSquareEll,
    compose,
)
from .redei import redei_rational
from .residue import OpTally, Residue, mod_add, mod_inv, mod_mul

ENGINES = ("direct-eq2", "direct-eq3", "direct-eq4", "more", "modified-more")

CSV_HEADER = "engine,n,ell,weight,P,A,I,expected_P,expected_A,expected_I"


@dataclass(frozen=True)
class BitPlan:
    n: int
    bits: tuple  # b_0, b_1, ..., b_ell (least significant first)
    ell: int
    weight: int

    @classmethod
    def of(cls, n: int) -> "BitPlan":
        if n < 1:
            raise ValueError("n must be a positive integer")
        bits = tuple((n >> i) & 1 for i in range(n.bit_length()))
        return cls(n, bits, n.bit_length() - 1, sum(bits))

    @property
    def multiply_steps(self) -> int:
        return self.weight - 1


@dataclass
class EngineReport:
    engine: str
    n: int
    result: Param
    tally: OpTally
    expected: Optional[tuple] = None
    steps: list = field(default_factory=list, repr=False)

    @property
    def plan(self) -> BitPlan:
        return BitPlan.of(self.n)

    @property
    def mismatch(self) -> str:
        """Names of the tally fields that differ from ``expected``."""
        if self.expected is None:
            return ""
        names = ("P", "A", "I")
        return "".join(k for k, got, want in zip(names, self.tally.as_tuple(), self.expected) if got != want)

    def csv_row(self) -> str:
        plan = self.plan
        exp = self.expected if self.expected is not None else ("", "", "")
        fields = [self.engine, self.n, plan.ell, plan.weight, *self.tally.as_tuple(), *exp]
        return ",".join(str(f) for f in fields)


def law_engine(law: GroupLaw) -> str:
    if isinstance(law, (SlopeSquareEll, RedeiNorm)):
        return "direct-eq2"
    if isinstance(law, SlopeGeneralEll):
        return "direct-eq3"
    return "direct-eq4"


def naive_power(law: GroupLaw, m: Param, n: int, tally: Optional[OpTally] = None) -> Param:
    """n - 1 successive compositions; the reference for small n."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    acc = m
    for _ in range(n - 1):
        acc = compose(law, acc, m, tally)
    return acc


def direct_power(law: GroupLaw, m: Param, n: int) -> EngineReport:
    plan = BitPlan.of(n)
    tally = OpTally()
    x = m
    # None stands for the neutral start (INF, or 2 alpha e on the parabola);
    # folding into it is a copy and costs nothing.
    y = m if plan.bits[0] else None
    for j in range(1, plan.ell + 1):
        x = compose(law, x, x, tally)
        if plan.bits[j]:
            y = x if y is None else compose(law, y, x, tally)
    engine = law_engine(law)
    return EngineReport(engine, n, y, tally, expected_counts(engine, n))


def more_power(n: int, a: Residue, b: Residue, x: Residue, trace: bool = False) -> EngineReport:
    """Q_n(x) for t(x) = x^2 - a x - b, dividing at every step.

    A zero or non-invertible denominator raises :class:`NonInvertible`.
    """
    plan = BitPlan.of(n)
    tally = OpTally()
    steps = []
    xa = x + a  # precomputed once, outside the loop
    R = x
    for i in range(plan.ell - 1, -1, -1):
        num = mod_add(mod_mul(R, R, tally), b, tally)
        den = mod_add(mod_add(R, R, tally), a, tally)
        R = mod_mul(num, mod_inv(den, tally), tally)
        if trace:
            steps.append(R)
        if plan.bits[i]:
            num = mod_add(mod_mul(x, R, tally), b, tally)
            den = mod_add(R, xa, tally)
            R = mod_mul(num, mod_inv(den, tally), tally)
            if trace:
                steps.append(R)
    return EngineReport("more", n, Finite(R), tally, expected_counts("more", n), steps)


def modified_more_power(n: int, a: Residue, b: Residue, x: Residue, trace: bool = False) -> EngineReport:
    """Q_n(x) with R = A/B kept homogeneous; one inversion at the end.

    Both updates read the old (A, B):
        doubling   A' = A^2 + b B^2      B' = 2AB + a B^2
        multiply   A' = x A + b B        B' = A + (x + a) B
    """
    plan = BitPlan.of(n)
    tally = OpTally()
    steps = []
    xa = x + a
    A, B = x, Residue(1, x.modulus)
    for i in range(plan.ell - 1, -1, -1):
        AA = mod_mul(A, A, tally)
        BB = mod_mul(B, B, tally)
        AB = mod_mul(A, B, tally)
        A, B = (
            mod_add(AA, mod_mul(b, BB, tally), tally),
            mod_add(mod_add(AB, AB, tally), mod_mul(a, BB, tally), tally),
        )
        if trace:
            steps.append((A, B))
        if plan.bits[i]:
            A, B = (
                mod_add(mod_mul(x, A, tally), mod_mul(b, B, tally), tally),
                mod_add(A, mod_mul(xa, B, tally), tally),
            )
            if trace:
                steps.append((A, B))
    N = x.modulus.value
    if B.is_zero():
        if A.is_zero():
            raise AbsorbingPair("A = B = 0 at the end of Modified More")
        result = INF
    else:
        g = math.gcd(B.value, N)
        if g != 1:
            raise NonInvertibleDenominator(g, N, "final B")
        result = Finite(mod_mul(A, mod_inv(B, tally), tally))
    return EngineReport("modified-more", n, result, tally, expected_counts("modified-more", n), steps)


def parabola_power_closed(e: Residue, alpha: Residue, m: Residue, n: int) -> Param:
    """m^(+)n under m (+) m' = m + m' - 2 alpha e, i.e. n m - 2 (n - 1) alpha e."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return Finite(n * m - 2 * (n - 1) * alpha * e)


def expected_counts(engine: str, n: int) -> tuple:
    """(P, A, I) reference closed forms, with w' = w(n) - 1.

    The More row uses 2(ell + w'), 2(ell + w'), ell + w'.
    """
    plan = BitPlan.of(n)
    l, w = plan.ell, plan.multiply_steps
    if engine == "direct-eq2":
        return (2 * l + 2 * w, 2 * l + 3 * w, l + w)
    if engine == "direct-eq3":
        return (4 * l + 4 * w, 4 * l + 3 * w, l + w)
    if engine == "direct-eq4":
        return (0, 2 * l + 2 * w, 0)
    if engine == "more":
        return (2 * (l + w), 2 * (l + w), l + w)
    if engine == "modified-more":
        return (5 * l + 3 * w, 3 * l + 3 * w, 1)
    raise ValueError(f"unknown engine {engine!r}")


def derived_counts(engine: str, n: int) -> tuple:
    """(P, A, I) obtained by summing the per-step costs of the code above.

    Per step (P, A, I):
        direct-eq2     doubling = compose = (2, 2, 1)
        direct-eq3     doubling = compose = (4, 4, 1)
        direct-eq4     doubling = compose = (0, 2, 0)
        more           doubling (2, 3, 1), multiply (2, 2, 1)
        modified-more  doubling (5, 3, 0), multiply (3, 2, 0), final quotient (1, 0, 1)

    Exact whenever no intermediate value reaches infinity.
    """
    plan = BitPlan.of(n)
    l, w = plan.ell, plan.multiply_steps
    per_step = {
        "direct-eq2": ((2, 2, 1), (2, 2, 1), (0, 0, 0)),
        "direct-eq3": ((4, 4, 1), (4, 4, 1), (0, 0, 0)),
        "direct-eq4": ((0, 2, 0), (0, 2, 0), (0, 0, 0)),
        "more": ((2, 3, 1), (2, 2, 1), (0, 0, 0)),
        "modified-more": ((5, 3, 0), (3, 2, 0), (1, 0, 1)),
    }
    if engine not in per_step:
        raise ValueError(f"unknown engine {engine!r}")
    dbl, mul, fin = per_step[engine]
    return tuple(l * d + w * m + f for d, m, f in zip(dbl, mul, fin))


def more_count_report(n: int, tally: OpTally) -> list:
    """Measured More tally against the reference cost estimates.

    Returns rows (source, P, A, I, mismatch) where the ``text`` estimate is
    w(n) + ell products, 2(w(n) + ell) additions and w(n) + ell inversions,
    and the ``table`` estimate is 2 ell, 3 ell, ell.
    """
    plan = BitPlan.of(n)
    l, w = plan.ell, plan.weight
    refs = [
        ("text", (w + l, 2 * (w + l), w + l)),
        ("table", (2 * l, 3 * l, l)),
        ("expected", expected_counts("more", n)),
        ("derived", derived_counts("more", n)),
    ]
    got = tally.as_tuple()
    rows = [("measured", *got, "")]
    for name, ref in refs:
        diff = "".join(k for k, g, r in zip("PAI", got, ref) if g != r)
        rows.append((name, *ref, diff))
    return rows


def run_engine(engine: str, law: GroupLaw, m: Param, n: int) -> EngineReport:
    """Dispatch by engine name; 'more' and 'modified-more' need a RedeiNorm law."""
    if engine in ("direct", "direct-eq2", "direct-eq3", "direct-eq4"):
        return direct_power(law, m, n)
    if engine in ("more", "modified-more"):
        if not isinstance(law, RedeiNorm):
            raise ValueError(f"{engine} evaluates Redei functions and needs the redei law")
        if m is INF:
            raise ValueError(f"{engine} needs a finite starting parameter")
        zero = Residue(0, law.modulus)
        fn = more_power if engine == "more" else modified_more_power
        return fn(n, zero, law.D, m.value)
    if engine == "matrix":
        if not isinstance(law, RedeiNorm) or m is INF:
            raise ValueError("matrix evaluation needs the redei law and a finite parameter")
        return EngineReport("matrix", n, redei_rational(n, law.D, m.value), OpTally())
    if engine == "naive":
        tally = OpTally()
        return EngineReport("naive", n, naive_power(law, m, n, tally), tally)
    raise ValueError(f"unknown engine {engine!r}")

