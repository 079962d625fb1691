"""Redei polynomials N_n, D_n and the rational function Q_n = N_n / D_n.

Indexing: N_n + D_n sqrt(D) = (z + sqrt(D))^n, so N_1 = z, D_1 = 1 and
Q_n(D, z) is exactly the n-fold power of z under the Redei-norm law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import INF, Finite, NonInvertibleDenominator, Param
from .residue import Residue


@dataclass(frozen=True)
class RedeiPair:
    num: Residue
    den: Residue
    n: int


def redei_eval_recursive(n: int, D: Residue, z: Residue) -> RedeiPair:
    """Linear-time evaluation by the coupled first-order recurrences."""
    if n < 1:
        raise ValueError("n must be >= 1")
    num, den = z, Residue(1, z.modulus)
    for _ in range(n - 1):
        num, den = z * num + D * den, num + z * den
    return RedeiPair(num, den, n)


def _matmul(a, b, N):
    return (
        (a[0] * b[0] + a[1] * b[2]) % N,
        (a[0] * b[1] + a[1] * b[3]) % N,
        (a[2] * b[0] + a[3] * b[2]) % N,
        (a[2] * b[1] + a[3] * b[3]) % N,
    )


def redei_matrix_power(n: int, D: Residue, z: Residue) -> tuple:
    """[[z, D], [1, z]]^n as a flat (a, b, c, d) tuple of ints."""
    if n < 1:
        raise ValueError("n must be >= 1")
    N = z.modulus.value
    base = (z.value, D.value, 1, z.value)
    result = base
    for bit in bin(n)[3:]:
        result = _matmul(result, result, N)
        if bit == "1":
            result = _matmul(result, base, N)
    return result


def redei_eval_matrix(n: int, D: Residue, z: Residue) -> RedeiPair:
    """O(log n) evaluation: entry (1,1) is N_n, entry (2,1) is D_n."""
    a, _, c, _ = redei_matrix_power(n, D, z)
    return RedeiPair(Residue(a, z.modulus), Residue(c, z.modulus), n)


def redei_rational(n: int, D: Residue, z: Residue) -> Param:
    pair = redei_eval_matrix(n, D, z)
    N = z.modulus.value
    if pair.den.is_zero():
        return INF
    g = math.gcd(pair.den.value, N)
    if g != 1:
        raise NonInvertibleDenominator(g, N, "D_n")
    return Finite(pair.num * pow(pair.den.value, -1, N))


def redei_binomial(n: int, D: Residue, z: Residue) -> RedeiPair:
    """Direct evaluation of the binomial sums (slow, for checking)."""
    num = sum(math.comb(n, 2 * k) * pow(D.value, k) * pow(z.value, n - 2 * k) for k in range(n // 2 + 1))
    den = sum(
        math.comb(n, 2 * k + 1) * pow(D.value, k) * pow(z.value, n - 2 * k - 1)
        for k in range((n - 1) // 2 + 1)
    )
    return RedeiPair(Residue(num, z.modulus), Residue(den, z.modulus), n)
