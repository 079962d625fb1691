"""Modular arithmetic over an odd modulus with exact operation counting.

Every counted operation takes an optional :class:`OpTally`.  The counting
convention is fixed for the whole package:

* a product (including a squaring) increments ``products``;
* an addition, subtraction, negation or doubling ``x + x`` increments
  ``additions``;
* an inversion increments ``inversions``.  Division is never a primitive:
  callers write it as ``mod_mul(a, mod_inv(b))``, i.e. one inversion plus
  one product.

Comparisons, copies and constant precomputation done at construction time
are free.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

PRIME = "prime"
COMPOSITE = "composite"
OPAQUE = "opaque"

_SMALL_PRIMES = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233,
    239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311, 313, 317,
]


class NonInvertible(ArithmeticError):
    """Raised when an element shares a factor ``gcd`` with the modulus.

    For a composite modulus with ``1 < gcd < N`` the attribute is a proper
    factor of N.
    """

    def __init__(self, gcd: int, modulus: int, what: str = "element"):
        self.gcd = gcd
        self.modulus = modulus
        super().__init__(f"{what} not invertible mod {modulus}: gcd = {gcd}")

    @property
    def reveals_factor(self) -> bool:
        return 1 < self.gcd < self.modulus


class ModulusMismatch(ValueError):
    pass


def is_probable_prime(n: int, rounds: int = 40, rng: Optional[random.Random] = None) -> bool:
    """Miller-Rabin with ``rounds`` random bases (seeded from ``n`` if no rng)."""
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n % 2 == 0:
        return False
    for sp in _SMALL_PRIMES:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if rng is None:
        rng = random.Random(n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(bits: int, rng: random.Random, rounds: int = 40) -> int:
    """A probable prime with exactly ``bits`` bits (top two bits set)."""
    if bits < 3:
        raise ValueError("need at least 3 bits")
    while True:
        cand = rng.getrandbits(bits) | (1 << (bits - 1)) | (1 << (bits - 2)) | 1
        if is_probable_prime(cand, rounds, rng):
            return cand


@dataclass(frozen=True)
class Modulus:
    """An odd modulus >= 3 together with what is known about it.

    Use the constructors :meth:`prime`, :meth:`composite` and :meth:`opaque`.
    """

    value: int
    kind: str = OPAQUE
    factors: tuple = ()

    def __post_init__(self):
        if self.value < 3 or self.value % 2 == 0:
            raise ValueError(f"modulus must be odd and >= 3, got {self.value}")
        if self.kind not in (PRIME, COMPOSITE, OPAQUE):
            raise ValueError(f"unknown modulus kind {self.kind!r}")
        if self.kind == COMPOSITE:
            p, q = self.factors
            if p * q != self.value or p % 2 == 0 or q % 2 == 0:
                raise ValueError("factors must be odd and multiply to the modulus")

    @classmethod
    def prime(cls, p: int) -> "Modulus":
        if not is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        return cls(p, PRIME)

    @classmethod
    def composite(cls, p: int, q: int) -> "Modulus":
        if p == q or not (is_probable_prime(p) and is_probable_prime(q)):
            raise ValueError("factors must be distinct primes")
        return cls(p * q, COMPOSITE, (p, q))

    @classmethod
    def opaque(cls, n: int) -> "Modulus":
        return cls(n, OPAQUE)

    @property
    def is_prime(self) -> bool:
        return self.kind == PRIME

    def __call__(self, v: int) -> "Residue":
        return Residue(v, self)

    def __int__(self):
        return self.value


class Residue:
    """A canonical element of Z/NZ.  Treated as immutable."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: Modulus):
        self.value = value % modulus.value
        self.modulus = modulus

    def _coerce(self, other) -> "Residue":
        if isinstance(other, Residue):
            _check(self, other)
            return other
        if isinstance(other, int):
            return Residue(other, self.modulus)
        return NotImplemented

    # operator forms are uncounted conveniences
    def __add__(self, other):
        other = self._coerce(other)
        return Residue(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return Residue(self.value - other.value, self.modulus)

    def __rsub__(self, other):
        other = self._coerce(other)
        return Residue(other.value - self.value, self.modulus)

    def __mul__(self, other):
        other = self._coerce(other)
        return Residue(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __pow__(self, n: int):
        return mod_pow(self, n)

    def inverse(self) -> "Residue":
        return mod_inv(self)

    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.value == other.value and self.modulus.value == other.modulus.value
        if isinstance(other, int):
            return self.value == other % self.modulus.value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus.value))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"Residue({self.value}, {self.modulus.value})"

    def __str__(self):
        return str(self.value)


@dataclass
class OpTally:
    """Exact counters of ring products, additions and inversions."""

    products: int = 0
    additions: int = 0
    inversions: int = 0

    def as_tuple(self) -> tuple:
        return (self.products, self.additions, self.inversions)


def _check(a: Residue, b: Residue):
    if a.modulus is not b.modulus and a.modulus.value != b.modulus.value:
        raise ModulusMismatch(f"moduli differ: {a.modulus.value} vs {b.modulus.value}")


def mod_add(a: Residue, b: Residue, tally: Optional[OpTally] = None) -> Residue:
    _check(a, b)
    if tally is not None:
        tally.additions += 1
    return Residue(a.value + b.value, a.modulus)


def mod_sub(a: Residue, b: Residue, tally: Optional[OpTally] = None) -> Residue:
    _check(a, b)
    if tally is not None:
        tally.additions += 1
    return Residue(a.value - b.value, a.modulus)


def mod_neg(a: Residue, tally: Optional[OpTally] = None) -> Residue:
    if tally is not None:
        tally.additions += 1
    return Residue(-a.value, a.modulus)


def mod_mul(a: Residue, b: Residue, tally: Optional[OpTally] = None) -> Residue:
    _check(a, b)
    if tally is not None:
        tally.products += 1
    return Residue(a.value * b.value, a.modulus)


def mod_inv(a: Residue, tally: Optional[OpTally] = None) -> Residue:
    n = a.modulus.value
    g = math.gcd(a.value, n)
    if g != 1:
        raise NonInvertible(g, n)
    if tally is not None:
        tally.inversions += 1
    return Residue(pow(a.value, -1, n), a.modulus)


def mod_pow(a: Residue, n: int, tally: Optional[OpTally] = None) -> Residue:
    """Left-to-right square-and-multiply; counts products when tallied."""
    if n < 0:
        raise ValueError("exponent must be non-negative")
    if tally is None:
        return Residue(pow(a.value, n, a.modulus.value), a.modulus)
    result = Residue(1, a.modulus)
    if n == 0:
        return result
    result = a
    for bit in bin(n)[3:]:
        result = mod_mul(result, result, tally)
        if bit == "1":
            result = mod_mul(result, a, tally)
    return result


def legendre(a, p: Modulus) -> int:
    """Legendre symbol (a|p) computed by Euler's criterion."""
    if not isinstance(p, Modulus) or not p.is_prime:
        raise ValueError("legendre needs a prime modulus")
    r = Residue(int(a), p)
    if r.value == 0:
        return 0
    t = mod_pow(r, (p.value - 1) // 2).value
    return 1 if t == 1 else -1


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n >= 3, by quadratic reciprocity."""
    if n < 3 or n % 2 == 0:
        raise ValueError("jacobi needs an odd modulus >= 3")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod(a: int, p: int) -> Optional[int]:
    """A square root of a mod odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def parse_int(text: str) -> int:
    """Decimal ASCII, non-negative, no sign and no leading zeros."""
    s = text.strip()
    if not s or not s.isascii() or not s.isdigit():
        raise ValueError(f"not a non-negative decimal integer: {text!r}")
    if len(s) > 1 and s[0] == "0":
        raise ValueError(f"leading zeros not allowed: {text!r}")
    return int(s)
