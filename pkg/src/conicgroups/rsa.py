"""RSA-like encryption on the Pell conic via the Redei-norm parameter group.

A plaintext (Mx, My) in Z_N^2 lies on x^2 - D y^2 = 1 for
D = (Mx^2 - 1)/My^2; its parameter m = (1 + Mx)/My is raised to the public
exponent.  The ciphertext carries D, which decryption needs.

Decryption modes:

strict
    delta = e^-1 mod (p+1)(q+1).  Correct only when D is a non-residue
    modulo both p and q.
robust
    delta = e^-1 mod lcm(p - (D|p), q - (D|q)), recomputed per ciphertext.
    The parameter group modulo p has p - (D|p) elements, so this inverts
    the encryption for every D coprime to N.

Textbook scheme: no padding, no message encoding.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .engines import modified_more_power
from .params import INF, Finite, NonInvertibleDenominator, Param, format_param
from .residue import (
    Modulus,
    NonInvertible,
    Residue,
    is_probable_prime,
    legendre,
    parse_int,
    random_prime,
)

STRICT = "strict"
ROBUST = "robust"
DEFAULT_EXPONENT = 65537


class FactorFound(NonInvertible):
    """An intermediate value shared a proper factor with N."""

    @property
    def factor(self) -> int:
        return self.gcd


class InvalidPlaintext(ValueError):
    pass


class DecryptionError(ArithmeticError):
    pass


class KeyValidationError(ValueError):
    pass


class FormatError(ValueError):
    def __init__(self, msg: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line else msg)


@dataclass(frozen=True)
class PublicKey:
    N: int
    epsilon: int

    @property
    def modulus(self) -> Modulus:
        return Modulus.opaque(self.N)


@dataclass(frozen=True)
class PrivateKey:
    p: int
    q: int
    epsilon: int
    delta: int  # e^-1 mod (p+1)(q+1)
    mode: str = ROBUST

    @property
    def N(self) -> int:
        return self.p * self.q

    @property
    def modulus(self) -> Modulus:
        return Modulus(self.N, "composite", (self.p, self.q))

    def public(self) -> PublicKey:
        return PublicKey(self.N, self.epsilon)


@dataclass(frozen=True)
class Plaintext:
    Mx: int
    My: int


@dataclass(frozen=True)
class Ciphertext:
    c: Param
    D: Residue


def _check_exponent(p: int, q: int, epsilon: int, mode: str) -> bool:
    if math.gcd(epsilon, p * q) != 1:
        return False
    order = (p + 1) * (q + 1) if mode == STRICT else (p * p - 1) * (q * q - 1)
    return math.gcd(epsilon, order) == 1


def keys_from_primes(p: int, q: int, epsilon: int, mode: str = ROBUST) -> tuple:
    if mode not in (STRICT, ROBUST):
        raise ValueError(f"unknown mode {mode!r}")
    if p == q:
        raise KeyValidationError("p and q must be distinct")
    for r in (p, q):
        if r < 3 or not is_probable_prime(r):
            raise KeyValidationError(f"{r} is not an odd prime")
    if not _check_exponent(p, q, epsilon, mode):
        raise KeyValidationError(f"exponent {epsilon} is not coprime to the group orders ({mode} mode)")
    delta = pow(epsilon, -1, (p + 1) * (q + 1))
    sk = PrivateKey(p, q, epsilon, delta, mode)
    return sk.public(), sk


def keygen(bit_length: int, mode: str = ROBUST, rng: random.Random = None, epsilon: int = None) -> tuple:
    """Fresh key pair; primes of bit_length/2 bits drawn from ``rng``."""
    if bit_length < 16:
        raise ValueError("bit_length must be at least 16")
    if rng is None:
        rng = random.Random()
    half = bit_length // 2
    while True:
        p = random_prime(half, rng)
        q = random_prime(bit_length - half, rng)
        if p == q:
            continue
        if epsilon is not None:
            return keys_from_primes(p, q, epsilon, mode)
        e = DEFAULT_EXPONENT
        for _ in range(64):
            if _check_exponent(p, q, e, mode):
                return keys_from_primes(p, q, e, mode)
            e = rng.randrange(3, 1 << 20) | 1


def _inv(v: Residue, what: str) -> Residue:
    N = v.modulus.value
    g = math.gcd(v.value, N)
    if g == 1:
        return Residue(pow(v.value, -1, N), v.modulus)
    if g == N:
        raise InvalidPlaintext(f"{what} is zero mod N")
    raise FactorFound(g, N, what)


def _power(c: Residue, D: Residue, exponent: int) -> Param:
    zero = Residue(0, c.modulus)
    try:
        return modified_more_power(exponent, zero, D, c).result
    except NonInvertibleDenominator as exc:
        raise FactorFound(exc.gcd, exc.modulus, "power denominator") from exc


def encrypt(pk: PublicKey, pt: Plaintext) -> Ciphertext:
    mod = pk.modulus
    Mx, My = Residue(pt.Mx, mod), Residue(pt.My, mod)
    My_inv = _inv(My, "My")
    _inv(Mx * Mx - 1, "Mx^2 - 1")
    D = (Mx * Mx - 1) * My_inv * My_inv
    m = (1 + Mx) * My_inv
    return Ciphertext(_power(m, D, pk.epsilon), D)


def decryption_exponent(sk: PrivateKey, D: Residue) -> int:
    if sk.mode == STRICT:
        return sk.delta
    chi_p = legendre(D.value, Modulus(sk.p, "prime"))
    chi_q = legendre(D.value, Modulus(sk.q, "prime"))
    if chi_p == 0 or chi_q == 0:
        g = sk.p if chi_p == 0 else sk.q
        raise FactorFound(g, sk.N, "D")
    order = math.lcm(sk.p - chi_p, sk.q - chi_q)
    return pow(sk.epsilon, -1, order)


def decrypt(sk: PrivateKey, ct: Ciphertext) -> Plaintext:
    mod = sk.modulus
    D = Residue(ct.D.value, mod)
    if ct.c is INF:
        raise DecryptionError("ciphertext parameter is INF; no valid plaintext maps there")
    c = Residue(ct.c.value.value, mod)
    m = _power(c, D, decryption_exponent(sk, D))
    if m is INF:
        raise DecryptionError("decrypted parameter is INF")
    mv = m.value
    den = mv * mv - D
    g = math.gcd(den.value, sk.N)
    if g != 1:
        raise DecryptionError(f"m^2 - D not invertible (gcd {g}): absorbing parameter")
    inv = Residue(pow(den.value, -1, sk.N), mod)
    Mx = (mv * mv + D) * inv
    My = 2 * mv * inv
    return Plaintext(Mx.value, My.value)


# --- file formats -----------------------------------------------------------

PUB_HEADER = "CONIC-RSA PUBLIC v1"
PRIV_HEADER = "CONIC-RSA PRIVATE v1"
CT_HEADER = "CONIC-RSA CT v1"


def serialize_public(pk: PublicKey) -> str:
    return f"{PUB_HEADER}\nN={pk.N}\ne={pk.epsilon}\n"


def serialize_private(sk: PrivateKey) -> str:
    return f"{PRIV_HEADER}\np={sk.p}\nq={sk.q}\ne={sk.epsilon}\ndelta={sk.delta}\nmode={sk.mode}\n"


def serialize_ct(ct: Ciphertext) -> str:
    return f"{CT_HEADER}\nc={format_param(ct.c)}\nD={ct.D.value}\n"


def _fields(text: str, header: str, keys: tuple) -> dict:
    if "\r" in text:
        raise FormatError("CR characters are not allowed; use LF line endings")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != header:
        got = lines[0] if lines else ""
        raise FormatError(f"expected header {header!r}, got {got!r}", 1)
    if len(lines) != len(keys) + 1:
        raise FormatError(f"expected {len(keys)} fields, got {len(lines) - 1}")
    out = {}
    for lineno, (line, key) in enumerate(zip(lines[1:], keys), start=2):
        if line != line.rstrip():
            raise FormatError("trailing whitespace", lineno)
        name, sep, value = line.partition("=")
        if not sep or name != key:
            raise FormatError(f"expected field {key!r}", lineno)
        out[key] = (value, lineno)
    return out


def _int_field(fields: dict, key: str) -> int:
    value, lineno = fields[key]
    try:
        return parse_int(value)
    except ValueError as exc:
        raise FormatError(f"field {key!r}: {exc}", lineno) from None


def parse_public(text: str) -> PublicKey:
    f = _fields(text, PUB_HEADER, ("N", "e"))
    return PublicKey(_int_field(f, "N"), _int_field(f, "e"))


def parse_private(text: str) -> PrivateKey:
    f = _fields(text, PRIV_HEADER, ("p", "q", "e", "delta", "mode"))
    mode, lineno = f["mode"]
    if mode not in (STRICT, ROBUST):
        raise FormatError(f"mode must be strict or robust, got {mode!r}", lineno)
    return PrivateKey(
        _int_field(f, "p"), _int_field(f, "q"), _int_field(f, "e"), _int_field(f, "delta"), mode
    )


def parse_ct(text: str, modulus: Modulus) -> Ciphertext:
    """Ciphertext values are residues mod N, so the key's modulus is needed."""
    f = _fields(text, CT_HEADER, ("c", "D"))
    D = _int_field(f, "D")
    if D >= modulus.value:
        raise FormatError("D is not reduced mod N", f["D"][1])
    c_text, lineno = f["c"]
    if c_text == "INF":
        c = INF
    else:
        cv = _int_field(f, "c")
        if cv >= modulus.value:
            raise FormatError("c is not reduced mod N", lineno)
        c = Finite(Residue(cv, modulus))
    return Ciphertext(c, Residue(D, modulus))
