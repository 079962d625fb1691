import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conicgroups.residue import (
    Modulus,
    ModulusMismatch,
    NonInvertible,
    OpTally,
    Residue,
    is_probable_prime,
    jacobi,
    legendre,
    mod_add,
    mod_inv,
    mod_mul,
    mod_neg,
    mod_pow,
    mod_sub,
    parse_int,
    random_prime,
    sqrt_mod,
)

N253 = Modulus.composite(11, 23)


def test_inverse_of_68_mod_253():
    assert mod_inv(Residue(68, N253)) == 160


def test_inverse_exposes_factor():
    with pytest.raises(NonInvertible) as exc:
        mod_inv(Residue(11, N253))
    assert exc.value.gcd == 11
    assert exc.value.reveals_factor


def test_inverse_of_zero_is_not_a_factor():
    with pytest.raises(NonInvertible) as exc:
        mod_inv(Residue(0, N253))
    assert not exc.value.reveals_factor


def test_legendre_examples():
    assert legendre(3, Modulus.prime(7)) == -1
    assert legendre(3, Modulus.prime(11)) == 1
    assert legendre(14, Modulus.prime(7)) == 0


def test_legendre_rejects_composite():
    with pytest.raises(ValueError):
        legendre(3, N253)


def test_jacobi_example():
    assert jacobi(2, 15) == 1
    assert jacobi(5, 15) == 0


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 97, 101])
def test_legendre_matches_euler_table(p):
    mod = Modulus.prime(p)
    squares = {x * x % p for x in range(1, p)}
    for a in range(1, p):
        assert legendre(a, mod) == (1 if a in squares else -1)
        assert jacobi(a, p) == legendre(a, mod)


@given(st.integers(0, 10**6), st.sampled_from([15, 21, 35, 253, 1001, 3 * 5 * 7 * 11]))
def test_jacobi_is_product_of_legendres(a, n):
    factors = []
    m, d = n, 3
    while m > 1:
        while m % d == 0:
            factors.append(d)
            m //= d
        d += 2
    want = 1
    for f in factors:
        want *= legendre(a, Modulus.prime(f))
    assert jacobi(a, n) == want


@pytest.mark.parametrize("p", [3, 5, 13, 17, 41, 97, 65537, 2**61 - 1])
def test_sqrt_mod(p):
    rng = random.Random(p)
    for _ in range(50):
        a = rng.randrange(p)
        r = sqrt_mod(a, p)
        if pow(a, (p - 1) // 2, p) in (0, 1):
            assert r * r % p == a
        else:
            assert r is None


def test_primality():
    assert is_probable_prime(2**61 - 1)
    assert not is_probable_prime(561)
    assert not is_probable_prime(1)
    assert is_probable_prime(2)
    small = [n for n in range(2, 200) if all(n % d for d in range(2, n))]
    assert [n for n in range(200) if is_probable_prime(n)] == small


def test_random_prime_bit_length():
    rng = random.Random(1)
    p = random_prime(64, rng)
    assert p.bit_length() == 64 and is_probable_prime(p)


def test_modulus_validation():
    with pytest.raises(ValueError):
        Modulus.prime(9)
    with pytest.raises(ValueError):
        Modulus.composite(7, 7)
    with pytest.raises(ValueError):
        Modulus.opaque(10)


def test_mixed_moduli_rejected():
    with pytest.raises(ModulusMismatch):
        Residue(1, Modulus.prime(7)) + Residue(1, Modulus.prime(11))


def test_tally_counts():
    m = Modulus.prime(101)
    t = OpTally()
    a, b = m(5), m(9)
    mod_add(a, b, t)
    mod_sub(a, b, t)
    mod_neg(a, t)
    mod_mul(a, b, t)
    mod_inv(a, t)
    assert t.as_tuple() == (1, 3, 1)


def test_mod_pow_counts_square_and_multiply():
    m = Modulus.prime(101)
    t = OpTally()
    assert mod_pow(m(3), 13, t) == pow(3, 13, 101)
    # 13 = 0b1101: three squarings, two multiplies
    assert t.as_tuple() == (5, 0, 0)


@given(st.integers(0, 2**64), st.integers(0, 2**64), st.integers(0, 2**64))
def test_field_laws(a, b, c):
    m = Modulus.prime(2**61 - 1)
    x, y, z = m(a), m(b), m(c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - y == -(y - x)
    if not x.is_zero():
        assert x * mod_inv(x) == 1


@pytest.mark.parametrize("text", ["", "-1", "+1", "01", "1.0", "1e3", "١٢"])
def test_parse_int_rejects(text):
    with pytest.raises(ValueError):
        parse_int(text)


def test_parse_int_accepts():
    assert parse_int("0") == 0
    assert parse_int("12345678901234567890") == 12345678901234567890
