import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from punctured import arith
from punctured.arith import (
    QuadExtField,
    ResourceError,
    divisors,
    factorize,
    legendre,
    mobius,
    quad_character_ext,
    sieve_primes,
    smallest_nonresidue,
    sqrt_mod,
)

SMALL_ODD_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 101, 1009]


@pytest.mark.parametrize("limit", [2, 3, 10, 97, 1000, 65536, 300007])
def test_sieve_matches_sympy(limit):
    assert sieve_primes(limit).tolist() == list(sympy.primerange(2, limit + 1))


def test_sieve_segments_agree():
    a = sieve_primes(200000, segment_size=1 << 10).primes
    b = sieve_primes(200000).primes
    assert np.array_equal(a, b)


def test_prime_table_counts():
    t = sieve_primes(10**4)
    assert t.count_upto(100) == 25
    assert t.count_upto(10**4) == 1229
    assert 9973 in t and 9975 not in t
    with pytest.raises(ValueError):
        t.count_upto(10**5)


def test_sieve_errors(monkeypatch):
    with pytest.raises(ValueError):
        sieve_primes(1)
    monkeypatch.setenv(arith.MEMORY_BUDGET_ENV, "1000")
    with pytest.raises(ResourceError):
        sieve_primes(10**7)


@given(st.integers(1, 10**6))
def test_factorize_roundtrip(n):
    fs = factorize(n)
    assert math.prod(q**a for q, a in fs) == n
    assert dict(fs) == sympy.factorint(n)


@given(st.integers(1, 5000))
def test_mobius_sum_over_divisors(n):
    assert sum(mobius(d) for d in divisors(n)) == (1 if n == 1 else 0)


@given(st.integers(1, 3000), st.integers(1, 3000))
def test_mobius_multiplicative(m, n):
    if math.gcd(m, n) == 1:
        assert mobius(m * n) == mobius(m) * mobius(n)


@pytest.mark.parametrize("p", SMALL_ODD_PRIMES)
def test_legendre_against_square_table(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(p):
        want = 0 if a == 0 else (1 if a in squares else -1)
        assert legendre(a, p) == want


@pytest.mark.parametrize("p", SMALL_ODD_PRIMES)
def test_nonresidue_and_sqrt(p):
    d = smallest_nonresidue(p)
    assert legendre(d, p) == -1
    assert all(legendre(k, p) == 1 for k in range(1, d))
    for a in range(1, p):
        if legendre(a, p) == 1:
            r = sqrt_mod(a, p)
            assert r * r % p == a


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_quad_ext_field_axioms(p):
    F = QuadExtField.of(p)
    els = list(F.elements())
    assert len(els) == p * p
    one = (1, 0)
    nonzero = [z for z in els if z != (0, 0)]
    for z in nonzero:
        # multiplicative group has order p^2 - 1
        assert F.pow(z, p * p - 1) == one
    for x in els[::3]:
        for y in els[::5]:
            for z in els[::7]:
                assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
                assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_ext_character_equals_norm_character(p):
    # the shortcut used by the genus-2 kernels
    F = QuadExtField.of(p)
    squares = {F.mul(z, z) for z in F.elements() if z != (0, 0)}
    for z in F.elements():
        chi = quad_character_ext(z, F)
        assert chi == legendre(F.norm(z), p)
        if z != (0, 0):
            assert (chi == 1) == (z in squares)


def test_quad_ext_rejects_residue():
    with pytest.raises(ValueError):
        QuadExtField(7, 2)


def test_memory_budget_env(monkeypatch):
    monkeypatch.delenv(arith.MEMORY_BUDGET_ENV, raising=False)
    assert arith.memory_budget() == arith.DEFAULT_MEMORY_BUDGET
    monkeypatch.setenv(arith.MEMORY_BUDGET_ENV, "1e6")
    assert arith.memory_budget() == 10**6


@settings(max_examples=50)
@given(st.integers(2, 10**5))
def test_is_prime(n):
    assert arith.is_prime(n) == sympy.isprime(n)
