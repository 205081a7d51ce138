"""Integer and finite-field primitives used by the rest of the package."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

DEFAULT_MEMORY_BUDGET = 2 * 1024**3
MEMORY_BUDGET_ENV = "PUNCTURED_MEMORY_BUDGET"


class ResourceError(RuntimeError):
    """Raised when a request would exceed the configured memory/size budget."""


def memory_budget() -> int:
    raw = os.environ.get(MEMORY_BUDGET_ENV)
    if not raw:
        return DEFAULT_MEMORY_BUDGET
    return int(float(raw))


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())

    def __contains__(self, n: int) -> bool:
        i = int(np.searchsorted(self.primes, n))
        return i < len(self.primes) and int(self.primes[i]) == n

    def tolist(self) -> list[int]:
        return self.primes.tolist()

    def count_upto(self, x: int) -> int:
        """pi(x) for x <= limit."""
        if x > self.limit:
            raise ValueError(f"{x} exceeds table limit {self.limit}")
        return int(np.searchsorted(self.primes, x, side="right"))


def _small_sieve(n: int) -> np.ndarray:
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if is_p[q]:
            is_p[q * q :: q] = False
    return np.flatnonzero(is_p).astype(np.int64)


def sieve_primes(limit: int, segment_size: int = 1 << 18) -> PrimeTable:
    """Segmented sieve of Eratosthenes over odd numbers.

    ``segment_size`` is the number of odd candidates per segment; the default
    keeps the working bitmap at 256 KiB so it stays in L2.
    """
    if limit < 2:
        raise ValueError("limit must be >= 2")
    # output array plus generous slack for the prime counting estimate
    estimate = int(1.3 * limit / max(math.log(limit), 1.0)) + 16
    if 8 * estimate > memory_budget():
        raise ResourceError(
            f"prime table up to {limit} needs ~{8 * estimate} bytes, "
            f"budget is {memory_budget()} (set {MEMORY_BUDGET_ENV})"
        )
    base = _small_sieve(math.isqrt(limit) + 1)
    chunks = [np.array([2], dtype=np.int64)]
    odd_base = base[1:]
    low = 3
    span = 2 * segment_size
    while low <= limit:
        high = min(low + span, limit + 1)
        n_odd = (high - low + 1) // 2
        mask = np.ones(n_odd, dtype=bool)
        for q in odd_base:
            q = int(q)
            qq = q * q
            if qq >= high:
                break
            start = max(qq, ((low + q - 1) // q) * q)
            if start % 2 == 0:
                start += q
            if start >= high:
                continue
            mask[(start - low) // 2 :: q] = False
        chunks.append(low + 2 * np.flatnonzero(mask).astype(np.int64))
        low = high if high % 2 == 1 else high + 1
    primes = np.concatenate(chunks)
    primes = primes[primes <= limit]
    primes.setflags(write=False)
    return PrimeTable(limit, primes)


@lru_cache(maxsize=8)
def cached_primes(limit: int) -> PrimeTable:
    return sieve_primes(limit)


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    # enough for n <= 10^12
    return tuple(sieve_primes(10**6).tolist())


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, ascending primes."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    small = _trial_primes()
    for q in small:
        if q * q > n:
            break
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out.append((q, e))
    else:
        # n had no factor below 10^6 yet still exceeds 10^12
        q = small[-1] + 2
        while q * q <= n:
            if n % q == 0:
                e = 0
                while n % q == 0:
                    n //= q
                    e += 1
                out.append((q, e))
            q += 2
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == [(n, 1)]


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def divisors(n: int) -> list[int]:
    divs = [1]
    for q, e in factorize(n):
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def smallest_nonresidue(p: int) -> int:
    """Smallest prime that is a quadratic non-residue mod the odd prime p."""
    for q in _trial_primes():
        if legendre(q, p) == -1:
            return q
    raise ValueError(f"no small non-residue found for {p}")


def sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks square root of a residue a modulo an odd prime p."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = smallest_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


@dataclass(frozen=True)
class QuadExtField:
    """F_{p^2} = F_p[t]/(t^2 - d) with d the smallest non-residue.

    Elements are plain ``(a, b)`` tuples meaning ``a + b*t``.
    """

    p: int
    d: int

    @classmethod
    def of(cls, p: int) -> "QuadExtField":
        if p % 2 == 0:
            raise ValueError("QuadExtField needs an odd prime")
        return cls(p, smallest_nonresidue(p))

    def __post_init__(self):
        if pow(self.d, (self.p - 1) // 2, self.p) != self.p - 1:
            raise ValueError(f"{self.d} is a square mod {self.p}")

    def elem(self, a: int, b: int = 0) -> tuple[int, int]:
        return (a % self.p, b % self.p)

    def add(self, x, y):
        p = self.p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def mul(self, x, y):
        p = self.p
        return (
            (x[0] * y[0] + self.d * x[1] * y[1]) % p,
            (x[0] * y[1] + x[1] * y[0]) % p,
        )

    def pow(self, x, e: int):
        result = (1, 0)
        while e:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def norm(self, x) -> int:
        return (x[0] * x[0] - self.d * x[1] * x[1]) % self.p

    def elements(self):
        return ((a, b) for a in range(self.p) for b in range(self.p))


def quad_character_ext(z: tuple[int, int], field: QuadExtField) -> int:
    """Quadratic character of F_{p^2} by direct exponentiation."""
    if z[0] % field.p == 0 and z[1] % field.p == 0:
        return 0
    r = field.pow(z, (field.p**2 - 1) // 2)
    if r == (1, 0):
        return 1
    if r == (field.p - 1, 0):
        return -1
    raise ArithmeticError(f"character value {r} is not +-1")
