"""Point counting on reductions of elliptic curves and genus-2 Jacobians."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .arith import (
    cached_primes,
    factorize,
    legendre,
    smallest_nonresidue,
)

ELLIPTIC = "elliptic"
GENUS2 = "genus2"

NAIVE_CROSSOVER = 3000
BSGS_BUDGET = 40


class BadReductionError(ValueError):
    """p divides the attested conductor."""


class UnusablePrimeError(BadReductionError):
    """p divides the model discriminant but not the conductor (model not minimal at p)."""


class CountingError(RuntimeError):
    """An internal consistency check failed (BSGS budget, parity, ...)."""


@dataclass(frozen=True)
class Surjectivity:
    """Attested set of primes l with surjective mod-l representation.

    Covers every prime >= ``from_prime`` except ``exceptions``, plus ``primes``.
    ``from_prime=None`` means no blanket claim.
    """

    from_prime: int | None = None
    exceptions: tuple[int, ...] = ()
    primes: tuple[int, ...] = ()

    def __contains__(self, ell: int) -> bool:
        if ell in self.primes:
            return True
        return self.from_prime is not None and ell >= self.from_prime and ell not in self.exceptions

    def to_json(self):
        if self.from_prime == 2 and not self.exceptions and not self.primes:
            return "all"
        return {"from": self.from_prime, "except": list(self.exceptions), "primes": list(self.primes)}

    @classmethod
    def from_json(cls, obj) -> "Surjectivity":
        if obj == "all":
            return cls(from_prime=2)
        if isinstance(obj, list):
            return cls(primes=tuple(obj))
        return cls(obj.get("from"), tuple(obj.get("except", ())), tuple(obj.get("primes", ())))


@dataclass(frozen=True)
class CurveSpec:
    """An elliptic curve (long Weierstrass ``ainvs``) or a genus-2 curve
    ``y^2 + h(x) y = f(x)`` with ascending coefficient tuples, plus attested data."""

    kind: str
    label: str
    conductor: int
    ainvs: tuple[int, ...] = ()
    f: tuple[int, ...] = ()
    h: tuple[int, ...] = ()
    attested_trivial_mw: bool = False
    surjective: Surjectivity = field(default_factory=Surjectivity)
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in (ELLIPTIC, GENUS2):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if self.conductor < 1:
            raise ValueError("conductor must be >= 1")
        if self.kind == ELLIPTIC:
            if len(self.ainvs) != 5:
                raise ValueError("elliptic curves need five a-invariants")
        else:
            f = _trim(self.f)
            if len(f) - 1 not in (5, 6):
                raise ValueError("genus-2 model needs deg f in {5, 6}")
            if len(_trim(self.h)) > 3:
                raise ValueError("genus-2 model needs deg h <= 2")
        if self.discriminant == 0:
            raise ValueError(f"model of {self.label} is singular")

    @property
    def dimension(self) -> int:
        return 1 if self.kind == ELLIPTIC else 2

    @property
    def discriminant(self) -> int:
        return _discriminant(self)

    def bad_primes(self) -> list[int]:
        return [q for q, _ in factorize(self.conductor)]

    def unusable_primes(self) -> list[int]:
        """Primes dividing the model discriminant but not the conductor."""
        return [q for q, _ in factorize(abs(self.discriminant)) if self.conductor % q]

    def is_good(self, p: int) -> bool:
        return self.conductor % p != 0

    def check_prime(self, p: int) -> None:
        if self.conductor % p == 0:
            raise BadReductionError(f"{self.label} has bad reduction at {p}")
        if self.discriminant % p == 0:
            raise UnusablePrimeError(
                f"{p} divides the model discriminant of {self.label} but not its conductor"
            )


def _trim(c) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def b_invariants(ainvs):
    a1, a2, a3, a4, a6 = ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def c_invariants(ainvs):
    b2, b4, b6, _ = b_invariants(ainvs)
    return b2 * b2 - 24 * b4, -(b2**3) + 36 * b2 * b4 - 216 * b6


def sextic(curve: CurveSpec) -> tuple[int, ...]:
    """Ascending coefficients (length 7) of h^2 + 4f."""
    out = [0] * 7
    for i, c in enumerate(curve.f):
        out[i] += 4 * c
    for i, a in enumerate(curve.h):
        for j, b in enumerate(curve.h):
            out[i + j] += a * b
    return tuple(out)


@lru_cache(maxsize=64)
def _discriminant(curve: CurveSpec) -> int:
    if curve.kind == ELLIPTIC:
        b2, b4, b6, b8 = b_invariants(curve.ainvs)
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    import sympy

    x = sympy.Symbol("x")
    F = _trim(sextic(curve))
    poly = sympy.Poly(list(reversed(F)), x)
    disc = int(sympy.discriminant(poly, x))
    if len(F) - 1 == 5:
        # as a binary sextic with vanishing x^6 term
        disc *= F[-1] ** 2
    elif len(F) - 1 < 5:
        return 0
    return disc // 4096


@dataclass(frozen=True)
class LocalFrobeniusData:
    """Frobenius data at a good prime.

    ``counts`` is ``(#E(F_p),)`` or ``(#C(F_p), #C(F_{p^2}))``; ``charpoly`` holds
    the coefficients of P_p from the leading term down.
    """

    p: int
    counts: tuple[int, ...]
    charpoly: tuple[int, ...]
    group_order: int

    @property
    def trace(self) -> int:
        return -self.charpoly[1]


def _ec_data(p: int, n: int) -> LocalFrobeniusData:
    a = p + 1 - n
    return LocalFrobeniusData(p, (n,), (1, -a, p), n)


def _ec_enumerate(ainvs, p: int) -> int:
    a1, a2, a3, a4, a6 = ainvs
    n = 1
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0:
                n += 1
    return n


def ec_count_naive(curve: CurveSpec, p: int) -> LocalFrobeniusData:
    if curve.kind != ELLIPTIC:
        raise ValueError("ec_count_naive needs an elliptic curve")
    curve.check_prime(p)
    if p < 5:
        return _ec_data(p, _ec_enumerate(curve.ainvs, p))
    b2, b4, b6, _ = b_invariants(curve.ainvs)
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    return _ec_data(p, p + 1 + kernels.ec_char_sum(4, b2, 2 * b4, b6, p))


def _short_model(curve: CurveSpec, p: int):
    c4, c6 = c_invariants(curve.ainvs)
    return (-27 * c4) % p, (-54 * c6) % p


def ec_count_bsgs(
    curve: CurveSpec, p: int, seed: int = 0, budget: int = BSGS_BUDGET
) -> LocalFrobeniusData:
    if curve.kind != ELLIPTIC:
        raise ValueError("ec_count_bsgs needs an elliptic curve")
    if p < 5:
        raise ValueError("BSGS counting needs p >= 5")
    curve.check_prime(p)
    A, B = _short_model(curve, p)
    n = kernels.ec_group_order(A, B, p, smallest_nonresidue(p), seed, budget)
    if n < 0:
        raise CountingError(f"BSGS did not isolate #E(F_{p}) within {budget} points")
    return _ec_data(p, n)


def ec_count(curve: CurveSpec, p: int, crossover: int = NAIVE_CROSSOVER, seed: int = 0):
    if p < crossover or p < 5:
        return ec_count_naive(curve, p)
    return ec_count_bsgs(curve, p, seed=seed)


# --- genus 2 ---------------------------------------------------------------

def _gf4_mul(x: int, y: int) -> int:
    # F_4 = F_2[w]/(w^2 + w + 1), element b1*w + b0 stored as bits
    r = 0
    for i in range(2):
        if (y >> i) & 1:
            r ^= x << i
    if r & 4:
        r ^= 0b111
    return r


def _gf4_eval(coeffs, x: int) -> int:
    r = 0
    for c in reversed(coeffs):
        r = _gf4_mul(r, x) ^ (c & 1)
    return r


def _g2_enumerate_char2(curve: CurveSpec) -> tuple[int, int]:
    f, h = curve.f, curve.h
    h3 = 0  # h has degree <= 2
    f6 = f[6] if len(f) > 6 else 0
    counts = []
    for field_elems in (range(2), range(4)):
        n = 0
        for x in field_elems:
            fx, hx = _gf4_eval(f, x), _gf4_eval(h, x)
            for y in field_elems:
                if _gf4_mul(y, y) ^ _gf4_mul(hx, y) ^ fx == 0:
                    n += 1
        # points at infinity: Y^2 + h3 Y = f6
        for y in field_elems:
            if _gf4_mul(y, y) ^ _gf4_mul(h3 & 1, y) ^ (f6 & 1) == 0:
                n += 1
        counts.append(n)
    return counts[0], counts[1]


def genus2_counts(curve: CurveSpec, p: int) -> tuple[int, int]:
    """(#C(F_p), #C(F_{p^2})) on the smooth model, points at infinity included."""
    if curve.kind != GENUS2:
        raise ValueError("genus2_counts needs a genus-2 curve")
    curve.check_prime(p)
    if p == 2:
        return _g2_enumerate_char2(curve)
    F = sextic(curve)
    d = smallest_nonresidue(p)
    s1, s2 = kernels.g2_char_sums(F, p, d)
    lead = F[6] % p
    if lead == 0:
        inf1 = inf2 = 1
    else:
        inf1, inf2 = 1 + legendre(lead, p), 2
    return p + s1 + inf1, p * p + s2 + inf2


def genus2_jacobian_order(curve: CurveSpec, p: int) -> LocalFrobeniusData:
    c1, c2 = genus2_counts(curve, p)
    s1 = p + 1 - c1
    s2 = p * p + 1 - c2
    if (s1 * s1 - s2) % 2:
        raise CountingError(f"parity failure at p={p}: s1={s1}, s2={s2}")
    e1, e2 = s1, (s1 * s1 - s2) // 2
    charpoly = (1, -e1, e2, -p * e1, p * p)
    return LocalFrobeniusData(p, (c1, c2), charpoly, sum(charpoly))


def local_data(curve: CurveSpec, p: int, crossover: int = NAIVE_CROSSOVER) -> LocalFrobeniusData:
    if curve.kind == ELLIPTIC:
        return ec_count(curve, p, crossover)
    return genus2_jacobian_order(curve, p)


def group_order(curve: CurveSpec, p: int) -> int:
    return local_data(curve, p).group_order


# --- batched tables for scans ---------------------------------------------

def _ec_orders_chunk(curve, primes, crossover, seed):
    out = np.empty(len(primes), dtype=np.int64)
    small = primes < max(crossover, 5)
    for i in np.flatnonzero(small):
        out[i] = ec_count_naive(curve, int(primes[i])).group_order
    big = primes[~small]
    if len(big):
        c4, c6 = c_invariants(curve.ainvs)
        A = np.array([(-27 * c4) % int(q) for q in big], dtype=np.int64)
        B = np.array([(-54 * c6) % int(q) for q in big], dtype=np.int64)
        D = np.array([smallest_nonresidue(int(q)) for q in big], dtype=np.int64)
        res = kernels.ec_group_orders(A, B, big, D, seed, BSGS_BUDGET)
        if (res < 0).any():
            q = int(big[np.flatnonzero(res < 0)[0]])
            raise CountingError(f"BSGS did not isolate #E(F_{q})")
        out[~small] = res
    return out


def _g2_orders_chunk(curve, primes):
    return np.array([genus2_jacobian_order(curve, int(q)).group_order for q in primes], dtype=np.int64)


def order_table(
    curve: CurveSpec,
    limit: int,
    threads: int = 1,
    crossover: int = NAIVE_CROSSOVER,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """(primes, group orders) over the usable good primes <= limit, ascending.

    Results do not depend on ``threads`` or ``seed``.
    """
    return _order_table(curve, limit, max(1, threads), crossover, seed)


@lru_cache(maxsize=16)
def _order_table(curve, limit, threads, crossover, seed):
    primes = cached_primes(max(limit, 2)).primes
    primes = primes[primes <= limit]
    usable = np.array(
        [curve.conductor % q != 0 and curve.discriminant % q != 0 for q in primes.tolist()],
        dtype=bool,
    )
    primes = primes[usable]
    if curve.kind == ELLIPTIC:
        work = lambda chunk: _ec_orders_chunk(curve, chunk, crossover, seed)  # noqa: E731
    else:
        work = lambda chunk: _g2_orders_chunk(curve, chunk)  # noqa: E731
    if threads == 1 or len(primes) < 1000:
        orders = work(primes) if len(primes) else np.empty(0, dtype=np.int64)
    else:
        chunks = np.array_split(primes, 4 * threads)
        with ThreadPoolExecutor(threads) as pool:
            orders = np.concatenate(list(pool.map(work, chunks)))
    primes = primes.copy()
    primes.setflags(write=False)
    orders.setflags(write=False)
    return primes, orders


def hasse_ok(data: LocalFrobeniusData) -> bool:
    return data.trace**2 <= 4 * data.p


def weil_interval_ok(data: LocalFrobeniusData) -> bool:
    """(sqrt p - 1)^4 <= #J(F_p) <= (sqrt p + 1)^4."""
    s = math.sqrt(data.p)
    return (s - 1) ** 4 - 1e-9 <= data.group_order <= (s + 1) ** 4 + 1e-9
