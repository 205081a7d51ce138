"""Cyclic fields of prime degree l counted by conductor.

A conductor of a cyclic degree-l field has the shape ``l^v * q_1 ... q_t`` with
distinct primes ``q_i = 1 mod l`` and ``v in {0, 2}`` (``{0, 2, 3}`` for l = 2).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .arith import ResourceError, cached_primes, divisors, factorize, mobius

MAX_X = 10**9


def l_rank_prime_power(ell: int, q: int, alpha: int) -> int:
    """l-rank of (Z/q^alpha)^x."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if q % ell == 1:
        return 1
    if q == ell:
        if ell != 2:
            return 1 if alpha >= 2 else 0
        if alpha == 2:
            return 1
        if alpha >= 3:
            return 2
    return 0


def l_rank(ell: int, n: int) -> int:
    return sum(l_rank_prime_power(ell, q, a) for q, a in factorize(n))


def count_subfields_M(ell: int, n: int) -> int:
    """Number of cyclic degree-l fields inside Q(zeta_n)."""
    r = l_rank(ell, n)
    return (ell**r - 1) // (ell - 1)


@dataclass(frozen=True)
class ConductorClass:
    ell: int
    n: int
    v: int
    q_list: tuple[int, ...]
    multiplicity: int

    @property
    def t(self) -> int:
        return len(self.q_list)


def conductor_class(ell: int, n: int) -> ConductorClass | None:
    """Shape and multiplicity N(n) of n, or None when n is not a conductor."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = 0
    qs = []
    for q, a in factorize(n):
        if q == ell:
            v = a
        elif q % ell == 1 and a == 1:
            qs.append(q)
        else:
            return None
    t = len(qs)
    w = ell - 1
    if v == 0:
        if t == 0:
            return None
        mult = w ** (t - 1)
    elif v == 2:
        mult = w**t
    elif v == 3 and ell == 2:
        mult = ell * w**t
    else:
        return None
    return ConductorClass(ell, n, v, tuple(qs), mult)


def conductor_multiplicity_N(ell: int, n: int) -> int:
    """Number of cyclic degree-l fields of conductor exactly n (0 if none)."""
    cc = conductor_class(ell, n)
    return 0 if cc is None else cc.multiplicity


def mobius_inversion_check(ell: int, n: int) -> bool:
    """sum_{d | n} N(d) == M(n)."""
    return sum(conductor_multiplicity_N(ell, d) for d in divisors(n)) == count_subfields_M(ell, n)


def N_by_inversion(ell: int, n: int) -> int:
    """N(n) from M by Moebius inversion (independent of the case formula)."""
    total = sum(mobius(n // d) * count_subfields_M(ell, d) for d in divisors(n))
    return total


def conductor_to_discriminant(ell: int, conductor: int) -> int:
    disc = conductor ** (ell - 1)
    if disc >= 2**64:
        raise OverflowError(f"discriminant {conductor}^{ell - 1} does not fit in 64 bits")
    return disc


# --- census ---------------------------------------------------------------

def _omega_counts(qs: list[int], y: int) -> list[int]:
    """cnt[t] = number of squarefree products of t distinct primes from qs that are <= y."""
    cnt = [0] * 40
    if y < 1:
        return cnt
    cnt[0] = 1

    def walk(m: int, start: int, t: int) -> None:
        stop = bisect_right(qs, y // m, lo=start)
        # every single extension m*q with q <= y/m is a leaf at depth t + 1
        cnt[t + 1] += stop - start
        i = start
        while i + 1 < stop and m * qs[i] * qs[i + 1] <= y:
            walk(m * qs[i], i + 1, t + 1)
            i += 1

    walk(1, 0, 0)
    while len(cnt) > 1 and cnt[-1] == 0:
        cnt.pop()
    return cnt


def _as_predicate(prime_filter):
    if prime_filter is None:
        return lambda p: True
    if callable(prime_filter):
        return prime_filter
    members = frozenset(int(p) for p in prime_filter)
    return members.__contains__


def admissible_primes(ell: int, X: int, prime_filter=None) -> tuple[list[int], bool]:
    """(sorted primes q = 1 mod l, q <= X, passing the filter; whether l passes)."""
    if X > MAX_X:
        raise ResourceError(f"conductor bound {X} exceeds {MAX_X}")
    pred = _as_predicate(prime_filter)
    if X < 2:
        return [], bool(pred(ell))
    ps = cached_primes(X).primes
    cand = ps[(ps % ell == 1) & (ps <= X)].tolist()
    return [q for q in cand if pred(q)], bool(pred(ell))


def _stratum_counts(ell: int, qs: list[int], ell_ok: bool, X: int) -> dict[int, int]:
    w = ell - 1
    out = {}
    cnt = _omega_counts(qs, X)
    out[0] = sum(c * w ** (t - 1) for t, c in enumerate(cnt) if t >= 1)
    if ell_ok:
        cnt2 = _omega_counts(qs, X // ell**2)
        out[2] = sum(c * w**t for t, c in enumerate(cnt2))
        if ell == 2:
            cnt3 = _omega_counts(qs, X // 8)
            out[3] = sum(2 * c for c in cnt3)
    return out


@dataclass
class CensusResult:
    ell: int
    X: int
    descriptor: str
    total: int
    strata: dict[int, int]
    samples: list[tuple[int, int]] = field(default_factory=list)


def census(ell: int, X: int, prime_filter=None, samples=None, descriptor: str | None = None) -> CensusResult:
    """Number of cyclic degree-l fields with conductor <= X whose conductor's
    prime divisors all pass ``prime_filter`` (callable or collection of primes)."""
    if X < 1:
        raise ValueError("X must be >= 1")
    qs, ell_ok = admissible_primes(ell, X, prime_filter)
    strata = _stratum_counts(ell, qs, ell_ok, X)
    pts = []
    for x in sorted(samples or ()):
        if x > X:
            raise ValueError("sample point beyond X")
        i = bisect_right(qs, x)
        pts.append((x, sum(_stratum_counts(ell, qs[:i], ell_ok, x).values())))
    if descriptor is None:
        descriptor = "all primes" if prime_filter is None else "restricted"
    return CensusResult(ell, X, descriptor, sum(strata.values()), strata, pts)


def census_brute(ell: int, X: int, prime_filter=None) -> int:
    """Oracle: sum of N(n) over every n <= X, testing each n directly."""
    pred = _as_predicate(prime_filter)
    total = 0
    for n in range(2, X + 1):
        cc = conductor_class(ell, n)
        if cc is None:
            continue
        if all(pred(q) for q, _ in factorize(n)):
            total += cc.multiplicity
    return total


def weighted_sum(ell: int, X: int, prime_filter=None) -> int:
    """sum of (l-1)^omega(n) over squarefree n <= X built from filtered primes = 1 mod l (n = 1 included)."""
    qs, _ = admissible_primes(ell, X, prime_filter)
    w = ell - 1
    return sum(c * w**t for t, c in enumerate(_omega_counts(qs, X)))


def census_samples(ell: int, X: int, prime_filter=None, per_decade: int = 1, start: int = 10) -> list[tuple[int, int]]:
    """Census counts at geometric sample points up to X (X itself always included)."""
    pts = []
    x = start
    step = 10 ** (1 / per_decade)
    k = 0
    while x < X:
        pts.append(int(round(x)))
        k += 1
        x = start * step**k
    pts.append(X)
    pts = sorted(set(pts))
    return census(ell, X, prime_filter, samples=pts).samples


# --- asymptotic fitting ----------------------------------------------------

class FitError(ValueError):
    pass


@dataclass
class FitResult:
    c: float
    beta: float
    deviations: list[tuple[int, float]]

    @property
    def max_abs_deviation(self) -> float:
        return max(abs(d) for _, d in self.deviations)


def _check_samples(samples):
    if len(samples) < 4:
        raise FitError("need at least 4 samples")
    xs = [x for x, _ in samples]
    if xs != sorted(xs) or len(set(xs)) != len(xs):
        raise FitError("sample points must be strictly ascending")
    if xs[-1] / xs[0] < 100:
        raise FitError("samples must span a factor of at least 100")
    if any(c <= 0 for _, c in samples):
        raise FitError("zero counts in samples")
    if xs[0] <= 1:
        raise FitError("sample points must exceed 1")


def asymptotic_fit(samples, beta: float) -> FitResult:
    """Least squares for count ~ c X / (log X)^(1 - beta) with beta fixed.

    Works in log space: log(count) - log(X) + (1 - beta) log log X = log c.
    """
    _check_samples(samples)
    if not 0 < beta <= 1:
        raise FitError("beta must lie in (0, 1]")
    xs = np.array([x for x, _ in samples], dtype=float)
    cs = np.array([c for _, c in samples], dtype=float)
    resid = np.log(cs) - np.log(xs) + (1 - beta) * np.log(np.log(xs))
    c = float(np.exp(resid.mean()))
    model = c * xs / np.log(xs) ** (1 - beta)
    devs = [(int(x), float(cnt / m - 1)) for x, cnt, m in zip(xs, cs, model)]
    return FitResult(c, beta, devs)


def fit_log_power(samples) -> tuple[float, float]:
    """(c, e) minimising the log-space error of y ~ c (log X)^(-e)."""
    _check_samples(samples)
    xs = np.array([x for x, _ in samples], dtype=float)
    ys = np.array([y for _, y in samples], dtype=float)
    slope, intercept = np.polyfit(np.log(np.log(xs)), np.log(ys), 1)
    return float(math.exp(intercept)), float(-slope)
