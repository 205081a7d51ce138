"""Pure Python / numpy implementations of the hot kernels.

Mirrors ``_ckernels.pyx`` function by function; ``kernels`` picks one at import.
"""

from __future__ import annotations

import math
import random

import numpy as np

from .arith import factorize, legendre, sqrt_mod


def char_table(p: int) -> np.ndarray:
    """Quadratic character of F_p as an int8 lookup table."""
    chi = np.full(p, -1, dtype=np.int8)
    x = np.arange(p, dtype=np.int64)
    chi[(x * x) % p] = 1
    chi[0] = 0
    return chi


def ec_char_sum(c3: int, c2: int, c1: int, c0: int, p: int) -> int:
    """Sum over x in F_p of chi(c3 x^3 + c2 x^2 + c1 x + c0)."""
    chi = char_table(p)
    x = np.arange(p, dtype=np.int64)
    v = np.full(p, c3 % p, dtype=np.int64)
    for c in (c2, c1, c0):
        v = (v * x + c % p) % p
    return int(chi[v].sum(dtype=np.int64))


def g2_char_sums(coeffs, p: int, d: int) -> tuple[int, int]:
    """Character sums of F(x) = sum coeffs[i] x^i over F_p and F_{p^2}.

    F_{p^2} = F_p[t]/(t^2 - d); an element is a square there iff its norm is
    a square in F_p, so one F_p table covers both fields.
    """
    c = [int(x) % p for x in coeffs]
    while len(c) < 7:
        c.append(0)
    chi = char_table(p)
    a = np.arange(p, dtype=np.int64)

    u = np.full(p, c[6], dtype=np.int64)
    for k in range(5, -1, -1):
        u = (u * a + c[k]) % p
    s1 = int(chi[u].sum(dtype=np.int64))
    # F_p is inside the squares of F_{p^2}: the b = 0 row counts nonzero values
    s2 = int(np.count_nonzero(u))
    nd = (p - d % p) % p
    for b in range(1, (p - 1) // 2 + 1):
        db = d * b % p
        u = np.full(p, c[6], dtype=np.int64)
        v = np.zeros(p, dtype=np.int64)
        for k in range(5, -1, -1):
            u, v = (u * a + v * db + c[k]) % p, (u * b + v * a) % p
        norm = (u * u + nd * (v * v % p)) % p
        # b and -b give conjugate points with equal norms
        s2 += 2 * int(chi[norm].sum(dtype=np.int64))
    return s1, s2


def _add(P, Q, A, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def _mul(k, P, A, p):
    R = None
    while k:
        if k & 1:
            R = _add(R, P, A, p)
        P = _add(P, P, A, p)
        k >>= 1
    return R


def _random_point(A, B, p, rng):
    while True:
        x = rng.randrange(p)
        r = (x * x * x + A * x + B) % p
        if r == 0:
            return (x, 0)
        if legendre(r, p) == 1:
            return (x, sqrt_mod(r, p))


def _find_multiple(P, lo, hi, A, p):
    """Some m > 0 with mP = O, searching [lo, hi] by baby-step giant-step."""
    s = math.isqrt(hi - lo) + 1
    table = {}
    R = P
    for j in range(1, s + 1):
        if R is None:
            return j
        table.setdefault(R[0], (j, R[1]))
        R = _add(R, P, A, p)
    step = 2 * s + 1
    G = _mul(step, P, A, p)
    c = lo + s
    R = _mul(c, P, A, p)
    while c - s <= hi:
        if R is None:
            return c
        hit = table.get(R[0])
        if hit is not None:
            j, y = hit
            return c - j if y == R[1] else c + j
        R = _add(R, G, A, p)
        c += step
    return 0


def _order(P, m, A, p):
    for q, e in factorize(m):
        for _ in range(e):
            if _mul(m // q, P, A, p) is None:
                m //= q
            else:
                break
    return m


def _unique_candidate(lo, hi, l1, l2, total):
    found = 0
    n = ((lo + l1 - 1) // l1) * l1
    while n <= hi:
        if (total - n) % l2 == 0:
            if found:
                return 0
            found = n
        n += l1
    return found


def ec_group_order(A: int, B: int, p: int, d: int, seed: int, budget: int) -> int:
    """#E(F_p) for y^2 = x^3 + Ax + B, p >= 5; -1 if the budget runs out.

    Points are drawn alternately from E and from its quadratic twist by the
    non-residue d. The twist has order 2p + 2 - #E, so the lcm of point orders
    on each side constrains #E to a lattice; stop once the Hasse interval holds
    exactly one admissible value.
    """
    A %= p
    B %= p
    r = math.isqrt(4 * p)
    lo, hi = p + 1 - r, p + 1 + r
    At, Bt = A * d * d % p, B * d * d * d % p
    rng = random.Random(seed ^ (p * 0x9E3779B97F4A7C15 & 0xFFFFFFFFFFFFFFFF))
    l1 = l2 = 1
    for attempt in range(budget):
        a, b = (A, B) if attempt % 2 == 0 else (At, Bt)
        P = _random_point(a, b, p, rng)
        m = _find_multiple(P, lo, hi, a, p)
        if m == 0:
            return -1
        o = _order(P, m, a, p)
        if attempt % 2 == 0:
            l1 = l1 * o // math.gcd(l1, o)
        else:
            l2 = l2 * o // math.gcd(l2, o)
        n = _unique_candidate(lo, hi, l1, l2, 2 * p + 2)
        if n:
            return n
    return -1


def ec_group_orders(A, B, P, D, seed: int, budget: int) -> np.ndarray:
    out = np.empty(len(P), dtype=np.int64)
    for i in range(len(P)):
        out[i] = ec_group_order(int(A[i]), int(B[i]), int(P[i]), int(D[i]), seed, budget)
    return out
