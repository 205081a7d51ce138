# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Same API as ``_pykernels``; moduli must be < 2**31."""

from libc.stdlib cimport malloc, calloc, free
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64
ctypedef unsigned long long u64

cdef i64 MAX_P = 2147483647


cdef struct Pt:
    i64 x
    i64 y
    int inf


cdef inline i64 mulmod(i64 a, i64 b, i64 p) noexcept nogil:
    return <i64>((<u64>a * <u64>b) % <u64>p)


cdef inline i64 addmod(i64 a, i64 b, i64 p) noexcept nogil:
    cdef i64 s = a + b
    if s >= p:
        s -= p
    return s


cdef inline i64 submod(i64 a, i64 b, i64 p) noexcept nogil:
    cdef i64 s = a - b
    if s < 0:
        s += p
    return s


cdef i64 powmod(i64 a, u64 e, i64 p) noexcept nogil:
    cdef i64 r = 1
    a %= p
    while e:
        if e & 1:
            r = mulmod(r, a, p)
        a = mulmod(a, a, p)
        e >>= 1
    return r


cdef i64 invmod(i64 a, i64 p) noexcept nogil:
    cdef i64 t = 0, nt = 1, r = p, nr = a % p, q, tmp
    while nr:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


cdef inline int legendre(i64 a, i64 p) noexcept nogil:
    cdef i64 r = powmod(a, (p - 1) // 2, p)
    if r == 0:
        return 0
    if r == 1:
        return 1
    return -1


cdef i64 sqrtmod(i64 a, i64 p, i64 z) noexcept nogil:
    # Tonelli-Shanks; z is a non-residue
    cdef i64 q = p - 1, m = 0, c, t, r, t2, b
    cdef int i
    if a == 0:
        return 0
    if p % 4 == 3:
        return powmod(a, (p + 1) // 4, p)
    while q % 2 == 0:
        q //= 2
        m += 1
    c = powmod(z, q, p)
    t = powmod(a, q, p)
    r = powmod(a, (q + 1) // 2, p)
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = mulmod(t2, t2, p)
            i += 1
        b = powmod(c, (<u64>1) << (m - i - 1), p)
        m = i
        c = mulmod(b, b, p)
        t = mulmod(t, c, p)
        r = mulmod(r, b, p)
    return r


cdef inline u64 splitmix(u64* state) noexcept nogil:
    state[0] += 0x9E3779B97F4A7C15ULL
    cdef u64 z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef Pt padd(Pt P, Pt Q, i64 A, i64 p) noexcept nogil:
    cdef Pt R
    cdef i64 lam
    if P.inf:
        return Q
    if Q.inf:
        return P
    if P.x == Q.x:
        if addmod(P.y, Q.y, p) == 0:
            R.inf = 1
            R.x = 0
            R.y = 0
            return R
        lam = mulmod(addmod(mulmod(3, mulmod(P.x, P.x, p), p), A, p),
                     invmod(addmod(P.y, P.y, p), p), p)
    else:
        lam = mulmod(submod(Q.y, P.y, p), invmod(submod(Q.x, P.x, p), p), p)
    R.inf = 0
    R.x = submod(submod(mulmod(lam, lam, p), P.x, p), Q.x, p)
    R.y = submod(mulmod(lam, submod(P.x, R.x, p), p), P.y, p)
    return R


cdef Pt pmul(u64 k, Pt P, i64 A, i64 p) noexcept nogil:
    cdef Pt R
    R.inf = 1
    R.x = 0
    R.y = 0
    while k:
        if k & 1:
            R = padd(R, P, A, p)
        P = padd(P, P, A, p)
        k >>= 1
    return R


cdef Pt random_point(i64 A, i64 B, i64 p, i64 d, u64* state) noexcept nogil:
    cdef Pt P
    cdef i64 x, r
    P.inf = 0
    while True:
        x = <i64>(splitmix(state) % <u64>p)
        r = addmod(addmod(mulmod(mulmod(x, x, p), x, p), mulmod(A, x, p), p), B, p)
        if r == 0:
            P.x = x
            P.y = 0
            return P
        if legendre(r, p) == 1:
            P.x = x
            P.y = sqrtmod(r, p, d)
            return P


cdef i64 find_multiple(Pt P, i64 lo, i64 hi, i64 A, i64 p) noexcept nogil:
    cdef i64 s = 1, j, c, step, h, idx
    cdef i64 tsize = 1
    cdef i64* xs
    cdef i64* ys
    cdef i64* slots
    cdef Pt R, G
    cdef i64 result = 0
    while (s + 1) * (s + 1) <= hi - lo:
        s += 1
    s += 1
    while tsize < 4 * s:
        tsize <<= 1
    xs = <i64*>malloc((s + 1) * sizeof(i64))
    ys = <i64*>malloc((s + 1) * sizeof(i64))
    slots = <i64*>calloc(tsize, sizeof(i64))
    R = P
    for j in range(1, s + 1):
        if R.inf:
            result = j
            break
        xs[j] = R.x
        ys[j] = R.y
        h = (R.x * 2654435761LL) & (tsize - 1)
        while slots[h] != 0 and xs[slots[h]] != R.x:
            h = (h + 1) & (tsize - 1)
        if slots[h] == 0:
            slots[h] = j
        R = padd(R, P, A, p)
    if result == 0:
        step = 2 * s + 1
        G = pmul(<u64>step, P, A, p)
        c = lo + s
        R = pmul(<u64>c, P, A, p)
        while c - s <= hi:
            if R.inf:
                result = c
                break
            h = (R.x * 2654435761LL) & (tsize - 1)
            idx = 0
            while slots[h] != 0:
                if xs[slots[h]] == R.x:
                    idx = slots[h]
                    break
                h = (h + 1) & (tsize - 1)
            if idx:
                if ys[idx] == R.y:
                    result = c - idx
                else:
                    result = c + idx
                break
            R = padd(R, G, A, p)
            c += step
    free(xs)
    free(ys)
    free(slots)
    return result


cdef i64 point_order(Pt P, i64 m, i64 A, i64 p) noexcept nogil:
    cdef i64 rest = m, q = 2
    cdef i64 primes[64]
    cdef int nprimes = 0, k
    while q * q <= rest:
        if rest % q == 0:
            primes[nprimes] = q
            nprimes += 1
            while rest % q == 0:
                rest //= q
        q += 1 if q == 2 else 2
    if rest > 1:
        primes[nprimes] = rest
        nprimes += 1
    for k in range(nprimes):
        q = primes[k]
        while m % q == 0 and pmul(<u64>(m // q), P, A, p).inf:
            m //= q
    return m


cdef inline i64 gcd(i64 a, i64 b) noexcept nogil:
    cdef i64 t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef i64 unique_candidate(i64 lo, i64 hi, i64 l1, i64 l2, i64 total) noexcept nogil:
    cdef i64 found = 0
    cdef i64 n = ((lo + l1 - 1) // l1) * l1
    while n <= hi:
        if (total - n) % l2 == 0:
            if found:
                return 0
            found = n
        n += l1
    return found


cdef i64 isqrt(i64 n) noexcept nogil:
    cdef i64 r = 0, bit = (<i64>1) << 62
    while bit > n:
        bit >>= 2
    while bit:
        if n >= r + bit:
            n -= r + bit
            r = (r >> 1) + bit
        else:
            r >>= 1
        bit >>= 2
    return r


cdef i64 group_order(i64 A, i64 B, i64 p, i64 d, u64 seed, int budget) noexcept nogil:
    cdef i64 r = isqrt(4 * p)
    cdef i64 lo = p + 1 - r, hi = p + 1 + r
    cdef i64 At, Bt, a, b, m, o, l1 = 1, l2 = 1, n
    cdef u64 state = seed ^ (<u64>p * 0x9E3779B97F4A7C15ULL)
    cdef int attempt
    cdef Pt P
    A %= p
    if A < 0:
        A += p
    B %= p
    if B < 0:
        B += p
    At = mulmod(A, mulmod(d, d, p), p)
    Bt = mulmod(B, mulmod(mulmod(d, d, p), d, p), p)
    for attempt in range(budget):
        if attempt % 2 == 0:
            a = A
            b = B
        else:
            a = At
            b = Bt
        P = random_point(a, b, p, d, &state)
        m = find_multiple(P, lo, hi, a, p)
        if m == 0:
            return -1
        o = point_order(P, m, a, p)
        if attempt % 2 == 0:
            l1 = l1 // gcd(l1, o) * o
        else:
            l2 = l2 // gcd(l2, o) * o
        n = unique_candidate(lo, hi, l1, l2, 2 * p + 2)
        if n:
            return n
    return -1


def ec_group_order(i64 A, i64 B, i64 p, i64 d, u64 seed, int budget):
    cdef i64 r
    if p >= MAX_P or p < 5:
        raise ValueError("compiled kernel needs 5 <= p < 2**31")
    with nogil:
        r = group_order(A, B, p, d, seed, budget)
    return r


def ec_group_orders(A, B, P, D, u64 seed, int budget):
    cdef i64[::1] a = np.ascontiguousarray(A, dtype=np.int64)
    cdef i64[::1] b = np.ascontiguousarray(B, dtype=np.int64)
    cdef i64[::1] ps = np.ascontiguousarray(P, dtype=np.int64)
    cdef i64[::1] ds = np.ascontiguousarray(D, dtype=np.int64)
    cdef Py_ssize_t i, n = ps.shape[0]
    out_arr = np.empty(n, dtype=np.int64)
    cdef i64[::1] out = out_arr
    for i in range(n):
        if ps[i] >= MAX_P or ps[i] < 5:
            raise ValueError("compiled kernel needs 5 <= p < 2**31")
    with nogil:
        for i in range(n):
            out[i] = group_order(a[i], b[i], ps[i], ds[i], seed, budget)
    return out_arr


cdef signed char* make_chi(i64 p) noexcept nogil:
    cdef signed char* chi = <signed char*>malloc(p * sizeof(signed char))
    cdef i64 x
    for x in range(p):
        chi[x] = -1
    for x in range(1, p):
        chi[mulmod(x, x, p)] = 1
    chi[0] = 0
    return chi


def char_table(i64 p):
    out = np.full(p, -1, dtype=np.int8)
    cdef signed char[::1] o = out
    cdef i64 x
    for x in range(1, p):
        o[mulmod(x, x, p)] = 1
    o[0] = 0
    return out


def ec_char_sum(i64 c3, i64 c2, i64 c1, i64 c0, i64 p):
    cdef i64 x, v, total = 0
    cdef signed char* chi
    if p >= MAX_P:
        raise ValueError("compiled kernel needs p < 2**31")
    c3 %= p
    c2 %= p
    c1 %= p
    c0 %= p
    if c3 < 0: c3 += p
    if c2 < 0: c2 += p
    if c1 < 0: c1 += p
    if c0 < 0: c0 += p
    with nogil:
        chi = make_chi(p)
        for x in range(p):
            v = addmod(mulmod(addmod(mulmod(addmod(mulmod(c3, x, p), c2, p), x, p), c1, p), x, p), c0, p)
            total += chi[v]
        free(chi)
    return total


def g2_char_sums(coeffs, i64 p, i64 d):
    """(sum over F_p, sum over F_{p^2}) of chi(F(x)), chi on F_{p^2} via the norm.

    For fixed imaginary part b, F(a + b t) = U_b(a) + V_b(a) t with U_b, V_b of
    degree <= 6 in a, so both are stepped with forward differences.
    """
    cdef i64 c[7]
    cdef i64 k, j, a, b, i
    cdef i64 s1 = 0, s2 = 0, part, db, nd, un, vn
    cdef i64 U[7]
    cdef i64 V[7]
    cdef i64 u, v, tu
    cdef signed char* chi
    if p >= MAX_P:
        raise ValueError("compiled kernel needs p < 2**31")
    vals = [int(x) % p for x in coeffs] + [0] * (7 - len(coeffs))
    for k in range(7):
        c[k] = vals[k]
    nd = (p - d % p) % p
    with nogil:
        chi = make_chi(p)
        for a in range(p):
            u = c[6]
            for k in range(5, -1, -1):
                u = addmod(mulmod(u, a, p), c[k], p)
            s1 += chi[u]
            if u != 0:
                s2 += 1
        for b in range(1, (p - 1) // 2 + 1):
            db = mulmod(d, b, p)
            # values at a = 0..6 by Horner in F_{p^2}
            for j in range(7):
                u = c[6]
                v = 0
                a = j % p
                for k in range(5, -1, -1):
                    tu = addmod(addmod(mulmod(u, a, p), mulmod(v, db, p), p), c[k], p)
                    v = addmod(mulmod(u, b, p), mulmod(v, a, p), p)
                    u = tu
                U[j] = u
                V[j] = v
            # forward difference tables
            for k in range(1, 7):
                for j in range(6, k - 1, -1):
                    U[j] = submod(U[j], U[j - 1], p)
                    V[j] = submod(V[j], V[j - 1], p)
            part = 0
            for a in range(p):
                un = mulmod(U[0], U[0], p)
                vn = mulmod(nd, mulmod(V[0], V[0], p), p)
                part += chi[addmod(un, vn, p)]
                for j in range(6):
                    U[j] = addmod(U[j], U[j + 1], p)
                    V[j] = addmod(V[j], V[j + 1], p)
            s2 += 2 * part
        free(chi)
    return s1, s2
