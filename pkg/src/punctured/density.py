"""Free-action densities in SL_2 / Sp_4 over F_l and their empirical counterparts.

Symplectic form: block diagonal J with d copies of [[0, 1], [-1, 0]].
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import is_prime
from .counting import CurveSpec, order_table
from .fields import asymptotic_fit, census, fit_log_power

SL2_MAX_ELL = 50
SP4_ELLS = (2, 3)


class UnsupportedError(ValueError):
    """Exact enumeration is not offered for this (l, d) or curve."""


@dataclass(frozen=True)
class MatrixModL:
    ell: int
    d: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, ell: int, rows) -> "MatrixModL":
        rows = tuple(tuple(int(x) % ell for x in r) for r in rows)
        return cls(ell, len(rows) // 2, rows)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)


def form_J(d: int) -> np.ndarray:
    J = np.zeros((2 * d, 2 * d), dtype=np.int64)
    for i in range(d):
        J[2 * i, 2 * i + 1] = 1
        J[2 * i + 1, 2 * i] = -1
    return J


def is_symplectic(M: MatrixModL) -> bool:
    A = M.array()
    J = form_J(M.d)
    return bool(((A.T @ J @ A - J) % M.ell == 0).all())


def det_mod(rows, ell: int) -> int:
    """Determinant mod a prime by Gaussian elimination."""
    A = [[int(x) % ell for x in r] for r in rows]
    n = len(A)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col] % ell
        inv = pow(A[col][col], -1, ell)
        for r in range(col + 1, n):
            if A[r][col]:
                k = A[r][col] * inv % ell
                A[r] = [(x - k * y) % ell for x, y in zip(A[r], A[col])]
    return det % ell


def charpoly_at_one(M: MatrixModL) -> int:
    """det(I - M) mod l, i.e. the characteristic polynomial at 1."""
    A = M.array()
    return det_mod(np.eye(len(A), dtype=np.int64) - A, M.ell)


def acts_freely(M: MatrixModL) -> bool:
    return charpoly_at_one(M) != 0


@dataclass
class DensityReport:
    ell: int
    d: int
    H_size: int
    C_size: int
    empirical: list[tuple[int, float]] = field(default_factory=list)

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.H_size - self.C_size, (self.ell - 1) * self.H_size)

    @property
    def beta(self) -> Fraction:
        return (self.ell - 1) * self.alpha

    @property
    def gamma(self) -> Fraction:
        return Fraction(self.C_size, self.H_size)

    def to_json(self) -> dict:
        rat = lambda q: [q.numerator, q.denominator]  # noqa: E731
        return {
            "ell": self.ell,
            "d": self.d,
            "H_size": self.H_size,
            "C_size": self.C_size,
            "alpha": rat(self.alpha),
            "beta": rat(self.beta),
            "gamma": rat(self.gamma),
            "beta_plus_gamma": rat(self.beta + self.gamma),
            "empirical": [{"X": x, "fraction": round(f, 4)} for x, f in self.empirical],
        }


def _check_ell(ell):
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")


def sl2_elements(ell: int) -> np.ndarray:
    """All of SL_2(F_l) as an (N, 4) array of (a, b, c, d)."""
    g = np.arange(ell, dtype=np.int64)
    a, b, c, d = (x.ravel() for x in np.meshgrid(g, g, g, g, indexing="ij"))
    keep = (a * d - b * c) % ell == 1
    return np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1)


def enumerate_free_fraction_sl2(ell: int) -> DensityReport:
    _check_ell(ell)
    if ell > SL2_MAX_ELL:
        raise UnsupportedError(f"SL_2 enumeration is capped at l <= {SL2_MAX_ELL}")
    m = sl2_elements(ell)
    a, b, c, d = m.T
    free = ((a - 1) * (d - 1) - b * c) % ell != 0
    return DensityReport(ell, 1, len(m), int(free.sum()))


def sl2_trace_oracle(ell: int) -> tuple[int, int]:
    """(|SL_2|, #free) counted via the trace: in SL_2, det(M - I) = 2 - tr M."""
    order = 0
    trace_two = 0
    for a in range(ell):
        for b in range(ell):
            for c in range(ell):
                # solve a*d - b*c = 1 for d when a is invertible, else count d freely
                for d in range(ell):
                    if (a * d - b * c) % ell == 1:
                        order += 1
                        if (a + d) % ell == 2 % ell:
                            trace_two += 1
    return order, order - trace_two


def _det4(M: np.ndarray, ell: int) -> np.ndarray:
    """Batched 4x4 determinants mod l by Leibniz expansion. M has shape (N, 4, 4)."""
    out = np.zeros(len(M), dtype=np.int64)
    for perm in itertools.permutations(range(4)):
        sign = 1
        for i in range(4):
            for j in range(i + 1, 4):
                if perm[i] > perm[j]:
                    sign = -sign
        term = np.ones(len(M), dtype=np.int64)
        for i in range(4):
            term = term * M[:, i, perm[i]] % ell
        out = (out + sign * term) % ell
    return out


def sp4_elements(ell: int) -> np.ndarray:
    """All of Sp_4(F_l) as (N, 4, 4), built column by column as symplectic bases."""
    vecs = np.array(list(itertools.product(range(ell), repeat=4)), dtype=np.int64)
    J = form_J(2)
    omega = (vecs @ J @ vecs.T) % ell
    nonzero = np.flatnonzero(vecs.any(axis=1))
    mats = []
    for i in nonzero:
        for j in np.flatnonzero(omega[i] == 1):
            perp = np.flatnonzero((omega[i] == 0) & (omega[j] == 0))
            perp = perp[vecs[perp].any(axis=1)]
            for k in perp:
                for m in perp[omega[k, perp] == 1]:
                    mats.append((i, j, k, m))
    idx = np.array(mats, dtype=np.int64)
    # columns are the basis vectors
    return np.transpose(vecs[idx], (0, 2, 1))


def enumerate_free_fraction_sp4(ell: int) -> DensityReport:
    if ell not in SP4_ELLS:
        raise UnsupportedError(f"Sp_4 enumeration only supports l in {SP4_ELLS}")
    mats = sp4_elements(ell)
    eye = np.eye(4, dtype=np.int64)
    free = _det4((mats - eye) % ell, ell) != 0
    return DensityReport(ell, 2, len(mats), int(free.sum()))


def sp4_contains(ell: int, M: MatrixModL) -> bool:
    target = M.array()
    mats = sp4_elements(ell)
    return bool((mats == target).all(axis=(1, 2)).any())


def sp_order(ell: int, d: int) -> int:
    """|Sp_{2d}(F_l)| = l^(d^2) prod_{i=1..d} (l^(2i) - 1)."""
    return ell ** (d * d) * math.prod(ell ** (2 * i) - 1 for i in range(1, d + 1))


class WitnessError(RuntimeError):
    pass


def build_free_witness(ell: int, d: int) -> MatrixModL:
    """A symplectic matrix with no eigenvalue 1: -I for odd l, blocks [[1,1],[1,0]] for l = 2."""
    _check_ell(ell)
    if d < 1:
        raise ValueError("d must be >= 1")
    n = 2 * d
    if ell != 2:
        rows = [[-1 if i == j else 0 for j in range(n)] for i in range(n)]
    else:
        rows = [[0] * n for _ in range(n)]
        for b in range(d):
            rows[2 * b][2 * b] = rows[2 * b][2 * b + 1] = rows[2 * b + 1][2 * b] = 1
    M = MatrixModL.of(ell, rows)
    if not (is_symplectic(M) and acts_freely(M)):
        raise WitnessError(f"witness for l={ell}, d={d} failed verification")
    return M


def exact_report(curve: CurveSpec, ell: int) -> DensityReport:
    """Exact report for a curve whose mod-l image is attested surjective."""
    if ell not in curve.surjective:
        raise UnsupportedError(
            f"mod-{ell} image of {curve.label} is not attested surjective; exact densities unavailable"
        )
    if curve.dimension == 1:
        return enumerate_free_fraction_sl2(ell)
    return enumerate_free_fraction_sp4(ell)


def empirical_free_fraction(curve: CurveSpec, ell: int, X: int) -> tuple[float, int]:
    """Fraction of good p <= X with p = 1 mod l and l not dividing #A(F_p)."""
    _check_ell(ell)
    primes, orders = order_table(curve, X)
    sel = (primes % ell == 1) & (primes != ell)
    n = int(sel.sum())
    if n == 0:
        raise ValueError(f"no good primes p = 1 mod {ell} up to {X}")
    free = int((orders[sel] % ell != 0).sum())
    return free / n, n


def enlarged_S(curve: CurveSpec, ell: int, S=()) -> frozenset[int]:
    return frozenset(S) | {ell} | set(curve.bad_primes()) | set(curve.unusable_primes())


def admissible_prime_set(curve: CurveSpec, ell: int, S=(), limit: int = 2) -> list[int]:
    """Primes p <= limit in P_l with p in the enlarged S or l | #A(F_p)."""
    _check_ell(ell)
    S2 = enlarged_S(curve, ell, S)
    primes, orders = order_table(curve, max(limit, 2))
    out = set(q for q in S2 if q <= limit and (q == ell or q % ell == 1))
    sel = (primes % ell == 1) & (orders % ell == 0)
    out.update(primes[sel].tolist())
    return sorted(out)


@dataclass
class ThinningTable:
    ell: int
    rows: list[tuple[int, int, int, float]]
    decay_exponent: float
    restricted_fit_c: float | None = None


def thinning_experiment(curve: CurveSpec, ell: int, S=(), X_samples=(10**3, 10**4, 10**5, 10**6), gamma=None):
    """Restricted census over P against the full census, with the fitted decay exponent."""
    xs = sorted(X_samples)
    top = xs[-1]
    P = admissible_prime_set(curve, ell, S, top)
    restricted = census(ell, top, P, samples=xs, descriptor=f"P({curve.label}, l={ell})").samples
    full = census(ell, top, None, samples=xs).samples
    rows = []
    for (x, r), (_, f) in zip(restricted, full):
        rows.append((x, r, f, r / f if f else float("nan")))
    exponent = float("nan")
    fit_c = None
    if len(xs) >= 4 and all(r > 0 for _, r, _, _ in rows):
        _, exponent = fit_log_power([(x, ratio) for x, _, _, ratio in rows])
        if gamma is not None and 0 < gamma < 1:
            fit_c = asymptotic_fit([(x, r) for x, r, _, _ in rows], 1 - float(gamma)).c
    return ThinningTable(ell, rows, exponent, fit_c)
