"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; under
pytest the lines are repeated in the terminal summary.
"""

import math
import sys
import time
from fractions import Fraction

import pytest

from oracles import is_fundamental, plane_count
from reference_data import JACOBIAN_ORDERS, R_E_1000, R_J_1000, TABLE1, WITNESSES
from punctured.arith import cached_primes
from punctured.counting import ec_count_bsgs, ec_count_naive, genus2_jacobian_order
from punctured.density import (
    build_free_witness,
    empirical_free_fraction,
    enumerate_free_fraction_sl2,
    enumerate_free_fraction_sp4,
    is_symplectic,
    acts_freely,
    sl2_trace_oracle,
    thinning_experiment,
)
from punctured.fields import conductor_multiplicity_N, count_subfields_M, N_by_inversion
from punctured.arith import divisors
from punctured.obstruction import find_condition_ii_witness, scan_RA
from punctured.registry import builtin_curve

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # running as a script
    ACCEPTANCE_LINES = []

E = builtin_curve("67a1")
J = builtin_curve("8969.a.8969.1")


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_c01_RE_list():
    # a fresh curve object keeps the cached order table out of the timing
    res, dt = timed(lambda: scan_RA(builtin_curve("67a1"), 1000))
    members = list(res.members)
    ok = members == R_E_1000 and dt < 5
    report(1, ok, f"R_E up to 1000: {len(members)} primes, {members[:5]}..{members[-3:]}, {dt:.2f}s (< 5s)")


def _table_row(k):
    res = scan_RA(E, 10**k)
    return res.count, res.prime_count, f"{res.ratio:.4f}"


def test_c02_table1():
    rows, dt = timed(lambda: {k: _table_row(k) for k in (2, 3, 4, 5)})
    ok = all(rows[k] == TABLE1[k] for k in rows) and dt < 120
    shown = ", ".join(f"k={k}:{c}/{pi}={r}" for k, (c, pi, r) in rows.items())
    report(2, ok, f"R_E statistics {shown}, {dt:.1f}s (< 120s)")


@pytest.mark.slow
def test_c02_table1_k6():
    row, dt = timed(lambda: _table_row(6))
    ok = row == TABLE1[6] and dt < 1800
    report(2, ok, f"[extended] k=6: {row[0]}/{row[1]}={row[2]}, {dt:.1f}s (< 30 min)")


def test_c03_RJ_list():
    def work():
        members = list(scan_RA(J, 1000).members)
        orders = {p: genus2_jacobian_order(J, p).group_order for p in JACOBIAN_ORDERS}
        return members, orders

    (members, orders), dt = timed(work)
    ok = members == R_J_1000 and orders == JACOBIAN_ORDERS and dt < 600
    report(3, ok, f"R_J up to 1000: {len(members)} primes; #J(F_p) {orders}; {dt:.1f}s (< 600s)")


def test_c04_witnesses():
    found = {ell: find_condition_ii_witness(J, ell, 20000) for ell in WITNESSES}
    report(4, found == WITNESSES, f"minimal witnesses {found}")


def test_c05_condsum():
    def work():
        bad = []
        for ell in (2, 3, 5):
            N = [0] * (10**4 + 1)
            for n in range(1, 10**4 + 1):
                N[n] = conductor_multiplicity_N(ell, n)
            for n in range(1, 10**4 + 1):
                if sum(N[d] for d in divisors(n)) != count_subfields_M(ell, n):
                    bad.append((ell, n))
        return bad

    bad, dt = timed(work)
    ok = not bad and dt < 10
    report(5, ok, f"sum_(d|n) N(d) = M(n) for l in 2,3,5 and n <= 10^4: {len(bad)} failures, {dt:.1f}s (< 10s)")


def test_c06_fundamental_discriminants():
    bad = [n for n in range(1, 10**4 + 1)
           if conductor_multiplicity_N(2, n) != is_fundamental(n) + is_fundamental(-n)]
    report(6, not bad, f"N(2, n) = #{{D fundamental : |D| = n}} for n <= 10^4: {len(bad)} mismatches")


def test_c07_density_identities():
    reports = [enumerate_free_fraction_sl2(ell) for ell in cached_primes(50).tolist()]
    reports += [enumerate_free_fraction_sp4(ell) for ell in (2, 3)]
    ident = all(
        r.beta + r.gamma == 1 and 0 < r.alpha < Fraction(1, r.ell - 1) for r in reports
    )
    g2, g3 = reports[0].gamma, reports[1].gamma
    oracle = all(
        (r.H_size, r.C_size) == sl2_trace_oracle(r.ell) for r in reports[:2]
    )
    ok = ident and g2 == Fraction(1, 3) and g3 == Fraction(5, 8) and oracle
    report(7, ok, f"{len(reports)} reports satisfy identities; gamma(SL2,2)={g2}, gamma(SL2,3)={g3}; trace oracle agrees={oracle}")


def test_c08_free_witness():
    results = {
        (ell, d): (lambda w: is_symplectic(w) and acts_freely(w))(build_free_witness(ell, d))
        for ell in (2, 3, 5, 7)
        for d in (1, 2, 3)
    }
    report(8, all(results.values()), f"{sum(results.values())}/{len(results)} witnesses symplectic and free")


def test_c09_chebotarev():
    def work():
        out = {}
        for ell in (2, 3):
            gamma = enumerate_free_fraction_sl2(ell).gamma
            frac, n = empirical_free_fraction(E, ell, 10**6)
            out[ell] = (float(gamma), frac, n)
        return out

    out, dt = timed(work)
    ok = all(abs(f - g) < 0.02 for g, f, _ in out.values()) and dt < 180
    shown = "; ".join(f"l={ell}: {f:.4f} vs {g:.4f} (n={n})" for ell, (g, f, n) in out.items())
    report(9, ok, f"{shown}; {dt:.1f}s (< 180s)")


def test_c10_thinning():
    gamma = enumerate_free_fraction_sl2(2).gamma
    t = thinning_experiment(E, 2, (), X_samples=(10**3, 10**4, 10**5, 10**6), gamma=gamma)
    ratios = [r for *_, r in t.rows]
    mono = all(r > 0 for r in ratios) and all(a >= b for a, b in zip(ratios, ratios[1:]))
    close = abs(t.decay_exponent - float(gamma)) <= 0.15
    shown = ", ".join(f"{r:.4f}" for r in ratios)
    report(10, mono and close, f"ratios {shown}; fitted exponent {t.decay_exponent:.3f} vs gamma = 1/3 (+-0.15)")


def test_c11_bsgs_oracle():
    primes = [p for p in cached_primes(10**4).tolist() if p >= 5 and p != 67]
    naive = {p: ec_count_naive(E, p).group_order for p in primes}
    # the character-sum count is itself checked against plane enumeration on a sample
    assert all(naive[p] == plane_count(E.ainvs, p) for p in primes[:40])
    bad = [(s, p) for s in (1, 2, 3) for p in primes if ec_count_bsgs(E, p, seed=s).group_order != naive[p]]
    report(11, not bad, f"BSGS = naive for {len(primes)} good primes 5 <= p <= 10^4 across seeds 1,2,3: {len(bad)} mismatches")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c") and callable(fn):
            if name.endswith("_k6") and "--slow" not in sys.argv:
                continue
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
