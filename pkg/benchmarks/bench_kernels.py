"""Compare the compiled kernels with the numpy/pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""

import argparse
import json
import time

import numpy as np

from punctured import _pykernels
from punctured.arith import cached_primes, smallest_nonresidue
from punctured.counting import _short_model, sextic
from punctured.registry import builtin_curve

try:
    from punctured import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t)
    return min(times), result


def cases(args):
    E = builtin_curve("67a1")
    J = builtin_curve("8969.a.8969.1")
    F = sextic(J)

    P = np.array([q for q in cached_primes(args.bsgs_limit).tolist() if q > 3000 and q != 67], dtype=np.int64)
    AB = [_short_model(E, int(q)) for q in P]
    A = np.array([a for a, _ in AB], dtype=np.int64)
    B = np.array([b for _, b in AB], dtype=np.int64)
    D = np.array([smallest_nonresidue(int(q)) for q in P], dtype=np.int64)

    p = args.g2_prime
    d = smallest_nonresidue(p)
    q = args.ec_prime
    return [
        (f"g2_char_sums p={p}", lambda k: k.g2_char_sums(F, p, d)),
        (f"ec_char_sum p={q}", lambda k: k.ec_char_sum(4, 5, -24, -83, q)),
        (f"ec_group_orders {len(P)} primes <= {args.bsgs_limit}", lambda k: k.ec_group_orders(A, B, P, D, 1, 40)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--g2-prime", type=int, default=17939)
    ap.add_argument("--ec-prime", type=int, default=1000003)
    ap.add_argument("--bsgs-limit", type=int, default=200000)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args()

    rows = []
    print(f"{'kernel':44s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn in cases(args):
        t_py, r_py = best_of(lambda: fn(_pykernels), args.repeat)
        row = {"kernel": name, "python_s": round(t_py, 4), "cython_s": None, "speedup": None}
        if _ckernels is not None:
            t_c, r_c = best_of(lambda: fn(_ckernels), args.repeat)
            same = np.array_equal(np.asarray(r_py), np.asarray(r_c))
            if not same:
                raise SystemExit(f"backends disagree on {name}")
            row.update(cython_s=round(t_c, 4), speedup=round(t_py / t_c, 1))
        rows.append(row)
        c = "-" if row["cython_s"] is None else f"{row['cython_s']:.4f}"
        s = "-" if row["speedup"] is None else f"{row['speedup']:.1f}x"
        print(f"{name:44s} {t_py:10.4f} {c:>10s} {s:>8s}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
