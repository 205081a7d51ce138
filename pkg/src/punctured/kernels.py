"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy/pure-Python twin in ``_pykernels``. Set ``PUNCTURED_BACKEND=python`` to
force the fallback.
"""

import os

from . import _pykernels

MAX_COMPILED_P = 2**31 - 1

_compiled = None
if os.environ.get("PUNCTURED_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _pykernels


def char_table(p):
    return _impl.char_table(p)


def ec_char_sum(c3, c2, c1, c0, p):
    if p >= MAX_COMPILED_P:
        return _pykernels.ec_char_sum(c3, c2, c1, c0, p)
    return _impl.ec_char_sum(c3, c2, c1, c0, p)


def g2_char_sums(coeffs, p, d):
    if p >= MAX_COMPILED_P:
        return _pykernels.g2_char_sums(coeffs, p, d)
    return _impl.g2_char_sums(coeffs, p, d)


def ec_group_order(A, B, p, d, seed, budget):
    if p >= MAX_COMPILED_P:
        return _pykernels.ec_group_order(A, B, p, d, seed, budget)
    return _impl.ec_group_order(A, B, p, d, seed, budget)


def ec_group_orders(A, B, P, D, seed, budget):
    if len(P) and int(max(P)) >= MAX_COMPILED_P:
        return _pykernels.ec_group_orders(A, B, P, D, seed, budget)
    return _impl.ec_group_orders(A, B, P, D, seed, budget)
