"""Reduction-kernel selection.

At import time we try to load the compiled extension `jonq._speedups`
(Cython, prime fields only).  Every Groebner computation then asks
`kernel_for` for an engine:

  * rational coefficients          -> pure Python kernel, always
  * F_p, extension available       -> compiled kernel
  * JONQ_PURE=1 in the environment -> pure Python kernel, always

Both kernels implement the same interface and the same deterministic
reduction rule, so results are identical; only speed differs.  The
benchmark in benchmarks/bench_kernel.py flips JONQ_PURE to compare them.
"""

from __future__ import annotations

import os

from . import _pykernel

try:
    from . import _speedups

    HAVE_SPEEDUPS = True
except ImportError:  # pragma: no cover - depends on the build
    _speedups = None
    HAVE_SPEEDUPS = False

# the compiled kernel packs exponents into 10-bit fields of a 128-bit key:
# 10 variables + 2 degree fields = 120 bits; wider rings fall back to pure
SPEEDUP_MAX_VARS = 10
SPEEDUP_MAX_EXP = 1023


def pure_forced():
    return os.environ.get("JONQ_PURE", "") not in ("", "0")


def kernel_for(nvars, order, p=None, ops_budget=None):
    """Best available kernel for the given ring and coefficient field."""
    if (
        HAVE_SPEEDUPS
        and not pure_forced()
        and p is not None
        and nvars <= SPEEDUP_MAX_VARS
    ):
        return _speedups.Kernel(nvars, order, p, ops_budget)
    return _pykernel.Kernel(nvars, order, p, ops_budget)


def pure_kernel(nvars, order, p=None, ops_budget=None):
    return _pykernel.Kernel(nvars, order, p, ops_budget)
