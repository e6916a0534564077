"""Finite differences used by the divergence and residual operators.

Central second-order stencils with a per-coordinate default step
h = 1e-5 * max(1, |coordinate|).  Fields may declare domain bounds; a point
within one step of the boundary raises DifferentiationFailure unless the
caller opts into the one-sided second-order fallback.
"""

import numpy as np

from .errors import DifferentiationFailure

DEFAULT_REL_STEP = 1e-5


def default_step(u: float) -> float:
    return DEFAULT_REL_STEP * max(1.0, abs(u))


def diff(f, u: float, h: float = None, lo: float = None, hi: float = None,
         one_sided: bool = False):
    """Derivative at u of f: float -> scalar or ndarray.

    Central difference (f(u+h) - f(u-h)) / 2h by default.  If [lo, hi]
    bounds are given and the stencil would leave them, fall back to the
    one-sided second-order stencil when `one_sided` is set, otherwise raise
    DifferentiationFailure.
    """
    if h is None:
        h = default_step(u)
    lo_ok = lo is None or u - h >= lo
    hi_ok = hi is None or u + h <= hi
    if lo_ok and hi_ok:
        a = np.asarray(f(u + h), dtype=float)
        b = np.asarray(f(u - h), dtype=float)
        return (a - b) / (2.0 * h)
    if not one_sided:
        raise DifferentiationFailure(
            f"coordinate {u!r} is within one step ({h!r}) of the domain "
            "boundary; enable one_sided to use the inward stencil"
        )
    if not hi_ok and (lo is None or u - 2.0 * h >= lo):
        f0 = np.asarray(f(u), dtype=float)
        f1 = np.asarray(f(u - h), dtype=float)
        f2 = np.asarray(f(u - 2.0 * h), dtype=float)
        return (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * h)
    if not lo_ok and (hi is None or u + 2.0 * h <= hi):
        f0 = np.asarray(f(u), dtype=float)
        f1 = np.asarray(f(u + h), dtype=float)
        f2 = np.asarray(f(u + 2.0 * h), dtype=float)
        return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
    raise DifferentiationFailure(
        f"domain too narrow around {u!r} for a second-order stencil"
    )


def partial(f, args, i: int, h: float = None, bounds=None, one_sided: bool = False):
    """Partial derivative of f(*args) in args[i]; args are scalars.

    `bounds` is an optional sequence of (lo, hi) pairs (entries may be None)
    aligned with args.
    """
    args = list(args)
    lo = hi = None
    if bounds is not None and bounds[i] is not None:
        lo, hi = bounds[i]

    def slice_fn(u):
        probe = list(args)
        probe[i] = u
        return f(*probe)

    return diff(slice_fn, args[i], h=h, lo=lo, hi=hi, one_sided=one_sided)
