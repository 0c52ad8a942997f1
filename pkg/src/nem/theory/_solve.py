"""Shared 1D solvers: sign-checked bisection and golden-section search."""

from __future__ import annotations

import math


def bisect_boundary(predicate, lo, hi, iters=80):
    """Boundary between a predicate-true region at lo and a false region at hi.

    The predicate must hold at lo and fail at hi; both endpoints are checked
    before iterating. 80 halvings shrink the bracket by 2^-80, far below
    double precision for any interval arising here.
    """
    lo = float(lo)
    hi = float(hi)
    if not predicate(lo):
        raise ValueError(f"predicate fails at the lower endpoint {lo!r}")
    if predicate(hi):
        raise ValueError(f"predicate holds at the upper endpoint {hi!r}")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo, hi, iters=120):
    """Golden-section maximum of a unimodal function on [lo, hi].

    Returns (argmax, value). 120 shrinks by ~1e-25 relative, enough to pin
    the maximizer to the last floating-point digit on any sane interval.
    """
    a = float(lo)
    b = float(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = f(c)
    fd = f(d)
    for _ in range(iters):
        if fc >= fd:
            b = d
            d, fd = c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a = c
            c, fc = d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def golden_min(f, lo, hi, iters=120):
    """Golden-section minimum, by negating golden_max."""
    x, v = golden_max(lambda t: -f(t), lo, hi, iters=iters)
    return x, -v
