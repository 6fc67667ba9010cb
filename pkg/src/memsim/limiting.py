"""SPICE-style Newton limiting functions.

Both limiters answer the same question: the last Newton linearization at
``xold`` predicted a device output for ``xnew``; which argument actually
produces that output?  For the diode exponential that inversion is
``pnjlim``; for sinh it is ``sinhlim``.
"""

from __future__ import annotations

import math


def pnjlim(xnew: float, xold: float, vt: float, xcrit: float) -> float:
    """Junction-voltage limiting for exponential devices.

    Only forward steps above ``xcrit`` that exceed ``2*vt`` are compressed;
    everything else passes through unchanged.
    """
    if vt <= 0:
        raise ValueError("pnjlim needs vt > 0")
    if xnew > xcrit and xnew - xold > 2.0 * vt:
        return xold + vt * math.log1p((xnew - xold) / vt)
    return xnew


def sinhlim(xnew: float, xold: float, k: float) -> float:
    """Limit ``xnew`` so that sinh(k*x) equals its linear prediction from ``xold``.

    The prediction is ``sinh(k*xold) + k*cosh(k*xold)*(xnew - xold)`` and the
    result is its inverse through asinh, divided by ``k``.  Large ``k*xold`` is
    handled in log space so that the function stays finite.
    """
    if k <= 0:
        raise ValueError("sinhlim needs k > 0")
    a = k * xold
    d = k * (xnew - xold)
    if abs(a) <= 20.0:
        ylim = math.sinh(a) + math.cosh(a) * d
        return math.asinh(ylim) / k
    # |a| large: sinh(a) ~ sign(a) e^|a|/2 and cosh(a) ~ e^|a|/2 to double precision
    w = math.copysign(1.0, a) + d
    if w == 0.0:
        return 0.0
    log_y = abs(a) - math.log(2.0) + math.log(abs(w))
    if log_y > 20.0:
        return math.copysign(log_y + math.log(2.0), w) / k
    return math.asinh(math.copysign(math.exp(log_y), w)) / k
