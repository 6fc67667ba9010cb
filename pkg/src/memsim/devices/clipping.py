"""Bound enforcement for internal-state dynamics by additive clipping terms.

Inside (lo, hi) the dynamics are left nearly intact.  Past a bound, a
smoothstep window swaps the original rate for an exponentially growing
restoring rate, so the zero set of the result stays one continuous curve
instead of the extra solution lines a multiplicative window creates.
"""

from __future__ import annotations

from .. import ad


def clip_rate(f2, s, lo, hi, kclip, smoothing, maxslope):
    """f2 + (exp(K(lo-s)) - f2) * step(lo-s) + (-exp(K(s-hi)) - f2) * step(s-hi)."""
    w_lo = ad.smoothstep(lo - s, smoothing)
    w_hi = ad.smoothstep(s - hi, smoothing)
    push_up = ad.safeexp((lo - s) * kclip, maxslope)
    push_down = ad.safeexp((s - hi) * kclip, maxslope)
    return f2 + (push_up - f2) * w_lo + (-push_down - f2) * w_hi
