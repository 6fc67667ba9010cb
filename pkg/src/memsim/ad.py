"""Forward-mode dual numbers carrying a gradient over a fixed set of seeds.

Device equations are written once against :class:`Dual` and yield values and
exact first partials together.  ``val`` may be a float or an ndarray of
shape ``S``; ``grad`` then has shape ``(nseeds,) + S`` so a whole grid of
bias points is differentiated in one pass.
"""

from __future__ import annotations

import numpy as np

from . import smoothsafe as ss


class Dual:
    __slots__ = ("val", "grad")

    def __init__(self, val, grad):
        self.val = val
        self.grad = grad

    def __repr__(self):
        return f"Dual({self.val!r}, {self.grad!r})"

    def __add__(self, o):
        if isinstance(o, Dual):
            return Dual(self.val + o.val, self.grad + o.grad)
        return Dual(self.val + o, self.grad)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Dual):
            return Dual(self.val - o.val, self.grad - o.grad)
        return Dual(self.val - o, self.grad)

    def __rsub__(self, o):
        return Dual(o - self.val, -self.grad)

    def __neg__(self):
        return Dual(-self.val, -self.grad)

    def __mul__(self, o):
        if isinstance(o, Dual):
            return Dual(self.val * o.val, self.grad * o.val + o.grad * self.val)
        return Dual(self.val * o, self.grad * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Dual):
            return Dual(self.val / o.val, (self.grad * o.val - o.grad * self.val) / (o.val * o.val))
        return Dual(self.val / o, self.grad / o)

    def __rtruediv__(self, o):
        return Dual(o / self.val, -o * self.grad / (self.val * self.val))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("Dual supports integer powers only; use safepow")
        return Dual(self.val**n, n * self.val ** (n - 1) * self.grad)


def seeds(values, n=None) -> list[Dual]:
    """One Dual per entry of ``values`` with unit gradient in its own slot."""
    vals = list(values)
    n = len(vals) if n is None else n
    out = []
    for k, v in enumerate(vals):
        shape = np.shape(v)
        g = np.zeros((n,) + shape)
        g[k] = 1.0
        out.append(Dual(v, g))
    return out


def value(d):
    return d.val if isinstance(d, Dual) else d


def _lift(vd, x):
    if isinstance(x, Dual):
        return Dual(vd.value, x.grad * vd.derivative)
    return vd.value


# elementary functions used by the shipped models

def tanh(x):
    v = np.tanh(value(x))
    return _lift(ss.ValDer(v, 1.0 - v * v), x)


def sinh(x):
    xv = value(x)
    return _lift(ss.ValDer(np.sinh(xv), np.cosh(xv)), x)


def smoothstep(x, smoothing):
    return _lift(ss.smoothstep(value(x), smoothing), x)


def smoothclip(x, smoothing):
    return _lift(ss.smoothclip(value(x), smoothing), x)


def safeexp(x, maxslope):
    return _lift(ss.safeexp(value(x), maxslope), x)


def safesinh(x, maxslope):
    return _lift(ss.safesinh(value(x), maxslope), x)


def safelog(x, smoothing):
    return _lift(ss.safelog(value(x), smoothing), x)


def safepow(a, b, smoothing, maxslope):
    r = ss.safepow(value(a), value(b), ss.SmoothParams(smoothing, maxslope))
    out_val = r.value
    grad = 0.0
    if isinstance(a, Dual):
        grad = grad + a.grad * r.derivative
    if isinstance(b, Dual):
        grad = grad + b.grad * r.d_b
    if isinstance(grad, float):
        return out_val
    return Dual(out_val, grad)


def smoothswitch(fn, fp, x, smoothing):
    r = ss.smoothswitch(value(fn), value(fp), value(x), smoothing)
    grad = 0.0
    for arg, d in ((fn, r.d_fn), (fp, r.d_fp), (x, r.derivative)):
        if isinstance(arg, Dual):
            grad = grad + arg.grad * d
    if isinstance(grad, float):
        return r.value
    return Dual(r.value, grad)
