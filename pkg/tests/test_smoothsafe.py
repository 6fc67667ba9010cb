import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memsim.smoothsafe import (ParameterError, SmoothParams, safeexp, safelog, safepow, safesinh, smoothclip,
                               smoothstep, smoothswitch)

finite = st.floats(-1e6, 1e6, allow_nan=False)
SMOOTH = st.sampled_from([1e-12, 1e-10, 1e-8, 1e-4, 1.0])


def test_smoothstep_values():
    assert smoothstep(0.0, 1e-10).value == 0.5
    assert smoothstep(1.0, 1.0).value == pytest.approx(0.5 * (1 / math.sqrt(2) + 1), rel=1e-12)
    assert smoothstep(-10.0, 1e-10).value == pytest.approx(0.0, abs=1e-10)


def test_smoothclip_values():
    assert smoothclip(0.0, 1e-8).value == pytest.approx(5e-5, rel=1e-12)
    assert smoothclip(5.0, 1e-8).value == pytest.approx(5.0, rel=1e-9)
    assert 0 < smoothclip(-5.0, 1e-8).value < 1e-9


def test_smoothswitch_values():
    assert smoothswitch(2.0, 7.0, 0.0, 1e-10).value == pytest.approx(4.5)
    assert smoothswitch(2.0, 7.0, 1.0, 1e-10).value == pytest.approx(7.0, abs=1e-8)
    assert smoothswitch(3.3, 3.3, -0.2, 1e-4).value == pytest.approx(3.3, rel=1e-15)


def test_safeexp_values():
    assert safeexp(0.0, 1e15).value == 1.0
    assert safeexp(3.0, math.e ** 2).value == pytest.approx(2 * math.e ** 2, rel=1e-12)
    m = 1e3
    j = math.log(m)
    for eps in (1e-3, 1e-6, 1e-9):
        assert abs(safeexp(j - eps, m).value - safeexp(j + eps, m).value) < 3 * m * eps


def test_safesinh_values():
    assert safesinh(0.0, 1e15).value == 0.0
    assert safesinh(1.0, 1e15).value == pytest.approx(math.sinh(1.0), rel=1e-14)
    assert safesinh(-40.0, 1e15).value == -safesinh(40.0, 1e15).value


def test_safelog_values():
    assert safelog(1.0, 1e-12).value == pytest.approx(0.0, abs=1e-9)
    assert safelog(math.e, 1e-12).value == pytest.approx(1.0, abs=1e-9)
    v = safelog(-1.0, 1e-12).value
    assert math.isfinite(v) and v < 0


def test_safepow_values():
    p = SmoothParams(1e-12, 1e15)
    assert safepow(2.0, 3.0, p).value == pytest.approx(8.0, rel=1e-6)
    for x in (1.0, 2.5, 40.0):
        assert safepow(x, 1.0, p).value == pytest.approx(x, rel=1e-6)
    assert math.isfinite(safepow(-1.0, 2.0, p).value)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
def test_bad_smoothing_rejected(bad):
    for fn in (smoothstep, smoothclip, safelog):
        with pytest.raises(ParameterError):
            fn(0.1, bad)


@pytest.mark.parametrize("bad", [1.0, 0.5, -3.0])
def test_bad_maxslope_rejected(bad):
    for fn in (safeexp, safesinh):
        with pytest.raises(ParameterError):
            fn(0.1, bad)
    with pytest.raises(ParameterError):
        SmoothParams(1e-8, bad)


def test_vectorised_inputs_match_scalar():
    xs = np.linspace(-50, 50, 41)
    vd = safesinh(xs, 1e10)
    for x, v, d in zip(xs, vd.value, vd.derivative):
        s = safesinh(float(x), 1e10)
        assert v == pytest.approx(s.value, rel=1e-14) and d == pytest.approx(s.derivative, rel=1e-14)


@settings(max_examples=300, deadline=None)
@given(finite, SMOOTH)
def test_every_primitive_is_finite(x, sm):
    p = SmoothParams(sm, 1e15)
    outs = [smoothstep(x, sm), smoothclip(x, sm), safeexp(x, 1e15), safesinh(x, 1e15), safelog(x, sm)]
    for o in outs:
        assert math.isfinite(o.value) and math.isfinite(o.derivative)
    pw = safepow(x, 2.5, p)
    assert all(math.isfinite(float(v)) for v in pw)
    sw = smoothswitch(-x, x, x, sm)
    assert all(math.isfinite(float(v)) for v in sw)


def _fd(fn, x):
    h = max(1e-7, 1e-7 * abs(x))
    return (fn(x + h).value - fn(x - h).value) / (2 * h)


@settings(max_examples=300, deadline=None)
@given(st.floats(-30, 30, allow_nan=False))
def test_derivatives_match_central_differences(x):
    m = 1e15
    j = math.log(m)
    cases = [
        lambda v: smoothstep(v, 1e-2),
        lambda v: smoothclip(v, 1e-2),
        lambda v: safelog(v, 1e-2),
    ]
    if abs(abs(x) - j) > 1e-3:
        cases += [lambda v: safeexp(v, m), lambda v: safesinh(v, m)]
    for fn in cases:
        d = fn(x).derivative
        assert d == pytest.approx(_fd(fn, x), rel=1e-6, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(finite, finite, SMOOTH)
def test_monotone_and_bounded(a, b, sm):
    lo, hi = min(a, b), max(a, b)
    assert smoothstep(lo, sm).value <= smoothstep(hi, sm).value
    assert 0.0 <= smoothstep(lo, sm).value <= 1.0
    assert 0.0 <= smoothclip(lo, sm).value <= smoothclip(hi, sm).value
    assert safeexp(a, 1e6).derivative <= 1e6 * (1 + 1e-12)
    assert safesinh(-a, 1e6).value == -safesinh(a, 1e6).value


def test_smoothstep_tends_to_step():
    xs = np.array([-1.0, -1e-2, 1e-2, 1.0])
    step = (xs > 0).astype(float)
    errs = [np.max(np.abs(smoothstep(xs, s).value - step)) for s in (1e-2, 1e-6, 1e-10)]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-6


def test_safeexp_tends_to_exp():
    xs = np.linspace(-5, 5, 101)
    errs = [np.max(np.abs(safeexp(xs, m).value - np.exp(xs))) for m in (10.0, 1e3, 1e6)]
    assert errs[0] > errs[1] and errs[2] == 0.0
