import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memsim import ad
from memsim.devices import KINDS, build_device
from memsim.modspec import (ContractError, LimitedVarSpec, ModelDefectError, ModelDescriptor, check_jacobians,
                            evaluate, limit_step)


def test_dual_arithmetic():
    x, y = ad.seeds([2.0, 3.0])
    z = x * y + x / y - y ** 2 + 1.0
    assert z.val == pytest.approx(2 * 3 + 2 / 3 - 9 + 1)
    assert z.grad[0] == pytest.approx(3 + 1 / 3)
    assert z.grad[1] == pytest.approx(2 - 2 / 9 - 6)
    t = ad.tanh(x)
    assert t.grad[0] == pytest.approx(1 - math.tanh(2.0) ** 2)


def test_hys_examples():
    m = build_device("hys", {"R": 1.0})
    assert evaluate(m, [1.0], [0.0]).fe[0] == pytest.approx(1.0)
    assert evaluate(m, [0.0], [1.0]).fi[0] == pytest.approx(0.0, abs=1e-15)


def test_hys_jacobian_check():
    assert check_jacobians(build_device("hys"), [0.3], [0.2]) < 1e-5


def test_rram_jacobian_check():
    m = build_device("rram")
    mid = 0.5 * (m.params["minGap"] + m.params["maxGap"])
    assert check_jacobians(m, [0.5], [mid]) < 1e-5


def test_resistor_jacobian_check():
    m = build_device("resistor", {"r": 470.0})
    for v in (-3.0, 0.0, 12.5):
        assert check_jacobians(m, [v], []) < 1e-10


def test_limit_step_dispatch():
    none = LimitedVarSpec("v", (1.0,), ())
    sh = LimitedVarSpec("v", (1.0,), (), "sinhlim", (1.0,))
    pn = LimitedVarSpec("v", (1.0,), (), "pnjlim", (0.025, 0.5))
    assert limit_step(none, 5.0, 0.0) == 5.0
    assert limit_step(sh, 5.0, 0.0) == pytest.approx(math.log(5 + math.sqrt(26)), rel=1e-12)
    assert limit_step(pn, 0.7, 0.7) == 0.7


def test_limited_var_spec_validation():
    with pytest.raises(ValueError):
        LimitedVarSpec("v", (1.0,), (), "sinhlim", (0.0,))
    with pytest.raises(ValueError):
        LimitedVarSpec("v", (1.0,), (), "bogus")
    with pytest.raises(ValueError):
        LimitedVarSpec("v", (1.0,), (), "pnjlim", (0.025,))


def test_contract_errors():
    m = build_device("hys")
    with pytest.raises(ContractError):
        evaluate(m, [1.0, 2.0], [0.0])
    with pytest.raises(ContractError):
        evaluate(m, [1.0], [])
    with pytest.raises(ContractError):
        evaluate(m, [float("nan")], [0.0])


def test_non_finite_output_names_the_entry():
    def eqs(x, y, u, lim):
        return [x[0] / 0.0 if False else x[0] * float("inf")], [0.0], [], []

    m = ModelDescriptor("broken", ("v",), ("i",), (), (), {}, eqs)
    with pytest.raises(ModelDefectError, match="fe\\[0\\]"):
        evaluate(m, [1.0], [])


def test_descriptor_invariants():
    eqs = lambda x, y, u, lim: ([0.0], [0.0], [], [])  # noqa: E731
    with pytest.raises(ValueError):
        ModelDescriptor("d", ("v",), ("v",), (), (), {}, eqs)
    with pytest.raises(ValueError):
        ModelDescriptor("d", ("v",), ("i",), (), (), {"a": float("inf")}, eqs)
    m = ModelDescriptor("d", ("v",), ("i",), (), (), {"a": 1.0}, eqs)
    with pytest.raises(TypeError):
        m.params["a"] = 2.0


def test_limited_substitution_linearizes_back():
    m = build_device("sinhdev", {"k": 1.0})
    x = 3.0
    lim = 1.2
    ev = evaluate(m, [x], [], (), [lim])
    # value is the tangent line of sinh at lim, evaluated at x
    assert ev.fe[0] == pytest.approx(math.sinh(lim) + math.cosh(lim) * (x - lim), rel=1e-12)
    assert ev.dfe_dx[0, 0] == pytest.approx(math.cosh(lim), rel=1e-12)
    exact = evaluate(m, [x], [])
    assert exact.fe[0] == pytest.approx(math.sinh(x), rel=1e-12)


def _random_params(kind, rng):
    if kind == "memristor":
        return {"f1_switch": int(rng.integers(1, 6)), "f2_switch": int(rng.integers(1, 7))}
    return {}


def _random_point(kind, m, rng):
    x = rng.uniform(-1.5, 1.5, len(m.x_names))
    if kind == "rram":
        y = rng.uniform(0.05, 1.65, len(m.y_names))
    elif kind == "inductor":
        y = rng.uniform(-1e-3, 1e-3, len(m.y_names))
    else:
        y = rng.uniform(0.05, 0.95, len(m.y_names))
    u = rng.uniform(-2, 2, len(m.u_names))
    return x, y, u


@pytest.mark.parametrize("kind", sorted(KINDS))
def test_every_model_is_pure_finite_and_has_correct_jacobians(kind):
    rng = np.random.default_rng(7)
    for _ in range(25):
        m = build_device(kind, _random_params(kind, rng))
        x, y, u = _random_point(kind, m, rng)
        a = evaluate(m, x, y, u)
        b = evaluate(m, x, y, u)
        for fld in ("fe", "qe", "fi", "qi", "dfe_dx", "dfi_dy"):
            assert np.array_equal(getattr(a, fld), getattr(b, fld))
            assert np.all(np.isfinite(getattr(a, fld)))
        assert check_jacobians(m, x, y, u) < 1e-5


@settings(max_examples=60, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 20))
def test_sinhdev_limited_eval_matches_exact_when_not_limited(x, other, k):
    m = build_device("sinhdev", {"k": k})
    ev = evaluate(m, [x], [], (), [x])
    ex = evaluate(m, [x], [])
    assert ev.fe[0] == pytest.approx(ex.fe[0], rel=1e-12, abs=1e-300)
