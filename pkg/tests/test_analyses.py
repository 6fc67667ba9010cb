import math

import numpy as np
import pytest

from circuits import FOLD_S, FOLD_V, HYS_TRIANGLE, divider, hys_bench, rc, rram_bench, vsrc
from memsim.analyses import (HomotopyOptions, Waveform, ac_sweep, dc_sweep, detect_period, homotopy,
                             small_signal_poles, transient)
from memsim.circuit import Circuit, Instance
from memsim.devices import RramParams
from memsim.engine import assemble
from memsim.newton import NewtonOptions, dc_operating_point

# ---- DC sweep


def test_linear_sweep_slope():
    dae = assemble(divider(0.0, 250.0))
    w = dc_sweep(dae, "V1", np.linspace(-1, 1, 11))
    assert w.ok and w.converged.all()
    slope = np.polyfit(w.x, -w.column("i(V1)"), 1)[0]
    assert slope == pytest.approx(1 / 250 + dae.tol.gmin, rel=1e-9)


def test_hys_sweep_hysteresis():
    dae = assemble(hys_bench())
    up = np.round(np.arange(-1, 1.0001, 0.01), 10)
    a = dc_sweep(dae, "V1", up)
    b = dc_sweep(dae, "V1", up[::-1], x0=a.values[-1])
    s_up = a.column("s(H1)")
    s_dn = b.column("s(H1)")[::-1]
    k0 = int(np.argmin(np.abs(up)))
    assert s_up[k0] == pytest.approx(-1.0, abs=1e-6) and s_dn[k0] == pytest.approx(1.0, abs=1e-6)
    jump_up = up[int(np.argmax(np.abs(np.diff(s_up)))) + 1]
    assert abs(jump_up - FOLD_V) <= 0.02


def test_rram_sweep_has_no_dc_hysteresis():
    dae = assemble(rram_bench())
    vs = np.round(np.arange(-1.49, 1.5, 0.04), 10)
    a = dc_sweep(dae, "V1", vs)
    b = dc_sweep(dae, "V1", vs[::-1], x0=a.values[-1])
    assert a.ok and b.ok
    diff = np.abs(a.column("gap(R1)") - b.column("gap(R1)")[::-1])
    assert diff.max() <= 10 * dae.tol.reltol * RramParams().maxGap


def test_unknown_source_rejected():
    with pytest.raises(KeyError):
        dc_sweep(assemble(divider()), "V9", [0.0])


# ---- transient


def _rc_error(dt, method="trap"):
    tau = 1e-3
    w = transient(assemble(rc(1.0, 1e3, 1e-6)), 0.0, 5 * tau, dt, method, {"v(2)": 0.0})
    assert w.ok
    return np.max(np.abs(w.column("v(2)") - (1 - np.exp(-w.x / tau)))), w


def test_rc_step_trap_accuracy():
    e1, w = _rc_error(1e-5)
    e2, _ = _rc_error(5e-6)
    assert e1 < 0.01
    assert 3 <= e1 / e2 <= 5
    k = int(np.argmin(np.abs(w.x - 1e-3)))
    assert w.column("v(2)")[k] == pytest.approx(1 - math.exp(-1), abs=0.01)
    assert np.all(np.diff(w.x) > 0)


def test_rc_step_be_first_order():
    e1, _ = _rc_error(1e-5, "be")
    e2, _ = _rc_error(5e-6, "be")
    assert 1.7 <= e1 / e2 <= 2.3


def test_hys_triangle_jumps_near_folds():
    dae = assemble(Circuit([vsrc(HYS_TRIANGLE), Instance("H1", "hys", ("1", "0"), {})]))
    w = transient(dae, 0.0, 4.0, 4e-3, "be", {"s(H1)": -1.0})
    assert w.ok
    v, s = w.column("v(1)"), w.column("s(H1)")
    jumps = np.argsort(np.abs(np.diff(s)))[-2:]
    for j in jumps:
        assert abs(abs(v[j]) - FOLD_V) <= 0.02


def test_transient_gives_up_with_partial_waveform(monkeypatch):
    import sys

    tr = sys.modules["memsim.analyses.transient"]
    calls = {"n": 0}
    real = tr.newton_solve

    def flaky(problem, opts=None, tol=None):
        calls["n"] += 1
        rep = real(problem, opts, tol)
        if calls["n"] > 5:
            rep.converged = False
        return rep

    monkeypatch.setattr(tr, "newton_solve", flaky)
    w = transient(assemble(rc()), 0.0, 1e-3, 1e-5, "be", {"v(2)": 0.0})
    assert not w.ok and "halvings" in w.message
    assert 1 < w.x.size < 101


def test_transient_argument_checks():
    dae = assemble(rc())
    with pytest.raises(ValueError):
        transient(dae, 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        transient(dae, 0.0, 1.0, 0.1, "gear")
    with pytest.raises(KeyError):
        transient(dae, 0.0, 1.0, 0.1, "be", {"v(42)": 1.0})


# ---- AC


def test_rc_lowpass_corner():
    dae = assemble(rc(0.0))
    op = dc_operating_point(dae).solution
    r = ac_sweep(dae, op, "V1", [1 / (2 * math.pi * 1e-3)])
    assert abs(r.column("v(2)")[0]) == pytest.approx(1 / math.sqrt(2), abs=1e-6)
    assert np.degrees(np.angle(r.column("v(2)")[0])) == pytest.approx(-45.0, abs=1e-4)


def test_ac_zero_frequency_is_dc_sensitivity():
    dae = assemble(hys_bench(0.2))
    op = dc_operating_point(dae).solution
    r = ac_sweep(dae, op, "V1", [0.0])
    ev = dae.evaluate(op, dae.source_values(dc=True))
    ref = np.linalg.solve(np.asarray(ev.G), -ev.B[:, 0])
    assert np.allclose(r.response[0], ref, rtol=1e-12, atol=1e-15)


def test_hys_ac_finite_on_stable_branch():
    dae = assemble(hys_bench(0.0))
    op = dc_operating_point(dae, NewtonOptions(initial_guess=np.array([0.0, 0.0, -0.9]))).solution
    assert op[2] == pytest.approx(-1.0, abs=1e-9)
    r = ac_sweep(dae, op, "V1", np.logspace(0, 9, 28))
    assert not r.errors and np.all(np.isfinite(r.response))
    assert np.all(small_signal_poles(dae, op).real < 0)


def test_ac_header_layout():
    dae = assemble(rc(0.0))
    r = ac_sweep(dae, np.zeros(dae.n), "V1", [10.0, 100.0])
    assert r.header[:3] == ["f", "mag(v(1))", "phase(v(1))"]
    assert len(list(r.rows())) == 2


# ---- homotopy


@pytest.fixture(scope="module")
def hys_curve():
    return homotopy(assemble(hys_bench()), "V1", -1.0, 1.0)


def test_hys_homotopy_two_folds(hys_curve):
    cs = hys_curve
    assert cs.ok and len(cs.folds) == 2
    lams = sorted(f.lam for f in cs.folds)
    assert lams == pytest.approx([-FOLD_V, FOLD_V], abs=0.005)
    for f in cs.folds:
        assert f.state[2] == pytest.approx(-math.copysign(FOLD_S, f.lam), abs=0.005)
    assert cs.lam[0] == -1.0 and cs.lam[-1] == 1.0


def test_hys_homotopy_three_solutions_at_zero(hys_curve):
    sols = sorted(x[2] for x in hys_curve.solutions_at(0.0))
    assert sols == pytest.approx([-1.0, 0.0, 1.0], abs=1e-4)


def test_homotopy_samples_on_curve_and_close(hys_curve):
    cs = hys_curve
    dae = cs.dae
    for lam, X in zip(cs.lam, cs.X):
        f = dae.evaluate(X, dae.source_values(dc=True, overrides={"V1": lam})).f
        assert np.max(np.abs(f)) <= dae.tol.residualtol
    steps = np.linalg.norm(np.diff(np.column_stack([cs.X, cs.lam]), axis=0), axis=1)
    assert steps.max() <= HomotopyOptions().hmax * (1 + 1e-6)


def test_middle_branch_unstable(hys_curve):
    dae = hys_curve.dae
    for X in hys_curve.solutions_at(0.0):
        poles = small_signal_poles(dae, X)
        if abs(X[2]) < 0.5:
            assert poles.real.max() > 0
        else:
            assert poles.real.max() < 0


def test_linear_homotopy_is_straight():
    cs = homotopy(assemble(divider(0.0, 10.0)), "V1", -2.0, 2.0)
    assert cs.ok and not cs.folds
    assert np.allclose(cs.column("v(1)"), cs.lam)
    assert np.all(np.diff(cs.lam) > 0)


def test_rram_homotopy_monotone():
    cs = homotopy(assemble(rram_bench()), "V1", -1.5, 1.5)
    assert cs.ok and not cs.folds
    g = cs.column("gap(R1)")
    assert np.all(np.diff(g) <= 1e-9)


def test_homotopy_bounds_checked():
    with pytest.raises(ValueError):
        homotopy(assemble(divider()), "V1", 1.0, -1.0)


# ---- period detection


def _wave(t, y):
    return Waveform("t", ["y"], t, y[:, None])


def test_sine_period():
    dt = 1e-3
    t = np.arange(0, 2.0, dt)
    res = detect_period(_wave(t, 0.3 * np.sin(2 * np.pi * 7.0 * t)), "y")
    assert res.periodic and res.correlation >= 0.99
    assert res.period == pytest.approx(1 / 7.0, abs=2 * dt)
    assert res.amplitude == pytest.approx(0.3, rel=1e-3)


def test_dc_is_not_periodic():
    t = np.linspace(0, 1, 500)
    assert not detect_period(_wave(t, np.full(t.size, 0.7)), "y").periodic
    assert not detect_period(_wave(t, 1e-6 * np.sin(40 * t)), "y").periodic
    assert not detect_period(_wave(t, np.exp(-t)), "y").periodic


def test_sawtooth_period():
    t = np.linspace(0, 10, 5001)
    res = detect_period(_wave(t, (t % 0.5) / 0.5), "y")
    assert res.periodic and res.period == pytest.approx(0.5, abs=0.01)
