import math

import pytest

import tritrack as tt


def test_step_function_and_tvs():
    hat = tt.StepFunction([0.0, 1.0], [0.0, 1.0, 0.0])
    assert hat(0.5) == 1.0
    assert hat(-1.0) == 0.0
    r = tt.tvs(hat, 0.5)
    assert r.tv == 2.0
    assert r.seminorm == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert tt.tvs_bruteforce(hat, 0.5) == r.tv


def test_sampling():
    f = tt.StepFunction([0.0], [0.26, -0.25])
    g = tt.sample_to_grid(f, 10)
    assert g.values == [0.3, -0.2]
    h = tt.sample_to_grid_tvd(f, 10)
    assert tt.tvs(h, 0.5).tv <= tt.tvs(f, 0.5).tv + 1e-13


def test_model_and_riemann():
    m = tt.FluxModel.burgers_linear()
    assert m.bound == pytest.approx(1.0 / 3.0)
    assert tt.check_ush(m) == pytest.approx(1.0 / 3.0, rel=1e-6)
    assert tt.shock_speed(m, 0.3, -0.3) == 0.0
    r = tt.rh_factor(m, 0.3, -0.3)
    assert r == pytest.approx((1.3 / 0.7) * math.exp(-0.6), rel=1e-15)

    waves = tt.system_riemann(m, 10, 0.3, 1.0, -0.3, 1.0)
    assert len(waves) == 2
    assert waves[0].kind == tt.WaveKind.Contact2
    assert waves[1].kind == tt.WaveKind.Shock1
    v_m = m.from_Z(0.3, waves[1].Z_l)
    assert v_m == pytest.approx(13.0 / 7.0, rel=1e-14)


def test_simulation_and_trace():
    m = tt.FluxModel.burgers_linear()
    sim = tt.Simulation(m, 10, tt.StepFunction([0.0], [0.3, -0.3]),
                        tt.StepFunction(1.0))
    sim.start_trace(1.0)
    sim.run_until(3.0)
    tr = sim.trace_result()
    assert tr.shock_crossings() == 1
    r = (1.3 / 0.7) * math.exp(-0.6)
    assert tr.terminal_Z == pytest.approx(r, rel=1e-15)
    snap = sim.snapshot(3.0)
    assert snap.u(-1.0) == 0.3
    assert snap.v(-0.5) == pytest.approx(13.0 / 7.0, rel=1e-13)

    replay = sim.replay_trace(1.0, 3.0)
    assert replay.terminal_Z == tr.terminal_Z


def test_blowup_helpers():
    d = tt.build_blowup_data(3)
    assert d.x[0] == 0.0
    assert d.x[3] == 0.875
    assert len(d.u0.values) == 8
    assert d.min_gap > 0.0

    z1, log_z1 = tt.blowup_ratio_product(1)
    assert z1 == pytest.approx(2.0 * math.exp(-2.0 / 3.0), rel=1e-15)
    assert math.exp(log_z1) == pytest.approx(z1, rel=1e-13)

    assert tt.bvs_partial_sums(1, 3.0) == pytest.approx((2.0 / 3.0) ** 3,
                                                        rel=1e-15)

    rep = tt.blowup_wft_crosscheck(1, 60)
    assert rep.rel_trace_oracle <= 1e-11
    assert rep.shock_crossings == 1
    assert rep.crossings == rep.expected_fronts


def test_error_mapping():
    m = tt.FluxModel.burgers_linear(1.0)  # not strictly hyperbolic
    with pytest.raises(Exception):
        tt.Simulation(m, 10, tt.StepFunction(0.0), tt.StepFunction(1.0))
    with pytest.raises(Exception):
        tt.StepFunction([2.0, 1.0], [0.0, 1.0, 0.0])
