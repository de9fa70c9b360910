import json
import math
import os

import numpy as np
import pytest

import lvharvest as lv

CONFIG_DIR = os.environ.get(
    "LVHARVEST_CONFIG_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "configs")
)


def seasonal(a1=0.1, a2=0.1):
    sin = lv.HarmonicKind.Sine
    cos = lv.HarmonicKind.Cosine
    r = [lv.PeriodicFn.harmonic(6.5, [lv.Harmonic(0.1, 1, 0.0, sin)]),
         lv.PeriodicFn.harmonic(6.6, [lv.Harmonic(0.1, 1, 0.0, sin)])]
    alpha = [lv.PeriodicFn.harmonic(a1, [lv.Harmonic(0.01, 1, 0.0, cos)]),
             lv.PeriodicFn.harmonic(a2, [lv.Harmonic(0.01, 1, 0.0, cos)])]
    return lv.ModelParams(r, alpha, [[4.3, 0.4], [0.5, 3.5]])


def test_periodic_fn():
    f = lv.PeriodicFn.harmonic(2.0, [lv.Harmonic(0.5)])
    assert f(0.25) == pytest.approx(2.5)
    assert f.mean() == pytest.approx(2.0)
    assert f.sup() == pytest.approx(2.5, abs=1e-9)
    assert f.square().mean() == pytest.approx(4.0 + 0.125)
    t = lv.PeriodicFn.tabulated([(0.0, 1.0), (0.5, 3.0)])
    assert t(0.25) == pytest.approx(2.0)


def test_policy_matches_reference_values():
    pol = lv.optimal_policy(seasonal())
    assert pol.valid
    assert pol.H_star[0] == pytest.approx(3.29, abs=0.01)
    assert pol.H_star[1] == pytest.approx(3.26, abs=0.01)
    assert pol.Y_star == pytest.approx(4.99, abs=0.02)
    assert json.loads(pol.to_json())["valid"] is True
    assert lv.optimal_policy(seasonal(a1=0.7)).Y_star == pytest.approx(4.83, abs=0.02)
    assert lv.optimal_policy(seasonal(a2=1.1)).Y_star == pytest.approx(4.50, abs=0.02)


def test_classify_and_errors():
    p = seasonal()
    assert lv.classify(p, lv.HarvestEffort(10, 10)).regime == lv.Regime.BothExtinct
    assert lv.classify(p, lv.HarvestEffort(3.29, 3.26)).regime == lv.Regime.BothPersist
    with pytest.raises(lv.RegimeError):
        lv.yield_theoretical(p, lv.HarvestEffort(10, 10))
    with pytest.raises(lv.ValidationError):
        lv.ModelParams(p.r, p.alpha, [[-1.0, 0.4], [0.5, 3.5]])
    assert issubclass(lv.AssumptionViolation, lv.Error)


def test_oracle_and_sweep():
    p = seasonal()
    H, Y = lv.grid_search_oracle(p, 6.0, 0.05)
    assert Y <= lv.optimal_policy(p).Y_star
    rows = lv.noise_sensitivity(p, 0, [0.0, 1.0, 7.0])
    ys = [r["Y_star"] for r in rows]
    assert ys == sorted(ys, reverse=True)


def test_simulate_returns_arrays_and_is_seeded():
    cfg = lv.SimConfig()
    cfg.t_end = 5.0
    cfg.seed = 3
    a = lv.simulate(seasonal(), lv.HarvestEffort(3.29, 3.26), cfg)
    b = lv.simulate(seasonal(), lv.HarvestEffort(3.29, 3.26), cfg)
    assert isinstance(a.states, np.ndarray)
    assert a.states.shape == (len(a.times), 2)
    assert np.array_equal(a.states, b.states)
    assert (a.states > 0).all()
    avg = a.time_average(0.5)
    assert all(math.isfinite(v) for v in avg)


def test_ensemble_and_config():
    cfg = lv.load_config(os.path.join(CONFIG_DIR, "case_i.json"))
    ec = cfg.ensemble
    ec.n_paths = 16
    sim = ec.sim
    sim.t_end = 4.0
    ec.sim = sim
    stats = lv.run_ensemble(cfg.model, cfg.harvest, ec)
    assert stats.n_paths_ok == 16
    assert stats.empirical_yield.est > 0
    assert "mean_path" in json.loads(stats.to_json())
    again = lv.parse_config(cfg.to_json())
    assert again.to_json() == cfg.to_json()
    with pytest.raises(lv.ParseError):
        lv.parse_config('{"model": {}, "gamma": 1}')
