import json
import math

import numpy as np
import pytest

import petcor


def test_expm_rotation():
    s = np.array([[0.0, 1.0], [-1.0, 0.0]])
    e = petcor.expm(s, math.pi / 2)
    assert np.allclose(e, [[0.0, 1.0], [-1.0, 0.0]], atol=1e-12)


def test_leader_state():
    s = np.array([[0.0, 1.0], [-1.0, 0.0]])
    v, y0 = petcor.leader_state(s, [1.0, 0.0], 2 * math.pi)
    assert np.allclose(v, [1.0, 0.0], atol=1e-11)
    assert y0 == pytest.approx(1.0)


def test_lyapunov_q_scalar():
    q = petcor.lyapunov_q(np.array([[1.0]]), 1)
    assert q[0, 0] == pytest.approx(1.0)


def test_scalar_sampling_bound():
    cfg_text = {
        "exosystem": {"S": [[0.0]], "v0": [1.0]},
        "graph": {
            "followers": 1,
            "edges": [{"to": 1, "from": 0, "weight": 1.0, "period": 0.01}],
            "self_periods": [0.01],
        },
        "observer": {
            "kappa1": 1.0,
            "kappa2": 1.0,
            "delta_s": 0.5,
            "delta_v": 0.5,
            "gamma_s": 0.8,
            "gamma_v": 0.8,
        },
        "plants": [{"f": "zero", "delay": 0.1, "x0": [0.0], "ell": 0.0}],
        "controllers": [{"K": [-1.0], "d_hat": 0.1, "nx": 16}],
        "run": {"t_end": 0.0, "h": 0.001},
    }
    cfg = petcor.parse_config(json.dumps(cfg_text))
    bound = petcor.sampling_bound(cfg)
    assert bound["m1"] == pytest.approx(1.0 / 56.0, abs=1e-12)
    assert bound["m2"] == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert bound["m3"] == pytest.approx(math.sqrt(1.0 / 21.0), abs=1e-12)
    assert bound["m"] == pytest.approx(1.0 / 56.0, abs=1e-12)


def test_presets_available():
    names = petcor.preset_names()
    assert len(names) == 5
    assert "s1_no_mismatch" in names
    cfg = petcor.load_preset("s1_no_mismatch")
    assert cfg.followers == 4
    assert cfg.t_end == pytest.approx(30.0)


def test_short_run_shapes_and_determinism():
    cfg = petcor.load_preset("s1_no_mismatch")
    a = petcor.run(cfg, t_end=1.0)
    b = petcor.run(cfg, t_end=1.0)

    assert len(a) == 1001
    assert a.t.shape == (1001,)
    assert a.x(0).shape == (1001, 1)
    assert a.v_hat(0).shape == (1001, 2)
    assert np.array_equal(a.t, b.t)
    for i in range(a.n_agents):
        assert np.array_equal(a.x(i), b.x(i))
        assert np.array_equal(a.u(i), b.u(i))
    assert a.net_events == b.net_events
    assert 0.0 < a.network_ratio < 1.0


def test_bad_config_raises():
    with pytest.raises(ValueError):
        petcor.parse_config("{}")
    with pytest.raises(ValueError):
        petcor.load_preset("nonsense")


def test_decay_fit():
    t = np.linspace(0.0, 2.0, 200)
    rate, offset = petcor.decay_fit(t, np.exp(-2.0 * t))
    assert rate == pytest.approx(-2.0, abs=1e-3)
    assert offset == pytest.approx(0.0, abs=1e-6)


def test_emit_outputs(tmp_path):
    cfg = petcor.load_preset("s1_no_mismatch")
    tr = petcor.run(cfg, t_end=0.1)
    written = petcor.emit_outputs(tr, str(tmp_path), plots=True)
    assert len(written) == 6
    assert (tmp_path / "trace.csv").stat().st_size > 0
