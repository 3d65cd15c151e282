import json
import math

import pytest

from qpyc.codes import InfeasibleError, qpyc_code
from qpyc.noise import ChannelParams, epsilon_xz
from qpyc.repeater import (
    SWEEP_COLUMNS,
    RepeaterConfig,
    config_from_dict,
    end_to_end,
    entropy_h,
    hop_stats,
    key_rate,
    l_tot_max,
    load_config,
    loss_per_segment,
    p_incorrect_leading,
    q_max,
    secret_fraction,
    sweep_rate_vs_distance,
)


def test_loss_per_segment():
    assert loss_per_segment(1, 20) == pytest.approx(0.0487706, abs=1e-7)
    assert loss_per_segment(20, 20) == pytest.approx(0.632121, abs=1e-6)
    with pytest.raises(ValueError):
        loss_per_segment(0)


def test_entropy():
    assert entropy_h(0, 3) == 0
    assert entropy_h(1, 3) == pytest.approx(1.0)  # log2(d - 1)
    assert entropy_h(2 / 3, 3) == pytest.approx(math.log2(3))
    with pytest.raises(ValueError):
        entropy_h(-0.1, 3)


def test_q_max_qubit_is_bb84_bound():
    assert q_max(2) == pytest.approx(0.110028, abs=1e-6)
    for d in (3, 5, 7):
        assert secret_fraction(q_max(d), d) == pytest.approx(0, abs=1e-9)
    with pytest.raises(InfeasibleError):
        q_max(1)


@pytest.mark.parametrize("k", [1, 2, 4])
def test_hop_probabilities_sum_to_one(k):
    s = hop_stats(k, 0.1, 0.01, 0.02)
    assert s.P_fail + s.P_correct_X + s.P_incorrect_X == pytest.approx(1, abs=1e-14)
    assert s.P_fail + s.P_correct_Z + s.P_incorrect_Z == pytest.approx(1, abs=1e-14)
    assert s.P_incorrect_Z > s.P_incorrect_X


def test_leading_order_incorrect():
    # next term (k losses plus one error) is down by O(p), so keep p small
    for k in (1, 2, 3):
        exact = hop_stats(k, 0.005, 1e-6, 1e-6).P_incorrect_X
        assert p_incorrect_leading(k, 0.005, 1e-6) == pytest.approx(exact, rel=0.02)


def test_zero_distance_rate():
    _, rt0 = key_rate(RepeaterConfig(0, 1.0, qpyc_code(1)))
    assert rt0 == pytest.approx(math.log2(3))


def test_rate_decreases_with_distance():
    rates = [key_rate(RepeaterConfig(L, 1.0, qpyc_code(1)))[0] for L in (100, 300, 700, 1000)]
    assert all(a > b for a, b in zip(rates, rates[1:]))


def test_errors_cost_rate():
    clean = key_rate(RepeaterConfig(500, 1.0, qpyc_code(2)))[0]
    noisy = key_rate(RepeaterConfig(500, 1.0, qpyc_code(2), 1e-4, 1e-4, 1e-4))[0]
    assert noisy < clean
    assert end_to_end(RepeaterConfig(500, 1.0, qpyc_code(2))).Q == pytest.approx(0, abs=1e-12)


def test_l_tot_max_consistent_with_chain():
    # Q at l_tot_max should be near Q_max when eps is small
    code = qpyc_code(2)
    L = l_tot_max(code, 1e-5, 1.0)
    res = end_to_end(RepeaterConfig(round(L), 1.0, code, 1e-5, 1e-5, 1e-5))
    assert res.Q == pytest.approx(q_max(code.dim), rel=0.1)
    assert l_tot_max(code, 0.0, 1.0) == math.inf
    params = ChannelParams(loss_per_segment(1.0), 1e-5, 1e-5, 1e-5, 5)
    assert l_tot_max(code, params, 1.0) == pytest.approx(L)


def test_station_count_warns():
    with pytest.warns(UserWarning):
        assert RepeaterConfig(10.4, 1.0).stations == 10
    with pytest.raises(ValueError):
        RepeaterConfig(10, 0.0)


def test_sweep_columns_and_approximation():
    rows = sweep_rate_vs_distance([qpyc_code(1)], [0.0, 1e-5], 1.0, [0, 100, 200])
    assert len(rows) == 6 and set(rows[0]) == set(SWEEP_COLUMNS)
    for r in rows:
        assert r["R_t0_approx"] == pytest.approx(r["R_t0"], rel=0.05)


def test_config_files(tmp_path):
    doc = {"L_tot": 700, "L0": 1.0, "code": "qpyc:2", "eps_g": 1e-5}
    p = tmp_path / "c.json"
    p.write_text(json.dumps(doc))
    cfg = load_config(p)
    assert cfg.code == qpyc_code(2) and cfg.eps_g == 1e-5
    t = tmp_path / "c.toml"
    t.write_text('L_tot = 700\nL0 = 1.0\ncode = "qpyc:2"\neps_g = 1e-5\n')
    assert load_config(t) == cfg
    assert config_from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ValueError):
        config_from_dict({"L_tot": 1, "L0": 1, "bogus": 2})
    with pytest.raises(ValueError):
        config_from_dict({"L_tot": 1, "L0": 1, "code": "qpc:2,2"})


def test_epsilon_feeds_hop_stats():
    params = ChannelParams(0.05, 1e-4, 1e-4, 1e-4, 3)
    ex, ez = epsilon_xz(params)
    assert ez > ex > 0
