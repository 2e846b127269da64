import math

import numpy as np
import pytest

from cellassoc.channel import LinkRealization, draw_los_slots, realize_links
from cellassoc.matching import build_matching
from cellassoc.metrics import (
    achievable_rates,
    load_vector,
    max_load_difference,
    optimal_min_quota_sweep,
    rate_cdf,
    run_metrics,
    slot_averaged_rates,
)
from cellassoc.policies import PolicyConfig, mmq_policy
from cellassoc.scenario import ScenarioConfig, generate_scenario, rng_stream


def make_links(se_los, se_nlos, se_muw, los_state=None):
    se_los = np.atleast_2d(np.asarray(se_los, float))
    if los_state is None:
        los_state = np.zeros_like(se_los, dtype=bool)
    return LinkRealization(
        los_state=np.atleast_2d(np.asarray(los_state, bool)),
        se_mmw_los=se_los,
        se_mmw_nlos=np.atleast_2d(np.asarray(se_nlos, float)),
        se_muw=np.atleast_2d(np.asarray(se_muw, float)),
    )


def test_load_vector_counts():
    m = build_matching([0, 0, 1], 2)
    assert list(load_vector(m)) == [2, 1]


def test_load_vector_empty():
    m = build_matching([], 3)
    assert list(load_vector(m)) == [0, 0, 0]


def test_loads_partition_random_matching():
    rng = np.random.default_rng(3)
    assignment = [int(h) for h in rng.integers(0, 7, size=40)]
    m = build_matching(assignment, 7)
    assert load_vector(m).sum() == 40


def test_max_load_difference():
    assert max_load_difference([4, 4, 4]) == 0
    assert max_load_difference([5, 1, 3]) == 4
    with pytest.raises(ValueError):
        max_load_difference([])


def test_rates_single_ue_on_mmw():
    # 1 GHz times the LoS spectral efficiency, frozen from the link budget.
    se = 7.317316001936548
    links = make_links([[se]], [[1.0]], [[1.0]], los_state=[[True]])
    m = build_matching([0], 2)
    rates = achievable_rates(m, links, ScenarioConfig())
    assert rates[0] == pytest.approx(se * 1e9, rel=1e-9)


def test_rates_use_realized_los_state():
    links = make_links([[8.0]], [[2.0]], [[1.0]], los_state=[[False]])
    m = build_matching([0], 2)
    rates = achievable_rates(m, links, ScenarioConfig())
    assert rates[0] == pytest.approx(2.0e9)


def test_rates_equal_split():
    links = make_links([[4.0], [4.0]], [[1.0], [1.0]], [[1.0], [1.0]],
                       los_state=[[True], [True]])
    solo = achievable_rates(build_matching([0, 1], 2), links, ScenarioConfig())
    shared = achievable_rates(build_matching([0, 0], 2), links, ScenarioConfig())
    assert shared[0] == pytest.approx(solo[0] / 2)
    assert shared[1] == pytest.approx(shared[0])


def test_rates_microwave_alone():
    links = make_links([[4.0]], [[1.0]], [[1.0]])
    m = build_matching([1], 2)  # the single microwave BS
    rates = achievable_rates(m, links, ScenarioConfig())
    assert rates[0] == pytest.approx(10e6)


def test_sum_rate_accounting_invariant():
    # Sum over UEs must equal the per-BS bandwidth-split accounting.
    cfg = ScenarioConfig(n_ue=24, seed=14)
    sc = generate_scenario(cfg)
    links = realize_links(sc, rng_stream(14, 1))
    m = mmq_policy(sc, links, sc.los_prob, PolicyConfig(q_min_muw=1))
    rates = achievable_rates(m, links, cfg)
    per_bs = 0.0
    for bs, agents in enumerate(m.host_to_agents):
        if not agents:
            continue
        if bs < sc.n_mmw:
            ses = [
                links.se_mmw_los[a, bs] if links.los_state[a, bs] else links.se_mmw_nlos[a, bs]
                for a in agents
            ]
            per_bs += cfg.bandwidth_mmw_hz * sum(ses) / len(agents)
        else:
            ses = [links.se_muw[a, bs - sc.n_mmw] for a in agents]
            per_bs += cfg.bandwidth_muw_hz * sum(ses) / len(agents)
    assert rates.sum() == pytest.approx(per_bs, rel=1e-9)


def test_slot_averaging_matches_manual_mean():
    cfg = ScenarioConfig(n_ue=5, seed=6)
    sc = generate_scenario(cfg)
    links = realize_links(sc, rng_stream(6, 1))
    m = mmq_policy(sc, links, sc.los_prob, PolicyConfig())
    slots = draw_los_slots(sc, rng_stream(6, 3), 7)
    avg = slot_averaged_rates(m, links, slots, cfg)
    manual = np.mean(
        [
            achievable_rates(
                m,
                make_links(links.se_mmw_los, links.se_mmw_nlos, links.se_muw, s),
                cfg,
            )
            for s in slots
        ],
        axis=0,
    )
    assert np.allclose(avg, manual)


def test_run_metrics_bundle():
    links = make_links([[8.0], [8.0]], [[2.0], [2.0]], [[1.0], [1.0]],
                       los_state=[[True], [True]])
    m = build_matching([0, 1], 2)
    rm = run_metrics(m, links, ScenarioConfig())
    assert list(rm.loads) == [1, 1]
    assert rm.delta_kappa == 0
    assert rm.sum_rate_bps == pytest.approx(8.0e9 + 10e6)
    assert rm.muw_rate_samples.tolist() == [10e6]


def test_rate_cdf_basics():
    xs, cdf = rate_cdf([5.0])
    assert xs.tolist() == [5.0] and cdf.tolist() == [1.0]
    xs, cdf = rate_cdf([3.0, 1.0, 2.0])
    assert xs.tolist() == [1.0, 2.0, 3.0]
    assert cdf[1] == pytest.approx(2.0 / 3.0)
    with pytest.raises(ValueError):
        rate_cdf([])


def test_rate_cdf_against_exponential():
    rng = np.random.default_rng(1)
    samples = rng.exponential(1.0, size=10_000)
    xs, cdf = rate_cdf(samples)
    truth = 1.0 - np.exp(-xs)
    # Two-sided KS distance of the empirical step function.
    n = xs.size
    d_plus = np.max(cdf - truth)
    d_minus = np.max(truth - (cdf - 1.0 / n))
    assert max(d_plus, d_minus) < 0.02


def test_quota_sweep_zero_candidates():
    rows = optimal_min_quota_sweep(
        ScenarioConfig(n_mmw=2, n_muw=2, seed=2), [8], [0], n_runs=3, n_slots=2
    )
    assert rows[0]["q_star"] == 0


def test_quota_sweep_skips_infeasible_candidate():
    with pytest.warns(UserWarning, match="skipping"):
        rows = optimal_min_quota_sweep(
            ScenarioConfig(n_mmw=2, n_muw=2, seed=2), [4], [0, 1, 5],
            n_runs=2, n_slots=2,
        )
    assert set(rows[0]["mean_sum_rate_bps"]) == {0, 1}
