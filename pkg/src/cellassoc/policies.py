"""Cell association policies: utilities, preferences, and the four schemes.

The quota-aware policy turns expected spectral efficiencies into UE
utilities, ranks BSs per UE and UEs on one shared master list, and hands the
result to the matching engine. The max-RSSI and max-SINR baselines are
quota-free per-UE argmax rules, optionally with a cell range expansion bias.

BS indexing follows the scenario convention: mmW BSs first, then microwave.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import channel
from .matching import Matching, MatchingInstance, build_matching, mmq_match
from .scenario import Scenario

NEG_INF = float("-inf")


@dataclass(frozen=True)
class PolicyConfig:
    """Quotas per tier, the utility gate, and the baseline biases.

    ``q_max_*`` of None means "no effective cap" (the number of UEs). The
    gate ``c_th`` applies to microwave BSs that are not a UE's top choice;
    with the default of -inf it is off.
    """

    q_min_mmw: int = 0
    q_min_muw: int = 0
    q_max_mmw: Optional[int] = None
    q_max_muw: Optional[int] = None
    c_th: float = NEG_INF
    bias_rssi_db: float = 0.0
    bias_sinr_db: float = 0.0

    def __post_init__(self) -> None:
        for name in ("q_min_mmw", "q_min_muw"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for lo_name, hi_name in (("q_min_mmw", "q_max_mmw"), ("q_min_muw", "q_max_muw")):
            hi = getattr(self, hi_name)
            if hi is not None and hi < getattr(self, lo_name):
                raise ValueError(f"{hi_name} must be >= {lo_name}")
        if self.bias_rssi_db < 0 or self.bias_sinr_db < 0:
            raise ValueError("bias values are non-negative dB offsets")

    def quota_vectors(
        self, n_mmw: int, n_muw: int, n_ue: int
    ) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Expand the per-tier quotas into per-BS vectors, mmW columns first."""
        q_max_mmw = n_ue if self.q_max_mmw is None else self.q_max_mmw
        q_max_muw = n_ue if self.q_max_muw is None else self.q_max_muw
        q_min = (self.q_min_mmw,) * n_mmw + (self.q_min_muw,) * n_muw
        q_max = (q_max_mmw,) * n_mmw + (q_max_muw,) * n_muw
        return q_min, q_max


@dataclass(frozen=True, eq=False)
class UtilityTable:
    """Per-pair utilities and each UE's best achievable utility.

    ``u[m, n]`` is the log of UE m's expected spectral efficiency at BS n;
    ``u_ml[m]`` is the row maximum and drives the master list.
    """

    u: np.ndarray = field(repr=False)  # (M, N)
    u_ml: np.ndarray = field(repr=False)  # (M,)
    n_mmw: int = 0

    @property
    def n_ue(self) -> int:
        return self.u.shape[0]

    @property
    def n_bs(self) -> int:
        return self.u.shape[1]


def compute_utilities(links: channel.LinkRealization, f) -> UtilityTable:
    """UE utilities from expected spectral efficiencies.

    For a mmW BS the expected SE mixes the LoS and NLoS rates with the LoS
    estimate ``f`` (an (M, N1) array of values in [0, 1]); for a microwave BS
    it is the interference-limited SE directly. Utility is the natural log;
    a zero SE maps to -inf so the BS simply ranks last.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != links.se_mmw_los.shape:
        raise ValueError(
            f"LoS estimates must have shape {links.se_mmw_los.shape}, got {f.shape}"
        )
    if f.size and (f.min() < 0.0 or f.max() > 1.0):
        raise ValueError("LoS estimates must lie in [0, 1]")
    expected_mmw = f * links.se_mmw_los + (1.0 - f) * links.se_mmw_nlos
    with np.errstate(divide="ignore"):
        u = np.concatenate([np.log(expected_mmw), np.log(links.se_muw)], axis=1)
    return UtilityTable(u=u, u_ml=u.max(axis=1), n_mmw=links.n_mmw)


def build_preferences(
    util: UtilityTable, c_th: float = NEG_INF
) -> tuple[tuple[tuple[int, ...], ...], tuple[frozenset[int], ...]]:
    """Strict per-UE BS rankings plus the set of gated BSs for each UE.

    Ranking is by descending utility with ties broken toward the lower BS
    index. A microwave BS other than the UE's top choice is gated when its
    utility falls below ``c_th``; mmW BSs and top choices are never gated.
    """
    prefs = []
    gated = []
    for m in range(util.n_ue):
        row = util.u[m]
        order = np.argsort(-row, kind="stable")
        prefs.append(tuple(int(n) for n in order))
        top = int(order[0]) if order.size else -1
        gated.append(
            frozenset(
                int(n)
                for n in range(util.n_mmw, util.n_bs)
                if n != top and row[n] < c_th
            )
        )
    return tuple(prefs), tuple(gated)


def build_master_list(util: UtilityTable) -> tuple[int, ...]:
    """UEs ranked by their best achievable utility, high to low.

    Every BS uses this one list. Ties break toward the lower UE index, and
    the order depends only on the ordering of utilities, not their scale.
    """
    return tuple(int(m) for m in np.argsort(-util.u_ml, kind="stable"))


def build_matching_instance(
    scenario: Scenario,
    links: channel.LinkRealization,
    f,
    policy: PolicyConfig,
    q_min_override: Optional[Sequence[int]] = None,
) -> MatchingInstance:
    """Assemble the matching problem for one realized network state.

    ``q_min_override`` replaces the expanded per-BS minimum quota vector,
    e.g. for per-run random quota draws.
    """
    util = compute_utilities(links, f)
    prefs, gated = build_preferences(util, policy.c_th)
    master = build_master_list(util)
    q_min, q_max = policy.quota_vectors(scenario.n_mmw, scenario.n_muw, scenario.n_ue)
    if q_min_override is not None:
        q_min = tuple(int(q) for q in q_min_override)
    return MatchingInstance(
        n_agents=scenario.n_ue,
        n_hosts=scenario.n_mmw + scenario.n_muw,
        agent_prefs=prefs,
        master_list=master,
        q_min=q_min,
        q_max=q_max,
        gated=gated if any(gated) else None,
    )


def mmq_policy(
    scenario: Scenario,
    links: channel.LinkRealization,
    f,
    policy: PolicyConfig,
    q_min_override: Optional[Sequence[int]] = None,
) -> Matching:
    """Quota-aware association: build the instance and run the matcher."""
    return mmq_match(build_matching_instance(scenario, links, f, policy, q_min_override))


def rssi_matrix_dbm(scenario: Scenario) -> np.ndarray:
    """(M, N) averaged received signal strength in dBm, mmW columns first.

    A mmW entry is transmit power plus antenna gain minus the attenuation
    averaged over the LoS state in the linear domain,
    10 log10(rho * 10^(L_los/10) + (1-rho) * 10^(L_nlos/10)). NLoS slots
    dominate that average, which is what makes plain max-RSSI shun the mmW
    tier. Microwave entries are transmit power minus path loss.
    """
    cfg = scenario.config
    parts = []
    if scenario.n_mmw > 0:
        loss_los, loss_nlos = channel.mmw_pathloss_matrices(scenario)
        mean_loss_db = channel.linear_to_db(
            scenario.los_prob * channel.db_to_linear(loss_los)
            + (1.0 - scenario.los_prob) * channel.db_to_linear(loss_nlos)
        )
        parts.append(cfg.tx_power_dbm + cfg.antenna_gain_dbi - mean_loss_db)
    else:
        parts.append(np.zeros((scenario.n_ue, 0)))
    parts.append(cfg.tx_power_dbm - channel.muw_pathloss_matrix(scenario))
    return np.concatenate(parts, axis=1)


def sinr_matrix_db(scenario: Scenario) -> np.ndarray:
    """(M, N) average SINR in dB, mmW columns first.

    mmW entries are the noise-limited SNR with the linear SNR (equivalently
    the channel gain) averaged over the LoS state, which keeps max-SINR
    partial to the interference-free mmW tier; microwave entries carry the
    cross-microwave interference.
    """
    cfg = scenario.config
    parts = []
    if scenario.n_mmw > 0:
        loss_los, loss_nlos = channel.mmw_pathloss_matrices(scenario)
        mean_gain = scenario.los_prob * channel.db_to_linear(-loss_los) + (
            1.0 - scenario.los_prob
        ) * channel.db_to_linear(-loss_nlos)
        noise_db = channel.noise_power_dbm(cfg.noise_psd_dbm_hz, cfg.bandwidth_mmw_hz)
        parts.append(
            cfg.tx_power_dbm
            + cfg.antenna_gain_dbi
            + channel.linear_to_db(mean_gain)
            - noise_db
        )
    else:
        parts.append(np.zeros((scenario.n_ue, 0)))
    parts.append(channel.muw_sinr_db(scenario))
    return np.concatenate(parts, axis=1)


def _argmax_matching(metric: np.ndarray, n_hosts: int) -> Matching:
    # np.argmax takes the first maximum, so exact ties go to the lower index.
    return build_matching([int(n) for n in np.argmax(metric, axis=1)], n_hosts)


def max_rssi_policy(
    scenario: Scenario, bias_db: float = 0.0, bias_tier: str = "mmw"
) -> Matching:
    """Each UE picks the BS with the strongest average received power.

    ``bias_db`` implements cell range expansion: it is added to the biased
    tier's entries before the argmax. Plain max-RSSI under-loads the mmW
    tier, so the bias defaults to favoring mmW. No quotas are enforced.
    """
    metric = rssi_matrix_dbm(scenario).copy()
    _apply_bias(metric, scenario.n_mmw, bias_db, bias_tier)
    return _argmax_matching(metric, scenario.n_mmw + scenario.n_muw)


def max_sinr_policy(
    scenario: Scenario, bias_db: float = 0.0, bias_tier: str = "muw"
) -> Matching:
    """Each UE picks the BS with the best average SINR.

    Plain max-SINR over-loads the interference-free mmW tier, so the cell
    range expansion bias defaults to favoring microwave. No quotas are
    enforced.
    """
    metric = sinr_matrix_db(scenario).copy()
    _apply_bias(metric, scenario.n_mmw, bias_db, bias_tier)
    return _argmax_matching(metric, scenario.n_mmw + scenario.n_muw)


def _apply_bias(metric: np.ndarray, n_mmw: int, bias_db: float, bias_tier: str) -> None:
    if bias_tier == "mmw":
        metric[:, :n_mmw] += bias_db
    elif bias_tier == "muw":
        metric[:, n_mmw:] += bias_db
    else:
        raise ValueError(f"bias_tier must be 'mmw' or 'muw', got {bias_tier!r}")
