"""Path loss, LoS state sampling, and spectral efficiency for both tiers.

All dB bookkeeping happens here. Powers are carried in dBm, losses and gains
in dB, and every accumulation (interference, LoS averaging) is done in the
linear domain. Spectral efficiencies are Shannon rates per unit bandwidth,
in bit/s/Hz.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scenario import PathLossParams, Scenario, pairwise_distances


def db_to_linear(x_db):
    """10^(x/10). Works elementwise on arrays."""
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    """10 log10(x). Works elementwise on arrays."""
    return 10.0 * np.log10(np.asarray(x, dtype=float))


def noise_power_dbm(noise_psd_dbm_hz: float, bandwidth_hz: float) -> float:
    """Thermal noise power over a bandwidth, in dBm."""
    return noise_psd_dbm_hz + 10.0 * np.log10(bandwidth_hz)


def path_loss_db(params: PathLossParams, d, shadow_db=0.0):
    """Log-distance path loss in dB: intercept + slope * 10 log10(d) + shadowing.

    The intercept is defined at 1 m, so distances below 1 m are clamped to
    1 m. Non-positive distances are rejected.
    """
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    out = (
        params.intercept_db
        + params.slope * 10.0 * np.log10(np.maximum(d, 1.0))
        + np.asarray(shadow_db, dtype=float)
    )
    return float(out) if out.ndim == 0 else out


def sample_los(rho: float, rng: np.random.Generator) -> bool:
    """One Bernoulli LoS draw with success probability rho."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"LoS probability must be in [0, 1], got {rho}")
    return bool(rng.random() < rho)


def mmw_spectral_efficiency(p_dbm, psi_dbi, pathloss_db, w1_hz, n0_dbm_hz):
    """Noise-limited spectral efficiency of a mmW link, bit/s/Hz.

    log2(1 + SNR) with SNR = p * psi * g / (w1 * N0) evaluated in linear
    units; g is the channel gain 10^(-pathloss/10). mmW transmissions sit in
    their own band, so the denominator carries no interference.
    """
    if w1_hz <= 0:
        raise ValueError("bandwidth must be positive")
    snr_db = p_dbm + psi_dbi - np.asarray(pathloss_db, dtype=float) - noise_power_dbm(
        n0_dbm_hz, w1_hz
    )
    out = np.log2(1.0 + db_to_linear(snr_db))
    return float(out) if out.ndim == 0 else out


def muw_spectral_efficiency(p_dbm, pathloss_db, interferer_pathlosses_db, w2_hz, n0_dbm_hz):
    """Spectral efficiency of a microwave link with co-channel interference.

    Signal, each interference term, and noise are converted to linear mW and
    summed there; the interferer list holds the path losses toward the other
    microwave BSs, all transmitting at the same power.
    """
    if w2_hz <= 0:
        raise ValueError("bandwidth must be positive")
    signal_mw = db_to_linear(p_dbm - pathloss_db)
    interference_mw = sum(
        db_to_linear(p_dbm - li) for li in interferer_pathlosses_db
    )
    noise_mw = db_to_linear(noise_power_dbm(n0_dbm_hz, w2_hz))
    return float(np.log2(1.0 + signal_mw / (interference_mw + noise_mw)))


@dataclass(frozen=True, eq=False)
class LinkRealization:
    """Per-pair spectral efficiencies plus one slot's LoS/NLoS outcome.

    The three SE matrices are fixed for a run (they depend only on geometry
    and static shadowing); ``los_state`` is the part that is redrawn per slot.
    """

    los_state: np.ndarray = field(repr=False)  # (M, N1) bool
    se_mmw_los: np.ndarray = field(repr=False)  # (M, N1) bit/s/Hz
    se_mmw_nlos: np.ndarray = field(repr=False)  # (M, N1)
    se_muw: np.ndarray = field(repr=False)  # (M, N2)

    @property
    def n_mmw(self) -> int:
        return self.se_mmw_los.shape[1]

    @property
    def n_muw(self) -> int:
        return self.se_muw.shape[1]


def mmw_pathloss_matrices(scenario: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """(M, N1) LoS and NLoS path loss matrices in dB, shadowing included."""
    cfg = scenario.config
    d = pairwise_distances(scenario.ue_positions, scenario.mmw_positions)
    d = np.maximum(d, 1.0)
    loss_los = path_loss_db(cfg.pathloss_mmw_los, d, scenario.shadow_mmw_los)
    loss_nlos = path_loss_db(cfg.pathloss_mmw_nlos, d, scenario.shadow_mmw_nlos)
    return loss_los, loss_nlos


def muw_pathloss_matrix(scenario: Scenario) -> np.ndarray:
    """(M, N2) microwave path loss matrix in dB, shadowing included."""
    cfg = scenario.config
    d = pairwise_distances(scenario.ue_positions, scenario.muw_positions)
    d = np.maximum(d, 1.0)
    return path_loss_db(cfg.pathloss_muw, d, scenario.shadow_muw)


def muw_sinr_db(scenario: Scenario) -> np.ndarray:
    """(M, N2) SINR in dB for each UE/microwave-BS pair.

    The interference at UE m for serving BS n is the linear sum of the
    received powers from every other microwave BS.
    """
    cfg = scenario.config
    if scenario.n_muw == 0:
        return np.zeros((scenario.n_ue, 0))
    rx_dbm = cfg.tx_power_dbm - muw_pathloss_matrix(scenario)
    rx_mw = db_to_linear(rx_dbm)
    interference_mw = rx_mw.sum(axis=1, keepdims=True) - rx_mw
    noise_mw = db_to_linear(noise_power_dbm(cfg.noise_psd_dbm_hz, cfg.bandwidth_muw_hz))
    return linear_to_db(rx_mw / (interference_mw + noise_mw))


def realize_links(scenario: Scenario, rng: np.random.Generator) -> LinkRealization:
    """Evaluate all per-pair spectral efficiencies and draw one LoS slot."""
    cfg = scenario.config
    if scenario.n_mmw > 0:
        loss_los, loss_nlos = mmw_pathloss_matrices(scenario)
        se_los = mmw_spectral_efficiency(
            cfg.tx_power_dbm, cfg.antenna_gain_dbi, loss_los,
            cfg.bandwidth_mmw_hz, cfg.noise_psd_dbm_hz,
        )
        se_nlos = mmw_spectral_efficiency(
            cfg.tx_power_dbm, cfg.antenna_gain_dbi, loss_nlos,
            cfg.bandwidth_mmw_hz, cfg.noise_psd_dbm_hz,
        )
        los_state = rng.random(scenario.los_prob.shape) < scenario.los_prob
    else:
        se_los = np.zeros((scenario.n_ue, 0))
        se_nlos = np.zeros((scenario.n_ue, 0))
        los_state = np.zeros((scenario.n_ue, 0), dtype=bool)
    se_muw = np.log2(1.0 + db_to_linear(muw_sinr_db(scenario)))
    return LinkRealization(
        los_state=los_state,
        se_mmw_los=np.atleast_2d(se_los),
        se_mmw_nlos=np.atleast_2d(se_nlos),
        se_muw=se_muw,
    )


def draw_los_slots(
    scenario: Scenario, rng: np.random.Generator, n_slots: int
) -> np.ndarray:
    """(n_slots, M, N1) boolean stack of independent per-slot LoS states."""
    if n_slots < 1:
        raise ValueError("n_slots must be >= 1")
    shape = (n_slots,) + scenario.los_prob.shape
    return rng.random(shape) < scenario.los_prob[None, :, :]
