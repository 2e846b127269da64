"""Exponentially smoothed estimate of the LoS fraction of a mmW link.

Each UE keeps one estimator per mmW BS. After every association frame of
``window_slots`` slots, the observed LoS fraction feeds an exponential
moving average; the estimate stands in for the true LoS probability inside
the UE utility.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

# Starting value when nothing has been observed yet (maximum-entropy prior).
DEFAULT_INITIAL_ESTIMATE = 0.5


@dataclass(frozen=True)
class LosEstimate:
    """Current estimate plus the smoothing constant and frame length."""

    value: float = DEFAULT_INITIAL_ESTIMATE
    smoothing: float = 0.1
    window_slots: int = 100

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"estimate must be in [0, 1], got {self.value}")
        if not 0.0 <= self.smoothing <= 1.0:
            raise ValueError(f"smoothing must be in [0, 1], got {self.smoothing}")
        if self.window_slots < 1:
            raise ValueError(f"window_slots must be >= 1, got {self.window_slots}")


def update_f(
    prev: LosEstimate, k_t: int, x: int, freeze_unobserved: bool = False
) -> LosEstimate:
    """Fold one frame's LoS count into the moving average.

    ``k_t`` is the number of LoS slots observed this frame and ``x`` the
    association indicator (1 when the UE was served by this BS). The literal
    update multiplies the observation by ``x``, which decays the estimate of
    BSs the UE is not connected to; ``freeze_unobserved`` keeps those
    estimates untouched instead.
    """
    if not 0 <= k_t <= prev.window_slots:
        raise ValueError(
            f"LoS slot count must be in [0, {prev.window_slots}], got {k_t}"
        )
    if x not in (0, 1):
        raise ValueError(f"association indicator must be 0 or 1, got {x}")
    if freeze_unobserved and x == 0:
        return prev
    new_value = (
        prev.smoothing * (k_t * x) / prev.window_slots
        + (1.0 - prev.smoothing) * prev.value
    )
    return replace(prev, value=new_value)


def oracle_f(rho: float) -> LosEstimate:
    """Genie estimate equal to the true LoS probability."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"LoS probability must be in [0, 1], got {rho}")
    return LosEstimate(value=rho)
