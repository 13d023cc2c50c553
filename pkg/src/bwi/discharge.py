"""Ballast water discharge volumes and expected treated volumes.

Discharge volume scales with vessel deadweight through a power law; vessels
without a reported DWT fall back to a fleet-average volume. Not every port
call discharges, so treated volume is the discharge volume scaled by a
discharge probability (expected-value treatment, no sampling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .ingest import VesselRecord


@dataclass(frozen=True)
class DischargeModel:
    coeff_a: float = 1.4          # tonnes at dwt^coeff_b = 1
    coeff_b: float = 0.85         # dimensionless exponent
    fallback_volume: float = 12_000.0  # tonnes, used when dwt is missing
    discharge_probability: float = 0.5

    def __post_init__(self):
        if self.coeff_a <= 0:
            raise ValueError("coeff_a must be positive")
        if not (0 < self.coeff_b <= 1.5):
            raise ValueError("coeff_b must lie in (0, 1.5]")
        if self.fallback_volume <= 0:
            raise ValueError("fallback_volume must be positive")
        if not (0 <= self.discharge_probability <= 1):
            raise ValueError("discharge_probability must lie in [0, 1]")


def discharge_volume(vessel: VesselRecord, model: DischargeModel) -> float:
    """Full discharge volume in tonnes for one port call."""
    return discharge_volume_for_dwt(vessel.dwt, model)


def discharge_volume_for_dwt(dwt: Optional[float], model: DischargeModel) -> float:
    if dwt is None:
        return model.fallback_volume
    return model.coeff_a * dwt ** model.coeff_b


def expected_treated_volume(vessel: VesselRecord, model: DischargeModel) -> float:
    """Expected treated volume per voyage: discharge volume times the
    probability that the call discharges at all."""
    return model.discharge_probability * discharge_volume(vessel, model)


def power_law_oracle(dwt: float, coeff_a: float, coeff_b: float) -> float:
    """Independent evaluation of the power law via exp/log, for cross-checks."""
    return coeff_a * math.exp(coeff_b * math.log(dwt))
