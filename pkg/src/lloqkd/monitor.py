"""Reference-intensity monitoring countermeasure.

A small tap on the incoming phase-reference pulse feeds an amplified
power meter; the calibration makes the chain unbiased, so the whole
monitor reduces to a relative-error band around the true intensity.
Recalibrating the trusted phase noise from the band's upper intensity
bound credits the least trusted noise consistent with the reading, which
can only under-, never over-estimate the key.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .attacks import AttackSpec
from .errors import ValidationError
from .keyrate import KeyRateResult, secret_key_rate
from .noise_model import BudgetModel, NoiseBudget, assemble_components
from .params import SystemParams, transmittance


class MonitorMode(str, Enum):
    INTERVAL = "INTERVAL"
    SAMPLED = "SAMPLED"


@dataclass(frozen=True)
class MonitorParams:
    """Monitoring chain summary: tap, gain, relative meter error, alarm band."""

    tap_ratio: float = 0.01
    monitor_gain: float = 100.0
    meter_rel_error: float = 0.0
    alarm_threshold: float = 0.05

    def __post_init__(self) -> None:
        errors = []
        if not (0 < self.tap_ratio < 1):
            errors.append("tap_ratio")
        if not (math.isfinite(self.monitor_gain) and self.monitor_gain >= 1):
            errors.append("monitor_gain")
        if not (math.isfinite(self.meter_rel_error) and self.meter_rel_error >= 0):
            errors.append("meter_rel_error")
        if not (math.isfinite(self.alarm_threshold) and self.alarm_threshold > 0):
            errors.append("alarm_threshold")
        if errors:
            raise ValidationError(
                "invalid monitor parameters: " + ", ".join(errors), fields=errors
            )


@dataclass(frozen=True)
class MonitorReading:
    """Point estimate of the reference intensity with its error band."""

    point_estimate: float
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not (self.lower <= self.point_estimate <= self.upper):
            raise ValidationError(
                "monitor reading bounds must bracket the point estimate",
                fields=["lower", "upper"],
            )


def monitor_reading(
    true_intensity: float,
    mp: MonitorParams,
    mode: MonitorMode = MonitorMode.INTERVAL,
    seed: int | None = None,
) -> MonitorReading:
    """Read the reference intensity through the monitoring chain.

    INTERVAL mode returns the unbiased point estimate (tap and gain
    cancel in calibration) with its +-sigma band. SAMPLED mode draws the
    point estimate uniformly from that band using the mandatory seed.
    """
    if not (math.isfinite(true_intensity) and true_intensity >= 0):
        raise ValidationError("true_intensity must be >= 0", fields=["true_intensity"])
    sigma = mp.meter_rel_error
    if mode is MonitorMode.INTERVAL:
        point = true_intensity
    else:
        if seed is None:
            raise ValidationError(
                "SAMPLED mode needs an explicit seed (no ambient randomness)",
                fields=["seed"],
            )
        rng = random.Random(seed)
        point = rng.uniform(true_intensity * (1 - sigma), true_intensity * (1 + sigma))
    return MonitorReading(
        point_estimate=point, lower=point * (1 - sigma), upper=point * (1 + sigma)
    )


def conservative_trusted_noise(
    reading: MonitorReading, V_A: float, chi_T: float
) -> float:
    """Trusted phase noise recalibrated from the intensity upper bound.

    Using the largest intensity consistent with the reading minimizes
    the noise credited as trusted, eliminating key-rate overestimation.
    """
    if not (math.isfinite(reading.upper) and reading.upper > 0):
        raise ValidationError("reading upper bound must be > 0", fields=["upper"])
    if V_A < 0:
        raise ValidationError("V_A must be >= 0", fields=["V_A"])
    return V_A * chi_T / reading.upper


def detect(calibrated_intensity: float, reading: MonitorReading, tau: float) -> bool:
    """Alarm when the reading departs from calibration by more than tau."""
    if not (math.isfinite(calibrated_intensity) and calibrated_intensity > 0):
        raise ValidationError(
            "calibrated_intensity must be > 0", fields=["calibrated_intensity"]
        )
    ratio = reading.point_estimate / calibrated_intensity
    return ratio > 1 + tau or ratio < 1 - tau


def recalibrated_budget(
    params: SystemParams, distance_km: float, xi_error_T_cal: float
) -> NoiseBudget:
    """Trusted budget with the credited trusted noise replaced.

    The measured total excess noise is kept (these attacks leave it
    unchanged by construction); only the trusted/untrusted split moves.
    """
    T = transmittance(distance_km, params.alpha)
    components = assemble_components(params, T)
    chi_line = 1.0 / T - 1.0 + components.xi_tot - xi_error_T_cal / T
    chi_het = components.chi_T + xi_error_T_cal
    return NoiseBudget(
        model=BudgetModel.TRUSTED,
        chi_line=chi_line,
        chi_het=chi_het,
        chi_tot=chi_line + chi_het / T,
        T=T,
    )


def defended_key_rate(
    params: SystemParams,
    attack: AttackSpec | None,
    mp: MonitorParams,
    distance_km: float,
    mode: MonitorMode = MonitorMode.INTERVAL,
    seed: int | None = None,
) -> KeyRateResult:
    """Honest key rate with the trusted noise recalibrated from the monitor.

    The monitor sees the attacked reference intensity (scaled by the
    amplifier gain or the attenuation ratio; unscaled when ``attack`` is
    None); the trusted noise credit shrinks accordingly, removing the
    margin the attack would have hidden in.
    """
    T = transmittance(distance_km, params.alpha)
    components = assemble_components(params, T)
    scale = 1.0 if attack is None else attack.intensity_scale()
    reading = monitor_reading(scale * params.E_R2, mp, mode=mode, seed=seed)
    xi_error_T_cal = conservative_trusted_noise(reading, params.V_A, components.chi_T)
    budget = recalibrated_budget(params, distance_km, xi_error_T_cal)
    return secret_key_rate(params, budget)
