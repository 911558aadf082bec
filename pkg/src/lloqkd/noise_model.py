"""Excess-noise components and the conventional/trusted noise budgets.

Every term is referred to the channel input and expressed in SNU. The
phase-reference measurement noise splits into an untrusted part (channel
loss and channel excess noise on the reference pulse) and a trusted part
(detector efficiency and electronic noise), which the trusted model
moves out of Eve's budget and into the detection noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ComputationError, ValidationError
from .params import AdcVariant, LeakageVariant, RefPoint, SystemParams, db_to_linear


class BudgetModel(str, Enum):
    CONVENTIONAL = "CONVENTIONAL"
    TRUSTED = "TRUSTED"
    ATTACKED = "ATTACKED"


@dataclass(frozen=True)
class NoiseComponents:
    """Itemized excess-noise terms at one channel operating point.

    ``xi_drift`` and ``xi_channel`` are carried as fields but fixed at
    zero: in the time-multiplexed system modeled here the phase noise is
    dominated by the reference-measurement term.
    """

    xi_AM: float
    xi_LE: float
    xi_ADC: float
    xi_0: float
    xi_error: float
    xi_error_U: float
    xi_error_T: float
    chi_ref: float
    chi_U: float
    chi_T: float
    xi_tot: float
    xi_drift: float = 0.0
    xi_channel: float = 0.0


@dataclass(frozen=True)
class NoiseBudget:
    """Channel-input line noise, Bob-input detection noise, and their total.

    ``chi_tot = chi_line + chi_het / T`` always holds; the three model
    variants only move terms between ``chi_line`` and ``chi_het``.
    """

    model: BudgetModel
    chi_line: float
    chi_het: float
    chi_tot: float
    T: float


def detection_noise(eta: float, v_el: float) -> float:
    """Heterodyne detection-added noise referred to Bob's input."""
    if not (0 < eta <= 1):
        raise ValidationError("eta must be in (0, 1]", fields=["eta"])
    if v_el < 0:
        raise ValidationError("v_el must be >= 0", fields=["v_el"])
    return (2.0 - eta + 2.0 * v_el) / eta


def modulation_noise(V_A: float, d_dB: float) -> float:
    """Noise from finite modulator dynamics preparing the signal pulse.

    The strongest prepared amplitude is about sqrt(10*V_A), suppressed
    by the modulator dynamic range d_dB.
    """
    errors = [n for n, v in (("V_A", V_A), ("d_dB", d_dB)) if not (math.isfinite(v) and v >= 0)]
    if errors:
        raise ValidationError(
            "modulation_noise requires non-negative inputs: " + ", ".join(errors),
            fields=errors,
        )
    return 10.0 * V_A * 10.0 ** (-d_dB / 10.0)


def leakage_noise(
    E_RA2: float, R_e: float, R_p: float, variant: LeakageVariant = LeakageVariant.SUM
) -> float:
    """Photon leakage from the phase-reference pulse into the signal path.

    ``E_RA2`` is the reference intensity on the sender side (SNU). The
    two linear extinction ratios enter either summed (formula as
    printed) or multiplied (series suppression; dB figures add).
    """
    if not (math.isfinite(E_RA2) and E_RA2 >= 0):
        raise ValidationError("E_RA2 must be >= 0", fields=["E_RA2"])
    if R_e <= 0 or R_p <= 0:
        raise ValidationError("extinction ratios must be > 0", fields=["R_e", "R_p"])
    denom = (R_e + R_p) if variant is LeakageVariant.SUM else (R_e * R_p)
    return 2.0 * E_RA2 / denom


def adc_noise(V_A: float, n_adc: int, variant: AdcVariant = AdcVariant.TWO_POW_N) -> float:
    """Minimum quantization noise of the ADC digitizing the signal.

    The published bound is an inequality; we take it with equality.
    """
    if not (math.isfinite(V_A) and V_A >= 0):
        raise ValidationError("V_A must be >= 0", fields=["V_A"])
    if n_adc < 1:
        raise ValidationError("n_adc must be >= 1", fields=["n_adc"])
    exponent = n_adc if variant is AdcVariant.TWO_POW_N else 2 * n_adc
    return 10.0 * V_A / (12.0 * 2.0 ** exponent)


def reference_chi(
    T: float, eps_0: float, eta: float, v_el: float
) -> tuple[float, float, float]:
    """Total noise added on the phase-reference pulse and its split.

    Returns ``(chi_ref, chi_U, chi_T)`` where the untrusted part
    ``chi_U = 1/T - 1 + eps_0`` comes from channel loss and channel
    excess noise, the trusted part ``chi_T`` is the heterodyne detection
    noise, and ``chi_ref = chi_U + chi_T / T``.
    """
    if not (0 < T <= 1):
        raise ValidationError("T must be in (0, 1]", fields=["T"])
    if eps_0 < 0:
        raise ValidationError("eps_0 must be >= 0", fields=["eps_0"])
    chi_T = detection_noise(eta, v_el)
    chi_U = 1.0 / T - 1.0 + eps_0
    return chi_U + chi_T / T, chi_U, chi_T


def phase_error_noise(
    V_A: float, chi_ref: float, chi_T: float, T: float, E_R2: float
) -> tuple[float, float, float]:
    """Phase noise from the shot-noise-limited reference measurement.

    Returns ``(xi_error, xi_error_U, xi_error_T)``. The full term is
    ``V_A * (chi_ref + 1) / E_R2``; its trusted slice ``V_A * chi_T / E_R2``
    is quoted Bob-referred, so ``xi_error = xi_error_U + xi_error_T / T``.
    """
    if not (math.isfinite(E_R2) and E_R2 > 0):
        raise ValidationError("E_R2 must be > 0", fields=["E_R2"])
    if V_A < 0:
        raise ValidationError("V_A must be >= 0", fields=["V_A"])
    xi_error = V_A * (chi_ref + 1.0) / E_R2
    xi_error_T = V_A * chi_T / E_R2
    chi_U = chi_ref - chi_T / T
    xi_error_U = V_A * (1.0 + chi_U) / E_R2
    return xi_error, xi_error_U, xi_error_T


def sender_reference_intensity(params: SystemParams, T: float) -> float:
    """Reference intensity at the sender, back-propagated if configured at Bob."""
    if params.ref_point is RefPoint.AT_ALICE:
        return params.E_R2
    return params.E_R2 / (T * params.eta)


def assemble_components(params: SystemParams, T: float) -> NoiseComponents:
    """Evaluate every excess-noise component at transmittance T."""
    if not (0 < T <= 1):
        raise ValidationError("T must be in (0, 1]", fields=["T"])
    R_e = db_to_linear(params.R_e_dB)
    R_p = db_to_linear(params.R_p_dB)
    xi_AM = modulation_noise(params.V_A, params.d_dB)
    xi_LE = leakage_noise(
        sender_reference_intensity(params, T), R_e, R_p, params.leakage_variant
    )
    xi_ADC = adc_noise(params.V_A, params.n_adc, params.adc_variant)
    chi_ref, chi_U, chi_T = reference_chi(T, params.eps_0, params.eta, params.v_el)
    xi_error, xi_error_U, xi_error_T = phase_error_noise(
        params.V_A, chi_ref, chi_T, T, params.E_R2
    )
    xi_tot = params.xi_0 + xi_AM + xi_LE + xi_ADC + xi_error
    return NoiseComponents(
        xi_AM=xi_AM,
        xi_LE=xi_LE,
        xi_ADC=xi_ADC,
        xi_0=params.xi_0,
        xi_error=xi_error,
        xi_error_U=xi_error_U,
        xi_error_T=xi_error_T,
        chi_ref=chi_ref,
        chi_U=chi_U,
        chi_T=chi_T,
        xi_tot=xi_tot,
    )


def conventional_budget(
    components: NoiseComponents, params: SystemParams, T: float
) -> NoiseBudget:
    """Budget with every phase-noise source counted against Eve."""
    chi_line = 1.0 / T - 1.0 + components.xi_tot
    chi_het = detection_noise(params.eta, params.v_el)
    return NoiseBudget(
        model=BudgetModel.CONVENTIONAL,
        chi_line=chi_line,
        chi_het=chi_het,
        chi_tot=chi_line + chi_het / T,
        T=T,
    )


def trusted_budget(
    components: NoiseComponents, params: SystemParams, T: float
) -> NoiseBudget:
    """Budget with the detector-related reference-measurement noise trusted.

    The trusted slice leaves the channel noise (channel-referred, hence
    the 1/T) and joins the detection noise (Bob-referred). The total is
    unchanged relative to the conventional budget; chi_line reuses the
    assembled xi_tot so a zero trusted slice reproduces the conventional
    figures bit-exactly.
    """
    chi_line = 1.0 / T - 1.0 + components.xi_tot - components.xi_error_T / T
    chi_het = detection_noise(params.eta, params.v_el) + components.xi_error_T
    if chi_line < 0:
        raise ComputationError(
            f"trusted budget yields negative channel noise (chi_line={chi_line!r})"
        )
    return NoiseBudget(
        model=BudgetModel.TRUSTED,
        chi_line=chi_line,
        chi_het=chi_het,
        chi_tot=chi_line + chi_het / T,
        T=T,
    )
