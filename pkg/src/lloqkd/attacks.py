"""Phase-reference intensity attacks and the attacked noise budget.

Both attacks raise the reference-pulse intensity during the run so the
receiver, calibrated against the original intensity, over-credits the
trusted part of the phase noise. Eve spends the freed-up budget on extra
attack noise against the signal while the measured total excess noise
stays unchanged. The amplifier attack pays a noise penalty of its own;
the attenuator attack is noiseless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ComputationError, ValidationError
from .noise_model import (
    BudgetModel,
    NoiseBudget,
    NoiseComponents,
    trusted_budget,
)
from .params import SystemParams, VoaVariant


class AttackKind(str, Enum):
    PIA = "PIA"
    VOA = "VOA"


@dataclass(frozen=True)
class AttackSpec:
    """An attack configuration: amplifier gain/idler variance, or intensity ratio."""

    kind: AttackKind
    g: float | None = None
    N: float | None = None
    r: float | None = None
    voa_variant: VoaVariant = VoaVariant.BOB_REFERRED

    def __post_init__(self) -> None:
        if self.kind is AttackKind.PIA:
            if self.g is None or not (math.isfinite(self.g) and self.g >= 1):
                raise ValidationError(
                    "PIA gain g must be >= 1 (deamplification is not an attack)",
                    fields=["g"],
                )
            if self.N is None or not (math.isfinite(self.N) and self.N >= 1):
                raise ValidationError("PIA idler variance N must be >= 1", fields=["N"])
        else:
            if self.r is None or not (math.isfinite(self.r) and self.r >= 1):
                raise ValidationError(
                    "VOA intensity ratio r must be >= 1", fields=["r"]
                )

    @classmethod
    def pia(cls, g: float, N: float = 1.0) -> "AttackSpec":
        return cls(kind=AttackKind.PIA, g=g, N=N)

    @classmethod
    def voa(
        cls, r: float, variant: VoaVariant = VoaVariant.BOB_REFERRED
    ) -> "AttackSpec":
        return cls(kind=AttackKind.VOA, r=r, voa_variant=variant)

    def intensity_scale(self) -> float:
        """Factor by which the attack scales the reference intensity at Bob."""
        return self.g if self.kind is AttackKind.PIA else self.r  # type: ignore[return-value]


@dataclass(frozen=True)
class AttackOutcome:
    """Noise bookkeeping of one attack at one channel point.

    ``xi_attack`` is the extra signal-attack noise Eve can hide;
    negative values mean the attack is self-defeating (the amplifier
    penalty exceeds the trusted-noise reduction) and no attacked budget
    is produced. ``chi_A`` and ``xi_error_A`` are amplifier-only terms.
    """

    delta_xi_T: float
    xi_attack: float
    budget: NoiseBudget | None
    chi_A: float | None = None
    xi_error_A: float | None = None

    @property
    def effective(self) -> bool:
        return self.xi_attack > 0


def pia_amplifier_chi(g: float, N: float, T: float) -> float:
    """Amplifier noise on the reference pulse, channel-input referred."""
    errors = []
    if not (math.isfinite(g) and g >= 1):
        errors.append("g")
    if not (math.isfinite(N) and N >= 1):
        errors.append("N")
    if not (0 < T <= 1):
        errors.append("T")
    if errors:
        raise ValidationError(
            "pia_amplifier_chi requires g >= 1 (deamplification is not an attack), "
            "N >= 1, 0 < T <= 1; bad: " + ", ".join(errors),
            fields=errors,
        )
    return (g - 1.0) * N / (g * T)


def pia_attack_noise(
    params: SystemParams,
    T: float,
    components: NoiseComponents,
    g: float,
    N: float = 1.0,
) -> AttackOutcome:
    """Amplifier attack: trusted-noise reduction net of the amplifier penalty.

    The reduction of the credited trusted noise scales as (1 - 1/g); the
    amplifier's own phase-noise penalty grows the same way but with the
    idler variance N in place of the detection noise, so the attack only
    pays off while the detection noise exceeds N.
    """
    chi_A = pia_amplifier_chi(g, N, T)
    xi_error_A = params.V_A * chi_A / params.E_R2
    delta_xi_T = (components.xi_error_T / T) * (1.0 - 1.0 / g)
    xi_attack = delta_xi_T - xi_error_A
    budget = None
    if xi_attack >= 0:
        budget = attacked_budget(trusted_budget(components, params, T), xi_attack, T)
    return AttackOutcome(
        delta_xi_T=delta_xi_T,
        xi_attack=xi_attack,
        budget=budget,
        chi_A=chi_A,
        xi_error_A=xi_error_A,
    )


def voa_attack_noise(
    components: NoiseComponents,
    T: float,
    r: float,
    voa_variant: VoaVariant = VoaVariant.BOB_REFERRED,
) -> AttackOutcome:
    """Attenuator attack: the full trusted-noise reduction, no penalty term."""
    if not (math.isfinite(r) and r >= 1):
        raise ValidationError("VOA intensity ratio r must be >= 1", fields=["r"])
    if not (0 < T <= 1):
        raise ValidationError("T must be in (0, 1]", fields=["T"])
    if voa_variant is VoaVariant.BOB_REFERRED:
        xi_attack = components.xi_error_T * (1.0 - 1.0 / r)
    else:
        xi_attack = (components.xi_error_T / T) * (1.0 - 1.0 / r)
    trusted = _trusted_from_components(components, T)
    return AttackOutcome(
        delta_xi_T=xi_attack,
        xi_attack=xi_attack,
        budget=attacked_budget(trusted, xi_attack, T),
    )


def _trusted_from_components(components: NoiseComponents, T: float) -> NoiseBudget:
    """Trusted budget from components alone (chi_T is the detection noise)."""
    chi_line = 1.0 / T - 1.0 + components.xi_tot - components.xi_error_T / T
    chi_het = components.chi_T + components.xi_error_T
    return NoiseBudget(
        model=BudgetModel.TRUSTED,
        chi_line=chi_line,
        chi_het=chi_het,
        chi_tot=chi_line + chi_het / T,
        T=T,
    )


def attacked_budget(trusted: NoiseBudget, xi_attack: float, T: float) -> NoiseBudget:
    """Move xi_attack from the trusted detection noise into the channel noise.

    The total referred to the channel input is unchanged, which is what
    hides the attack from parameter estimation.
    """
    if xi_attack < 0:
        raise ValidationError(
            "xi_attack must be >= 0 (a negative value means the attack is "
            "self-defeating and would not be mounted)",
            fields=["xi_attack"],
        )
    chi_line = trusted.chi_line + xi_attack
    chi_het = trusted.chi_het - T * xi_attack
    if chi_het < 0:
        raise ComputationError(
            "attack over-budget: trusted detection noise exhausted "
            f"(chi_het={chi_het!r})"
        )
    return NoiseBudget(
        model=BudgetModel.ATTACKED,
        chi_line=chi_line,
        chi_het=chi_het,
        chi_tot=chi_line + chi_het / T,
        T=T,
    )


def pia_effective(chi_T: float, N: float) -> bool:
    """Whether an amplifier attack gains anything: true iff chi_T > N."""
    if not (math.isfinite(N) and N >= 1):
        raise ValidationError("N must be >= 1", fields=["N"])
    return chi_T > N
