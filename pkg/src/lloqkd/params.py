"""System parameters, unit conversions, and validation.

Single source of truth for every quantity consumed by the noise and
key-rate calculations. All noise variances are expressed in shot-noise
units (SNU); extinction ratios and modulator dynamics are configured in
dB and converted to linear ratios where they enter a formula.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

from .errors import ValidationError


class LeakageVariant(str, Enum):
    """Denominator form for the reference-to-signal leakage noise.

    SUM uses the arithmetic sum of the two linear extinction ratios;
    PRODUCT uses their product (equivalent to adding the two dB figures).
    """

    SUM = "SUM"
    PRODUCT = "PRODUCT"


class AdcVariant(str, Enum):
    """Exponent form for the ADC quantization-noise bound."""

    TWO_POW_N = "TWO_POW_N"      # denominator 12 * 2**n
    TWO_POW_2N = "TWO_POW_2N"    # denominator 12 * 2**(2n)


class VoaVariant(str, Enum):
    """Reference point for the attenuator-attack noise bookkeeping.

    BOB_REFERRED credits Eve the trusted-noise reduction as seen at
    Bob's input; CHANNEL_REFERRED divides by the transmittance so the
    figure is referred to the channel input, consistent with how the
    attacked channel noise is assembled.
    """

    BOB_REFERRED = "BOB_REFERRED"
    CHANNEL_REFERRED = "CHANNEL_REFERRED"


class RefPoint(str, Enum):
    """Where the configured phase-reference intensity E_R2 is specified."""

    AT_BOB = "AT_BOB"
    AT_ALICE = "AT_ALICE"


_ENUM_FIELDS = {
    "leakage_variant": LeakageVariant,
    "adc_variant": AdcVariant,
    "voa_variant": VoaVariant,
    "ref_point": RefPoint,
}


def db_to_linear(x_dB: float) -> float:
    """Convert a dB figure to a linear power ratio, 10**(x/10)."""
    if not math.isfinite(x_dB):
        raise ValidationError(f"dB value must be finite, got {x_dB!r}")
    return 10.0 ** (x_dB / 10.0)


def transmittance(distance_km: float, alpha: float) -> float:
    """Fiber transmittance 10**(-alpha*d/10) for attenuation alpha dB/km."""
    errors = []
    if not (math.isfinite(distance_km) and distance_km >= 0):
        errors.append("distance_km")
    if not (math.isfinite(alpha) and alpha >= 0):
        errors.append("alpha")
    if errors:
        raise ValidationError(
            f"transmittance requires non-negative finite inputs: {', '.join(errors)}",
            fields=errors,
        )
    return 10.0 ** (-alpha * distance_km / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """All physical and protocol constants of the modeled system.

    Defaults are the simulation parameter set used throughout the
    analysis: modulation variance 4 SNU, reconciliation efficiency 0.95,
    detector efficiency 0.5, electronic noise 0.1 SNU, reference
    intensity 1000 SNU, 0.2 dB/km fiber. ``f_rep`` is descriptive only
    and enters no equation. The four variant flags select between
    ambiguous published forms of the leakage/ADC/attenuator-attack
    formulas; defaults are the formulas as printed, see the README for
    the calibrated reproduction profile.
    """

    V_A: float = 4.0          # modulation variance, SNU
    beta: float = 0.95        # reconciliation efficiency, in (0, 1]
    eta: float = 0.5          # detector efficiency, in (0, 1]
    v_el: float = 0.1         # detector electronic noise, SNU
    xi_0: float = 0.01        # baseline system excess noise, SNU
    eps_0: float = 0.01       # channel excess noise on the reference pulse, SNU
    n_adc: int = 10           # ADC quantization bit count
    d_dB: float = 40.0        # amplitude-modulator dynamics, dB
    R_e_dB: float = 40.0      # modulator extinction ratio, dB
    R_p_dB: float = 30.0      # PBS extinction ratio, dB
    E_R2: float = 1000.0      # phase-reference intensity, SNU (squared amplitude)
    alpha: float = 0.2        # fiber attenuation, dB/km
    f_rep: float = 1e8        # repetition rate, Hz (descriptive only)
    leakage_variant: LeakageVariant = LeakageVariant.SUM
    adc_variant: AdcVariant = AdcVariant.TWO_POW_N
    voa_variant: VoaVariant = VoaVariant.BOB_REFERRED
    ref_point: RefPoint = RefPoint.AT_BOB

    def validate(self) -> "SystemParams":
        """Return self if every field is in range, else raise listing all violations."""
        errors: list[str] = []

        def check(name: str, ok: bool) -> None:
            if not ok:
                errors.append(name)

        fin = math.isfinite
        check("V_A", fin(self.V_A) and self.V_A >= 0)
        check("beta", fin(self.beta) and 0 < self.beta <= 1)
        check("eta", fin(self.eta) and 0 < self.eta <= 1)
        check("v_el", fin(self.v_el) and self.v_el >= 0)
        check("xi_0", fin(self.xi_0) and self.xi_0 >= 0)
        check("eps_0", fin(self.eps_0) and self.eps_0 >= 0)
        check("n_adc", isinstance(self.n_adc, int) and self.n_adc >= 1)
        check("d_dB", fin(self.d_dB) and self.d_dB >= 0)
        check("R_e_dB", fin(self.R_e_dB) and self.R_e_dB >= 0)
        check("R_p_dB", fin(self.R_p_dB) and self.R_p_dB >= 0)
        check("E_R2", fin(self.E_R2) and self.E_R2 > 0)
        check("alpha", fin(self.alpha) and self.alpha >= 0)
        check("f_rep", fin(self.f_rep) and self.f_rep >= 0)
        for name, enum_cls in _ENUM_FIELDS.items():
            check(name, isinstance(getattr(self, name), enum_cls))
        if errors:
            raise ValidationError(
                "parameters out of range: " + ", ".join(errors), fields=errors
            )
        return self

    def replace(self, **changes: Any) -> "SystemParams":
        """Copy with the given fields replaced (coercing enum names), validated."""
        coerced = {k: _coerce_field(k, v) for k, v in changes.items()}
        return dataclasses.replace(self, **coerced).validate()

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        for name in _ENUM_FIELDS:
            d[name] = d[name].value
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SystemParams":
        """Build from a mapping; unknown keys are rejected by name."""
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(
                "unknown parameter keys: " + ", ".join(unknown), fields=unknown
            )
        kwargs = {k: _coerce_field(k, v) for k, v in data.items()}
        return cls(**kwargs).validate()

    @classmethod
    def from_json(cls, path: str | Path) -> "SystemParams":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValidationError("config file must contain a JSON object")
        return cls.from_dict(data)

    def to_json(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")


def _coerce_field(name: str, value: Any) -> Any:
    """Coerce a raw config/CLI value to the declared field type."""
    field_types = {f.name: f.type for f in dataclasses.fields(SystemParams)}
    if name not in field_types:
        raise ValidationError(f"unknown parameter: {name}", fields=[name])
    if name in _ENUM_FIELDS:
        enum_cls = _ENUM_FIELDS[name]
        if isinstance(value, enum_cls):
            return value
        try:
            return enum_cls(str(value).upper())
        except ValueError:
            choices = ", ".join(m.value for m in enum_cls)
            raise ValidationError(
                f"{name} must be one of {choices}, got {value!r}", fields=[name]
            ) from None
    if name == "n_adc":
        try:
            as_float = float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"{name} must be an integer, got {value!r}", fields=[name]) from None
        if as_float != int(as_float):
            raise ValidationError(f"{name} must be an integer, got {value!r}", fields=[name])
        return int(as_float)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a number, got {value!r}", fields=[name]) from None


def parse_overrides(pairs: list[str]) -> dict[str, Any]:
    """Parse repeated ``name=value`` override strings into a field dict."""
    out: dict[str, Any] = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ValidationError(f"override must look like name=value, got {pair!r}")
        out[name.strip()] = _coerce_field(name.strip(), value.strip())
    return out


@dataclass(frozen=True)
class ChannelPoint:
    """A channel operating point: distance and its transmittance."""

    distance_km: float
    T: float

    def __post_init__(self) -> None:
        errors = []
        if not (math.isfinite(self.distance_km) and self.distance_km >= 0):
            errors.append("distance_km")
        if not (math.isfinite(self.T) and 0 < self.T <= 1):
            errors.append("T")
        if errors:
            raise ValidationError(
                "invalid channel point: " + ", ".join(errors), fields=errors
            )

    @classmethod
    def from_distance(cls, distance_km: float, alpha: float) -> "ChannelPoint":
        return cls(distance_km=distance_km, T=transmittance(distance_km, alpha))
