"""Security-analysis toolkit for LLO CV-QKD links.

Computes the itemized excess-noise budget under the conventional and
trusted phase-noise models, models two phase-reference intensity attacks
(phase-insensitive amplifier, variable optical attenuator), evaluates
asymptotic secret key rates, locates insecure distance regions, and
assesses the intensity-monitoring countermeasure.
"""

from .analysis import (
    CANONICAL_VARIANTS,
    RegionReport,
    Scenario,
    ScenarioCell,
    SweepRow,
    calibrate_variants,
    canonical_params,
    eve_fraction,
    evaluate_scenario,
    insecure_region,
    parse_scenario,
    rows_to_csv,
    rows_to_json,
    sweep,
    zero_key_distance,
)
from .attacks import (
    AttackKind,
    AttackOutcome,
    AttackSpec,
    attacked_budget,
    pia_amplifier_chi,
    pia_attack_noise,
    pia_effective,
    voa_attack_noise,
)
from .errors import ComputationError, LloqkdError, ValidationError
from .keyrate import (
    KeyRateResult,
    g_entropy,
    holevo_bound,
    mutual_information,
    secret_key_rate,
    symplectic_eigenvalues,
)
from .monitor import (
    MonitorMode,
    MonitorParams,
    MonitorReading,
    conservative_trusted_noise,
    defended_key_rate,
    detect,
    monitor_reading,
    recalibrated_budget,
)
from .noise_model import (
    BudgetModel,
    NoiseBudget,
    NoiseComponents,
    adc_noise,
    assemble_components,
    conventional_budget,
    detection_noise,
    leakage_noise,
    modulation_noise,
    phase_error_noise,
    reference_chi,
    trusted_budget,
)
from .params import (
    AdcVariant,
    ChannelPoint,
    LeakageVariant,
    RefPoint,
    SystemParams,
    VoaVariant,
    db_to_linear,
    transmittance,
)

__version__ = "0.1.0"
