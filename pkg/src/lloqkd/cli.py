"""Command-line front end.

Subcommands: point, sweep, attack (pia|voa), region, monitor. Every
subcommand accepts --config/--set to build the parameter set; without
them the calibrated reproduction profile is used (see README). Exit
codes: 0 success, 2 invalid input, 3 computation failure; errors are
also emitted as structured JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import analysis
from .analysis import (
    Scenario,
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
from .attacks import AttackSpec
from .errors import ComputationError, ValidationError
from .monitor import (
    MonitorMode,
    MonitorParams,
    defended_key_rate,
    detect,
    monitor_reading,
)
from .noise_model import assemble_components, conventional_budget, trusted_budget
from .params import SystemParams, parse_overrides, transmittance

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_COMPUTATION = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON parameter file (keys override the built-in profile)")
    common.add_argument(
        "--set",
        dest="overrides",
        metavar="NAME=VALUE",
        action="append",
        default=[],
        help="override a single parameter field (repeatable)",
    )
    common.add_argument("--format", choices=["csv", "json"], default=None, help="output format (default: json; sweep defaults to csv)")
    common.add_argument("--output", metavar="PATH", help="write results here instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled monitor readings")

    parser = argparse.ArgumentParser(
        prog="lloqkd",
        description="Noise budgets, intensity attacks, key rates, and the "
        "monitoring countermeasure for an LLO CV-QKD link.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", parents=[common], help="budgets and key rates at one distance")
    p_point.add_argument("--distance", type=float, required=True, metavar="KM")

    p_sweep = sub.add_parser("sweep", parents=[common], help="key-rate curves over a distance grid")
    p_sweep.add_argument("--from", dest="d_min", type=float, default=0.0, metavar="KM")
    p_sweep.add_argument("--to", dest="d_max", type=float, required=True, metavar="KM")
    p_sweep.add_argument("--step", type=float, default=1.0, metavar="KM")
    p_sweep.add_argument(
        "--scenarios",
        default="conv,trusted",
        help="comma list: conv | trusted | pia:g=2[,n=1] | voa:r=4 | voa:r=inverse-T",
    )

    p_attack = sub.add_parser("attack", parents=[common], help="one attack at one distance")
    p_attack.add_argument("kind", choices=["pia", "voa"])
    p_attack.add_argument("--distance", type=float, required=True, metavar="KM")
    p_attack.add_argument("--g", type=float, default=2.0, help="amplifier gain (pia)")
    p_attack.add_argument("--n", type=float, default=1.0, help="amplifier idler variance (pia)")
    p_attack.add_argument("--r", type=float, default=None, help="intensity ratio (voa)")
    p_attack.add_argument(
        "--r-mode",
        choices=["fixed", "inverse-T"],
        default=None,
        help="voa ratio policy; inverse-T sets r = 1/T at the given distance",
    )

    p_region = sub.add_parser("region", parents=[common], help="insecure distance interval for an attack")
    p_region.add_argument(
        "--attack", required=True, metavar="SPEC", help="attack scenario, e.g. pia:g=2 or voa:r=inverse-T"
    )
    p_region.add_argument("--d-max", type=float, default=200.0, metavar="KM")

    p_monitor = sub.add_parser("monitor", parents=[common], help="monitoring verdict and defended key rate")
    p_monitor.add_argument("--distance", type=float, required=True, metavar="KM")
    p_monitor.add_argument("--attack", default=None, metavar="SPEC", help="e.g. pia:g=2, voa:r=4 (omit for honest channel)")
    p_monitor.add_argument("--sigma", type=float, default=0.0, help="relative meter error")
    p_monitor.add_argument("--tau", type=float, default=0.05, help="alarm threshold")
    p_monitor.add_argument("--mode", choices=["interval", "sampled"], default="interval")
    return parser


def load_params(args: argparse.Namespace) -> SystemParams:
    params = canonical_params()
    if args.config:
        file_params = SystemParams.from_json(args.config)
        params = file_params
    if args.overrides:
        params = params.replace(**parse_overrides(args.overrides))
    return params.validate()


def emit(args: argparse.Namespace, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _budget_dict(budget) -> dict[str, float]:
    return {
        "chi_line": budget.chi_line,
        "chi_het": budget.chi_het,
        "chi_tot": budget.chi_tot,
    }


def _rate_dict(rate) -> dict[str, float]:
    return {
        "I_AB": rate.I_AB,
        "chi_BE": rate.chi_BE,
        "K": rate.K,
        "K_clamped": rate.K_clamped,
    }


def cmd_point(args: argparse.Namespace) -> int:
    params = load_params(args)
    from .keyrate import secret_key_rate

    T = transmittance(args.distance, params.alpha)
    components = assemble_components(params, T)
    conv = conventional_budget(components, params, T)
    tr = trusted_budget(components, params, T)
    result: dict[str, Any] = {
        "distance_km": args.distance,
        "T": T,
        "components": {
            "xi_0": components.xi_0,
            "xi_AM": components.xi_AM,
            "xi_LE": components.xi_LE,
            "xi_ADC": components.xi_ADC,
            "xi_error": components.xi_error,
            "xi_error_U": components.xi_error_U,
            "xi_error_T": components.xi_error_T,
            "xi_tot": components.xi_tot,
            "chi_T": components.chi_T,
            "chi_U": components.chi_U,
        },
        "conventional": {**_budget_dict(conv), **_rate_dict(secret_key_rate(params, conv))},
        "trusted": {**_budget_dict(tr), **_rate_dict(secret_key_rate(params, tr))},
    }
    emit(args, json.dumps(result, indent=2) + "\n")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    params = load_params(args)
    scenarios = [parse_scenario(s) for s in args.scenarios.split(",") if s.strip()]
    rows, labels = sweep(params, scenarios, args.d_min, args.d_max, args.step)
    fmt = args.format or "csv"
    emit(args, rows_to_csv(rows, labels) if fmt == "csv" else rows_to_json(rows, labels))
    return EXIT_OK


def cmd_attack(args: argparse.Namespace) -> int:
    params = load_params(args)
    if args.kind == "pia":
        scenario = Scenario(kind="pia", g=args.g, N=args.n)
    else:
        if args.r_mode == "inverse-T" or (args.r is None and args.r_mode is None):
            scenario = Scenario(kind="voa", r=None)
        else:
            if args.r is None:
                raise ValidationError("voa attack needs --r or --r-mode inverse-T", fields=["r"])
            scenario = Scenario(kind="voa", r=args.r)
    budget, rate = evaluate_scenario(params, scenario, args.distance)
    _, trusted_rate = evaluate_scenario(params, Scenario(kind="trusted"), args.distance)
    T = transmittance(args.distance, params.alpha)
    components = assemble_components(params, T)
    result: dict[str, Any] = {
        "distance_km": args.distance,
        "T": T,
        "scenario": scenario.describe(),
        "attacked": {**_budget_dict(budget), **_rate_dict(rate)},
        "trusted": _rate_dict(trusted_rate),
        "eve_fraction": eve_fraction(trusted_rate.K, rate.K),
    }
    if scenario.kind == "pia":
        from .attacks import pia_attack_noise

        outcome = pia_attack_noise(params, T, components, g=scenario.g, N=scenario.N)
        result["xi_attack"] = outcome.xi_attack
        result["delta_xi_T"] = outcome.delta_xi_T
        result["chi_A"] = outcome.chi_A
        result["xi_error_A"] = outcome.xi_error_A
    else:
        from .attacks import voa_attack_noise

        r = (1.0 / T) if scenario.r is None else scenario.r
        outcome = voa_attack_noise(components, T, r, params.voa_variant)
        result["r"] = r
        result["xi_attack"] = outcome.xi_attack
        result["delta_xi_T"] = outcome.delta_xi_T
    emit(args, json.dumps(result, indent=2) + "\n")
    return EXIT_OK


def cmd_region(args: argparse.Namespace) -> int:
    params = load_params(args)
    scenario = parse_scenario(args.attack)
    report = insecure_region(params, scenario, d_max=args.d_max)
    result = {
        "attack": scenario.describe(),
        "d_zero_attack_km": report.d_zero_attack,
        "d_zero_trusted_km": report.d_zero_trusted,
        "insecure_interval_km": list(report.insecure_interval),
        "width_km": report.width_km,
    }
    emit(args, json.dumps(result, indent=2) + "\n")
    return EXIT_OK


def cmd_monitor(args: argparse.Namespace) -> int:
    params = load_params(args)
    from .keyrate import secret_key_rate

    attack = None
    if args.attack:
        scenario = parse_scenario(args.attack)
        if scenario.kind == "pia":
            attack = AttackSpec.pia(scenario.g, scenario.N if scenario.N is not None else 1.0)
        elif scenario.kind == "voa":
            T = transmittance(args.distance, params.alpha)
            r = (1.0 / T) if scenario.r is None else scenario.r
            attack = AttackSpec.voa(r, params.voa_variant)
        else:
            raise ValidationError("--attack must be a pia or voa scenario")
    mp = MonitorParams(meter_rel_error=args.sigma, alarm_threshold=args.tau)
    mode = MonitorMode.INTERVAL if args.mode == "interval" else MonitorMode.SAMPLED
    scale = 1.0 if attack is None else attack.intensity_scale()
    reading = monitor_reading(scale * params.E_R2, mp, mode=mode, seed=args.seed)
    T = transmittance(args.distance, params.alpha)
    components = assemble_components(params, T)
    naive = secret_key_rate(params, trusted_budget(components, params, T))
    defended = defended_key_rate(
        params, attack, mp, args.distance, mode=mode, seed=args.seed
    )
    result = {
        "distance_km": args.distance,
        "attack": None if args.attack is None else parse_scenario(args.attack).describe(),
        "reading": {
            "point_estimate": reading.point_estimate,
            "lower": reading.lower,
            "upper": reading.upper,
        },
        "detected": detect(params.E_R2, reading, args.tau),
        "K_naive": _rate_dict(naive),
        "K_defended": _rate_dict(defended),
    }
    emit(args, json.dumps(result, indent=2) + "\n")
    return EXIT_OK


_COMMANDS = {
    "point": cmd_point,
    "sweep": cmd_sweep,
    "attack": cmd_attack,
    "region": cmd_region,
    "monitor": cmd_monitor,
}


def _error_json(kind: str, exc: Exception) -> str:
    payload: dict[str, Any] = {"error": kind, "message": str(exc)}
    fields = getattr(exc, "fields", None)
    if fields:
        payload["fields"] = fields
    return json.dumps(payload) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        sys.stderr.write(_error_json("validation", exc))
        return EXIT_VALIDATION
    except ComputationError as exc:
        sys.stderr.write(_error_json("computation", exc))
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
