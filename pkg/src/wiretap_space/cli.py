"""Command-line interface.

Subcommands: ``capacity``, ``sweep``, ``linkbudget``, ``exclusion``,
``orbit``, ``table1``.  Every run echoes the fully resolved configuration to
stderr so results are reproducible from the log alone.  Exit codes: 0 on
success, 2 for configuration errors, 3 for numerical-convergence failures.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import replace
from typing import Sequence

from .detection import BinaryCoherentEnsemble, distinguishability_angle, helstrom_error
from .linkbudget import (
    bob_free_space,
    eve_free_space,
    exclusion_radius_partial,
    exclusion_radius_total,
    fraction_to_db,
    gamma_partial,
)
from .numerics import BracketError, ToleranceNotReached
from .orbitsim import (
    alignment_periods,
    integrated_gamma,
    required_orbital_exclusion,
    write_pass_profile,
)
from .scenario_io import (
    CAPACITY_SWEEP_OUTPUTS,
    TABLE1_HEADER,
    ConfigError,
    ScenarioConfig,
    SweepAxis,
    config_from_dict,
    config_to_dict,
    emit_table1,
    exclusion_sweep,
    load_config,
    preset_config,
    PRESET_NAMES,
    resolved_gamma,
    rows_to_json,
    sweep,
    write_csv,
)
from .secrecy import optimal_signal_strength, private_capacity, private_capacity_fixed

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        metavar="PATH",
        help="JSON config file or preset name (%s); defaults to micius-leo"
        % ", ".join(PRESET_NAMES),
    )
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(
        prog="wiretap-space",
        description="Secrecy rates, link budgets and orbital-pass analysis "
        "for OOK coherent-state satellite downlinks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", parents=[common], help="evaluate one operating point")
    cap.add_argument("--photons", type=float, help="received mean photon number")
    cap.add_argument("--gamma", type=float, help="channel degradation override")
    cap.add_argument("--q", type=float, help="fix the input probability instead of optimising")
    cap.add_argument(
        "--optimize-photons",
        action="store_true",
        help="search the received photon number for the best capacity",
    )

    sw = sub.add_parser("sweep", parents=[common], help="grid sweep to CSV/JSON")
    sw.add_argument(
        "--axis",
        action="append",
        metavar="PARAM:MIN:MAX:POINTS[:SCALE]",
        help="sweep axis (repeat for a 2-D grid); overrides the config's axes",
    )

    sub.add_parser("linkbudget", parents=[common], help="static link budget for the geometry")

    exc = sub.add_parser("exclusion", parents=[common], help="exclusion radii, both models")
    exc.add_argument("--gamma-target", type=float, default=0.1)
    exc.add_argument(
        "--axis",
        metavar="PARAM:MIN:MAX:POINTS[:SCALE]",
        help="sweep gamma_target or dist_bob_m instead of a single row",
    )

    orb = sub.add_parser("orbit", parents=[common], help="simulate one orbital pass")
    orb.add_argument("--offset", type=float, help="interceptor orbit offset in metres")
    orb.add_argument(
        "--solve-gamma",
        type=float,
        metavar="GAMMA",
        help="also solve for the offset achieving this integrated degradation",
    )

    sub.add_parser("table1", parents=[common], help="orbit-class comparison table")
    return parser


def _parse_axis(text: str) -> SweepAxis:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError(
            [f"axis spec must be PARAM:MIN:MAX:POINTS[:SCALE], got {text!r}"]
        )
    try:
        return SweepAxis(
            param=parts[0],
            lo=float(parts[1]),
            hi=float(parts[2]),
            points=int(parts[3]),
            scale=parts[4] if len(parts) == 5 else "linear",
        )
    except ValueError as exc:
        raise ConfigError([f"axis spec {text!r}: {exc}"]) from exc


def _load(args: argparse.Namespace) -> ScenarioConfig:
    if args.config is None:
        return config_from_dict({})
    if args.config in PRESET_NAMES:
        return preset_config(args.config)
    return load_config(args.config)


def _echo_config(config: ScenarioConfig) -> None:
    print("resolved-config: " + json.dumps(config_to_dict(config)), file=sys.stderr)


def _emit(args: argparse.Namespace, header: Sequence[str], rows) -> None:
    if args.format == "json":
        text = json.dumps(rows_to_json(header, rows), indent=2) + "\n"
    else:
        buffer = io.StringIO()
        write_csv(buffer, header, rows)
        text = buffer.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _point_row(config: ScenarioConfig, point) -> list[float]:
    eve = BinaryCoherentEnsemble(
        mean_photons=point.gamma * point.received_mean_photons, prior_q=point.q
    )
    clock = config.link.clock_rate
    return [
        point.gamma,
        point.received_mean_photons,
        point.q,
        point.info_bob,
        point.info_eve_helstrom,
        point.holevo_eve,
        point.private_capacity,
        point.dw_rate,
        helstrom_error(eve),
        math.degrees(distinguishability_angle(eve.mean_photons)),
        point.private_capacity * clock,
        point.dw_rate * clock,
    ]


def _run_capacity(args: argparse.Namespace, config: ScenarioConfig) -> None:
    gamma = args.gamma if args.gamma is not None else resolved_gamma(config)
    if args.optimize_photons:
        _, point = optimal_signal_strength(config.detector, gamma)
    else:
        photons = args.photons if args.photons is not None else config.operating.received_mean_photons
        q = args.q if args.q is not None else config.operating.q
        if q is None:
            point = private_capacity(config.detector, photons, gamma)
        else:
            point = private_capacity_fixed(config.detector, photons, gamma, q)
    _emit(args, list(CAPACITY_SWEEP_OUTPUTS), [_point_row(config, point)])


def _run_sweep(args: argparse.Namespace, config: ScenarioConfig) -> None:
    axes = [_parse_axis(a) for a in args.axis] if args.axis else None
    header, rows = sweep(config, axes)
    _emit(args, header, rows)


def _run_linkbudget(args: argparse.Namespace, config: ScenarioConfig) -> None:
    geometry = config.geometry
    loss = bob_free_space(geometry)
    header = [
        "configuration",
        "dist_bob_m",
        "dist_eve_m",
        "bob_free_space",
        "channel_loss_db",
        "eve_free_space",
        "gamma_partial",
        "exclusion_radius_m",
    ]
    row = [
        config.label,
        geometry.dist_bob,
        geometry.dist_eve,
        loss,
        fraction_to_db(loss),
        eve_free_space(geometry),
        gamma_partial(geometry),
        geometry.exclusion_radius,
    ]
    _emit(args, header, [row])


def _run_exclusion(args: argparse.Namespace, config: ScenarioConfig) -> None:
    if args.axis:
        header, rows = exclusion_sweep(config, _parse_axis(args.axis))
        _emit(args, header, rows)
        return
    geometry = config.geometry
    header = ["gamma_target", "radius_partial_m", "radius_total_m"]
    row = [
        args.gamma_target,
        exclusion_radius_partial(
            args.gamma_target,
            geometry.dist_bob,
            geometry.eta_b,
            geometry.diam_eve / geometry.diam_bob,
            geometry.divergence_full_angle,
        ),
        exclusion_radius_total(
            args.gamma_target, geometry.dist_bob, geometry.diam_bob, geometry.divergence_full_angle
        ),
    ]
    _emit(args, header, [row])


def _run_orbit(args: argparse.Namespace, config: ScenarioConfig) -> None:
    scenario = config.orbit
    if args.offset is not None:
        scenario = replace(scenario, eve_orbit_offset=args.offset)
    profile = integrated_gamma(scenario, config.constants)
    revisit, intercept_period = alignment_periods(scenario, config.constants)
    visible = profile.times[profile.eta_eve > 1e-3]
    window = float(visible[-1] - visible[0]) if visible.size else 0.0
    summary = {
        "pass_half_duration_s": profile.pass_half_duration,
        "integrated_gamma": profile.integrated_gamma,
        "integrated_eta_bob_s": profile.integrated_eta_bob,
        "integrated_eta_eve_s": profile.integrated_eta_eve,
        "convergence_delta": profile.convergence_delta,
        "bob_revisit_s": revisit,
        "eve_intercept_period_s": intercept_period,
        "eve_intercept_window_s": window,
        "samples": int(profile.times.size),
    }
    if args.solve_gamma is not None:
        summary["required_offset_m"] = required_orbital_exclusion(
            scenario, config.constants, gamma_target=args.solve_gamma
        )
    print("pass-summary: " + json.dumps(summary), file=sys.stderr)
    if args.format == "json":
        text = json.dumps(summary, indent=2) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_pass_profile(profile, fh)
    else:
        write_pass_profile(profile, sys.stdout)


def _run_table1(args: argparse.Namespace, config: ScenarioConfig) -> None:
    rows = [
        [
            row.configuration,
            row.distance_km,
            row.channel_loss_db,
            row.plob_rate_bps,
            row.exclusion_radius_m,
            row.gamma,
            row.private_rate_bps,
        ]
        for row in emit_table1()
    ]
    _emit(args, list(TABLE1_HEADER), rows)


_RUNNERS = {
    "capacity": _run_capacity,
    "sweep": _run_sweep,
    "linkbudget": _run_linkbudget,
    "exclusion": _run_exclusion,
    "orbit": _run_orbit,
    "table1": _run_table1,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load(args)
        _echo_config(config)
        _RUNNERS[args.command](args, config)
    except ConfigError as exc:
        for violation in exc.violations:
            print(f"config error: {violation}", file=sys.stderr)
        return EXIT_CONFIG
    except (BracketError, ToleranceNotReached) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def main_entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    main_entry()
