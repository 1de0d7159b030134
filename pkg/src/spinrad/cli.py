"""Command-line front end.

One JSON configuration document describes a scenario (body, material,
temperatures, quadrature control); subcommands run the physics and write
machine-readable CSV/JSON artifacts.  All physical inputs are SI with the
unit embedded in the key name.

Exit codes: 0 success, 1 usage/configuration, 2 physics (regime guard,
accuracy, consistency, singular response), 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from .constants import C, HBAR, K_B
from .dynamics import (
    BodySpec,
    SpinDownScenario,
    integrate_spin_down,
    spin_down_timescale,
    write_trajectory_csv,
)
from .errors import ConfigError, SpinradError
from .interactions import (
    TestObject,
    radiation_interaction,
    write_interaction_csv,
)
from .materials import (
    ConstantLoss,
    Drude,
    LinearLossToy,
    Lorentz,
    load_tabulated_dielectric,
)
from .radiation import (
    QuadratureConfig,
    SphereChannels,
    power_cylinder,
    power_sphere,
    static_radiation,
    write_spectrum_csv,
)
from .thermal import ThermalState
from .verify import run_all


def _load_config(path) -> dict:
    if path is None:
        raise ConfigError("this subcommand requires --config <scenario.json>")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    return doc


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing key '{key}' in {where}")
    return section[key]


def _build_material(section: dict):
    kind = _require(section, "kind", "material")
    try:
        if kind == "drude":
            return Drude(
                plasma_frequency=float(_require(section, "plasma_frequency_rad_s", "material")),
                damping=float(_require(section, "damping_rad_s", "material")),
            )
        if kind == "lorentz":
            return Lorentz(
                oscillator_strength=float(_require(section, "oscillator_strength", "material")),
                resonance=float(_require(section, "resonance_rad_s", "material")),
                damping=float(_require(section, "damping_rad_s", "material")),
            )
        if kind == "constant_loss":
            return ConstantLoss(
                eps_real=float(_require(section, "eps_real", "material")),
                eps_imag=float(_require(section, "eps_imag", "material")),
            )
        if kind == "linear_loss_toy":
            return LinearLossToy(coefficient=float(_require(section, "coefficient_s", "material")))
        if kind == "tabulated":
            return load_tabulated_dielectric(_require(section, "csv_path", "material"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"material: {exc}") from exc
    raise ConfigError(
        f"unknown material kind {kind!r} (expected drude, lorentz, constant_loss, "
        "linear_loss_toy or tabulated)"
    )


def _build_body(section: dict) -> BodySpec:
    try:
        return BodySpec(
            kind=_require(section, "kind", "body"),
            radius=float(_require(section, "radius_m", "body")),
            length=float(section["length_m"]) if section.get("length_m") is not None else None,
            angular_velocity=float(section.get("angular_velocity_rad_s", 0.0)),
            temperature=float(section.get("temperature_K", 0.0)),
            environment_temperature=float(section.get("environment_temperature_K", 0.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"body: {exc}") from exc


def _build_quadrature(config: dict) -> QuadratureConfig:
    section = config.get("quadrature", {})
    try:
        return QuadratureConfig(
            rel_tol=float(section.get("rel_tol", 1e-10)),
            abs_floor=float(section.get("abs_floor_W", 0.0)),
            max_panels=int(section.get("max_panels", 4000)),
            split_points=tuple(float(p) for p in section.get("split_points_rad_s", ())),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"quadrature: {exc}") from exc


def _resolve_out(args, config: dict):
    return args.out if args.out is not None else config.get("output_path")


def _channel_row(channel, power):
    return {
        "m": channel.m,
        "P": channel.pol,
        "l": channel.l,
        "kz": channel.kz,
        "power_W": power,
    }


def _power_report(result) -> dict:
    report = {
        "total_power_W": result.total_power,
        "quadrature_error_W": result.quadrature_error,
        "per_channel": [
            _channel_row(ch, p) for ch, p in result.per_channel.items()
        ],
        "truncation": {
            "highest_m": result.truncation.highest_m,
            "channels_evaluated": result.truncation.channels_evaluated,
            "total_panels": result.truncation.total_panels,
            "kz_nodes": result.truncation.kz_nodes,
        },
    }
    if result.closed_form_power is not None:
        report["closed_form_power_W"] = result.closed_form_power
        report["path_relative_difference"] = result.path_relative_difference
    return report


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _write_power_csv(path, result) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("channel_m,channel_P,channel_l,channel_kz,power_W\n")
        for ch, p in result.per_channel.items():
            l_txt = "" if ch.l is None else str(ch.l)
            kz_txt = "" if ch.kz is None else repr(ch.kz)
            fh.write(f"{ch.m},{ch.pol},{l_txt},{kz_txt},{p!r}\n")
        fh.write(f"total,,,,{result.total_power!r}\n")


def _run_power(config: dict, args) -> "RadiationResult":
    body = _build_body(_require(config, "body", "config"))
    model = _build_material(_require(config, "material", "config"))
    cfg = _build_quadrature(config)
    state = body.thermal_state()
    spectrum_points = int(config.get("spectrum_points", 0))
    if body.kind == "cylinder":
        if body.temperature != 0.0 or body.environment_temperature != 0.0:
            raise ConfigError("cylinder power is a zero-temperature result; set both temperatures to 0")
        return power_cylinder(
            model, body.radius, body.length, body.angular_velocity, cfg,
            mode=config.get("mode", "linear_in_t"),
            override_regime_guard=args.override_regime_guard,
            spectrum_points=spectrum_points,
        )
    if body.angular_velocity == 0.0:
        provider = SphereChannels(model, body.radius, 0.0, args.override_regime_guard)
        return static_radiation(
            provider, state, cfg, threads=args.threads, spectrum_points=spectrum_points
        )
    return power_sphere(
        model, body.radius, body.angular_velocity, state, cfg,
        override_regime_guard=args.override_regime_guard,
        threads=args.threads,
        spectrum_points=spectrum_points,
    )


def cmd_power(args) -> int:
    config = _load_config(args.config)
    result = _run_power(config, args)
    print(f"total radiated power: {result.total_power!r} W "
          f"(quadrature error {result.quadrature_error:.3e} W)")
    if result.closed_form_power is not None:
        print(f"closed-form benchmark: {result.closed_form_power!r} W "
              f"(relative difference {result.path_relative_difference:.3e})")
    print("channel   m  P   l        power_W")
    for ch, p in result.per_channel.items():
        l_txt = "-" if ch.l is None else str(ch.l)
        print(f"        {ch.m:>3}  {ch.pol:<2} {l_txt:>2}  {p!r}")
    out = _resolve_out(args, config)
    if out is not None:
        if args.format == "csv":
            _write_power_csv(out, result)
        else:
            _write_json(out, _power_report(result))
        print(f"wrote {out}")
    spectrum_csv = config.get("spectrum_csv_path")
    if spectrum_csv is not None:
        write_spectrum_csv(spectrum_csv, result)
        print(f"wrote {spectrum_csv}")
    return 0


def cmd_spectrum(args) -> int:
    config = _load_config(args.config)
    if int(config.get("spectrum_points", 0)) <= 0:
        config["spectrum_points"] = 512
    result = _run_power(config, args)
    out = _resolve_out(args, config)
    if out is None:
        raise ConfigError("spectrum needs an output path (--out or 'output_path')")
    if args.format == "csv":
        write_spectrum_csv(out, result)
    else:
        rows = []
        for spec in result.spectra:
            for w, dp, dn in zip(spec.omega, spec.dP_domega, spec.dN_domega):
                rows.append(
                    {
                        "omega_rad_s": float(w),
                        "dP_domega_W_per_rad_s": float(dp),
                        "dN_domega_per_s_per_rad_s": float(dn),
                        "channel_m": spec.channel.m,
                        "channel_P": spec.channel.pol,
                    }
                )
        _write_json(out, rows)
    print(f"wrote {out}")
    return 0


def cmd_torque(args) -> int:
    config = _load_config(args.config)
    body = _build_body(_require(config, "body", "config"))
    if body.kind != "sphere":
        raise ConfigError("torque/shear force computations use a sphere rotator")
    model = _build_material(_require(config, "material", "config"))
    cfg = _build_quadrature(config)
    section = _require(config, "test_object", "config")
    test_model = _build_material(_require(section, "material", "test_object"))
    separations = section.get("separation_m")
    if separations is None:
        raise ConfigError("test_object needs 'separation_m' (scalar or list)")
    if not isinstance(separations, list):
        separations = [separations]
    separations = [float(d) for d in separations]
    try:
        test = TestObject(
            model=test_model,
            radius=float(_require(section, "radius_m", "test_object")),
            separation=separations[0],
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"test_object: {exc}") from exc
    provider = SphereChannels(
        model, body.radius, body.angular_velocity, args.override_regime_guard
    )
    linearized = bool(config.get("linearized", True))

    def one(d):
        res = radiation_interaction(
            provider, test, body.angular_velocity, d, cfg,
            linearized=linearized,
            override_regime_guard=args.override_regime_guard,
        )
        return (d, body.angular_velocity, res.torque, res.shear_force)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(one, separations))
    else:
        rows = [one(d) for d in separations]
    rows.sort(key=lambda r: (r[0], r[1]))
    print("d_m, Omega_rad_s, M_Nm, Fy_N")
    for row in rows:
        print(", ".join(repr(v) for v in row))
    out = _resolve_out(args, config)
    if out is not None:
        if args.format == "csv":
            write_interaction_csv(out, rows)
        else:
            _write_json(
                out,
                [
                    {"d_m": d, "Omega_rad_s": w, "M_Nm": m, "Fy_N": f}
                    for d, w, m, f in rows
                ],
            )
        print(f"wrote {out}")
    return 0


def cmd_spindown(args) -> int:
    config = _load_config(args.config)
    body = _build_body(_require(config, "body", "config"))
    model = _build_material(_require(config, "material", "config"))
    cfg = _build_quadrature(config)
    section = _require(config, "spindown", "config")
    try:
        scenario = SpinDownScenario(
            body=body,
            moment_of_inertia=float(_require(section, "moment_of_inertia_kg_m2", "spindown")),
            model=model,
            omega0=float(
                section.get("initial_angular_velocity_rad_s", body.angular_velocity)
            ),
            t_end=float(_require(section, "t_end_s", "spindown")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"spindown: {exc}") from exc
    if body.kind == "cylinder":
        tau = spin_down_timescale(scenario)
        print(f"timescale estimate (I/hbar) c^3/(L R^2 Omega^3): {tau!r} s")
    trajectory = integrate_spin_down(
        scenario,
        cfg,
        samples=int(section.get("samples", 8192)),
        override_regime_guard=args.override_regime_guard,
    )
    if math.isnan(trajectory.t10):
        print("Omega did not fall to Omega0/10 within t_end")
    else:
        print(f"t10 (Omega -> Omega0/10): {trajectory.t10!r} s")
    print(
        f"final Omega({float(trajectory.t[-1])!r} s) = "
        f"{float(trajectory.omega[-1])!r} rad/s"
    )
    out = _resolve_out(args, config)
    if out is not None:
        if args.format == "csv":
            write_trajectory_csv(out, trajectory)
        else:
            _write_json(
                out,
                [
                    {"t_s": float(t), "Omega_rad_s": float(w), "P_W": float(p)}
                    for t, w, p in zip(trajectory.t, trajectory.omega, trajectory.power)
                ],
            )
        print(f"wrote {out}")
    return 0


def cmd_verify(args) -> int:
    checks = run_all()
    for check in checks:
        print(check.line())
    failed = [c for c in checks if not c.passed]
    if args.out is not None:
        _write_json(
            args.out,
            [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "measured": c.measured,
                    "threshold": c.threshold,
                    "detail": c.detail,
                }
                for c in checks
            ],
        )
        print(f"wrote {args.out}")
    if failed:
        print(f"{len(failed)} of {len(checks)} checks failed")
        return 3
    print(f"all {len(checks)} checks passed")
    return 0


def _print_constants() -> None:
    print(f"hbar = {HBAR!r} J s")
    print(f"c = {C!r} m / s")
    print(f"k_B = {K_B!r} J / K")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinrad",
        description="Spontaneous emission, spin-down and radiation forces of rotating bodies",
    )
    parser.add_argument(
        "--constants", action="store_true",
        help="print the compiled-in physical constants and exit",
    )
    sub = parser.add_subparsers(dest="command")
    for name, help_text in (
        ("power", "total radiated power and per-channel breakdown"),
        ("spectrum", "sampled photon/power spectra as CSV or JSON"),
        ("torque", "torque and shear force on a test object (separation sweep)"),
        ("spindown", "spin-down trajectory Omega(t) and timescale estimate"),
        ("verify", "run the built-in verification suites"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="scenario JSON document")
        p.add_argument("--out", help="output artifact path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument(
            "--override-regime-guard", action="store_true",
            help="proceed outside the small-radius validity regime",
        )
        p.add_argument("--threads", type=int, default=1)
    return parser


_COMMANDS = {
    "power": cmd_power,
    "spectrum": cmd_spectrum,
    "torque": cmd_torque,
    "spindown": cmd_spindown,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    if args.constants:
        _print_constants()
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except SpinradError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
