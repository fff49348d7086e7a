"""Command line front end.

All quantities are in normalized units: cavity detunings and frequencies in
units of the cavity decay rate kappa, intensities rescaled by 4 C epsilon.
"""
from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, NoConvergence
from .scenario import (
    PRESET_GROUPS,
    PRESETS,
    ScenarioConfig,
    config_from_mapping,
    emit_csv,
    preset_config,
    read_config_file,
    run_scenario,
    verify,
    verify_passed,
    verify_rows,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NOCONV, EXIT_IO = 0, 1, 2, 3, 4

KEYS_HELP = """configuration keys (file lines `key = value`, or --set key=value):
  epsilon           atomic detuning in units of gamma_w (default 0.0625)
  cooperativity     C = g^2 N / (gamma_w kappa) (default 250)
  gamma_over_kappa  gamma/kappa, must be >= 5 for fluctuations (default 10)
  theta1, theta2    cavity detunings in units of kappa (default 0)
  Y                 rescaled common input intensity |y|^2/(4 C epsilon)
  y_grid            grid of Y, `start:stop:num` or comma list
  theta_grid        grid of theta1 = theta2
  omega_grid        grid of omega/kappa
  branch            SymmetricPlus | SymmetricMinus | AsymmetricA | AsymmetricB
  meter_field       1 or 2 (the other field is the signal)
  allow_bad_cavity  run fluctuations even when gamma/kappa < 5
  out_dir           directory for CSV and manifest files

exit codes: 0 ok, 1 verification failed, 2 bad configuration,
            3 no convergence, 4 I/O error"""


def _overrides(pairs) -> dict[str, str]:
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a configuration key")
    p.add_argument("--out-dir", help="output directory (overrides out_dir)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eitcav",
        description="Steady states, stability and quantum fluctuations of two cavity modes "
                    "coupled to Lambda atoms near EIT.",
        epilog=KEYS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("steady", "steady states at (Y, theta1, theta2)"),
                       ("scan-cavity", "steady states across a cavity scan"),
                       ("scan-input", "steady states versus input intensity"),
                       ("spectra", "squeezing spectra of the output fields"),
                       ("qnd", "QND coefficients of the output fields")):
        _add_common(sub.add_parser(name, help=text, epilog=KEYS_HELP,
                                   formatter_class=argparse.RawDescriptionHelpFormatter))
    pp = sub.add_parser("preset", help="reproduce figure data")
    pp.add_argument("name", choices=sorted(set(PRESET_GROUPS) | set(PRESETS)))
    _add_common(pp)
    pv = sub.add_parser("verify", help="compare numerics with the closed-form results")
    _add_common(pv)
    return parser


def _configs(args) -> list[ScenarioConfig]:
    values = read_config_file(args.config) if args.config else {}
    values.update(_overrides(args.set))
    if args.out_dir:
        values["out_dir"] = args.out_dir
    if args.command == "preset":
        values.pop("scenario", None)
        names = PRESET_GROUPS.get(args.name, (args.name,))
        return [preset_config(n, values) for n in names]
    values["scenario"] = args.command
    return [config_from_mapping(values)]


def _verify(args) -> int:
    values = read_config_file(args.config) if args.config else {}
    values.update(_overrides(args.set))
    if args.out_dir:
        values["out_dir"] = args.out_dir
    cfg = config_from_mapping(values)
    cfg.validate()
    reports = verify(cfg.params().with_theta(0.0, 0.0))
    width = max(len(r.quantity) for r in reports)
    for r in reports:
        print(f"{r.quantity:<{width}}  {r.analytic: .12g}  {r.numeric: .12g}  {r.abs_dev:.2e}")
    if args.out_dir or "out_dir" in values:
        from pathlib import Path

        emit_csv(verify_rows(reports), "verify", Path(cfg.out_dir) / "verify.csv")
    ok = verify_passed(reports)
    print("verify: " + ("all deviations below 1e-8" if ok else "FAILED"))
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        for cfg in _configs(args):
            manifest = run_scenario(cfg)
            for w in manifest.warnings:
                print(f"warning: {w}", file=sys.stderr)
            for art in manifest.artifacts:
                print(f"{cfg.out_dir}/{art['path']}  sha256={art['sha256']}")
            if manifest.partial:
                return EXIT_NOCONV
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
