"""Scenario configuration, figure presets, oracle verification and CSV output."""
from __future__ import annotations

import configparser
import csv
import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import oracles
from .continuation import (
    Branch,
    drift_matrix,
    find_turning_point,
    solve_steady,
    steady_at,
    sweep_cavity_scan,
    sweep_input_intensity,
)
from .errors import ConfigError, DomainError, NoConvergence
from .fluctuations import QuadratureSpec, best_squeezing, qnd_coefficients, spectra, squeezing_spectrum, worst_squeezing
from .model import (
    ASYMMETRIC_A,
    BRANCH_ORDER,
    STABLE,
    SYMMETRIC_PLUS,
    DriveSpec,
    ModelParams,
    analytic_drive,
    analytic_steady_theta0,
)

SCENARIOS = ("steady", "scan-cavity", "scan-input", "spectra", "qnd")

SCHEMAS = {
    "steady": ("branch", "theta1", "theta2", "Y", "I1", "I2",
               "phase_in1", "phase_in2", "phase_out1", "phase_out2", "stable"),
    "scan-input": ("Y", "I1", "I2", "branch", "stable"),
    "scan-cavity": ("theta", "branch", "I1", "I2", "stable"),
    "spectra": ("omega", "field", "phi_star", "S_best", "S_amp"),
    "qnd": ("omega", "Cs", "Cm", "Vsm"),
    "squeeze-scan": ("theta", "branch", "field", "phi_star", "S_best", "S_amp"),
    "qnd-scan": ("theta", "branch", "Cs", "Cm", "Vsm"),
    "verify": ("quantity", "formula", "analytic", "numeric", "abs_dev", "rel_dev"),
}

VERIFY_TOL = 1e-8


@dataclass
class ScenarioConfig:
    """One run.  Grids are stored as tuples of floats, in the order given."""

    scenario: str = "steady"
    epsilon: float = 0.0625
    cooperativity: float = 250.0
    gamma_over_kappa: float = 10.0
    theta1: float = 0.0
    theta2: float = 0.0
    Y: float = 1.05
    y_grid: tuple[float, ...] | None = None
    theta_grid: tuple[float, ...] | None = None
    omega_grid: tuple[float, ...] = (0.0,)
    branch: str | None = None
    meter_field: int = 1
    allow_bad_cavity: bool = False
    out_dir: str = "."
    name: str | None = None

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        for key in ("y_grid", "theta_grid", "omega_grid"):
            g = getattr(self, key)
            if g is None:
                continue
            if len(g) == 0 or not all(math.isfinite(v) for v in g):
                raise ConfigError(f"{key} must be a nonempty list of finite numbers")
            d = np.diff(g)
            if len(g) > 1 and not (np.all(d > 0) or np.all(d < 0)):
                raise ConfigError(f"{key} must be strictly monotone")
        if self.scenario == "scan-input" and self.y_grid is None:
            raise ConfigError("scan-input needs y_grid")
        if self.scenario == "scan-cavity" and self.theta_grid is None:
            raise ConfigError("scan-cavity needs theta_grid")
        if self.theta_grid is not None and self.scenario in ("spectra", "qnd") and len(self.omega_grid) != 1:
            raise ConfigError("a theta scan of spectra or qnd takes a single omega")
        if self.meter_field not in (1, 2):
            raise ConfigError("meter_field must be 1 or 2")
        if self.branch is not None and self.branch not in BRANCH_ORDER:
            raise ConfigError(f"unknown branch {self.branch!r}")
        try:
            self.params()
            DriveSpec(self.Y)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    def params(self) -> ModelParams:
        return ModelParams(self.epsilon, self.cooperativity, self.theta1, self.theta2, self.gamma_over_kappa)

    @property
    def run_name(self) -> str:
        return self.name or self.scenario

    def echo(self) -> dict:
        d = asdict(self)
        for key in ("y_grid", "theta_grid", "omega_grid"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d


@dataclass
class ResultManifest:
    config: dict
    artifacts: list[dict] = field(default_factory=list)
    solver: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    partial: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


# ---------------------------------------------------------------- config parsing

_FIELD_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


def parse_grid(text: str) -> tuple[float, ...]:
    """``start:stop:num`` (inclusive, evenly spaced) or a comma separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid {text!r} must read start:stop:num")
        try:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"bad grid {text!r}") from exc
        if n < 1:
            raise ConfigError("grid needs at least one point")
        return tuple(float(v) for v in np.linspace(a, b, n))
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}") from exc


def _convert(key: str, raw: str):
    if key in ("y_grid", "theta_grid", "omega_grid"):
        return parse_grid(raw)
    if key in ("scenario", "out_dir", "name"):
        return raw.strip()
    if key == "branch":
        raw = raw.strip()
        return None if raw.lower() in ("", "none", "auto") else raw
    if key == "meter_field":
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"meter_field must be an integer, got {raw!r}") from exc
    if key == "allow_bad_cavity":
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"allow_bad_cavity must be a boolean, got {raw!r}")
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got {raw!r}") from exc


def config_from_mapping(values: dict[str, str], base: ScenarioConfig | None = None) -> ScenarioConfig:
    cfg = ScenarioConfig(**asdict(base)) if base is not None else ScenarioConfig()
    for key, raw in values.items():
        if key not in _FIELD_TYPES or key == "name":
            raise ConfigError(f"unknown configuration key {key!r}")
        setattr(cfg, key, _convert(key, raw))
    return cfg


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    """Read a flat ``key = value`` file (``#`` starts a comment)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    parser.optionxform = str
    text = Path(path).read_text()
    try:
        parser.read_string("[scenario]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return dict(parser["scenario"])


# ---------------------------------------------------------------- presets

_FIG_OMEGA = "0:5:501"
_FIG_THETA = "-0.01:0.01:2001"

PRESETS = {
    "fig2": {"scenario": "scan-input", "y_grid": "0:2:2001"},
    "fig3-top": {"scenario": "scan-cavity", "Y": "1.05", "theta_grid": _FIG_THETA},
    "fig3-bottom": {"scenario": "scan-cavity", "Y": "0.95", "theta_grid": _FIG_THETA},
    "fig4-top": {"scenario": "spectra", "Y": "1.05", "theta_grid": _FIG_THETA, "omega_grid": "0"},
    "fig4-bottom": {"scenario": "qnd", "Y": "0.95", "theta_grid": _FIG_THETA, "omega_grid": "0"},
    "fig5-top": {"scenario": "spectra", "Y": "1.05", "theta1": "0.0013", "theta2": "0.0013",
                 "omega_grid": _FIG_OMEGA, "branch": SYMMETRIC_PLUS},
    "fig5-bottom": {"scenario": "qnd", "Y": "0.95", "theta1": "0.0018", "theta2": "0.0018",
                    "omega_grid": _FIG_OMEGA, "branch": ASYMMETRIC_A, "meter_field": "1"},
}
PRESET_GROUPS = {
    "fig2": ("fig2",),
    "fig3": ("fig3-top", "fig3-bottom"),
    "fig4": ("fig4-top", "fig4-bottom"),
    "fig5": ("fig5-top", "fig5-bottom"),
}


def preset_config(name: str, overrides: dict[str, str] | None = None) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    cfg = config_from_mapping(PRESETS[name])
    if overrides:
        cfg = config_from_mapping(overrides, cfg)
    cfg.name = name
    return cfg


# ---------------------------------------------------------------- output

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def emit_csv(rows, schema: str, path: str | os.PathLike) -> str:
    """Write ``rows`` (sequences in schema column order) and return the file's sha256."""
    columns = SCHEMAS[schema]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"row of length {len(row)} does not match schema {schema!r}")
            writer.writerow([_fmt(v) for v in row])
    return hashlib.sha256(path.read_bytes()).hexdigest()


# ---------------------------------------------------------------- computations

def _branch_key(label: str) -> int:
    return BRANCH_ORDER.index(label) if label in BRANCH_ORDER else len(BRANCH_ORDER)


def _branch_stats(branches: list[Branch]) -> list[dict]:
    return [{"branch": b.label, "parameter": b.parameter, "points": len(b), "steps": b.steps,
             "retries": b.retries, "failures": b.failures} for b in branches]


def _default_branch(Y: float) -> str:
    return SYMMETRIC_PLUS if Y >= 1 else ASYMMETRIC_A


def _scan_input(cfg, manifest):
    params = cfg.params()
    if params.theta1 != 0 or params.theta2 != 0:
        raise ConfigError("scan-input runs at theta1 = theta2 = 0")
    skipped = [y for y in cfg.y_grid if y <= 0]
    if skipped:
        manifest.warnings.append(f"no steady state at Y <= 0; skipped {len(skipped)} grid point(s)")
    branches = sweep_input_intensity(params, cfg.y_grid)
    rows = []
    for b in branches:
        for Y, s in zip(b.values, b.states):
            rows.append((Y, s.I1, s.I2, b.label, s.stability == STABLE))
    sign = 1 if cfg.y_grid[-1] >= cfg.y_grid[0] else -1
    rows.sort(key=lambda r: (sign * r[0], _branch_key(r[3])))
    return rows, branches


def _scan_cavity(cfg, manifest):
    params = cfg.params()
    branches = sweep_cavity_scan(params, DriveSpec(cfg.Y), cfg.theta_grid)
    rows = []
    for b in branches:
        for th, s in zip(b.values, b.states):
            rows.append((th, b.label, s.I1, s.I2, s.stability == STABLE))
    sign = 1 if cfg.theta_grid[-1] >= cfg.theta_grid[0] else -1
    rows.sort(key=lambda r: (sign * r[0], _branch_key(r[1])))
    return rows, branches


def _steady(cfg, manifest):
    params = cfg.params()
    base = params.with_theta(0.0, 0.0)
    rows = []
    for seed in analytic_steady_theta0(cfg.Y, base):
        try:
            s = steady_at(params, cfg.Y, seed.branch)
        except NoConvergence as exc:
            manifest.warnings.append(str(exc))
            manifest.partial = True
            continue
        rows.append((s.branch, params.theta1, params.theta2, cfg.Y, s.I1, s.I2,
                     s.phases_in[0], s.phases_in[1], s.phases_out[0], s.phases_out[1],
                     s.stability == STABLE))
    return rows, []


def _stable_scan_states(cfg, manifest):
    """(theta, branch, state, params) for stable states along the configured theta scan."""
    params = cfg.params()
    branches = sweep_cavity_scan(params, DriveSpec(cfg.Y), cfg.theta_grid)
    out = []
    for b in branches:
        if cfg.branch is not None and b.label != cfg.branch:
            continue
        for th, s in zip(b.values, b.states):
            if s.stability == STABLE:
                out.append((th, b.label, s, params.with_theta(th)))
    sign = 1 if cfg.theta_grid[-1] >= cfg.theta_grid[0] else -1
    out.sort(key=lambda r: (sign * r[0], _branch_key(r[1])))
    return out, branches


def _spectra(cfg, manifest):
    if cfg.theta_grid is not None:
        states, branches = _stable_scan_states(cfg, manifest)
        rows = []
        for th, label, s, p in states:
            A = drift_matrix(s, p)
            for j in (1, 2):
                phi, sb = best_squeezing(s, A, j, cfg.omega_grid[0], cfg.allow_bad_cavity)
                samp = squeezing_spectrum(s, A, QuadratureSpec(j, 0.0), cfg.omega_grid[0], cfg.allow_bad_cavity)
                rows.append((th, label, j, phi, sb, samp))
        return rows, branches, "squeeze-scan"
    params = cfg.params()
    label = cfg.branch or _default_branch(cfg.Y)
    s = steady_at(params, cfg.Y, label)
    if s.stability != STABLE:
        raise DomainError(f"branch {label} is {s.stability} at the requested point")
    res = spectra(s, drift_matrix(s, params), cfg.omega_grid, allow_bad_cavity=cfg.allow_bad_cavity)
    rows = []
    for k, om in enumerate(res.omega):
        for j in (1, 2):
            rows.append((om, j, res.phi_star[j][k], res.S_best[j][k], res.S_amp[j][k]))
    return rows, [], "spectra"


def _qnd(cfg, manifest):
    if cfg.theta_grid is not None:
        states, branches = _stable_scan_states(cfg, manifest)
        rows = []
        for th, label, s, p in states:
            Cs, Cm, V = qnd_coefficients(s, drift_matrix(s, p), cfg.meter_field, cfg.omega_grid[0],
                                         cfg.allow_bad_cavity)
            rows.append((th, label, Cs, Cm, V))
        return rows, branches, "qnd-scan"
    params = cfg.params()
    label = cfg.branch or _default_branch(cfg.Y)
    s = steady_at(params, cfg.Y, label)
    if s.stability != STABLE:
        raise DomainError(f"branch {label} is {s.stability} at the requested point")
    A = drift_matrix(s, params)
    rows = [(om, *qnd_coefficients(s, A, cfg.meter_field, om, cfg.allow_bad_cavity)) for om in cfg.omega_grid]
    return rows, [], "qnd"


def run_scenario(config: ScenarioConfig) -> ResultManifest:
    """Run one scenario, write ``<name>.csv`` and ``<name>.manifest.json`` into ``out_dir``."""
    config.validate()
    manifest = ResultManifest(config=config.echo())
    manifest.warnings.extend(config.params().validity_warnings)
    try:
        if config.scenario == "scan-input":
            rows, branches = _scan_input(config, manifest)
            schema = "scan-input"
        elif config.scenario == "scan-cavity":
            rows, branches = _scan_cavity(config, manifest)
            schema = "scan-cavity"
        elif config.scenario == "steady":
            rows, branches = _steady(config, manifest)
            schema = "steady"
        elif config.scenario == "spectra":
            rows, branches, schema = _spectra(config, manifest)
        else:
            rows, branches, schema = _qnd(config, manifest)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    manifest.solver = {"schema": schema, "rows": len(rows), "branches": _branch_stats(branches)}
    for b in branches:
        if b.truncated:
            manifest.warnings.append(f"branch {b.label} truncated at {b.parameter} = {b.failures[0]!r}")

    out = Path(config.out_dir)
    csv_path = out / f"{config.run_name}.csv"
    digest = emit_csv(rows, schema, csv_path)
    manifest.artifacts.append({"path": csv_path.name, "sha256": digest})
    (out / f"{config.run_name}.manifest.json").write_text(manifest.to_json() + "\n")
    return manifest


# ---------------------------------------------------------------- verification

def verify(params: ModelParams | None = None) -> list[oracles.OracleReport]:
    """Compare numerical results against the closed forms."""
    params = params or ModelParams(0.0625, 250.0)
    base = params.with_theta(0.0, 0.0)
    R = oracles.OracleReport
    reports = []

    for Y in (0.5, 0.95, 1.05, 2.0):
        orc = oracles.oracle_steady(Y)
        for seed, (I1, I2) in zip(analytic_steady_theta0(Y, base), orc.solutions):
            guess = (seed.x1 * 1.02 + 0.01j, seed.x2 * 0.98 - 0.01j)
            s = solve_steady(base, analytic_drive(Y, seed), guess, seed.branch)
            reports.append(R(f"I1 {seed.branch} Y={Y:g}", "universal steady intensity", I1, s.I1))
            reports.append(R(f"I2 {seed.branch} Y={Y:g}", "universal steady intensity", I2, s.I2))

    fold = find_turning_point(base)
    reports.append(R("fold Y*", "turning point Y = 1", 1.0, fold.Y))
    reports.append(R("fold I*", "turning point I = 1/2", 0.5, fold.state.I1))

    plus = next(s for s in analytic_steady_theta0(1.05, base) if s.branch == SYMMETRIC_PLUS)
    A = drift_matrix(plus, base)
    ev_num = np.sort(np.linalg.eigvals(A.block(1, 1)).real)
    ev_orc = np.sort(np.linalg.eigvals(oracles.oracle_two_photon_drift(plus.I1)).real)
    for k in range(2):
        reports.append(R(f"two-photon eigenvalue {k}", "-1 -+ 1/(2I)", ev_orc[k], ev_num[k]))
    for om in (0.0, 0.5, 1.0, 2.0, 5.0):
        reports.append(R(f"S_best Y=1.05 w={om:g}", "1 - 4a/((1+a)^2 + w^2)",
                         oracles.oracle_sbest(plus.I1, om), best_squeezing(plus, A, 1, om)[1]))
    sb, sw = best_squeezing(plus, A, 1, 0.0)[1], worst_squeezing(plus, A, 1, 0.0)[1]
    reports.append(R("S_best*S_worst Y=1.05 w=0", "minimum uncertainty", 1.0, sb * sw))

    for Y in (0.8, 0.9, 0.95, 0.99):
        a_state = next(s for s in analytic_steady_theta0(Y, base) if s.branch == ASYMMETRIC_A)
        A = drift_matrix(a_state, base)
        s_int, s_ph, v = oracles.oracle_qnd_zero_freq(Y)
        reports.append(R(f"S_int Y={Y:g}", "1", s_int, squeezing_spectrum(a_state, A, QuadratureSpec(2, 0.0), 0.0)))
        reports.append(R(f"S_phase Y={Y:g}", "-3 + 4/eta^2", s_ph,
                         squeezing_spectrum(a_state, A, QuadratureSpec(2, 0.5 * math.pi), 0.0)))
        reports.append(R(f"Vsm Y={Y:g}", "eta^2/(4 - 3 eta^2)", v, qnd_coefficients(a_state, A, 1, 0.0)[2]))
    return reports


def verify_rows(reports) -> list[tuple]:
    return [(r.quantity, r.formula, r.analytic, r.numeric, r.abs_dev, r.rel_dev) for r in reports]


def verify_passed(reports, tol: float = VERIFY_TOL) -> bool:
    return all(r.abs_dev < tol for r in reports)
