"""Command-line scenario runner.

    diracosc <scenario> [flags] [--config FILE] [--out DIR]

Each run writes ``series.csv`` and ``summary.json`` into ``--out``.  Values
resolve as flags > config file > scenario defaults, and the resolved
configuration is echoed into the summary.  Exit codes: 0 all checks pass,
2 configuration error, 3 tolerance failure (outputs still written),
4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import re
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np
from scipy.linalg import expm

from . import analytic, dynamics, fockspace, interferometer, model

log = logging.getLogger("diracosc")

EXIT_OK, EXIT_CONFIG, EXIT_TOLERANCE, EXIT_IO = 0, 2, 3, 4

SCENARIOS = ("spectrum", "zitterbewegung", "ramsey", "orbit", "mz-check", "series-convergence")

# tolerances applied by the in-run checks
TOL_SPECTRUM_REL = 1e-12
TOL_FORMULA = 1e-10
TOL_CONSERVED = 1e-12
TOL_NORM = 1e-10
TOL_MZ = 1e-12
TOL_SLOPE = 0.2

SERIES_XI_RANGE = (1e-4, 1e-2)


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    scenario: str
    xi: float = 0.1
    n_l: int = 3
    n_max: int = 20
    z_mag: float = 1.0
    z_phase: float = 0.0
    alpha_sq: float = 0.5
    beta_sq: Optional[float] = None
    alpha_phase: float = 0.0
    beta_phase: float = 0.0
    t0: float = 0.0
    t1: Optional[float] = None
    samples: int = 200
    cutoff_r: int = 0
    cutoff_l: int = 64
    hamiltonian: str = "exact"
    order: int = 1

    @property
    def z(self) -> complex:
        return self.z_mag * complex(math.cos(self.z_phase), math.sin(self.z_phase))

    @property
    def alpha(self) -> complex:
        return math.sqrt(self.alpha_sq) * complex(math.cos(self.alpha_phase), math.sin(self.alpha_phase))

    @property
    def beta(self) -> complex:
        b = math.sqrt(self.beta_sq)
        return b * complex(math.cos(self.beta_phase), math.sin(self.beta_phase))

    def params(self) -> model.ModelParams:
        return model.ModelParams(self.xi, self.cutoff_r, self.cutoff_l)


# fields each scenario reads, with scenario-specific default overrides
SCENARIO_FIELDS: dict[str, dict[str, Any]] = {
    "spectrum": {"xi": 0.1, "n_max": 20, "cutoff_r": 0, "cutoff_l": 64},
    "zitterbewegung": {
        "xi": 0.2, "n_l": 3, "t0": 0.0, "t1": None, "samples": 200,
        "cutoff_r": 0, "cutoff_l": 64, "hamiltonian": "exact", "order": 1,
    },
    "ramsey": {
        "xi": 0.01, "z_mag": 1.0, "z_phase": 0.0, "alpha_sq": 0.5, "beta_sq": None,
        "alpha_phase": 0.0, "beta_phase": 0.0, "t0": 0.0, "t1": None, "samples": 2001,
        "cutoff_r": 0, "cutoff_l": 64, "hamiltonian": "effective",
    },
    "orbit": {
        "xi": 0.01, "z_mag": 1.0, "z_phase": math.pi / 2, "alpha_sq": 0.5, "beta_sq": None,
        "alpha_phase": 0.0, "beta_phase": 0.0, "t0": 0.0, "t1": None, "samples": 200,
        "cutoff_r": 0, "cutoff_l": 64, "hamiltonian": "effective",
    },
    "mz-check": {"xi": 0.1, "n_l": 3, "t0": 0.0, "t1": 20.0, "samples": 200, "order": 1},
    "series-convergence": {"n_l": 1, "order": 2, "samples": 9},
}

AUTO_T1 = {
    "zitterbewegung": "one period pi/sqrt(1+4 xi n_l)",
    "ramsey": "one orbital period pi/xi",
    "orbit": "one orbital period pi/xi",
}

_PI_RE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(text: str) -> float:
    """Float, or a multiple of pi such as ``pi/2``, ``-3*pi/4``, ``0.5pi``."""
    m = _PI_RE.match(text)
    if m:
        coef = m.group(1)
        c = -1.0 if coef == "-" else 1.0 if coef in ("", "+") else float(coef)
        d = float(m.group(2)) if m.group(2) else 1.0
        return c * math.pi / d
    return float(text)


def _optional_float(text: str) -> Optional[float]:
    return None if text.strip().lower() in ("", "none", "auto") else float(text)


_CONVERTERS: dict[str, Callable[[str], Any]] = {
    "scenario": str, "xi": float, "n_l": int, "n_max": int, "z_mag": float,
    "z_phase": parse_angle, "alpha_sq": float, "beta_sq": _optional_float,
    "alpha_phase": parse_angle, "beta_phase": parse_angle, "t0": float,
    "t1": _optional_float, "samples": int, "cutoff_r": int, "cutoff_l": int,
    "hamiltonian": str, "order": int,
}


def read_config_file(path: Path) -> dict[str, Any]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out: dict[str, Any] = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _CONVERTERS[key](value)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    lines = ["scenario defaults:"]
    for name, defaults in SCENARIO_FIELDS.items():
        shown = ", ".join(
            f"{k.replace('_', '-')}={AUTO_T1[name] if k == 't1' and v is None and name in AUTO_T1 else v}"
            for k, v in defaults.items()
        )
        lines.append(f"  {name}: {shown}")
    lines.append("beta-sq defaults to 1 - alpha-sq; phases accept multiples of pi, e.g. pi/2.")
    p = argparse.ArgumentParser(
        prog="diracosc",
        description="Run a Dirac-oscillator scenario and write series.csv and summary.json.",
        epilog="\n".join(lines),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("scenario", nargs="?", choices=SCENARIOS, help="scenario to run")
    p.add_argument("--config", type=Path, help="key = value config file")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory (default: .)")
    p.add_argument("-v", "--verbose", action="store_true")
    for f in fields(ScenarioConfig):
        if f.name == "scenario":
            continue
        p.add_argument(
            "--" + f.name.replace("_", "-"),
            dest=f.name,
            type=_CONVERTERS[f.name],
            default=argparse.SUPPRESS,
            metavar=f.name.upper(),
        )
    return p


def parse_config(argv: list[str]) -> tuple[ScenarioConfig, argparse.Namespace]:
    """Resolve flags > config file > scenario defaults and validate."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            raise
        raise ConfigError("invalid command line (see --help)") from None
    flags = {k: v for k, v in vars(ns).items() if k in _CONVERTERS and k != "scenario"}
    from_file = read_config_file(ns.config) if ns.config else {}
    scenario = ns.scenario or from_file.pop("scenario", None)
    from_file.pop("scenario", None)
    if scenario is None:
        raise ConfigError("missing required field 'scenario' (positional or in the config file)")
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
    allowed = SCENARIO_FIELDS[scenario]
    for source, values in (("flag", flags), ("config key", from_file)):
        for key in values:
            if key not in allowed:
                raise ConfigError(f"{source} {key.replace('_', '-')!r} is not used by scenario {scenario!r}")
    values = {**allowed, **from_file, **flags}
    cfg = ScenarioConfig(scenario=scenario, **values)
    _validate(cfg)
    return cfg, ns


def _validate(cfg: ScenarioConfig) -> None:
    used = SCENARIO_FIELDS[cfg.scenario]
    if "xi" in used and not (math.isfinite(cfg.xi) and cfg.xi >= 0):
        raise ConfigError(f"xi must be finite and >= 0, got {cfg.xi}")
    if "cutoff_l" in used and cfg.cutoff_l < 1:
        raise ConfigError(f"cutoff-l must be >= 1, got {cfg.cutoff_l}")
    if "cutoff_r" in used and cfg.cutoff_r < 0:
        raise ConfigError(f"cutoff-r must be >= 0, got {cfg.cutoff_r}")
    if "n_max" in used and not 0 <= cfg.n_max <= cfg.cutoff_l:
        raise ConfigError(f"n-max must lie in 0..cutoff-l ({cfg.cutoff_l}), got {cfg.n_max}")
    if "n_l" in used:
        hi = cfg.cutoff_l if "cutoff_l" in used else 10**9
        if not 1 <= cfg.n_l <= hi:
            raise ConfigError(f"n-l must lie in 1..{hi}, got {cfg.n_l}")
    if "samples" in used and cfg.samples < 2:
        raise ConfigError(f"samples must be >= 2, got {cfg.samples}")
    if "hamiltonian" in used and cfg.hamiltonian not in ("exact", "effective"):
        raise ConfigError(f"hamiltonian must be 'exact' or 'effective', got {cfg.hamiltonian!r}")
    if "order" in used and not 0 <= cfg.order <= interferometer.MAX_SERIES_ORDER:
        raise ConfigError(f"order must lie in 0..{interferometer.MAX_SERIES_ORDER}, got {cfg.order}")
    if "alpha_sq" in used:
        if not 0.0 <= cfg.alpha_sq <= 1.0:
            raise ConfigError(f"alpha-sq must lie in [0, 1], got {cfg.alpha_sq}")
        if cfg.beta_sq is None:
            cfg.beta_sq = 1.0 - cfg.alpha_sq
        elif abs(cfg.alpha_sq + cfg.beta_sq - 1.0) > 1e-12:
            raise ConfigError(
                f"spinor weights not normalized: alpha-sq + beta-sq = {cfg.alpha_sq + cfg.beta_sq}"
            )
    if "t1" in used:
        if cfg.t1 is None:
            cfg.t1 = _auto_t1(cfg)
        if not cfg.t1 > cfg.t0:
            raise ConfigError(f"need t1 > t0, got t0={cfg.t0}, t1={cfg.t1}")
    if cfg.scenario in ("ramsey", "orbit"):
        if cfg.xi == 0:
            raise ConfigError("ramsey/orbit need xi > 0")
        if cfg.z_mag < 0:
            raise ConfigError(f"z-mag must be >= 0, got {cfg.z_mag}")
        need = fockspace.required_cutoff(cfg.z_mag)
        if cfg.z_mag**2 > cfg.cutoff_l / 4 or cfg.cutoff_l < need:
            raise ConfigError(f"z-mag {cfg.z_mag} needs cutoff-l >= {max(need, math.ceil(4 * cfg.z_mag**2))}")


def _auto_t1(cfg: ScenarioConfig) -> float:
    if cfg.scenario == "zitterbewegung":
        return cfg.t0 + math.pi / math.sqrt(1 + 4 * cfg.xi * cfg.n_l)
    return cfg.t0 + math.pi / cfg.xi


@dataclass
class RunResult:
    columns: list[str]
    rows: list[list[float]]
    derived: dict[str, Any] = field(default_factory=dict)
    checks: list[dict[str, Any]] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)

    def check(self, name: str, value: float, tolerance: float) -> None:
        self.checks.append(
            {"name": name, "value": float(value), "tolerance": tolerance, "passed": bool(value < tolerance)}
        )


def _grid(cfg: ScenarioConfig) -> dynamics.TimeGrid:
    return dynamics.TimeGrid(cfg.t0, cfg.t1, cfg.samples)


def _series_rows(series, extra: dict[str, np.ndarray]) -> tuple[list[str], list[list[float]]]:
    cols = dynamics.series_columns(series)
    names = list(dynamics.COLUMNS) + list(extra)
    data = [cols[n] for n in dynamics.COLUMNS] + list(extra.values())
    return names, [list(r) for r in zip(*data)]


def run_spectrum(cfg: ScenarioConfig) -> RunResult:
    lines = model.exact_spectrum(cfg.params(), cfg.n_max)
    rows = [[ln.n_l, ln.analytic, ln.numeric, ln.gap] for ln in lines]
    res = RunResult(["n_l", "E_analytic", "E_numeric", "gap"], rows)
    rel = max(ln.gap / abs(ln.analytic) for ln in lines)
    res.check("spectrum_max_relative_gap", rel, TOL_SPECTRUM_REL)
    res.derived = {"E_n_max": analytic.exact_energy(cfg.xi, cfg.n_max)}
    return res


def run_zitterbewegung(cfg: ScenarioConfig) -> RunResult:
    p = cfg.params()
    H = model.ajc_hamiltonian(p) if cfg.hamiltonian == "exact" else model.effective_nr_hamiltonian(p)
    psi0 = dynamics.zitterbewegung_initial_state(p, cfg.n_l)
    grid = _grid(cfg)
    t = grid.times()
    series = dynamics.observable_series(psi0, H, grid)
    lz_ex, sz_ex, _ = analytic.zb_exact(cfg.xi, cfg.n_l, t)
    lz_fo, sz_fo, _ = analytic.zb_first_order(cfg.xi, cfg.n_l, t)
    lz_avg, sz_avg, _ = analytic.zb_time_avg(cfg.xi, cfg.n_l)
    extra = {
        "Sz_exact_formula": sz_ex,
        "Sz_first_order": sz_fo,
        "Lz_exact_formula": lz_ex,
        "Lz_first_order": lz_fo,
        "Lz_time_avg": np.full_like(t, lz_avg),
        "Lz_baseline": np.full_like(t, -(cfg.n_l - 1.0)),
    }
    names, rows = _series_rows(series, extra)
    res = RunResult(names, rows)
    cols = dynamics.series_columns(series)
    if cfg.hamiltonian == "exact":
        res.check("max_abs_Sz_minus_formula", np.abs(cols["Sz"] - sz_ex).max(), TOL_FORMULA)
        res.check("max_abs_Lz_minus_formula", np.abs(cols["Lz"] - lz_ex).max(), TOL_FORMULA)
    else:
        lz_s, sz_s, _ = analytic.mixed_state_statics(cfg.n_l, 0.0, 1.0)
        res.check("max_abs_Sz_minus_static", np.abs(cols["Sz"] - sz_s).max(), TOL_FORMULA)
        res.check("max_abs_Lz_minus_static", np.abs(cols["Lz"] - lz_s).max(), TOL_FORMULA)
    res.check("Jz_drift", np.abs(cols["Jz"] - cols["Jz"][0]).max(), TOL_CONSERVED)
    res.check("norm_deviation", np.abs(cols["norm"] - 1).max(), TOL_NORM)
    x = cfg.xi * cfg.n_l
    f = interferometer.mz_factorize(cfg.xi, cfg.n_l)
    res.derived = {
        "eta": f.eta,
        "theta": f.theta,
        "E_n": f.energy,
        "zb_amplitude": analytic.zb_amplitude(cfg.xi, cfg.n_l),
        "visibility_first_order": analytic.first_order_visibility(cfg.xi, cfg.n_l),
        "Sz_time_avg_first_order": sz_avg,
        "Lz_time_avg_first_order": lz_avg,
    }
    if x < interferometer.CONVERGENCE_RADIUS:
        pert = dynamics.series_columns(interferometer.first_order_series(cfg.xi, cfg.n_l, grid, cfg.order))
        res.derived["visibility_measured_series"] = interferometer.visibility(pert["Sz"])
    return res


def _ramsey_common(cfg: ScenarioConfig):
    p = cfg.params()
    grid = _grid(cfg)
    series = dynamics.ramsey_run(cfg.z, cfg.alpha, cfg.beta, p, grid, cfg.hamiltonian)
    rp = analytic.RamseyParams(cfg.z, cfg.alpha, cfg.beta, cfg.xi)
    return grid.times(), series, rp


def _ramsey_derived(cfg: ScenarioConfig, rp: analytic.RamseyParams) -> dict[str, Any]:
    return {
        "Omega0": rp.omega0,
        "Omega1": rp.omega1,
        "visibility_t0": float(analytic.ramsey_envelope(rp, 0.0)),
        "orbital_period": math.pi / cfg.xi,
    }


def run_ramsey(cfg: ScenarioConfig) -> RunResult:
    t, series, rp = _ramsey_common(cfg)
    sx_th = analytic.ramsey_sx(rp, t)
    env = analytic.ramsey_envelope(rp, t)
    names, rows = _series_rows(series, {"Sx_analytic": sx_th, "visibility": env})
    res = RunResult(names, rows, derived=_ramsey_derived(cfg, rp))
    cols = dynamics.series_columns(series)
    gap = float(np.abs(cols["Sx"] - sx_th).max())
    if cfg.hamiltonian == "effective":
        res.check("max_abs_Sx_minus_formula", gap, TOL_FORMULA)
    else:
        # no closed form for the exact Hamiltonian; report only
        res.info["max_abs_Sx_minus_effective_formula"] = gap
    res.check("norm_deviation", np.abs(cols["norm"] - 1).max(), TOL_NORM)
    return res


def run_orbit(cfg: ScenarioConfig) -> RunResult:
    t, series, rp = _ramsey_common(cfg)
    cols = dynamics.series_columns(series)
    x_th, y_th = analytic.orbit(rp, t)
    r = max(cfg.z_mag, np.finfo(float).tiny)
    names = ["t", "x", "y", "x_analytic", "y_analytic", "x_scaled", "y_scaled", "norm"]
    data = [t, cols["x"], cols["y"], x_th, y_th, cols["x"] / r, cols["y"] / r, cols["norm"]]
    res = RunResult(names, [list(row) for row in zip(*data)], derived=_ramsey_derived(cfg, rp))
    gap = float(max(np.abs(cols["x"] - x_th).max(), np.abs(cols["y"] - y_th).max()))
    if cfg.hamiltonian == "effective":
        res.check("max_abs_orbit_minus_formula", gap, TOL_FORMULA)
    else:
        res.info["max_abs_orbit_minus_effective_formula"] = gap
    res.check("norm_deviation", np.abs(cols["norm"] - 1).max(), TOL_NORM)
    res.derived.update(
        {
            "max_abs_x": float(np.abs(cols["x"]).max()),
            "max_abs_y": float(np.abs(cols["y"]).max()),
            "semi_axis_x_analytic": abs(cfg.z_mag * (cfg.alpha_sq - cfg.beta_sq) * math.sin(cfg.z_phase))
            + abs(cfg.z_mag * math.cos(cfg.z_phase)),
        }
    )
    return res


def run_mz_check(cfg: ScenarioConfig) -> RunResult:
    f = interferometer.mz_factorize(cfg.xi, cfg.n_l)
    h = model.subspace_block(model.ModelParams(cfg.xi), cfg.n_l).h
    in_disc = cfg.xi * cfg.n_l < interferometer.CONVERGENCE_RADIUS
    rows = []
    gaps = []
    for t in _grid(cfg).times():
        oracle = expm(-1j * h * t)
        gap = float(np.linalg.norm(f.product(t) - oracle, 2))
        gaps.append(gap)
        pert = (
            float(np.linalg.norm(interferometer.perturbative_U(cfg.xi, cfg.n_l, t, cfg.order) - oracle, 2))
            if in_disc
            else float("nan")
        )
        rows.append([t, gap, pert])
    res = RunResult(["t", "mz_gap", "series_residual"], rows)
    res.check("max_mz_operator_norm_gap", max(gaps), TOL_MZ)
    res.derived = {"eta": f.eta, "theta": f.theta, "E_n": f.energy}
    return res


def series_residuals(n_l: int, order: int, points: int) -> tuple[np.ndarray, np.ndarray]:
    """Max over one dephasing cycle of ||U_series - U_exact|| against xi*n_l."""
    xs = np.logspace(math.log10(SERIES_XI_RANGE[0]), math.log10(SERIES_XI_RANGE[1]), points)
    ts = np.linspace(0.0, math.pi, 65)
    res = []
    for x in xs:
        xi = x / n_l
        res.append(
            max(
                np.linalg.norm(
                    interferometer.perturbative_U(xi, n_l, t, order) - interferometer.exact_U(xi, n_l, t), 2
                )
                for t in ts
            )
        )
    return xs, np.array(res)


def run_series_convergence(cfg: ScenarioConfig) -> RunResult:
    xs, resid = series_residuals(cfg.n_l, cfg.order, cfg.samples)
    slope = float(np.polyfit(np.log(xs), np.log(resid), 1)[0])
    res = RunResult(["xi_n", "residual"], [[x, r] for x, r in zip(xs, resid)])
    expected = (cfg.order + 1) / 2
    res.check("slope_abs_deviation", abs(slope - expected), TOL_SLOPE)
    res.derived = {
        "fitted_slope": slope,
        "expected_slope": expected,
        "coefficients": [
            {"order": t.order, "kind": t.kind.value, "coefficient": str(t.coefficient)}
            for t in interferometer.series_coefficients(max(cfg.order, 8))
        ],
    }
    return res


RUNNERS = {
    "spectrum": run_spectrum,
    "zitterbewegung": run_zitterbewegung,
    "ramsey": run_ramsey,
    "orbit": run_orbit,
    "mz-check": run_mz_check,
    "series-convergence": run_series_convergence,
}


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return f"{float(v):.16e}"


def write_outputs(out_dir: Path, cfg: ScenarioConfig, res: RunResult, wall: float) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "series.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(res.columns)
        for row in res.rows:
            w.writerow([_fmt(v) for v in row])
    summary = {
        "scenario": cfg.scenario,
        "config": asdict(cfg),
        "derived": res.derived,
        "checks": res.checks,
        "info": res.info,
        "passed": all(c["passed"] for c in res.checks),
        "wall_time_s": wall,
    }
    with open(out_dir / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, allow_nan=True)
        fh.write("\n")


def run(cfg: ScenarioConfig, out_dir: Path) -> int:
    start = time.perf_counter()
    res = RUNNERS[cfg.scenario](cfg)
    wall = time.perf_counter() - start
    try:
        write_outputs(out_dir, cfg, res, wall)
    except OSError as exc:
        log.error("cannot write outputs to %s: %s", out_dir, exc)
        return EXIT_IO
    for c in res.checks:
        log.info("%s %s = %.3e (tol %.1e)", "PASS" if c["passed"] else "FAIL", c["name"], c["value"], c["tolerance"])
    return EXIT_OK if all(c["passed"] for c in res.checks) else EXIT_TOLERANCE


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg, ns = parse_config(argv)
    except ConfigError as exc:
        print(f"diracosc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(message)s")
    try:
        return run(cfg, ns.out)
    except ValueError as exc:
        print(f"diracosc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
