"""Replication presets, parameter sweeps, CSV persistence and config parsing.

Each preset freezes one sweep behind the paper-replication figures: the
closed-economy loss/bias curves over the sectoral weight (and over the
natural relative-price persistence), the inflation-equivalent surface, and
the open-economy sweeps over sector sizes and relative stickiness.  Sweep
evaluation is per-point pure, so grid points may be farmed out to a process
pool; rows always come back in grid order and CSV output is byte-stable.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .models import (
    InvalidParamsError,
    LiuPappaParams,
    WoodfordParams,
    build_liu_pappa,
    build_woodford,
    param_names,
)
from .numerics import NonConvergenceError, SolverError
from .solvers import optimize_rule, solve_commitment, solve_discretion, solve_rule
from .lre_core import IndeterminacyError, NoStableSolutionError
from .welfare import inflation_equivalent, stabilisation_bias, unconditional_loss

THREADS_ENV = "STABIAS_THREADS"

MODEL_IDS = ("woodford", "liu_pappa")
_PARAM_CLASSES = {"woodford": WoodfordParams, "liu_pappa": LiuPappaParams}

REGIME_COMMITMENT = "commitment"
REGIME_DISCRETION = "discretion"
REGIME_RULE_OPT = "rule_opt"
REGIME_RULE_FIXED = "rule_fixed"
_REGIMES = (REGIME_COMMITMENT, REGIME_DISCRETION, REGIME_RULE_OPT, REGIME_RULE_FIXED)


class ConfigError(ValueError):
    """Malformed or unknown configuration input (a usage error, not a solver one)."""


class ParseError(ConfigError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnknownKeyError(ConfigError):
    def __init__(self, key: str):
        super().__init__(f"unknown key: {key}")
        self.key = key


def known_config_keys() -> tuple[str, ...]:
    keys = []
    for model_id, cls in _PARAM_CLASSES.items():
        keys.extend(f"{model_id}.{name}" for name in param_names(cls))
    return tuple(keys)


def parse_config(text: str) -> dict[str, float]:
    """Parse the line-oriented ``key = value`` override dialect.

    Keys are dotted paths like ``woodford.rho``; values are decimal literals.
    Blank lines and ``#`` comments are ignored.  Unknown keys raise
    UnknownKeyError; malformed lines raise ParseError with the line number.
    """
    known = set(known_config_keys())
    overrides: dict[str, float] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(line_no, f"expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in known:
            raise UnknownKeyError(key)
        try:
            overrides[key] = float(value)
        except ValueError:
            raise ParseError(line_no, f"value for {key} is not a decimal literal: {value!r}")
    return overrides


def build_params(model_id: str, overrides: dict[str, float]):
    """Parameter record for one model, with dotted or bare override keys."""
    if model_id not in _PARAM_CLASSES:
        raise UnknownKeyError(model_id)
    cls = _PARAM_CLASSES[model_id]
    fields = set(param_names(cls))
    kwargs = {}
    for key, value in overrides.items():
        name = key
        if "." in key:
            prefix, _, name = key.partition(".")
            if prefix != model_id:
                continue
        if name not in fields:
            raise UnknownKeyError(key)
        kwargs[name] = value
    return cls(**kwargs)


def build_model(model_id: str, overrides: dict[str, float]):
    params = build_params(model_id, overrides)
    if model_id == "woodford":
        return build_woodford(params)
    return build_liu_pappa(params)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: model, swept grids, fixed overrides, regimes, destination."""

    model_id: str
    swept_params: tuple[tuple[str, tuple[float, ...]], ...]
    fixed_overrides: tuple[tuple[str, float], ...] = ()
    regimes: tuple[str, ...] = (REGIME_COMMITMENT, REGIME_DISCRETION, REGIME_RULE_OPT)
    output_path: str | None = None
    fixed_phi: tuple[float, ...] | None = None

    def violations(self) -> list[str]:
        out = []
        if self.model_id not in MODEL_IDS:
            out.append(f"unknown model_id: {self.model_id}")
            return out
        fields = set(param_names(_PARAM_CLASSES[self.model_id]))
        for name, grid in self.swept_params:
            if name not in fields:
                out.append(f"unknown swept parameter: {name}")
            if len(grid) == 0:
                out.append(f"empty grid for {name}")
            elif any(b <= a for a, b in zip(grid, grid[1:])):
                out.append(f"grid for {name} is not strictly increasing")
        for name, _ in self.fixed_overrides:
            bare = name.partition(".")[2] if "." in name else name
            if bare not in fields:
                out.append(f"unknown override: {name}")
        for regime in self.regimes:
            if regime not in _REGIMES:
                out.append(f"unknown regime: {regime}")
        if REGIME_RULE_FIXED in self.regimes and self.fixed_phi is None:
            out.append("rule_fixed regime requires fixed_phi")
        return out


# Column order for generic sweep tables; preset CSVs use their own schemas.
STATUS_OK = "ok"
STATUS_INDETERMINATE = "indeterminate"
STATUS_NONCONVERGENT = "nonconvergent"
STATUS_ERROR = "error"
STATUS_SKIPPED = "skipped"


@dataclass(frozen=True)
class ResultRow:
    point: tuple[tuple[str, float], ...]
    loss_commitment: float
    loss_discretion: float
    loss_rule: float
    phi_opt: float
    phi_star_opt: float
    bias: float
    bias_ratio: float
    inflation_equivalent: float
    status: tuple[tuple[str, str], ...]

    def status_of(self, regime: str) -> str:
        return dict(self.status).get(regime, STATUS_SKIPPED)

    def value_of(self, name: str) -> float:
        return dict(self.point)[name]


@dataclass(frozen=True)
class SweepResultTable:
    spec: SweepSpec
    rows: tuple[ResultRow, ...]


def _classify(exc: Exception) -> str:
    if isinstance(exc, IndeterminacyError):
        return STATUS_INDETERMINATE
    if isinstance(exc, (NonConvergenceError, NoStableSolutionError)):
        return STATUS_NONCONVERGENT
    return STATUS_ERROR


def _analytic_endpoint_row(point, regimes, w2: float) -> ResultRow:
    # At w2 of exactly 0 or 1 prices are sticky in one sector only and the
    # policy trade-off disappears; losses are zero under every regime and the
    # optimal rule pegs the sticky sector's inflation.
    status = tuple((r, STATUS_OK) for r in regimes)
    return ResultRow(
        point=point,
        loss_commitment=0.0,
        loss_discretion=0.0,
        loss_rule=0.0,
        phi_opt=1.0 if w2 == 0.0 else 0.0,
        phi_star_opt=float("nan"),
        bias=0.0,
        bias_ratio=0.0,
        inflation_equivalent=0.0,
        status=status,
    )


def evaluate_point(spec: SweepSpec, point: tuple[tuple[str, float], ...]) -> ResultRow:
    """Solve the requested regimes at one parameter point.

    Failures are recorded per regime instead of aborting; near-unit-root and
    endpoint grid points may legitimately fail.
    """
    overrides = dict(spec.fixed_overrides)
    overrides.update(point)
    if spec.model_id == "woodford" and overrides.get("w2") in (0.0, 1.0):
        return _analytic_endpoint_row(point, spec.regimes, overrides["w2"])

    losses = {}
    status = {}
    phi_opt = phi_star_opt = float("nan")
    try:
        model = build_model(spec.model_id, overrides)
    except (InvalidParamsError, ConfigError) as exc:
        status = {regime: STATUS_ERROR for regime in spec.regimes}
        model = None
    if model is not None:
        for regime in spec.regimes:
            try:
                if regime == REGIME_COMMITMENT:
                    sol = solve_commitment(model)
                elif regime == REGIME_DISCRETION:
                    sol = solve_discretion(model)
                elif regime == REGIME_RULE_OPT:
                    phi, sol = optimize_rule(model)
                    phi_opt = phi[0]
                    if len(phi) > 1:
                        phi_star_opt = phi[1]
                elif regime == REGIME_RULE_FIXED:
                    sol = solve_rule(model, spec.fixed_phi)
                    phi_opt = spec.fixed_phi[0]
                    if len(spec.fixed_phi) > 1:
                        phi_star_opt = spec.fixed_phi[1]
                else:  # pragma: no cover - spec validation rejects earlier
                    raise ValueError(regime)
                losses[regime] = unconditional_loss(sol, model).total
                status[regime] = STATUS_OK
            except SolverError as exc:
                status[regime] = _classify(exc)

    nan = float("nan")
    l_c = losses.get(REGIME_COMMITMENT, nan)
    l_d = losses.get(REGIME_DISCRETION, nan)
    l_r = losses.get(REGIME_RULE_OPT, losses.get(REGIME_RULE_FIXED, nan))
    bias = l_d - l_c
    ratio = bias / l_c if l_c and np.isfinite(l_c) and l_c >= 1e-14 else nan
    return ResultRow(
        point=point,
        loss_commitment=l_c,
        loss_discretion=l_d,
        loss_rule=l_r,
        phi_opt=phi_opt,
        phi_star_opt=phi_star_opt,
        bias=bias,
        bias_ratio=ratio,
        inflation_equivalent=inflation_equivalent(l_d, l_c) if np.isfinite(bias) else nan,
        status=tuple(sorted(status.items())),
    )


def _worker(args):
    spec, point = args
    return evaluate_point(spec, point)


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
        if n < 1:
            raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {n}")
        return n
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec) -> SweepResultTable:
    """Evaluate every grid point (Cartesian product, grid order) of a sweep."""
    problems = spec.violations()
    if problems:
        raise ConfigError("invalid sweep: " + "; ".join(problems))
    names = [name for name, _ in spec.swept_params]
    grids = [grid for _, grid in spec.swept_params]
    points = [
        tuple(zip(names, combo)) for combo in itertools.product(*grids)
    ]
    workers = min(worker_count(), len(points))
    if workers > 1 and len(points) > 3:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_worker, [(spec, p) for p in points], chunksize=4))
    else:
        rows = [evaluate_point(spec, p) for p in points]
    return SweepResultTable(spec=spec, rows=tuple(rows))


def fmt(value: float) -> str:
    """Decimal with 12 significant digits; CSV cells are byte-stable."""
    return f"{value:.12g}"


def write_csv(path, header: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return str(path)


_W2_GRID = tuple(round(0.05 * i, 2) for i in range(1, 20))
_RHO_GRID = (0.5, 0.8, 0.9, 0.95, 0.99)
_ALPHA_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))
_ALPHA_STAR_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)
_LPW2_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))

PRESETS: dict[str, SweepSpec] = {
    "fig2": SweepSpec(
        model_id="woodford",
        swept_params=(("w2", (0.0,) + _W2_GRID + (1.0,)),),
        regimes=(REGIME_COMMITMENT, REGIME_DISCRETION, REGIME_RULE_OPT),
    ),
    "fig3": SweepSpec(
        model_id="woodford",
        swept_params=(("rho", _RHO_GRID), ("w2", _W2_GRID)),
        regimes=(REGIME_COMMITMENT, REGIME_DISCRETION),
    ),
    "fig4": SweepSpec(
        model_id="woodford",
        swept_params=(("rho", _RHO_GRID), ("w2", _W2_GRID)),
        regimes=(REGIME_COMMITMENT, REGIME_DISCRETION),
    ),
    "lp_alpha": SweepSpec(
        model_id="liu_pappa",
        swept_params=(("alpha", _ALPHA_GRID), ("alpha_star", _ALPHA_STAR_GRID)),
        regimes=(REGIME_COMMITMENT, REGIME_RULE_OPT),
    ),
    "lp_phi": SweepSpec(
        model_id="liu_pappa",
        swept_params=(("alpha", _ALPHA_GRID), ("alpha_star", _ALPHA_STAR_GRID)),
        regimes=(REGIME_RULE_OPT,),
    ),
    "lp_w2": SweepSpec(
        model_id="liu_pappa",
        swept_params=(("w2", _LPW2_GRID), ("w2_star", _LPW2_GRID)),
        regimes=(REGIME_COMMITMENT, REGIME_DISCRETION),
    ),
}


def _write_manifest(path, preset_id: str, spec: SweepSpec) -> str:
    lines = [
        f"preset = {preset_id}",
        f"tool_version = {__version__}",
        f"model = {spec.model_id}",
        f"regimes = {'+'.join(spec.regimes)}",
    ]
    for name, grid in spec.swept_params:
        lines.append(f"grid.{name} = {':'.join(fmt(g) for g in grid)}")
    defaults = _PARAM_CLASSES[spec.model_id]()
    overrides = dict(spec.fixed_overrides)
    for name in param_names(type(defaults)):
        value = overrides.get(name, getattr(defaults, name))
        if value is None:
            continue
        lines.append(f"{spec.model_id}.{name} = {fmt(value) if isinstance(value, float) else value}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return str(path)


def replicate(preset_id: str, out_dir) -> list[str]:
    """Run one replication preset and write its figure CSVs plus a manifest."""
    if preset_id not in PRESETS:
        raise ConfigError(f"unknown preset: {preset_id}")
    spec = PRESETS[preset_id]
    os.makedirs(out_dir, exist_ok=True)
    table = run_sweep(spec)
    rows = table.rows
    written: list[str] = []
    join = lambda name: os.path.join(out_dir, name)

    if preset_id == "fig2":
        anchor = next(r for r in rows if r.value_of("w2") == 0.5)
        scale = anchor.loss_commitment
        written.append(write_csv(
            join("fig2_losses.csv"),
            ["w2", "loss_commitment", "loss_discretion", "loss_rule", "phi_opt"],
            [[r.value_of("w2"), r.loss_commitment / scale, r.loss_discretion / scale,
              r.loss_rule / scale, r.phi_opt] for r in rows],
        ))
        written.append(write_csv(
            join("fig2_bias.csv"),
            ["w2", "bias", "bias_ratio"],
            [[r.value_of("w2"), r.bias / scale, r.bias_ratio] for r in rows],
        ))
    elif preset_id == "fig3":
        written.append(write_csv(
            join("fig3_bias_ratio.csv"),
            ["rho", "w2", "bias_ratio"],
            [[r.value_of("rho"), r.value_of("w2"), r.bias_ratio] for r in rows],
        ))
    elif preset_id == "fig4":
        written.append(write_csv(
            join("fig4_inflation_equivalent.csv"),
            ["rho", "w2", "infl_equiv"],
            [[r.value_of("rho"), r.value_of("w2"), r.inflation_equivalent] for r in rows],
        ))
    elif preset_id == "lp_alpha":
        written.append(write_csv(
            join("lp_alpha_losses.csv"),
            ["alpha", "alpha_star", "loss_commitment", "loss_rule"],
            [[r.value_of("alpha"), r.value_of("alpha_star"), r.loss_commitment,
              r.loss_rule] for r in rows],
        ))
    elif preset_id == "lp_phi":
        written.append(write_csv(
            join("lp_phi_opt.csv"),
            ["alpha", "alpha_star", "phi_opt"],
            [[r.value_of("alpha"), r.value_of("alpha_star"), r.phi_opt] for r in rows],
        ))
    elif preset_id == "lp_w2":
        written.append(write_csv(
            join("lp_w2_bias.csv"),
            ["w2", "w2_star", "bias"],
            [[r.value_of("w2"), r.value_of("w2_star"), r.bias] for r in rows],
        ))
    written.append(_write_manifest(join("manifest.txt"), preset_id, spec))
    return written


def sweep_table_csv(table: SweepResultTable, path) -> str:
    """Generic sweep CSV: swept columns, losses, rule weights, bias metrics, statuses."""
    names = [name for name, _ in table.spec.swept_params]
    header = names + [
        "loss_commitment", "loss_discretion", "loss_rule", "phi_opt",
    ]
    if table.spec.model_id == "liu_pappa":
        header.append("phi_star_opt")
    header += ["bias", "bias_ratio", "inflation_equivalent"]
    status_cols = [f"status_{regime}" for regime in table.spec.regimes]
    lines = [",".join(header + status_cols)]
    for r in table.rows:
        cells = [fmt(r.value_of(n)) for n in names]
        cells += [fmt(r.loss_commitment), fmt(r.loss_discretion), fmt(r.loss_rule), fmt(r.phi_opt)]
        if table.spec.model_id == "liu_pappa":
            cells.append(fmt(r.phi_star_opt))
        cells += [fmt(r.bias), fmt(r.bias_ratio), fmt(r.inflation_equivalent)]
        cells += [r.status_of(regime) for regime in table.spec.regimes]
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return str(path)
