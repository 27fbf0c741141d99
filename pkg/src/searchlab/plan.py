"""Experiment plans: JSON schema, validation, execution, and file output.

A plan names an experiment, fixes or sweeps the problem parameters, and
lists what to produce at each sweep point: strategy simulations, bound
values, or capacity-table rows.  Parameter axes are expanded as a cartesian
product in declaration order.  Outputs go to CSV and/or JSON files with
identical field names; floats are written with repr (shortest round-trip),
so re-running a plan with the same seed reproduces files byte for byte.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import bounds as bounds_mod
from .channel import bawgn_capacity, optimal_composition, solve_a_eta
from .errors import ParseError, SearchLabError, ValidationError
from .model import NoiseModel, SearchConfig, new_config
from .sim import run_trials, trial_seed_for
from .strategies import KINDS, TWO_STAGE, StrategySpec

PARAM_NAMES = ("B", "delta", "sigma2", "epsilon", "gamma", "q")
CONFIG_PARAMS = ("B", "delta", "sigma2", "epsilon")
BOUND_NAMES = ("lemma1", "lemma2", "theorem1", "theorem2", "corollary2")
CAPACITY_MODES = ("composition", "half_input")
PRESET_NAMES = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8")

PLAN_KEYS = {"id", "B", "delta", "sigma2", "epsilon", "gamma", "sweeps",
             "strategies", "n_trials", "master_seed", "bound_set",
             "eta_frac", "output_path", "capacity_table"}

SIM_COLUMNS = ("experiment_id", "strategy", "B", "delta", "sigma2", "gamma",
               "epsilon", "n_trials", "mean_tau", "ci95_lo", "ci95_hi",
               "err_rate", "master_seed")
BOUND_COLUMNS = ("experiment_id", "bound_name", "B", "delta", "sigma2",
                 "gamma", "epsilon", "eta", "alpha_star", "a_eta", "value")
CAPACITY_COLUMNS = ("experiment_id", "gamma", "sigma2_total", "q",
                    "probe_count", "variance", "capacity_bits")


@dataclass(frozen=True)
class ExperimentPlan:
    """Validated experiment description.

    ``axes`` lists every parameter as (name, values), fixed parameters as
    singleton value tuples, in expansion order (fixed first, then sweeps as
    declared).
    """

    id: str
    axes: tuple[tuple[str, tuple[float, ...]], ...]
    strategies: tuple[StrategySpec, ...] = ()
    n_trials: int = 2000
    master_seed: int = 0
    bound_set: tuple[str, ...] = ()
    eta_frac: float = 0.1
    output_path: str | None = None
    capacity_mode: str | None = None
    total_variances: tuple[float, ...] = ()

    def swept_params(self) -> list[str]:
        return [name for name, vals in self.axes if len(vals) > 1]


def _require(cond: bool, message: str):
    if not cond:
        raise ValidationError(message)


def _as_number(value, what: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             f"{what} must be a number, got {value!r}")
    return float(value)


def parse_plan(text: str) -> ExperimentPlan:
    """Parse and validate a JSON plan document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"plan is not valid JSON: {exc.msg} "
                         f"(line {exc.lineno}, column {exc.colno})",
                         line=exc.lineno, col=exc.colno) from exc
    _require(isinstance(doc, dict), "plan root must be a JSON object")
    for key in doc:
        _require(key in PLAN_KEYS, f"unknown plan key {key!r}")
    plan_id = doc.get("id")
    _require(isinstance(plan_id, str) and plan_id, "plan needs a non-empty string 'id'")

    # parameter axes: scalars and sweeps, each parameter from exactly one
    sweeps_doc = doc.get("sweeps", [])
    _require(isinstance(sweeps_doc, list), "'sweeps' must be a list of [name, values] pairs")
    sweep_axes: list[tuple[str, tuple[float, ...]]] = []
    seen: set[str] = set()
    for entry in sweeps_doc:
        _require(isinstance(entry, (list, tuple)) and len(entry) == 2,
                 f"sweep entry {entry!r} must be a [name, values] pair")
        name, values = entry
        _require(name in PARAM_NAMES,
                 f"unknown sweep parameter {name!r} (expected one of {', '.join(PARAM_NAMES)})")
        _require(name not in seen, f"parameter {name!r} swept twice")
        _require(isinstance(values, list) and values,
                 f"sweep {name!r} needs a non-empty value list")
        vals = tuple(_as_number(v, f"sweep {name!r} value") for v in values)
        seen.add(name)
        sweep_axes.append((name, vals))
    fixed_axes: list[tuple[str, tuple[float, ...]]] = []
    for name in ("B", "delta", "sigma2", "epsilon", "gamma"):
        if name in doc:
            _require(name not in seen, f"parameter {name!r} given both fixed and swept")
            fixed_axes.append((name, (_as_number(doc[name], name),)))
            seen.add(name)
    for name in CONFIG_PARAMS:
        _require(name in seen, f"parameter {name!r} missing (fix it or sweep it)")
    axes = tuple(fixed_axes + sweep_axes)

    # capacity-table plans ride on a q axis and exclude sims and bounds
    table_doc = doc.get("capacity_table")
    capacity_mode = None
    total_variances: tuple[float, ...] = ()
    if table_doc is not None:
        _require(isinstance(table_doc, dict), "'capacity_table' must be an object")
        for key in table_doc:
            _require(key in ("mode", "total_variances"),
                     f"unknown capacity_table key {key!r}")
        capacity_mode = table_doc.get("mode")
        _require(capacity_mode in CAPACITY_MODES,
                 f"capacity_table mode must be one of {CAPACITY_MODES}, got {capacity_mode!r}")
        if capacity_mode == "half_input":
            tv = table_doc.get("total_variances")
            _require(isinstance(tv, list) and tv,
                     "half_input mode needs a non-empty 'total_variances' list")
            total_variances = tuple(_as_number(v, "total variance") for v in tv)
            _require(all(v > 0 for v in total_variances),
                     "total variances must be positive")
        else:
            _require("total_variances" not in table_doc,
                     "total_variances only applies to half_input mode")
    _require(("q" in seen) == (capacity_mode is not None),
             "a 'q' sweep and a 'capacity_table' block go together")
    if "q" in seen:
        qvals = dict(axes)["q"]
        _require(all(0.0 < v <= 1.0 for v in qvals), "q values must lie in (0, 1]")

    strategies_doc = doc.get("strategies", [])
    _require(isinstance(strategies_doc, list), "'strategies' must be a list")
    strategies: list[StrategySpec] = []
    for entry in strategies_doc:
        _require(isinstance(entry, dict), f"strategy entry {entry!r} must be an object")
        for key in entry:
            _require(key in ("kind", "alpha"), f"unknown strategy key {key!r}")
        kind = entry.get("kind")
        _require(kind in KINDS, f"unknown strategy kind {kind!r}")
        alpha = entry.get("alpha")
        if kind == TWO_STAGE:
            _require(alpha is not None, "two_stage strategy needs 'alpha'")
            alpha = _as_number(alpha, "alpha")
        else:
            _require(alpha is None, f"'alpha' is only valid for two_stage, not {kind!r}")
        strategies.append(StrategySpec(kind=kind, alpha=alpha))

    bound_doc = doc.get("bound_set", [])
    _require(isinstance(bound_doc, list), "'bound_set' must be a list")
    for name in bound_doc:
        _require(name in BOUND_NAMES,
                 f"unknown bound {name!r} (expected one of {', '.join(BOUND_NAMES)})")
    bound_set = tuple(bound_doc)
    if capacity_mode is not None:
        _require(not strategies and not bound_set,
                 "capacity-table plans take no strategies or bounds")

    n_trials = doc.get("n_trials", 2000)
    _require(isinstance(n_trials, int) and n_trials >= 1,
             f"n_trials must be a positive integer, got {n_trials!r}")
    master_seed = doc.get("master_seed", 0)
    _require(isinstance(master_seed, int) and 0 <= master_seed < 2 ** 64,
             f"master_seed must be a 64-bit unsigned integer, got {master_seed!r}")
    eta_frac = doc.get("eta_frac", 0.1)
    eta_frac = _as_number(eta_frac, "eta_frac")
    _require(0.0 < eta_frac < 1.0, f"eta_frac must lie in (0, 1), got {eta_frac}")
    output_path = doc.get("output_path")
    _require(output_path is None or isinstance(output_path, str),
             "output_path must be a string")

    plan = ExperimentPlan(id=plan_id, axes=axes, strategies=tuple(strategies),
                          n_trials=n_trials, master_seed=master_seed,
                          bound_set=bound_set, eta_frac=eta_frac,
                          output_path=output_path, capacity_mode=capacity_mode,
                          total_variances=total_variances)
    if "corollary2" in bound_set:
        multi = plan.swept_params()
        _require(multi in (["B"], ["delta"]),
                 "corollary2 needs exactly one swept parameter, B or delta")
    return plan


def load_preset(name: str) -> ExperimentPlan:
    """Load one of the bundled figure plans (fig3 .. fig8)."""
    if name not in PRESET_NAMES:
        raise ValidationError(
            f"unknown preset {name!r} (expected one of {', '.join(PRESET_NAMES)})")
    text = resources.files("searchlab").joinpath(f"presets/{name}.json").read_text("utf-8")
    return parse_plan(text)


def _point_config(point: dict[str, float]) -> SearchConfig:
    noise = NoiseModel.power(point["gamma"]) if "gamma" in point else NoiseModel.linear()
    return new_config(point["B"], point["delta"], point["sigma2"],
                      point["epsilon"], noise=noise)


def _points(plan: ExperimentPlan, skip=("q",)):
    names = [n for n, _ in plan.axes if n not in skip]
    value_lists = [vals for n, vals in plan.axes if n not in skip]
    for combo in itertools.product(*value_lists):
        yield dict(zip(names, combo))


def _gamma_of(point: dict[str, float]) -> float:
    return point.get("gamma", 1.0)


def _capacity_rows(plan: ExperimentPlan) -> list[dict]:
    rows = []
    qvals = dict(plan.axes)["q"]
    if plan.capacity_mode == "composition":
        for point in _points(plan):
            config = _point_config(point)
            for q in qvals:
                k = int(round(q * config.M))
                k = min(max(k, 1), config.M)
                v = config.noise_variance(k)
                rows.append({"experiment_id": plan.id, "gamma": _gamma_of(point),
                             "sigma2_total": None, "q": q, "probe_count": k,
                             "variance": v, "capacity_bits": bawgn_capacity(q, v)})
    else:
        for tv in plan.total_variances:
            for q in qvals:
                v = 2.0 * q * tv
                rows.append({"experiment_id": plan.id, "gamma": None,
                             "sigma2_total": tv, "q": q, "probe_count": None,
                             "variance": v,
                             "capacity_bits": bawgn_capacity(0.5, v)})
    return rows


def _sim_rows(plan: ExperimentPlan, workers: int, n_trials: int,
              master_seed: int) -> list[dict]:
    rows = []
    row_index = 0
    for point in _points(plan):
        config = _point_config(point)
        for spec in plan.strategies:
            batch_seed = trial_seed_for(master_seed, row_index)
            stats = run_trials(spec, config, n_trials, batch_seed, workers)
            rows.append({
                "experiment_id": plan.id, "strategy": stats.strategy_id,
                "B": config.B, "delta": config.delta, "sigma2": config.sigma2,
                "gamma": _gamma_of(point), "epsilon": config.epsilon,
                "n_trials": n_trials, "mean_tau": stats.mean_tau,
                "ci95_lo": stats.mean_tau - stats.ci95_half_width,
                "ci95_hi": stats.mean_tau + stats.ci95_half_width,
                "err_rate": stats.err_rate, "master_seed": master_seed,
            })
            row_index += 1
    return rows


def _bound_rows(plan: ExperimentPlan) -> list[dict]:
    rows = []
    pointwise = [b for b in plan.bound_set if b != "corollary2"]
    points = list(_points(plan))

    def base_row(point, config):
        return {"experiment_id": plan.id, "bound_name": None, "B": config.B,
                "delta": config.delta, "sigma2": config.sigma2,
                "gamma": _gamma_of(point), "epsilon": config.epsilon,
                "eta": None, "alpha_star": None, "a_eta": None, "value": None}

    for point in points:
        config = _point_config(point)
        eta = None
        if any(b in ("lemma2", "theorem1", "theorem2") for b in pointwise):
            _, c1 = optimal_composition(config)
            eta = plan.eta_frac * c1
        for name in pointwise:
            row = base_row(point, config)
            row["bound_name"] = name
            if name == "lemma1":
                row["value"] = bounds_mod.nonadaptive_lower_bound(config)
            elif name == "lemma2":
                val, alpha_star = bounds_mod.adaptive_upper_bound(config, eta)
                row.update(eta=eta, alpha_star=alpha_star, value=val,
                           a_eta=solve_a_eta(eta, config).value)
            elif name == "theorem1":
                rep = bounds_mod.adaptivity_gain_lower_bound(config, eta)
                row.update(eta=eta, alpha_star=rep.alpha_star,
                           a_eta=rep.a_eta, value=rep.gain_lb)
            else:  # theorem2
                rep = bounds_mod.general_f_bounds(config, eta)
                row.update(eta=eta, alpha_star=rep.alpha_star, value=rep.gain_lb)
            rows.append(row)
    if "corollary2" in plan.bound_set:
        configs = [_point_config(p) for p in points]
        for point, ratio in zip(points, bounds_mod.asymptotic_ratios(
                configs, eta_frac=plan.eta_frac)):
            row = base_row(point, _point_config(point))
            row["bound_name"] = "corollary2"
            row["value"] = ratio.ratio
            rows.append(row)
    return rows


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_rows(stem: Path, columns, rows: list[dict], fmt: str) -> list[Path]:
    written = []
    if fmt in ("csv", "both"):
        path = stem.with_suffix(".csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_format_cell(row[c]) for c in columns])
        written.append(path)
    if fmt in ("json", "both"):
        path = stem.with_suffix(".json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump([{c: row[c] for c in columns} for row in rows], fh, indent=2)
            fh.write("\n")
        written.append(path)
    return written


def run_plan(plan: ExperimentPlan, out_dir, workers: int = 1, fmt: str = "csv",
             trials_override: int | None = None,
             seed_override: int | None = None) -> list[Path]:
    """Execute a plan and write its output files under out_dir.

    Returns the written paths.  If execution fails partway, a
    '<id>.partial' marker file describing the failure is left in out_dir
    and the error re-raised.
    """
    if fmt not in ("csv", "json", "both"):
        raise ValidationError(f"format must be csv, json, or both, got {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n_trials = trials_override if trials_override is not None else plan.n_trials
    master_seed = seed_override if seed_override is not None else plan.master_seed
    try:
        written: list[Path] = []
        if plan.capacity_mode is not None:
            rows = _capacity_rows(plan)
            written += _write_rows(out / f"{plan.id}_capacity", CAPACITY_COLUMNS,
                                   rows, fmt)
            return written
        if plan.strategies:
            rows = _sim_rows(plan, workers, n_trials, master_seed)
            written += _write_rows(out / f"{plan.id}_sim", SIM_COLUMNS, rows, fmt)
        if plan.bound_set:
            rows = _bound_rows(plan)
            written += _write_rows(out / f"{plan.id}_bounds", BOUND_COLUMNS,
                                   rows, fmt)
        return written
    except Exception as exc:
        marker = out / f"{plan.id}.partial"
        marker.write_text(f"{type(exc).__name__}: {exc}\n", encoding="utf-8")
        raise
