"""Monte Carlo driver: seeded trial batches, summary statistics, and
drift probes for the potential functional.

Reproducibility contract: trial i of a batch uses the 64-bit seed derived
from (master_seed, i) through numpy's SeedSequence mixing, so results do not
depend on scheduling.  Batches are reduced in trial order whatever the
worker count, making summaries bit-identical between serial and parallel
runs.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import optimal_composition, bawgn_capacity
from .errors import StepLimitExceeded
from .inference import u_log_probs, update_log_probs
from .model import SearchConfig, TrialRecord
from .strategies import (
    FIXED_COMPOSITION,
    SORTED_PM,
    StrategySpec,
    random_composition_mask,
    run_strategy,
    sorted_pm_mask,
)

Z95 = 1.959963984540054  # two-sided 95% normal quantile
LOW_SAMPLE_N = 100
MIN_DRIFT_STEPS = 10_000


@dataclass(frozen=True)
class SummaryStats:
    """Aggregate of a trial batch."""

    strategy_id: str
    n_trials: int
    mean_tau: float
    ci95_half_width: float
    err_rate: float
    mean_tau_stage1: float
    master_seed: int
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class DriftReport:
    """Empirical per-step drift of U against its guaranteed floor."""

    strategy_id: str
    n_steps: int
    mean_drift: float
    se: float
    capacity_floor: float


def trial_seed_for(master_seed: int, trial_index: int) -> int:
    """64-bit substream seed mixed from (master_seed, trial_index)."""
    ss = np.random.SeedSequence([master_seed, trial_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_single_trial(spec: StrategySpec, config: SearchConfig,
                     trial_seed: int) -> TrialRecord:
    """One trial with its own generator, reproducible from the seed alone."""
    rng = np.random.default_rng(trial_seed)
    return run_strategy(spec, config, rng, trial_seed)


def _trial_task(args) -> TrialRecord:
    spec, config, seed, index = args
    try:
        return run_single_trial(spec, config, seed)
    except StepLimitExceeded as exc:
        raise StepLimitExceeded(f"trial {index}: {exc}") from exc


def run_trials(spec: StrategySpec, config: SearchConfig, n_trials: int,
               master_seed: int, workers: int = 1) -> SummaryStats:
    """Run a batch of independent trials and summarize.

    The 95% confidence half-width uses the normal approximation; a single
    trial gets half-width 0 and batches under 100 trials are flagged
    LowSample.  workers > 1 fans trials out to processes; the reduction is
    in trial order either way, so the output is identical to a serial run.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    tasks = [(spec, config, trial_seed_for(master_seed, i), i)
             for i in range(n_trials)]
    if workers <= 1:
        records = [_trial_task(t) for t in tasks]
    else:
        chunk = max(1, n_trials // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_trial_task, tasks, chunksize=chunk))

    taus = np.array([r.tau for r in records], dtype=float)
    tau1s = np.array([r.tau_stage1 for r in records], dtype=float)
    errs = np.array([0.0 if r.success else 1.0 for r in records])
    mean_tau = float(taus.mean())
    if n_trials >= 2:
        hw = Z95 * float(taus.std(ddof=1)) / math.sqrt(n_trials)
    else:
        hw = 0.0
    flags = ("LowSample",) if n_trials < LOW_SAMPLE_N else ()
    return SummaryStats(strategy_id=spec.label(), n_trials=n_trials,
                        mean_tau=mean_tau, ci95_half_width=hw,
                        err_rate=float(errs.mean()),
                        mean_tau_stage1=float(tau1s.mean()),
                        master_seed=master_seed, flags=flags)


def drift_probe(kind: str, config: SearchConfig, n_steps: int,
                seed: int) -> DriftReport:
    """Measure the empirical mean per-step increment of U(rho) for the
    fixed-composition or sorted-PM dynamics, restarting runs at their
    stopping threshold until n_steps increments are collected.

    The report carries the matching capacity floor: C(q*, v(q*)) for fixed
    composition, C(1/2, v(M/2)) for sorted-PM.  Terminal increments are
    included; the drift guarantee applies to every posterior state, so
    the empirical mean should sit at or above the floor.
    """
    if kind not in (FIXED_COMPOSITION, SORTED_PM):
        raise ValueError(f"drift probe supports fixed_composition or sorted_pm, got {kind!r}")
    if n_steps < MIN_DRIFT_STEPS:
        raise ValueError(f"n_steps must be >= {MIN_DRIFT_STEPS}, got {n_steps}")
    m = config.M
    if m < 2:
        raise ValueError("drift probe needs at least 2 cells")

    if kind == FIXED_COMPOSITION:
        q_star, floor = optimal_composition(config)
        k_star = min(max(int(round(q_star * m)), 1), m - 1)
        v_fixed = config.noise_variance(k_star)
        sd_fixed = math.sqrt(v_fixed)
    else:
        floor = bawgn_capacity(0.5, config.variance_at(m / 2.0))

    rng = np.random.default_rng(seed)
    log_thresh = math.log1p(-config.epsilon)
    increments = np.empty(n_steps)
    lp = np.full(m, -math.log(m))
    target = int(rng.integers(m))
    u_prev = u_log_probs(lp)
    for i in range(n_steps):
        if kind == FIXED_COMPOSITION:
            mask = random_composition_mask(m, k_star, rng)
            v, sd = v_fixed, sd_fixed
        else:
            mask, k = sorted_pm_mask(np.exp(lp))
            v = config.noise_variance(k)
            sd = math.sqrt(v)
        x = 1.0 if mask[target] else 0.0
        y = x + rng.normal(0.0, sd)
        update_log_probs(lp, mask, y, v)
        u_now = u_log_probs(lp)
        increments[i] = u_now - u_prev
        if lp.max() >= log_thresh:
            lp = np.full(m, -math.log(m))
            target = int(rng.integers(m))
            u_prev = u_log_probs(lp)
        else:
            u_prev = u_now
    mean = float(increments.mean())
    se = float(increments.std(ddof=1)) / math.sqrt(n_steps)
    return DriftReport(strategy_id=kind, n_steps=n_steps, mean_drift=mean,
                       se=se, capacity_floor=floor)
