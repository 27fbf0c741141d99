"""Search strategies: probe selection rules and complete trial runners.

Each runner simulates one full search: draw the target, take measurements
until the stopping rule fires, and report the stopping time tau together
with whether the final estimate found the target.

Strategies
----------
fixed_composition   non-adaptive probe sets of optimal composition q*
sorted_pm           adaptive: probe the top cells holding ~1/2 posterior mass
two_stage           fixed composition over coarse sections, then sorted-PM
                    inside the winning section
noisy_binary_fixed  bisection with a precomputed per-level repetition count
noisy_binary_variable  bisection with sequential per-level stopping
exhaustive          cycle through single cells until one cell dominates
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import gaussian_tail_inverse, optimal_composition
from .errors import InvalidAlpha, StepLimitExceeded
from .inference import Posterior, renormalize_log_probs, update_log_probs
from .model import MeasurementVector, SearchConfig, TrialRecord

STEP_LIMIT = 10_000_000

FIXED_COMPOSITION = "fixed_composition"
SORTED_PM = "sorted_pm"
TWO_STAGE = "two_stage"
NOISY_BINARY_FIXED = "noisy_binary_fixed"
NOISY_BINARY_VARIABLE = "noisy_binary_variable"
EXHAUSTIVE = "exhaustive"

KINDS = (FIXED_COMPOSITION, SORTED_PM, TWO_STAGE,
         NOISY_BINARY_FIXED, NOISY_BINARY_VARIABLE, EXHAUSTIVE)


@dataclass(frozen=True)
class StrategySpec:
    """Which strategy to run; two_stage additionally needs the section
    fraction alpha = 1/s."""

    kind: str
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == TWO_STAGE:
            if self.alpha is None:
                raise ValueError("two_stage requires alpha")
            _sections_from_alpha(self.alpha)  # validate the 1/s shape early

    def label(self) -> str:
        if self.kind == TWO_STAGE:
            return f"two_stage(alpha=1/{_sections_from_alpha(self.alpha)})"
        return self.kind


@dataclass(eq=False)
class SearchState:
    """Posterior plus bookkeeping carried between steps."""

    posterior: Posterior
    step_count: int = 0
    active_window: range | None = None


def _sections_from_alpha(alpha: float) -> int:
    s_real = 1.0 / alpha
    s = int(round(s_real))
    if s < 2 or abs(s_real - s) > 1e-9 * s:
        raise InvalidAlpha(f"alpha = {alpha} is not 1/s for an integer s >= 2")
    return s


def random_composition_mask(size: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random k-subset of [0, size) as a boolean mask, drawn by a
    partial Fisher-Yates shuffle (k draws from the stream).  k = size short
    circuits to the all-ones mask with no draws."""
    mask = np.zeros(size, dtype=bool)
    if k >= size:
        mask[:] = True
        return mask
    arr = np.arange(size)
    for i in range(k):
        j = i + int(rng.integers(size - i))
        arr[i], arr[j] = arr[j], arr[i]
    mask[arr[:k]] = True
    return mask


def sorted_pm_mask(probs: np.ndarray) -> tuple[np.ndarray, int]:
    """Probe mask of the sorted-PM rule.

    Sort cells by posterior descending (stable, so ties keep ascending
    index), then probe the shortest prefix whose cumulative mass is closest
    to 1/2; ties in the distance pick the smaller prefix.
    """
    order = np.argsort(-probs, kind="stable")
    csum = np.cumsum(probs[order])
    k = int(np.argmin(np.abs(csum - 0.5))) + 1
    mask = np.zeros(probs.size, dtype=bool)
    mask[order[:k]] = True
    return mask, k


def fixed_composition_step(state: SearchState, probe_count: int,
                           rng: np.random.Generator) -> MeasurementVector:
    """One non-adaptive probe: a uniformly random probe_count-subset."""
    size = state.posterior.size
    mask = random_composition_mask(size, probe_count, rng)
    return MeasurementVector(mask=mask, count=int(probe_count))


def sorted_pm_step(rho: Posterior) -> MeasurementVector:
    """One sorted-PM probe chosen from the current posterior."""
    mask, k = sorted_pm_mask(rho.probs)
    return MeasurementVector(mask=mask, count=k)


def _check_step_limit(steps: int, label: str):
    if steps >= STEP_LIMIT:
        raise StepLimitExceeded(f"{label} exceeded {STEP_LIMIT} steps")


def _fixed_composition_search(config: SearchConfig, grid: int, cells_per_unit: int,
                              eps_stage: float, true_unit: int,
                              rng: np.random.Generator) -> tuple[int, int, float]:
    """Fixed-composition search over `grid` units of cells_per_unit cells
    each.  Returns (steps, MAP unit, final max posterior)."""
    if grid == 1:
        return 0, 0, 1.0
    q_star, _ = optimal_composition(config)
    k_units = min(max(int(round(q_star * grid)), 1), grid - 1)
    v = config.noise_variance(k_units * cells_per_unit)
    sd = math.sqrt(v)
    log_thresh = math.log1p(-eps_stage)
    lp = np.full(grid, -math.log(grid))
    steps = 0
    while lp.max() < log_thresh:
        _check_step_limit(steps, "fixed_composition")
        mask = random_composition_mask(grid, k_units, rng)
        x = 1.0 if mask[true_unit] else 0.0
        y = x + rng.normal(0.0, sd)
        update_log_probs(lp, mask, y, v)
        steps += 1
    idx = int(np.argmax(lp))
    return steps, idx, float(math.exp(lp[idx]))


def _sorted_pm_search(config: SearchConfig, start: int, size: int,
                      eps_stage: float, true_cell: int,
                      rng: np.random.Generator) -> tuple[int, int, float]:
    """Sorted-PM search over the cell window [start, start+size).  The true
    cell may lie outside the window (a failed first stage); the search still
    terminates at its threshold, just on a wrong cell.  Returns
    (steps, MAP cell in absolute coordinates, final max posterior)."""
    if size == 1:
        return 0, start, 1.0
    rel = true_cell - start
    in_window = 0 <= rel < size
    log_thresh = math.log1p(-eps_stage)
    lp = np.full(size, -math.log(size))
    steps = 0
    while lp.max() < log_thresh:
        _check_step_limit(steps, "sorted_pm")
        mask, k = sorted_pm_mask(np.exp(lp))
        v = config.noise_variance(k)
        x = 1.0 if in_window and mask[rel] else 0.0
        y = x + rng.normal(0.0, math.sqrt(v))
        update_log_probs(lp, mask, y, v)
        steps += 1
    idx = int(np.argmax(lp))
    return steps, start + idx, float(math.exp(lp[idx]))


def run_fixed_composition(config: SearchConfig, grid: int, eps_stage: float,
                          rng: np.random.Generator, trial_seed: int = 0) -> TrialRecord:
    """Complete non-adaptive search over `grid` equal sections of the domain
    (grid = M probes single cells).  grid must divide M."""
    if grid < 1 or config.M % grid != 0:
        raise ValueError(f"grid {grid} does not divide M = {config.M}")
    true_unit = int(rng.integers(grid))
    steps, idx, pmax = _fixed_composition_search(
        config, grid, config.M // grid, eps_stage, true_unit, rng)
    return TrialRecord(strategy_id=FIXED_COMPOSITION, tau=steps, tau_stage1=0,
                       success=idx == true_unit, trial_seed=trial_seed,
                       final_max_prob=pmax)


def run_sorted_pm(config: SearchConfig, window: range, eps_stage: float,
                  rng: np.random.Generator, trial_seed: int = 0) -> TrialRecord:
    """Complete sorted-PM search over a contiguous cell window."""
    start, size = window.start, len(window)
    if size < 1 or start < 0 or start + size > config.M or window.step != 1:
        raise ValueError(f"window {window} is not a contiguous block in [0, {config.M})")
    true_cell = start + int(rng.integers(size))
    steps, idx, pmax = _sorted_pm_search(config, start, size, eps_stage,
                                         true_cell, rng)
    return TrialRecord(strategy_id=SORTED_PM, tau=steps, tau_stage1=0,
                       success=idx == true_cell, trial_seed=trial_seed,
                       final_max_prob=pmax)


def run_two_stage(config: SearchConfig, alpha: float, rng: np.random.Generator,
                  trial_seed: int = 0) -> TrialRecord:
    """Two-stage search: stage 1 runs fixed composition over 1/alpha coarse
    sections at reliability eps/2; stage 2 runs sorted-PM inside the winning
    section, again at eps/2.  alpha must be 1/s with s dividing M, s >= 2."""
    s = _sections_from_alpha(alpha)
    if s > config.M or config.M % s != 0:
        raise InvalidAlpha(f"1/alpha = {s} does not divide M = {config.M}")
    section = config.M // s
    eps_half = config.epsilon / 2.0
    target = int(rng.integers(config.M))
    t1, sec_hat, p1 = _fixed_composition_search(
        config, s, section, eps_half, target // section, rng)
    if section == 1:
        return TrialRecord(strategy_id=f"two_stage(alpha=1/{s})", tau=t1,
                           tau_stage1=t1, success=sec_hat == target,
                           trial_seed=trial_seed, final_max_prob=p1)
    t2, cell_hat, p2 = _sorted_pm_search(
        config, sec_hat * section, section, eps_half, target, rng)
    return TrialRecord(strategy_id=f"two_stage(alpha=1/{s})", tau=t1 + t2,
                       tau_stage1=t1, success=cell_hat == target,
                       trial_seed=trial_seed, final_max_prob=p2)


def _logsumexp_slice(lp: np.ndarray, lo: int, hi: int) -> float:
    seg = lp[lo:hi]
    m = seg.max()
    return float(m + math.log(np.exp(seg - m).sum()))


def run_noisy_binary_fixed(config: SearchConfig, rng: np.random.Generator,
                           trial_seed: int = 0) -> TrialRecord:
    """Bisection with fixed per-level repetition.

    Each level probes the half-window with higher posterior mass and repeats
    the measurement r times, r = max(1, ceil(4 v z^2)) with
    z = Q^{-1}(epsilon / log2 M), so that a single level errs with
    probability at most epsilon / log2 M.  The r observations are folded
    into one posterior update.  Recurses into the higher-posterior half.
    """
    m = config.M
    if m == 1:
        return TrialRecord(strategy_id=NOISY_BINARY_FIXED, tau=0, tau_stage1=0,
                           success=True, trial_seed=trial_seed, final_max_prob=1.0)
    z = max(0.0, gaussian_tail_inverse(config.epsilon / math.log2(m)))
    target = int(rng.integers(m))
    lp = np.full(m, -math.log(m))
    lo, hi = 0, m
    steps = 0
    while hi - lo > 1:
        _check_step_limit(steps, NOISY_BINARY_FIXED)
        half = (hi - lo + 1) // 2
        mass_first = _logsumexp_slice(lp, lo, lo + half)
        mass_second = _logsumexp_slice(lp, lo + half, hi)
        if mass_first >= mass_second:
            p_lo, p_hi = lo, lo + half
        else:
            p_lo, p_hi = lo + half, hi
        v = config.noise_variance(p_hi - p_lo)
        r = max(1, math.ceil(4.0 * v * z * z))
        x = 1.0 if p_lo <= target < p_hi else 0.0
        ys = x + rng.normal(0.0, math.sqrt(v), size=r)
        mask = np.zeros(m, dtype=bool)
        mask[p_lo:p_hi] = True
        # r log-likelihood ratios collapse into one additive update
        lp[mask] += float(np.sum((2.0 * ys - 1.0) / (2.0 * v)))
        renormalize_log_probs(lp)
        steps += r
        mass_first = _logsumexp_slice(lp, lo, lo + half)
        mass_second = _logsumexp_slice(lp, lo + half, hi)
        lo, hi = (lo, lo + half) if mass_first >= mass_second else (lo + half, hi)
    idx = int(np.argmax(lp))
    return TrialRecord(strategy_id=NOISY_BINARY_FIXED, tau=steps, tau_stage1=0,
                       success=idx == target, trial_seed=trial_seed,
                       final_max_prob=float(math.exp(lp[idx])))


def run_noisy_binary_variable(config: SearchConfig, rng: np.random.Generator,
                              trial_seed: int = 0) -> TrialRecord:
    """Bisection with sequential per-level stopping.

    Each level repeatedly probes the half-window favored at level start and
    updates after every observation, until one half holds a fraction
    >= 1 - epsilon/log2(M) of the posterior mass within the window; the
    search then recurses into that half.
    """
    m = config.M
    if m == 1:
        return TrialRecord(strategy_id=NOISY_BINARY_VARIABLE, tau=0, tau_stage1=0,
                           success=True, trial_seed=trial_seed, final_max_prob=1.0)
    eps_level = config.epsilon / math.log2(m)
    log_thresh = math.log1p(-min(eps_level, 0.5))
    target = int(rng.integers(m))
    lp = np.full(m, -math.log(m))
    steps = 0
    lo, hi = 0, m
    while hi - lo > 1:
        half = (hi - lo + 1) // 2
        mass_first = _logsumexp_slice(lp, lo, lo + half)
        mass_second = _logsumexp_slice(lp, lo + half, hi)
        if mass_first >= mass_second:
            p_lo, p_hi = lo, lo + half
        else:
            p_lo, p_hi = lo + half, hi
        v = config.noise_variance(p_hi - p_lo)
        sd = math.sqrt(v)
        x = 1.0 if p_lo <= target < p_hi else 0.0
        mask = np.zeros(m, dtype=bool)
        mask[p_lo:p_hi] = True
        while True:
            _check_step_limit(steps, NOISY_BINARY_VARIABLE)
            y = x + rng.normal(0.0, sd)
            update_log_probs(lp, mask, y, v)
            steps += 1
            mass_first = _logsumexp_slice(lp, lo, lo + half)
            mass_second = _logsumexp_slice(lp, lo + half, hi)
            total = np.logaddexp(mass_first, mass_second)
            if max(mass_first, mass_second) - total >= log_thresh:
                break
        lo, hi = (lo, lo + half) if mass_first >= mass_second else (lo + half, hi)
    idx = int(np.argmax(lp))
    return TrialRecord(strategy_id=NOISY_BINARY_VARIABLE, tau=steps, tau_stage1=0,
                       success=idx == target, trial_seed=trial_seed,
                       final_max_prob=float(math.exp(lp[idx])))


def run_exhaustive(config: SearchConfig, rng: np.random.Generator,
                   trial_seed: int = 0) -> TrialRecord:
    """Round-robin single-cell probes until one cell reaches 1 - epsilon."""
    m = config.M
    if m == 1:
        return TrialRecord(strategy_id=EXHAUSTIVE, tau=0, tau_stage1=0,
                           success=True, trial_seed=trial_seed, final_max_prob=1.0)
    v = config.noise_variance(1)
    sd = math.sqrt(v)
    log_thresh = math.log1p(-config.epsilon)
    target = int(rng.integers(m))
    lp = np.full(m, -math.log(m))
    mask = np.zeros(m, dtype=bool)
    steps = 0
    while lp.max() < log_thresh:
        _check_step_limit(steps, EXHAUSTIVE)
        cell = steps % m
        mask[:] = False
        mask[cell] = True
        x = 1.0 if cell == target else 0.0
        y = x + rng.normal(0.0, sd)
        update_log_probs(lp, mask, y, v)
        steps += 1
    idx = int(np.argmax(lp))
    return TrialRecord(strategy_id=EXHAUSTIVE, tau=steps, tau_stage1=0,
                       success=idx == target, trial_seed=trial_seed,
                       final_max_prob=float(math.exp(lp[idx])))


def run_strategy(spec: StrategySpec, config: SearchConfig,
                 rng: np.random.Generator, trial_seed: int = 0) -> TrialRecord:
    """Run one trial of the given strategy at the config's epsilon."""
    if spec.kind == FIXED_COMPOSITION:
        return run_fixed_composition(config, config.M, config.epsilon, rng, trial_seed)
    if spec.kind == SORTED_PM:
        return run_sorted_pm(config, range(config.M), config.epsilon, rng, trial_seed)
    if spec.kind == TWO_STAGE:
        return run_two_stage(config, spec.alpha, rng, trial_seed)
    if spec.kind == NOISY_BINARY_FIXED:
        return run_noisy_binary_fixed(config, rng, trial_seed)
    if spec.kind == NOISY_BINARY_VARIABLE:
        return run_noisy_binary_variable(config, rng, trial_seed)
    return run_exhaustive(config, rng, trial_seed)
