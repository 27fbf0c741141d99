"""Seeded Monte Carlo batches, summaries, and drift probes."""

import numpy as np
import pytest

from searchlab.channel import bawgn_capacity, optimal_composition
from searchlab.model import new_config
from searchlab.sim import (
    DriftReport,
    SummaryStats,
    drift_probe,
    run_single_trial,
    run_trials,
    trial_seed_for,
)
from searchlab.strategies import (
    FIXED_COMPOSITION,
    SORTED_PM,
    TWO_STAGE,
    StrategySpec,
)


class TestSeeding:
    def test_seed_derivation_is_deterministic(self):
        assert trial_seed_for(20260825, 0) == trial_seed_for(20260825, 0)
        assert trial_seed_for(20260825, 0) != trial_seed_for(20260825, 1)
        assert trial_seed_for(1, 5) != trial_seed_for(2, 5)

    def test_substreams_have_no_collisions_in_a_batch(self):
        seeds = {trial_seed_for(99, i) for i in range(10_000)}
        assert len(seeds) == 10_000

    def test_single_trial_reproducible(self, config16):
        spec = StrategySpec(SORTED_PM)
        a = run_single_trial(spec, config16, 123456789)
        b = run_single_trial(spec, config16, 123456789)
        assert a == b

    def test_different_seeds_vary(self, config16):
        spec = StrategySpec(SORTED_PM)
        taus = {run_single_trial(spec, config16, s).tau for s in range(40)}
        assert len(taus) > 1


class TestRunTrials:
    def test_summary_fields(self, config16):
        s = run_trials(StrategySpec(SORTED_PM), config16, 50, 7)
        assert isinstance(s, SummaryStats)
        assert s.strategy_id == "sorted_pm"
        assert s.n_trials == 50 and s.master_seed == 7
        assert s.mean_tau > 0 and s.ci95_half_width > 0
        assert 0.0 <= s.err_rate <= 1.0

    def test_two_stage_mean_stage1_recorded(self, config16):
        s = run_trials(StrategySpec(TWO_STAGE, alpha=0.25), config16, 50, 7)
        assert 0 < s.mean_tau_stage1 < s.mean_tau

    def test_single_trial_flagged_low_sample(self, config16):
        s = run_trials(StrategySpec(SORTED_PM), config16, 1, 7)
        assert s.ci95_half_width == 0.0
        assert "LowSample" in s.flags

    def test_low_sample_flag_threshold(self, config16):
        assert "LowSample" in run_trials(StrategySpec(SORTED_PM), config16, 99, 7).flags
        assert run_trials(StrategySpec(SORTED_PM), config16, 100, 7).flags == ()

    def test_nonpositive_trial_count_rejected(self, config16):
        with pytest.raises(ValueError):
            run_trials(StrategySpec(SORTED_PM), config16, 0, 7)

    def test_parallel_matches_serial_exactly(self, config16):
        spec = StrategySpec(FIXED_COMPOSITION)
        serial = run_trials(spec, config16, 80, 20260825, workers=1)
        parallel = run_trials(spec, config16, 80, 20260825, workers=4)
        assert serial == parallel

    def test_mean_matches_recomputation_from_seeds(self, config16):
        spec = StrategySpec(SORTED_PM)
        s = run_trials(spec, config16, 30, 55)
        taus = [run_single_trial(spec, config16, trial_seed_for(55, i)).tau
                for i in range(30)]
        assert s.mean_tau == pytest.approx(np.mean(taus), abs=0)


class TestDriftProbe:
    def test_fixed_composition_floor_is_best_capacity(self, config16):
        rep = drift_probe(FIXED_COMPOSITION, config16, 10_000, 3)
        _, c1 = optimal_composition(config16)
        assert isinstance(rep, DriftReport)
        assert rep.capacity_floor == pytest.approx(c1, abs=1e-12)
        assert rep.n_steps == 10_000 and rep.se > 0

    def test_sorted_pm_floor_is_half_mass_capacity(self, config16):
        rep = drift_probe(SORTED_PM, config16, 10_000, 3)
        want = bawgn_capacity(0.5, config16.variance_at(8.0))
        assert rep.capacity_floor == pytest.approx(want, abs=1e-12)

    def test_short_probes_rejected(self, config16):
        with pytest.raises(ValueError):
            drift_probe(FIXED_COMPOSITION, config16, 9_999, 3)

    def test_unsupported_kind_rejected(self, config16):
        with pytest.raises(ValueError):
            drift_probe(TWO_STAGE, config16, 10_000, 3)

    def test_single_cell_domain_rejected(self):
        with pytest.raises(ValueError):
            drift_probe(FIXED_COMPOSITION, new_config(1, 1, 0.25, 1e-4), 10_000, 3)

    def test_probe_reproducible(self, config16):
        a = drift_probe(SORTED_PM, config16, 10_000, 21)
        b = drift_probe(SORTED_PM, config16, 10_000, 21)
        assert a == b
