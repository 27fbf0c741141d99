"""Converse, achievability, adaptivity gain, and regime limits."""

import math

import pytest

from searchlab.bounds import (
    adaptive_upper_bound,
    adaptivity_gain_lower_bound,
    asymptotic_ratios,
    feasible_alphas,
    fixed_b_limit_constant,
    fixed_delta_limit_constant,
    general_f_bounds,
    nonadaptive_lower_bound,
    stage1_upper_bound,
    stage2_upper_bound,
)
from searchlab.channel import optimal_composition, solve_a_eta
from searchlab.errors import EtaTooLarge, InvalidAlpha, NoFeasibleAlpha
from searchlab.model import NoiseModel, new_config

# Frozen formula goldens at B=16, delta=1, sigma2=0.25, eps=1e-4,
# eta = 0.1*C1; cross-evaluated independently before being pinned.
LEMMA1_16 = 28.50541223855238
STAGE1_QUARTER = 191.04085178724799
STAGE2_QUARTER = 87.231777561512432
LEMMA2_16 = 214.80649044554893
GAIN_16 = -216.14957744628354
GAIN_PER_ALPHA = {
    0.5: -321.85743530309418,
    0.25: -249.76721711020805,
    0.125: -221.95451066563956,
    0.0625: -216.14957744628354,
}
THEOREM2_GAMMA1_25 = 11.38633599400962
THEOREM2_GAMMA_HALF_25 = 3.7005578829066836


@pytest.fixture(scope="module")
def eta16():
    cfg = new_config(16, 1, 0.25, 1e-4)
    _, c1 = optimal_composition(cfg)
    return 0.1 * c1


class TestFeasibleAlphas:
    def test_sixteen_cells(self, config16):
        assert feasible_alphas(config16) == [1 / 2, 1 / 4, 1 / 8, 1 / 16]

    def test_twelve_cells(self):
        cfg = new_config(12, 1, 0.25, 1e-4)
        assert feasible_alphas(cfg) == [1 / 2, 1 / 3, 1 / 4, 1 / 6, 1 / 12]

    def test_single_cell_has_none(self):
        cfg = new_config(1, 1, 0.25, 1e-4)
        assert feasible_alphas(cfg) == []
        with pytest.raises(NoFeasibleAlpha):
            adaptive_upper_bound(cfg, 1e-3)


class TestNonadaptiveLowerBound:
    def test_reference_golden(self, config16):
        assert nonadaptive_lower_bound(config16) == pytest.approx(
            LEMMA1_16, rel=1e-9)

    def test_single_cell_is_zero(self):
        assert nonadaptive_lower_bound(new_config(1, 1, 0.25, 1e-4)) == 0.0

    def test_clamped_at_zero_for_sloppy_epsilon(self):
        # with eps near 1 the numerator goes negative; the bound says 0
        assert nonadaptive_lower_bound(new_config(2, 1, 0.25, 0.999)) == 0.0

    def test_grows_with_resolution(self):
        vals = [nonadaptive_lower_bound(new_config(16, 1 / 2**j, 0.25, 1e-4))
                for j in range(3)]
        assert vals[0] < vals[1] < vals[2]


class TestStageBounds:
    def test_stage_goldens_at_quarter(self, config16, eta16):
        a = solve_a_eta(eta16, config16).value
        assert stage1_upper_bound(config16, 0.25, eta16, a) == pytest.approx(
            STAGE1_QUARTER, rel=1e-6)
        assert stage2_upper_bound(config16, 0.25, eta16, a) == pytest.approx(
            STAGE2_QUARTER, rel=1e-6)

    def test_singleton_sections_need_no_refine(self, config16, eta16):
        a = solve_a_eta(eta16, config16).value
        assert stage2_upper_bound(config16, 1 / 16, eta16, a) == 0.0

    def test_infeasible_alpha_rejected(self, config16, eta16):
        with pytest.raises(InvalidAlpha):
            stage1_upper_bound(config16, 0.3, eta16, 7.0)

    def test_eta_exceeding_capacity_rejected(self, config16):
        _, c1 = optimal_composition(config16)
        with pytest.raises(EtaTooLarge):
            stage1_upper_bound(config16, 0.25, c1 * 1.01, 7.0)

    def test_adaptive_bound_golden_and_minimizer(self, config16, eta16):
        val, alpha = adaptive_upper_bound(config16, eta16)
        assert val == pytest.approx(LEMMA2_16, rel=1e-6)
        assert alpha == 1 / 16


class TestAdaptivityGain:
    def test_reference_report(self, config16, eta16):
        rep = adaptivity_gain_lower_bound(config16, eta16)
        assert rep.gain_lb == pytest.approx(GAIN_16, abs=1e-4)
        assert rep.alpha_star == 1 / 16
        assert rep.q_star == pytest.approx(0.0625)
        assert rep.eta == eta16
        assert rep.a_eta == pytest.approx(6.8278842430375074, abs=1e-6)
        assert rep.nonadaptive_lb == pytest.approx(LEMMA1_16, rel=1e-9)
        assert rep.adaptive_ub == pytest.approx(LEMMA2_16, rel=1e-6)

    def test_per_alpha_gains(self, config16, eta16):
        rep = adaptivity_gain_lower_bound(config16, eta16)
        assert set(rep.alpha_terms) == set(GAIN_PER_ALPHA)
        for alpha, want in GAIN_PER_ALPHA.items():
            assert rep.alpha_terms[alpha]["gain"] == pytest.approx(want, abs=1e-4)

    def test_capacity_terms_are_probabilities_of_a_bit(self, config16, eta16):
        rep = adaptivity_gain_lower_bound(config16, eta16)
        assert rep.adaptive_ub >= 0.0
        assert all(0.0 <= c <= 1.0 for c in rep.capacity_terms.values())

    def test_desk_scale_gain_is_vacuous_flagged(self, config16, eta16):
        # at M=16 the additive constants swamp the brackets; the bound is
        # honest about saying nothing
        rep = adaptivity_gain_lower_bound(config16, eta16)
        assert rep.gain_lb <= 0.0
        assert "Vacuous" in rep.flags

    def test_near_one_epsilon_is_vacuous(self):
        cfg = new_config(16, 1, 0.25, 0.9)
        _, c1 = optimal_composition(cfg)
        rep = adaptivity_gain_lower_bound(cfg, 0.1 * c1)
        assert rep.gain_lb <= 0.0
        assert "Vacuous" in rep.flags

    def test_gain_improves_with_resolution(self, config16, eta16):
        # the positive refine bracket grows with log2(M) while the additive
        # constants stay put, so halving delta must raise the gain
        rep16 = adaptivity_gain_lower_bound(config16, eta16)
        cfg32 = new_config(16, 0.5, 0.25, 1e-4)
        _, c1 = optimal_composition(cfg32)
        rep32 = adaptivity_gain_lower_bound(cfg32, 0.1 * c1)
        assert rep32.gain_lb > rep16.gain_lb

    def test_loglog_clamp_flagged(self, config16, eta16):
        # alpha = 1/2 contributes log2(log2(2)) = log2(1) = 0 via the clamp
        rep = adaptivity_gain_lower_bound(config16, eta16)
        assert "LogLogClamped" in rep.flags


class TestGeneralNoiseLaws:
    def test_gamma_one_matches_golden(self):
        cfg = new_config(25, 1, 0.25, 1e-4, noise=NoiseModel.power(1.0))
        _, c1 = optimal_composition(cfg)
        rep = general_f_bounds(cfg, 0.1 * c1)
        assert rep.gain_lb == pytest.approx(THEOREM2_GAMMA1_25, abs=1e-4)
        assert rep.a_eta is None
        assert "Asymptotic" in rep.flags

    def test_gamma_half_golden(self):
        cfg = new_config(25, 1, 0.25, 1e-4, noise=NoiseModel.power(0.5))
        _, c1 = optimal_composition(cfg)
        rep = general_f_bounds(cfg, 0.1 * c1)
        assert rep.gain_lb == pytest.approx(THEOREM2_GAMMA_HALF_25, abs=1e-4)

    def test_stronger_noise_growth_gives_larger_gain(self):
        # sublinear vs superlinear variance growth at B=25: adaptivity
        # should matter more when large probes are noisier
        gains = {}
        for gamma in (0.5, 2.0):
            cfg = new_config(25, 1, 0.25, 1e-4, noise=NoiseModel.power(gamma))
            _, c1 = optimal_composition(cfg)
            gains[gamma] = general_f_bounds(cfg, 0.1 * c1).gain_lb
        assert gains[2.0] > gains[0.5]

    def test_table_noise_law_accepted(self):
        table = [float(k) for k in range(1, 9)]
        cfg = new_config(8, 1, 0.25, 1e-4, noise=NoiseModel.from_table(table))
        _, c1 = optimal_composition(cfg)
        rep = general_f_bounds(cfg, 0.1 * c1)
        assert math.isfinite(rep.gain_lb)


class TestRegimeLimits:
    def test_limit_constants(self, config16):
        _, c1 = optimal_composition(config16)
        assert fixed_b_limit_constant(config16) == pytest.approx(
            (1 - 1e-4) / c1 - 1.0, rel=1e-12)
        assert fixed_delta_limit_constant(config16) == pytest.approx(
            (1 - 1e-4) * 0.25 * math.log(2.0), rel=1e-12)

    def test_limits_vacuous_near_epsilon_one(self):
        cfg = new_config(16, 1, 0.25, 1.0 - 1e-12)
        assert fixed_delta_limit_constant(cfg) <= 1e-10
        # the fixed-B constant needs eps >= 1 - C1 to go negative, which the
        # config validation forbids; the delta constant alone marks the regime
        ratios = asymptotic_ratios(
            [new_config(16, 1 / 2**j, 0.25, 1.0 - 1e-12) for j in (1, 2)])
        assert all(r.limit_constant <= 1e-8 for r in ratios)

    def test_regime_inference(self):
        fixed_b = asymptotic_ratios(
            [new_config(1, 1 / 2**j, 0.25, 1e-4) for j in (4, 5, 6)])
        assert all(r.regime == "fixed_B" for r in fixed_b)
        fixed_d = asymptotic_ratios(
            [new_config(b, 1, 0.25, 1e-4) for b in (8, 16, 32)])
        assert all(r.regime == "fixed_delta" for r in fixed_d)

    def test_mixed_sweep_rejected(self):
        with pytest.raises(ValueError):
            asymptotic_ratios([new_config(8, 1, 0.25, 1e-4),
                               new_config(16, 0.5, 0.25, 1e-4)])

    def test_single_point_rejected(self):
        with pytest.raises(ValueError):
            asymptotic_ratios([new_config(8, 1, 0.25, 1e-4)])
