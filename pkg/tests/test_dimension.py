"""Tests for dimension bounds, box counting and the regression estimate."""

import numpy as np
import pytest

from chfif import (
    InsufficientScalesError,
    SampledGraph,
    SamplingTooCoarseError,
    box_count,
    classify,
    dimension_one_predicate,
    dimension_report,
    estimate_dimension,
    sample_exact,
    solve_model,
    theoretical_bounds,
)
from chfif.smoothness import SmoothnessReport, TauBounds

from helpers import equidistant_problem, model_for, zero_param_problem

SYNTHETIC_DIMENSION = 1.0 + np.log(1.4) / np.log(2.0)   # two maps, rates 0.7


def synthetic_self_affine(gamma=0.7, alpha=None):
    alpha = gamma if alpha is None else alpha
    problem = equidistant_problem(
        alphas=(alpha, alpha), betas=(0.0, 0.0), gammas=(gamma, gamma))
    return solve_model(problem)


def fake_report(theta, delta, tag):
    return SmoothnessReport(
        theta_regime=theta, omega_state="LT1", gamma_state="LT1",
        modulus_order="LIP_DELTA", delta=delta, delta_tag=tag,
        tau_bounds=TauBounds(1.0, 1.0, 1.0, 1.0), case_label="a")


class TestTheoreticalBounds:
    def test_unit_sum_collapses_to_point_interval(self):
        # equidistant two-map family with |alpha| summing to 1 and delta 1
        model = synthetic_self_affine(gamma=0.3, alpha=0.5)
        report = classify(model)
        assert report.delta == 1.0
        bounds = theoretical_bounds(model, report)
        assert bounds is not None
        assert bounds.critical_condition == "omega"
        assert bounds.lower == pytest.approx(1.0, abs=1e-12)
        assert bounds.upper == pytest.approx(1.0, abs=1e-12)
        assert bounds.equidistant

    def test_non_critical_has_no_bounds(self):
        model = model_for("fig4")
        assert theoretical_bounds(model, classify(model)) is None

    def test_critical_ratio_bounds_with_clamping(self):
        model = model_for("fig5")
        bounds = theoretical_bounds(model, classify(model))
        assert bounds.critical_condition == "omega"     # takes priority over gamma
        assert bounds.sum_channel == "alpha"
        assert bounds.lower_unclamped == pytest.approx(
            1.0 - np.log(0.82) / np.log(0.40), rel=1e-12)
        assert bounds.lower_unclamped < 1.0
        assert bounds.lower == 1.0
        assert bounds.upper == pytest.approx(-np.log(3.0) / np.log(0.40), rel=1e-12)
        assert bounds.lower <= bounds.upper

    def test_gamma_only_critical_uses_gamma_sums(self):
        model = model_for("fig10")
        bounds = theoretical_bounds(model, classify(model))
        assert bounds.critical_condition == "gamma"
        assert bounds.sum_channel == "gamma"
        assert bounds.lower_unclamped == pytest.approx(
            1.0 - np.log(0.85) / np.log(0.40), rel=1e-12)

    def test_high_theta_critical_gamma(self):
        model = model_for("fig12")
        report = classify(model)
        bounds = theoretical_bounds(model, report)
        assert report.delta == pytest.approx(0.5, rel=1e-12)
        assert bounds.upper == pytest.approx(0.5 - np.log(3.0) / np.log(0.40), rel=1e-12)

    @pytest.mark.parametrize("name", ["fig5", "fig9", "fig10", "fig11", "fig12"])
    def test_bounds_ordering_after_clamping(self, name):
        model = model_for(name)
        bounds = theoretical_bounds(model, classify(model))
        assert bounds is not None
        assert 1.0 <= bounds.lower <= bounds.upper <= 2.0


class TestBoxCount:
    def test_horizontal_segment(self):
        xs = np.linspace(0.0, 1.0, 2001)
        graph = SampledGraph(xs=xs, f1s=np.full_like(xs, 0.37), f2s=xs)
        count = box_count(graph, 1.0 / 16)
        assert count in (16, 17)

    def test_diagonal_segment(self):
        xs = np.linspace(0.0, 1.0, 2001)
        graph = SampledGraph(xs=xs, f1s=xs.copy(), f2s=xs)
        count = box_count(graph, 1.0 / 16)
        assert 16 <= count <= 32

    def test_refinement_monotonicity(self):
        graph = sample_exact(model_for("fig5"), 12)
        counts = [box_count(graph, 2.0 ** (-j)) for j in range(4, 13)]
        assert all(b > a for a, b in zip(counts, counts[1:]))

    def test_refuses_coarse_sampling(self):
        graph = sample_exact(model_for("fig5"), 6)
        with pytest.raises(SamplingTooCoarseError):
            box_count(graph, 2.0 ** (-12))

    def test_density_factor_override(self):
        graph = sample_exact(model_for("fig5"), 6)   # spacing 0.4**7 = 1.6e-3
        assert box_count(graph, 2.0 ** (-8), density_factor=2.0) > 0

    def test_component_selection(self):
        model = synthetic_self_affine()
        graph = sample_exact(model, 10)
        c1 = box_count(graph, 2.0 ** (-6), component="f1")
        c2 = box_count(graph, 2.0 ** (-6), component="f2")
        assert c1 == c2   # the two components coincide for this model


class TestEstimateDimension:
    def test_requires_enough_scales(self):
        graph = sample_exact(model_for("fig4"), 8)
        with pytest.raises(InsufficientScalesError):
            estimate_dimension(graph, [4, 5, 6])

    def test_polyline_is_one_dimensional(self):
        model = solve_model(zero_param_problem())
        result = estimate_dimension(sample_exact(model, 10), range(4, 11))
        assert 0.95 <= result.estimate <= 1.10

    def test_flat_data(self):
        problem = equidistant_problem(
            alphas=(0.0, 0.0), betas=(0.0, 0.0), gammas=(0.0, 0.0),
            ys=(2.0, 2.0, 2.0))
        result = estimate_dimension(sample_exact(solve_model(problem), 14), range(4, 13))
        assert 0.95 <= result.estimate <= 1.05

    def test_known_self_affine_dimension(self):
        # two equidistant maps with vertical rate 0.7: dimension
        # 1 + log(1.4)/log(2); depth chosen to satisfy the density rule
        # with a factor-8 margin at the finest scale
        model = synthetic_self_affine()
        graph = sample_exact(model, 14)
        result = estimate_dimension(graph, range(4, 13))
        assert abs(result.estimate - SYNTHETIC_DIMENSION) <= 0.1

    def test_hidden_component_route_matches(self):
        # the hidden component is autonomous, so its dimension is set by
        # gamma alone no matter what the visible parameters do
        problem = equidistant_problem(
            alphas=(0.2, 0.2), betas=(0.0, 0.0), gammas=(0.7, 0.7))
        graph = sample_exact(solve_model(problem), 14)
        result = estimate_dimension(graph, range(4, 13), component="f2")
        assert abs(result.estimate - SYNTHETIC_DIMENSION) <= 0.1

    def test_diagnostics(self):
        result = estimate_dimension(sample_exact(model_for("fig9"), 10), range(4, 11))
        assert result.r_squared > 0.99
        assert len(result.counts) == 7
        assert result.eps_min == 2.0 ** (-10)
        assert result.eps_max == 2.0 ** (-4)


class TestDimensionOnePredicate:
    def test_positive_case(self):
        model = synthetic_self_affine(gamma=0.3, alpha=0.3)
        report = classify(model)
        assert report.delta == 1.0 and report.delta_tag == "delta1"
        result = dimension_one_predicate(model, report)
        assert result.holds

    def test_non_equidistant_gate(self):
        model = model_for("fig4")
        result = dimension_one_predicate(model, classify(model))
        assert not result.holds
        assert "equidistant" in result.note

    def test_large_alpha_sum_blocks_the_gamma_branch_case(self):
        model = synthetic_self_affine(gamma=0.3, alpha=0.7)   # sum 1.4
        result = dimension_one_predicate(model, fake_report("LT1", 1.0, "delta4"))
        assert not result.holds

    def test_gamma_sum_can_carry_first_case(self):
        model = synthetic_self_affine(gamma=0.3, alpha=0.7)   # alpha sum 1.4, gamma sum 0.6
        result = dimension_one_predicate(model, fake_report("LT1", 1.0, "delta1"))
        assert result.holds

    def test_delta_below_one_fails(self):
        model = synthetic_self_affine(gamma=0.3, alpha=0.3)
        result = dimension_one_predicate(model, fake_report("LT1", 0.9, "delta1"))
        assert not result.holds


class TestDimensionReport:
    def test_full_assembly(self):
        model = model_for("fig9")
        report = dimension_report(
            model, classify(model), sample_exact(model, 10), range(4, 11))
        assert report.critical_condition == "omega"
        assert report.omega_critical and report.theta_critical
        assert not report.gamma_critical
        assert report.bounds is not None
        assert not report.dimension_one_flag
        assert 1.0 <= report.empirical.estimate <= 1.4

    def test_non_critical_report(self):
        model = model_for("fig4")
        report = dimension_report(
            model, classify(model), sample_exact(model, 10), range(4, 11))
        assert report.critical_condition == "none"
        assert report.bounds is None
