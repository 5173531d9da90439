import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from dolrm.env import EnvironmentSpec, derived_bounds, validate_env
from dolrm.oracle import (
    best_response,
    brute_force_theta_star,
    compute_gap,
    dinkelbach_theta_star,
    expected_ratio,
)
from dolrm.policies import PolicyMap

from conftest import seven_type_env, two_type_env

GREEDY = PolicyMap((0, 0))
REVERSE = PolicyMap((0, 1))


def random_spec(rng):
    num_types = int(rng.integers(1, 6))
    probs = rng.random(num_types) + 0.05
    probs = probs / probs.sum()
    arms = tuple(
        tuple(
            (float(rng.uniform(0.5, 5.0)), float(rng.uniform(0.5, 5.0)))
            for _ in range(int(rng.integers(1, 5)))
        )
        for _ in range(num_types)
    )
    return validate_env(EnvironmentSpec(tuple(float(p) for p in probs), arms, 0.0))


def all_maps(spec):
    return [
        PolicyMap(actions)
        for actions in itertools.product(*(range(len(arms_s)) for arms_s in spec.arms))
    ]


class TestExpectedRatio:
    def test_greedy_map(self, p08):
        assert expected_ratio(p08, GREEDY) == pytest.approx(2.5, abs=1e-12)

    def test_reverse_map(self, p08):
        assert expected_ratio(p08, REVERSE) == pytest.approx(2.6, abs=1e-12)

    def test_flipped_distribution(self):
        spec = two_type_env(p0=0.2)
        assert expected_ratio(spec, GREEDY) == pytest.approx(5.0 / 3.0, abs=1e-12)
        assert expected_ratio(spec, REVERSE) == pytest.approx(1.4, abs=1e-12)


class TestBestResponse:
    def test_low_price_prefers_rich_arm(self, p08):
        assert best_response(p08, 0.5).actions == (0, 0)

    def test_high_price_prefers_cheap_arm(self, p08):
        assert best_response(p08, 2.5).actions == (0, 1)

    def test_singleton_types_are_forced(self):
        spec = EnvironmentSpec((0.5, 0.5), (((2.0, 1.0),), ((4.0, 2.0),)))
        assert best_response(spec, 123.0).actions == (0, 0)


class TestDinkelbach:
    def test_two_type_iteration_trace(self, p08):
        result = dinkelbach_theta_star(p08)
        assert result.theta_star == pytest.approx(2.6, abs=1e-12)
        assert result.policy.actions == (0, 1)
        assert result.iterations == 3
        assert len(result.trace) == 4
        for got, want in zip(result.trace, (0.5, 2.5, 2.6, 2.6)):
            assert got == pytest.approx(want, abs=1e-12)

    def test_flipped_distribution_prefers_greedy(self):
        result = dinkelbach_theta_star(two_type_env(p0=0.2))
        assert result.theta_star == pytest.approx(5.0 / 3.0, abs=1e-12)
        assert result.policy.actions == (0, 0)

    def test_seven_type_agrees_with_enumeration(self):
        spec = seven_type_env()
        dk = dinkelbach_theta_star(spec)
        bf = brute_force_theta_star(spec)
        assert dk.theta_star == pytest.approx(bf.theta_star, abs=1e-9)
        assert dk.theta_star == pytest.approx(float(Fraction(97, 46)), abs=1e-12)
        assert dk.policy.actions == (0, 1, 0, 0, 0, 0, 0)

    def test_fixed_point_property(self, p08):
        result = dinkelbach_theta_star(p08)
        assert expected_ratio(p08, result.policy) == pytest.approx(
            result.theta_star, abs=1e-12
        )

    def test_result_within_ratio_bounds(self, p08):
        b = derived_bounds(p08)
        theta = dinkelbach_theta_star(p08).theta_star
        assert b.theta_min <= theta <= b.theta_max

    def test_rejects_non_positive_tolerance(self, p08):
        with pytest.raises(ValueError, match="tol"):
            dinkelbach_theta_star(p08, tol=0.0)


class TestBruteForce:
    def test_two_type_maximum(self, p08):
        result = brute_force_theta_star(p08)
        assert result.theta_star == pytest.approx(2.6, abs=1e-12)
        assert result.policy.actions == (0, 1)
        assert result.iterations == 2

    def test_single_cell(self):
        spec = EnvironmentSpec((1.0,), (((5.0, 2.0),),))
        assert brute_force_theta_star(spec).theta_star == 2.5

    def test_flipped_distribution(self):
        result = brute_force_theta_star(two_type_env(p0=0.2))
        assert result.theta_star == pytest.approx(5.0 / 3.0, abs=1e-12)

    def test_enumeration_guard(self, p08):
        with pytest.raises(ValueError, match="enumeration"):
            brute_force_theta_star(p08, max_maps=1)


class TestComputeGap:
    def test_definitional_arithmetic(self):
        report = compute_gap(2.6, 250.0, 100.0, 100)
        assert report.gap == pytest.approx(0.1, rel=1e-12)
        assert report.regret == pytest.approx(10.0, rel=1e-12)

    def test_exact_ratio_has_zero_gap(self):
        report = compute_gap(2.5, 250.0, 100.0, 100)
        assert report.gap == 0.0
        assert report.regret == 0.0

    def test_overshoot_is_absolute(self):
        assert compute_gap(2.6, 270.0, 100.0, 100).gap == pytest.approx(0.1, rel=1e-12)

    def test_rejects_non_positive_cost(self):
        with pytest.raises(ValueError, match="cumulative cost"):
            compute_gap(2.6, 250.0, 0.0, 100)

    def test_rejects_bad_horizon(self):
        with pytest.raises(ValueError, match="horizon"):
            compute_gap(2.6, 250.0, 100.0, 0)


class TestRandomSpecAgreement:
    def test_dinkelbach_matches_enumeration_on_200_specs(self):
        rng = np.random.default_rng(2024)
        start = time.perf_counter()
        for _ in range(200):
            spec = random_spec(rng)
            dk = dinkelbach_theta_star(spec)
            bf = brute_force_theta_star(spec)
            assert dk.theta_star == pytest.approx(bf.theta_star, abs=1e-9)
            assert expected_ratio(spec, dk.policy) == pytest.approx(
                expected_ratio(spec, bf.policy), abs=1e-9
            )
        assert time.perf_counter() - start < 5.0

    def test_iterates_climb_and_terminate_quickly(self):
        rng = np.random.default_rng(55)
        for _ in range(50):
            spec = random_spec(rng)
            result = dinkelbach_theta_star(spec)
            trace = result.trace
            assert all(b >= a - 1e-15 for a, b in zip(trace, trace[1:]))
            improvements = sum(1 for a, b in zip(trace, trace[1:]) if b > a + 1e-15)
            assert improvements <= math.prod(len(arms_s) for arms_s in spec.arms)

    def test_optimum_dominates_every_map(self):
        rng = np.random.default_rng(99)
        for _ in range(50):
            spec = random_spec(rng)
            theta_star = dinkelbach_theta_star(spec).theta_star
            for pmap in all_maps(spec):
                assert theta_star >= expected_ratio(spec, pmap) - 1e-12

    def test_reward_scaling_covariance(self):
        rng = np.random.default_rng(7)
        kappa = 2.5
        for _ in range(50):
            spec = random_spec(rng)
            scaled = EnvironmentSpec(
                spec.arrival_probs,
                tuple(
                    tuple((kappa * r, c) for r, c in arms_s) for arms_s in spec.arms
                ),
                0.0,
            )
            base = dinkelbach_theta_star(spec)
            lifted = dinkelbach_theta_star(scaled)
            assert lifted.theta_star == pytest.approx(kappa * base.theta_star, rel=1e-9)
            assert lifted.policy.actions == base.policy.actions
