import math

import numpy as np
import pytest

from thermops.core import EnergySpectrum, GibbsContext, ProbVec
from thermops.divergences import (
    BURG,
    burg_free_energy,
    default_alpha_grid,
    free_energy_alpha,
    renyi_divergence,
    renyi_entropy,
    second_laws_check,
)
from thermops.errors import InvalidInputError
from thermops.majorization import shannon_entropy
from thermops.sampling import random_context, random_gibbs_stochastic, random_prob_vec
from thermops.thermo import embed, rationalize

UNIFORM3 = ProbVec([1 / 3] * 3)
Y3 = ProbVec([2 / 3, 1 / 3, 0.0])


class TestRenyiEntropy:
    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0, math.inf])
    def test_uniform_gives_log_n(self, alpha):
        x = ProbVec(np.full(5, 0.2))
        assert renyi_entropy(x, alpha) == pytest.approx(math.log(5), abs=1e-12)

    @pytest.mark.parametrize("alpha", [-math.inf, -2.0, -0.5])
    def test_uniform_negative_orders(self, alpha):
        # the signed convention flips the value for negative orders
        x = ProbVec(np.full(5, 0.2))
        assert renyi_entropy(x, alpha) == pytest.approx(-math.log(5), abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 17.0, math.inf])
    def test_pure_distribution(self, alpha):
        assert renyi_entropy(ProbVec([1.0, 0.0]), alpha) == pytest.approx(0.0, abs=1e-12)

    def test_collision_entropy_value(self):
        x = ProbVec([0.9, 0.1])
        assert renyi_entropy(x, 2.0) == pytest.approx(-math.log(0.82), abs=1e-14)

    def test_negative_order_with_zeros_diverges(self):
        assert renyi_entropy(ProbVec([1.0, 0.0]), -1.0) == -math.inf

    def test_minus_infinity_branch(self):
        x = ProbVec([0.9, 0.1])
        assert renyi_entropy(x, -math.inf) == pytest.approx(math.log(0.1))

    def test_limit_consistency(self, rng):
        for _ in range(20):
            x = random_prob_vec(rng, 4)
            assert renyi_entropy(x, 1.0) == pytest.approx(renyi_entropy(x, 1 + 1e-6), abs=1e-4)
            assert renyi_entropy(x, 1.0) == pytest.approx(renyi_entropy(x, 1 - 1e-6), abs=1e-4)
            assert renyi_entropy(x, 0.0) == pytest.approx(renyi_entropy(x, 1e-6), abs=1e-4)
            assert renyi_entropy(x, math.inf) == pytest.approx(renyi_entropy(x, 1e5), abs=1e-4)


class TestRenyiDivergence:
    @pytest.mark.parametrize("alpha", [-math.inf, -1.0, 0.0, 0.5, 1.0, 2.0, math.inf])
    def test_self_divergence_vanishes(self, rng, alpha):
        x = random_prob_vec(rng, 4)
        assert renyi_divergence(x, x, alpha) == pytest.approx(0.0, abs=1e-12)

    def test_zero_order_support_formula(self, ctx_halves):
        g = ctx_halves.gibbs
        val = renyi_divergence(ProbVec([1.0, 0.0]), g, 0.0)
        assert val == pytest.approx(-math.log(g.p[0]), abs=1e-14)

    def test_rejects_rank_deficient_reference(self):
        with pytest.raises(InvalidInputError):
            renyi_divergence(ProbVec([0.5, 0.5]), ProbVec([1.0, 0.0]), 1.0)

    def test_monotone_in_alpha(self, rng):
        alphas = [0.1, 0.5, 1.0, 2.0, 5.0, math.inf]
        for _ in range(30):
            x, y = random_prob_vec(rng, 4), random_prob_vec(rng, 4)
            vals = [renyi_divergence(x, y, a) for a in alphas]
            assert all(b >= a - 1e-10 for a, b in zip(vals, vals[1:]))

    def test_limit_consistency(self, rng):
        for _ in range(20):
            x, y = random_prob_vec(rng, 4), random_prob_vec(rng, 4)
            assert renyi_divergence(x, y, 1.0) == pytest.approx(
                renyi_divergence(x, y, 1 + 1e-6), abs=1e-4
            )
            assert renyi_divergence(x, y, math.inf) == pytest.approx(
                renyi_divergence(x, y, 1e5), abs=1e-4
            )


class TestFreeEnergies:
    def test_worked_example_values(self, ctx_012):
        assert free_energy_alpha(UNIFORM3, ctx_012, 1.0) == pytest.approx(0.084, abs=2e-3)
        assert free_energy_alpha(Y3, ctx_012, 1.0) == pytest.approx(-0.197, abs=2e-3)

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0, math.inf])
    def test_thermal_state_floor(self, ctx_012, alpha):
        g = ProbVec(ctx_012.gibbs.p)
        expected = -ctx_012.kT * math.log(ctx_012.Z)
        assert free_energy_alpha(g, ctx_012, alpha) == pytest.approx(expected, abs=1e-12)

    def test_beta_zero_rejected(self):
        ctx = GibbsContext(EnergySpectrum([0.0, 1.0]), 0.0)
        with pytest.raises(InvalidInputError):
            free_energy_alpha(ProbVec([0.5, 0.5]), ctx, 1.0)

    def test_embedding_relation(self, rng, ctx_eighths):
        # F_alpha(x) + kT log Z = kT (log D - H_alpha(embedded x)) for a >= 0
        spec = rationalize(ctx_eighths, 8)
        kT = ctx_eighths.kT
        grid = [0.0, 0.3, 0.7, 1.0, 1.5, 2.0, 3.0, 5.0, math.inf]
        for _ in range(25):
            x = random_prob_vec(rng, 3)
            lifted = embed(x, spec)
            for alpha in grid:
                lhs = free_energy_alpha(x, ctx_eighths, alpha) + kT * math.log(ctx_eighths.Z)
                rhs = kT * (math.log(spec.D) - renyi_entropy(lifted, alpha))
                assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_data_processing_all_orders(self, rng):
        grid = default_alpha_grid()
        for _ in range(25):
            n = int(rng.integers(2, 5))
            ctx = random_context(rng, n, beta_range=(0.2, 3.0))
            x = random_prob_vec(rng, n)
            y = ProbVec(random_gibbs_stochastic(rng, ctx).entries @ x.p)
            for alpha in grid:
                fx, fy = free_energy_alpha(x, ctx, alpha), free_energy_alpha(y, ctx, alpha)
                assert fy <= fx + 1e-9
            assert burg_free_energy(y, ctx) <= burg_free_energy(x, ctx) + 1e-9


class TestBurg:
    def test_thermal_state(self, ctx_012):
        g = ProbVec(ctx_012.gibbs.p)
        assert burg_free_energy(g, ctx_012) == pytest.approx(
            -ctx_012.kT * math.log(ctx_012.Z), abs=1e-12
        )

    def test_rank_deficient_diverges(self, ctx_halves):
        assert burg_free_energy(ProbVec([1.0, 0.0]), ctx_halves) == math.inf

    def test_floor_on_full_support(self, rng, ctx_012):
        floor = -ctx_012.kT * math.log(ctx_012.Z)
        for _ in range(30):
            x = random_prob_vec(rng, 3)
            assert burg_free_energy(x, ctx_012) >= floor - 1e-12


class TestSecondLaws:
    def test_worked_pair_passes_at_order_one_only(self, ctx_012):
        verdict = second_laws_check(UNIFORM3, Y3, ctx_012)
        violated_alphas = {v[0] for v in verdict.violations}
        assert 1.0 not in violated_alphas  # F(x) > F(y) at the standard order
        assert not verdict.passed  # but the full grid rules the transition out

    def test_thermal_source_always_fails(self, rng, ctx_012):
        g = ProbVec(ctx_012.gibbs.p)
        for _ in range(10):
            y = random_prob_vec(rng, 3)
            verdict = second_laws_check(g, y, ctx_012)
            assert not verdict.passed
            assert len(verdict.violations) == len(verdict.alpha_grid) + 1  # burg too

    def test_reflexive_pass(self, rng, ctx_012):
        x = random_prob_vec(rng, 3)
        verdict = second_laws_check(x, x, ctx_012)
        assert verdict.passed
        assert verdict.violations == ()

    def test_necessary_for_reachable_pairs(self, rng):
        from thermops.thermo import thermo_majorizes

        for _ in range(30):
            n = int(rng.integers(2, 5))
            ctx = random_context(rng, n, beta_range=(0.2, 3.0))
            x = random_prob_vec(rng, n)
            y = ProbVec(random_gibbs_stochastic(rng, ctx).entries @ x.p)
            assert thermo_majorizes(x, y, ctx)
            assert second_laws_check(x, y, ctx).passed

    def test_burg_tag_present(self, ctx_halves):
        verdict = second_laws_check(ProbVec([0.5, 0.5]), ProbVec([1.0, 0.0]), ctx_halves)
        assert any(v[0] == BURG for v in verdict.violations)

    def test_empty_grid_rejected(self, ctx_012):
        with pytest.raises(InvalidInputError):
            second_laws_check(UNIFORM3, Y3, ctx_012, alpha_grid=[])

    def test_default_grid_shape(self):
        grid = default_alpha_grid()
        assert grid[0] == -math.inf and grid[-1] == math.inf
        assert 1.0 in grid
        assert min(a for a in grid if a > 0) == pytest.approx(0.1)
        assert max(a for a in grid if a < 0) == pytest.approx(-0.1)


def test_shannon_consistency(rng):
    x = random_prob_vec(rng, 5)
    assert renyi_entropy(x, 1.0) == pytest.approx(shannon_entropy(x), abs=1e-14)
