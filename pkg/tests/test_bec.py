import math

import numpy as np
import pytest

from qel.bec import (
    LossCurve,
    LossParams,
    ktilde_from_k3,
    required_three_body,
    solve_analytic,
    solve_numeric,
)
from qel.errors import DomainError


class TestSolveAnalytic:
    def test_no_loss(self):
        for t in (0.0, 1.0, 1e4):
            assert solve_analytic(0.0, 0.0, 1e5, t) == 1e5

    def test_pure_exponential(self):
        n = solve_analytic(1e-3, 0.0, 1e5, 10.0)
        assert n == pytest.approx(1e5 * math.exp(-0.01), rel=1e-14)

    def test_ten_percent_budget_scenario(self):
        # K1 = 1e-3 1/s with Ktilde = 1e-12 1/s keeps ~90% of 1e5 atoms over 10 s
        n = solve_analytic(1e-3, 1.0e-12, 1e5, 10.0)
        assert n / 1e5 == pytest.approx(0.90, abs=0.01)

    def test_k1_zero_limit_is_continuous(self):
        # closed form at tiny K1 approaches the K1 = 0 branch
        big = solve_analytic(1e-12, 1e-12, 1e5, 10.0)
        zero = solve_analytic(0.0, 1e-12, 1e5, 10.0)
        assert big == pytest.approx(zero, rel=1e-9)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            solve_analytic(-1.0, 0.0, 1e5, 1.0)
        with pytest.raises(DomainError):
            solve_analytic(0.0, -1.0, 1e5, 1.0)
        with pytest.raises(DomainError):
            solve_analytic(0.0, 0.0, 1e5, -1.0)


class TestSolveNumeric:
    def test_flat_curve_without_loss(self):
        params = LossParams.from_ktilde(0.0, 0.0, 1e5)
        curve = solve_numeric(params, np.linspace(0.0, 10.0, 11))
        assert np.all(curve.counts == 1e5)

    def test_matches_analytic_for_constant_coefficients(self):
        params = LossParams.from_ktilde(1e-3, 1e-12, 1e5)
        grid = np.linspace(0.0, 10.0, 101)
        curve = solve_numeric(params, grid)
        exact = np.array([solve_analytic(1e-3, 1e-12, 1e5, t) for t in grid])
        assert np.max(np.abs(curve.counts / exact - 1.0)) < 1e-8

    def test_sigma_step_reduces_ktilde_64_fold(self):
        # position spread doubling at t = 5 s divides Ktilde by 2^6 = 64
        k3 = 1e-12 * (2.0 * math.pi) ** 3 * 3.0**1.5
        sigma = lambda t: 1.0 if t < 5.0 else 2.0
        params = LossParams(K1=1e-3, K3=k3, sigma_t=sigma, N0=1e5)
        assert params.ktilde_at(0.0) / params.ktilde_at(5.0) == pytest.approx(64.0)

        grid = np.linspace(0.0, 10.0, 1001)
        curve = solve_numeric(params, grid)
        # after the step the decay must follow the analytic law restarted
        # from the numeric value at t = 5 with the reduced coefficient
        i5 = np.searchsorted(grid, 5.0)
        n5 = curve.counts[i5]
        for i in range(i5 + 1, grid.size, 100):
            expected = solve_analytic(1e-3, 1e-12 / 64.0, n5, grid[i] - 5.0)
            assert curve.counts[i] == pytest.approx(expected, rel=1e-6)

    def test_monotone_decreasing_and_positive(self):
        params = LossParams.from_ktilde(1e-3, 1e-12, 1e5)
        curve = solve_numeric(params, np.linspace(0.0, 50.0, 201))
        assert np.all(np.diff(curve.counts) < 0.0)
        assert np.all(curve.counts > 0.0)

    def test_larger_ktilde_loses_more(self):
        grid = np.linspace(0.0, 10.0, 51)
        weak = solve_numeric(LossParams.from_ktilde(1e-3, 1e-13, 1e5), grid)
        strong = solve_numeric(LossParams.from_ktilde(1e-3, 1e-12, 1e5), grid)
        assert np.all(strong.counts[1:] < weak.counts[1:])

    def test_grid_validation(self):
        params = LossParams.from_ktilde(1e-3, 0.0, 1e5)
        with pytest.raises(DomainError):
            solve_numeric(params, np.array([0.0]))
        with pytest.raises(DomainError):
            solve_numeric(params, np.array([0.0, 2.0, 1.0]))
        with pytest.raises(DomainError, match="ascend from 0"):
            solve_numeric(params, np.array([1.0, 2.0]))


class TestRequiredThreeBody:
    def test_paper_budget_small_condensate(self):
        kt = required_three_body(1e-3, 1e5, 10.0, 0.9)
        assert kt == pytest.approx(1.0e-12, rel=0.1)
        # verify the inversion against the forward solver
        assert solve_analytic(1e-3, kt, 1e5, 10.0) == pytest.approx(0.9e5, rel=1e-5)

    def test_paper_budget_large_condensate(self):
        kt = required_three_body(1e-3, 5e5, 10.0, 0.9)
        assert kt == pytest.approx(4e-14, rel=0.1)

    def test_factor_five_in_atoms_costs_two_orders(self):
        small = required_three_body(1e-3, 1e5, 10.0, 0.9)
        large = required_three_body(1e-3, 5e5, 10.0, 0.9)
        assert 20.0 <= small / large <= 50.0

    def test_boundary_retention_needs_no_three_body(self):
        retention = solve_analytic(1e-3, 0.0, 1e5, 10.0) / 1e5
        assert required_three_body(1e-3, 1e5, 10.0, retention) == pytest.approx(0.0, abs=1e-18)

    def test_infeasible_budget(self):
        with pytest.raises(DomainError, match="one-body loss exceeds budget"):
            required_three_body(0.1, 1e5, 10.0, 0.9)

    def test_retention_domain(self):
        with pytest.raises(DomainError, match="retention"):
            required_three_body(1e-3, 1e5, 10.0, 1.5)
        with pytest.raises(DomainError, match="retention"):
            required_three_body(1e-3, 1e5, 10.0, 0.0)


class TestTypes:
    def test_ktilde_from_k3_sixth_power(self):
        assert ktilde_from_k3(1.0, 2.0) == pytest.approx(ktilde_from_k3(1.0, 1.0) / 64.0)

    def test_loss_params_validation(self):
        with pytest.raises(DomainError, match="K1"):
            LossParams(K1=-1.0, K3=0.0, sigma_t=1.0, N0=1e5)
        with pytest.raises(DomainError, match="N0"):
            LossParams(K1=0.0, K3=0.0, sigma_t=1.0, N0=0.0)
        with pytest.raises(DomainError, match="sigma_t"):
            LossParams(K1=0.0, K3=0.0, sigma_t=0.0, N0=1e5)

    def test_loss_curve_shape_checks(self):
        with pytest.raises(DomainError):
            LossCurve(times=np.array([0.0, 1.0]), counts=np.array([1.0]))
        with pytest.raises(DomainError):
            LossCurve(times=np.array([0.0, 0.0]), counts=np.array([1.0, 1.0]))
