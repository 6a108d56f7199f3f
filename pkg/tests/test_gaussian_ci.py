"""Water-filling and Gaussian closed-form tests.

Frozen expected values were computed independently from the defining
formulas I(rho) = 0.5 ln 1/(1-rho^2) and the gamma_i = 0 special case
0.5 ln (1+rho)/(1-rho) before wiring them to the implementation.
"""

import numpy as np
import pytest

from cica import (
    ci_curve,
    component_count,
    mutual_info_rho,
    relaxed_ci_gaussian,
    scalar_relaxed_ci,
    validate_gaussian,
    waterfill,
)
from cica.errors import RhoOutOfRange, UnsortedRho
from conftest import whitened_diag_joint

I_05 = 0.14384103622589042  # 0.5 ln(4/3)
I_08 = 0.5108256237659906  # 0.5 ln(1/0.36)
WYNER_05 = 0.5493061443340549  # 0.5 ln 3


def grid_search_allocation(rho, gamma, step):
    """Brute-force minimum of the separable objective over the simplex."""
    rho = np.asarray(rho, dtype=float)
    if rho.size == 1:
        return float(scalar_relaxed_ci(rho[0], gamma))
    best = np.inf
    g1_grid = np.arange(0.0, gamma + step, step)
    if rho.size == 2:
        for g1 in g1_grid:
            val = float(scalar_relaxed_ci(rho[0], g1)) + float(
                scalar_relaxed_ci(rho[1], max(gamma - g1, 0.0))
            )
            best = min(best, val)
        return best
    assert rho.size == 3
    c0 = _scalar_curve(rho[0], g1_grid)
    for i1, g1 in enumerate(g1_grid):
        rest = gamma - g1
        g2_grid = np.arange(0.0, rest + step, step)
        vals = (
            c0[i1]
            + _scalar_curve(rho[1], g2_grid)
            + _scalar_curve(rho[2], np.maximum(rest - g2_grid, 0.0))
        )
        best = min(best, vals.min())
    return best


def _scalar_curve(rho, gammas):
    """Vectorized scalar relaxed-CI evaluation used only by the grid oracle."""
    gammas = np.asarray(gammas, dtype=float)
    s = np.sqrt(-np.expm1(-2.0 * gammas))
    with np.errstate(divide="ignore"):
        val = 0.5 * np.log(((1 + rho) * (1 - s)) / ((1 - rho) * (1 + s)))
    return np.maximum(val, 0.0)


class TestMutualInfoRho:
    def test_zero(self):
        assert float(mutual_info_rho(0.0)) == 0.0

    def test_frozen_values(self):
        assert float(mutual_info_rho(0.5)) == pytest.approx(I_05, abs=1e-15)
        assert float(mutual_info_rho(0.8)) == pytest.approx(I_08, abs=1e-15)

    def test_out_of_range(self):
        for bad in (-0.1, 1.0, 1.5):
            with pytest.raises(RhoOutOfRange):
                mutual_info_rho(bad)


class TestScalarRelaxedCi:
    def test_gamma_zero_is_wyner(self):
        assert float(scalar_relaxed_ci(0.5, 0.0)) == pytest.approx(WYNER_05, abs=1e-15)

    def test_zero_at_full_budget(self):
        for rho in (0.3, 0.5, 0.8):
            assert float(scalar_relaxed_ci(rho, float(mutual_info_rho(rho)))) == 0.0
            assert float(scalar_relaxed_ci(rho, 2.0)) == 0.0

    def test_strictly_decreasing_in_gamma(self):
        gammas = np.linspace(0.0, float(mutual_info_rho(0.8)), 50)
        vals = [float(scalar_relaxed_ci(0.8, g)) for g in gammas]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert 0.0 < vals[25] < 0.5 * np.log(9.0)


class TestWaterfill:
    def test_two_components_split_evenly_while_active(self):
        alloc = waterfill([0.8, 0.5], 0.2)
        np.testing.assert_allclose(alloc.gamma_i, [0.1, 0.1], atol=1e-9)
        assert alloc.active_count == 2
        # brute-force oracle over the budget split
        oracle = grid_search_allocation([0.8, 0.5], 0.2, 1e-4)
        assert float(alloc.c_gamma) <= oracle + 1e-6

    def test_saturated_budget(self):
        alloc = waterfill([0.8, 0.5], I_08 + I_05 + 0.01)
        assert float(alloc.c_gamma) == 0.0
        np.testing.assert_allclose(alloc.gamma_i, [I_08, I_05], atol=1e-12)
        assert alloc.active_count == 0
        assert alloc.water_level == pytest.approx(I_08, abs=1e-12)

    def test_singleton(self):
        for gamma in (0.0, 0.05, 0.2):
            alloc = waterfill([0.6], gamma)
            expected = min(gamma, float(mutual_info_rho(0.6)))
            assert alloc.gamma_i[0] == pytest.approx(expected, abs=1e-9)
            assert float(alloc.c_gamma) == pytest.approx(
                float(scalar_relaxed_ci(0.6, expected)), abs=1e-12
            )

    def test_budget_sum_invariant(self, rng):
        for _ in range(50):
            rho = np.sort(rng.uniform(0.05, 0.95, size=3))[::-1]
            total = sum(float(mutual_info_rho(r)) for r in rho)
            gamma = rng.uniform(0.0, total)
            alloc = waterfill(rho, gamma)
            assert abs(alloc.gamma_i.sum() - gamma) < 1e-9
            np.testing.assert_allclose(
                alloc.gamma_i,
                np.minimum(alloc.water_level, [float(mutual_info_rho(r)) for r in rho]),
                atol=1e-9,
            )

    def test_equal_derivative_structure(self):
        # numerical partial derivatives of the summed objective agree across
        # active components, since dC/dgamma depends only on gamma_i
        alloc = waterfill([0.9, 0.7, 0.6], 0.3)
        assert alloc.active_count == 3
        eps = 1e-7
        derivs = []
        for rho, g in zip([0.9, 0.7, 0.6], alloc.gamma_i):
            d = (
                float(scalar_relaxed_ci(rho, g + eps))
                - float(scalar_relaxed_ci(rho, g - eps))
            ) / (2 * eps)
            derivs.append(d)
        assert max(derivs) - min(derivs) < 1e-6

    def test_validation(self):
        with pytest.raises(UnsortedRho):
            waterfill([0.5, 0.8], 0.1)
        with pytest.raises(RhoOutOfRange):
            waterfill([1.0, 0.5], 0.1)


class TestComponentCount:
    def test_schedule_two_components(self):
        assert component_count([0.8, 0.5], 0.1) == 2
        assert component_count([0.8, 0.5], 0.4) == 1
        assert component_count([0.8, 0.5], 1.0) == 0

    def test_thresholds_frozen(self):
        assert 2 * I_05 == pytest.approx(0.28768207245178085, abs=1e-16)
        assert I_08 + I_05 == pytest.approx(0.654666659991881, abs=1e-15)

    def test_matches_waterfill_active_count(self, rng):
        thresholds_hit = 0
        for _ in range(10_000):
            n = rng.integers(1, 5)
            rho = np.sort(rng.uniform(0.05, 0.95, size=n))[::-1]
            info = np.array([float(mutual_info_rho(r)) for r in rho])
            gamma = rng.uniform(0.0, 1.2 * info.sum())
            # skip draws within 1e-9 of a schedule breakpoint
            tails = np.concatenate([np.cumsum(info[::-1])[::-1], [0.0]])
            edges = [(ell + 1) * info[ell] + tails[ell + 1] for ell in range(n)]
            if min(abs(gamma - e) for e in edges) < 1e-9:
                thresholds_hit += 1
                continue
            alloc = waterfill(rho, gamma)
            assert component_count(rho, gamma) == alloc.active_count
        assert thresholds_hit < 100


class TestRelaxedCiGaussian:
    def test_independent_blocks(self):
        j = validate_gaussian(np.eye(2), np.eye(2), np.zeros((2, 2)))
        for gamma in (0.0, 0.1, 1.0):
            alloc, _ = relaxed_ci_gaussian(j, gamma)
            assert float(alloc.c_gamma) == 0.0

    def test_scalar_wyner(self):
        j = validate_gaussian(np.eye(1), np.eye(1), np.array([[0.5]]))
        alloc, basis = relaxed_ci_gaussian(j, 0.0)
        assert float(alloc.c_gamma) == pytest.approx(WYNER_05, abs=1e-12)
        assert basis.rho[0] == pytest.approx(0.5, abs=1e-14)

    def test_diag_sum_of_scalars(self):
        j = whitened_diag_joint([0.8, 0.5])
        alloc, _ = relaxed_ci_gaussian(j, 0.2)
        expected = float(scalar_relaxed_ci(0.8, 0.1)) + float(scalar_relaxed_ci(0.5, 0.1))
        assert float(alloc.c_gamma) == pytest.approx(expected, abs=1e-9)
        oracle = grid_search_allocation([0.8, 0.5], 0.2, 1e-4)
        assert float(alloc.c_gamma) <= oracle + 1e-6


class TestCiCurve:
    def test_single_point_is_wyner(self):
        j = whitened_diag_joint([0.8, 0.5])
        ((gamma, c, k),) = ci_curve(j, [0.0])
        assert gamma == 0.0 and k == 2
        expected = float(scalar_relaxed_ci(0.8, 0.0)) + float(scalar_relaxed_ci(0.5, 0.0))
        assert c == pytest.approx(expected, abs=1e-12)

    def test_monotone_and_convex(self):
        j = whitened_diag_joint([0.8, 0.5])
        total = I_08 + I_05
        grid = np.linspace(0.0, total, 40)
        rows = ci_curve(j, grid)
        c = np.array([r[1] for r in rows])
        k = np.array([r[2] for r in rows])
        assert np.all(np.diff(c) <= 1e-12)
        assert np.all(np.diff(k) <= 0)
        assert np.all(np.diff(c, 2) >= -1e-8)
        # lower bound: c_gamma >= sum I(rho_i) - gamma
        assert np.all(c >= np.maximum(total - grid, 0.0) - 1e-9)

    def test_beyond_total_information(self):
        j = whitened_diag_joint([0.8, 0.5])
        rows = ci_curve(j, [I_08 + I_05 + 0.1])
        assert rows[0][1] == 0.0 and rows[0][2] == 0
