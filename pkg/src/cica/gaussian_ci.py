"""Closed-form relaxed Wyner common information for Gaussian pairs.

The vector problem separates across canonical-correlation components; the
per-component budgets follow a water-filling rule because the scalar
derivative dC/dgamma = -1/sqrt(1 - e^{-2 gamma}) does not depend on rho, so
every active component sits at the same water level.
"""

from dataclasses import dataclass

import numpy as np

from .cca import cca_decompose
from .errors import RhoOutOfRange, UnsortedRho
from .model import GaussianJoint, InfoValue

#: correlations below this are treated as exact zeros (SVD noise)
_ZERO_RHO = 1e-12
_ACTIVE_MARGIN = 1e-12
_BISECT_ITERS = 200


@dataclass(frozen=True)
class GammaAllocation:
    """Water-filled per-component budgets and the resulting C_gamma.

    gamma_i = min(water_level, I(rho_i)) for every component; when
    gamma_total exceeds the total mutual information the budgets saturate
    at I(rho_i) each and c_gamma is zero.
    """

    gamma_total: float
    gamma_i: np.ndarray
    c_gamma: InfoValue
    water_level: float
    active_count: int


def _check_rho_scalar(rho) -> float:
    rho = float(rho)
    if not 0.0 <= rho < 1.0:
        raise RhoOutOfRange(f"rho must lie in [0, 1), got {rho}")
    return rho


def _check_rho_list(rho) -> np.ndarray:
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    if rho.size == 0:
        raise RhoOutOfRange("rho list must be nonempty")
    if rho.min() < 0.0 or rho.max() >= 1.0:
        raise RhoOutOfRange(f"all rho must lie in [0, 1), got {rho}")
    if np.any(np.diff(rho) > 0):
        raise UnsortedRho(f"rho must be sorted descending, got {rho}")
    return np.where(rho < _ZERO_RHO, 0.0, rho)


def mutual_info_rho(rho: float) -> InfoValue:
    """Mutual information of a unit-variance Gaussian pair: 0.5 ln 1/(1-rho^2)."""
    rho = _check_rho_scalar(rho)
    return InfoValue(-0.5 * np.log1p(-rho * rho))


def scalar_relaxed_ci(rho: float, gamma_i: float) -> InfoValue:
    """Relaxed common information of a scalar Gaussian pair at budget gamma_i.

    Evaluates 0.5 log+ of (1+rho)(1-s) / ((1-rho)(1+s)) with
    s = sqrt(1 - e^{-2 gamma_i}); exactly zero once gamma_i >= I(rho).
    """
    rho = _check_rho_scalar(rho)
    gamma_i = float(gamma_i)
    if gamma_i < 0:
        raise ValueError(f"gamma_i must be >= 0, got {gamma_i}")
    if gamma_i >= float(mutual_info_rho(rho)):
        return InfoValue(0.0)
    s = np.sqrt(-np.expm1(-2.0 * gamma_i))
    val = 0.5 * (np.log1p(rho) - np.log1p(-rho) + np.log1p(-s) - np.log1p(s))
    return InfoValue(max(float(val), 0.0))


def waterfill(rho, gamma_total: float) -> GammaAllocation:
    """Optimal split of gamma_total across components, by bisection.

    The water level solves sum_i min(level, I(rho_i)) = gamma_total; each
    component receives gamma_i = min(level, I(rho_i)). rho must be sorted
    descending with entries in [0, 1).
    """
    rho = _check_rho_list(rho)
    gamma_total = float(gamma_total)
    if gamma_total < 0:
        raise ValueError(f"gamma_total must be >= 0, got {gamma_total}")
    info = np.array([float(mutual_info_rho(r)) for r in rho])
    total_info = info.sum()
    if gamma_total >= total_info:
        gamma_i = info.copy()
        level = info.max() if info.size else 0.0
        c = 0.0
        active = 0
    else:
        # run the full budget: the scalar curve has unbounded slope at 0, so
        # the level must be resolved to ulp precision, not just 1e-12
        lo, hi = 0.0, float(info.max())
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            if np.minimum(mid, info).sum() < gamma_total:
                lo = mid
            else:
                hi = mid
        level = 0.5 * (lo + hi)
        gamma_i = np.minimum(level, info)
        active = int(np.sum(level < info - _ACTIVE_MARGIN))
        c = sum(float(scalar_relaxed_ci(r, g)) for r, g in zip(rho, gamma_i))
    return GammaAllocation(
        gamma_total=gamma_total,
        gamma_i=gamma_i,
        c_gamma=InfoValue(c),
        water_level=float(level),
        active_count=active,
    )


def relaxed_ci_gaussian(joint: GaussianJoint, gamma: float):
    """C_gamma for a Gaussian joint: CCA decomposition plus water-filling.

    Returns (GammaAllocation, CcaBasis) so callers can build projections
    from the same basis.
    """
    basis = cca_decompose(joint)
    return waterfill(basis.rho, gamma), basis


def component_count(rho, gamma: float) -> int:
    """Number of retained components k as a function of the budget gamma.

    k = l on the half-open interval
    (l+1) I(rho_{l+1}) + sum_{i>l+1} I(rho_i) <= gamma < l I(rho_l) +
    sum_{i>l} I(rho_i); exact breakpoints take the smaller k, where the
    extra component's budget is saturated and contributes nothing.
    """
    rho = _check_rho_list(rho)
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    info = np.array([float(mutual_info_rho(r)) for r in rho])
    n = info.size
    tails = np.concatenate([np.cumsum(info[::-1])[::-1], [0.0]])  # tails[m] = sum_{i>=m}
    for ell in range(n):
        # lower edge of the k = ell row: (ell+1) I(rho_{ell+1}) + tail beyond it
        if gamma >= (ell + 1) * info[ell] + tails[ell + 1]:
            return ell
    return n


def ci_curve(joint: GaussianJoint, grid) -> list[tuple[float, float, int]]:
    """Evaluate (gamma, c_gamma, k) along an ascending nonnegative grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or grid.min() < 0 or np.any(np.diff(grid) < 0):
        raise ValueError("grid must be nonempty, nonnegative, sorted ascending")
    basis = cca_decompose(joint)
    out = []
    for g in grid:
        alloc = waterfill(basis.rho, float(g))
        out.append((float(g), float(alloc.c_gamma), component_count(basis.rho, float(g))))
    return out
