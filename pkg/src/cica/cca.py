"""Classical CCA on a validated Gaussian joint model.

Provides the full decomposition (sorted canonical correlations plus the
singular-vector bases), top-k projections of raw observations, and an
SVD-independent alternating fixed-point solver for the leading pair used as
a cross-check oracle.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadK, NoConvergence, PerfectCorrelation
from .model import GaussianJoint, _frozen_array
from .whitening import WhitenedPair, canonical_matrix

_PERFECT_RHO = 1.0 - 1e-9
_ZERO_RHO = 1e-12


@dataclass(frozen=True)
class CcaBasis:
    """Ordered canonical correlations with their singular-vector bases.

    Columns of u and v follow a deterministic sign convention: the entry of
    largest magnitude in each column of u is positive (ties broken by lowest
    index), and v's columns are flipped together with u's so that
    canonical^T u_i = rho_i v_i holds with nonnegative scale.
    """

    rho: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w_x: np.ndarray
    w_y: np.ndarray

    @property
    def n_components(self) -> int:
        return self.rho.size


def _apply_sign_convention(u, v, rho):
    u = u.copy()
    v = v.copy()
    for j in range(u.shape[1]):
        i = int(np.argmax(np.abs(u[:, j])))
        if u[i, j] < 0:
            u[:, j] = -u[:, j]
            if rho[j] > _ZERO_RHO:
                v[:, j] = -v[:, j]
        if rho[j] <= _ZERO_RHO:
            # zero-correlation columns: fix v's sign independently
            i = int(np.argmax(np.abs(v[:, j])))
            if v[i, j] < 0:
                v[:, j] = -v[:, j]
    return u, v


def cca_decompose(joint: GaussianJoint, pair: WhitenedPair | None = None) -> CcaBasis:
    """Full SVD of the whitened cross-covariance, sorted and sign-fixed.

    Raises PerfectCorrelation when some rho_i >= 1 - 1e-9, where the
    per-component mutual information I(rho) diverges.
    """
    if pair is None:
        pair = canonical_matrix(joint)
    u, s, vh = np.linalg.svd(pair.canonical, full_matrices=False)
    order = np.argsort(-s, kind="stable")
    s = s[order]
    u = u[:, order]
    v = vh.T[:, order]
    if s.size and s[0] >= _PERFECT_RHO:
        raise PerfectCorrelation(
            f"leading canonical correlation {s[0]:.12f} >= 1 - 1e-9"
        )
    s = np.where(s < _ZERO_RHO, 0.0, s)
    u, v = _apply_sign_convention(u, v, s)
    return CcaBasis(
        rho=_frozen_array(s),
        u=_frozen_array(u),
        v=_frozen_array(v),
        w_x=pair.w_x,
        w_y=pair.w_y,
    )


def cca_project(basis: CcaBasis, k: int, x, y):
    """Top-k CCA components of raw observations x and y.

    Returns (U_k^T W_x x, V_k^T W_y y). x and y may be single vectors or
    arrays of row observations. Raises BadK unless 1 <= k <= n.
    """
    n = basis.n_components
    if not 1 <= k <= n:
        raise BadK(f"k must be in [1, {n}], got {k}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u_feat = x @ basis.w_x @ basis.u[:, :k]
    v_feat = y @ basis.w_y @ basis.v[:, :k]
    return u_feat, v_feat


def leading_pair_fixed_point(canonical, tol: float = 1e-12, max_iter: int = 100_000):
    """Leading singular triple by alternating Cauchy-Schwarz updates.

    Alternates u <- K v / ||K v|| and v <- K^T u / ||K^T u|| from a
    deterministic seeded start until successive rho estimates change by
    less than tol. Serves as an SVD-independent oracle for the top CCA
    component. Raises NoConvergence when max_iter is reached, which for a
    well-posed input signals a near-degenerate rho_1 ~ rho_2 spectrum.
    """
    k = np.asarray(canonical, dtype=float)
    if k.ndim != 2 or not np.any(np.abs(k) > 0):
        raise ValueError("canonical matrix must be a nonzero 2-D array")
    rng = np.random.default_rng(0)
    v = rng.standard_normal(k.shape[1])
    v /= np.linalg.norm(v)
    # restart if the seeded start is (numerically) in the null space
    for _ in range(10):
        if np.linalg.norm(k @ v) > 1e-14:
            break
        v = rng.standard_normal(k.shape[1])
        v /= np.linalg.norm(v)
    rho_prev = -np.inf
    for _ in range(max_iter):
        u = k @ v
        u_norm = np.linalg.norm(u)
        u = u / u_norm
        v = k.T @ u
        rho = np.linalg.norm(v)
        v = v / rho
        if abs(rho - rho_prev) < tol:
            return u, v, float(rho)
        rho_prev = rho
    raise NoConvergence(
        f"rho estimate still moving after {max_iter} iterations; "
        "the top two singular values may be degenerate"
    )
