"""Shared fixtures and independent oracles for the test suite."""

import numpy as np
import pytest

from cica import validate_gaussian


def random_gaussian_joint(rng, dim_x, dim_y, spread=1.0):
    """Random valid joint built from a full PSD block covariance."""
    d = dim_x + dim_y
    b = rng.standard_normal((d, d)) * spread
    cov = b @ b.T + 0.5 * d * np.eye(d)
    return validate_gaussian(
        cov[:dim_x, :dim_x], cov[dim_x:, dim_x:], cov[:dim_x, dim_x:]
    )


def whitened_diag_joint(rho):
    """Already-whitened joint with prescribed canonical correlations."""
    rho = np.asarray(rho, dtype=float)
    n = rho.size
    return validate_gaussian(np.eye(n), np.eye(n), np.diag(rho))


def sample_joint(joint, n, rng):
    """Draw n paired samples from a GaussianJoint via Cholesky."""
    cov = joint.block_covariance()
    chol = np.linalg.cholesky(cov)
    z = rng.standard_normal((n, cov.shape[0])) @ chol.T
    return z[:, : joint.dim_x], z[:, joint.dim_x :]


def gauss_mi(cov, idx_a, idx_b):
    """I(A;B) of a Gaussian vector from covariance determinants (nats)."""
    idx_a = list(idx_a)
    idx_b = list(idx_b)
    ca = cov[np.ix_(idx_a, idx_a)]
    cb = cov[np.ix_(idx_b, idx_b)]
    cab = cov[np.ix_(idx_a + idx_b, idx_a + idx_b)]
    return 0.5 * (
        np.linalg.slogdet(ca)[1] + np.linalg.slogdet(cb)[1] - np.linalg.slogdet(cab)[1]
    )


def gauss_cond_mi(cov, idx_a, idx_b, idx_c):
    """I(A;B|C) of a Gaussian vector from covariance determinants (nats)."""
    idx_a = list(idx_a)
    idx_b = list(idx_b)
    idx_c = list(idx_c)
    def logdet(idx):
        if not idx:
            return 0.0
        return np.linalg.slogdet(cov[np.ix_(idx, idx)])[1]
    return 0.5 * (
        logdet(idx_a + idx_c)
        + logdet(idx_b + idx_c)
        - logdet(idx_c)
        - logdet(idx_a + idx_b + idx_c)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
