"""Validated domain types for jointly Gaussian and finite-alphabet models.

All information quantities are carried in nats; display-time conversion to
bits happens at the CLI layer only.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    InconsistentBlock,
    NegativeMass,
    NotNormalized,
    NotPositiveDefinite,
    ShapeMismatch,
)

LN2 = float(np.log(2.0))

#: PD floor used when none is given; guards downstream K^{-1/2} computations.
DEFAULT_EPS_PD = 1e-10

_BLOCK_PSD_TOL = 1e-9
_PMF_SUM_TOL = 1e-12
_PMF_NEG_TOL = 1e-14


def _frozen_array(a, dtype=float):
    out = np.array(a, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class InfoValue:
    """A nonnegative information quantity stored in nats."""

    nats: float

    def __post_init__(self):
        v = float(self.nats)
        if not np.isfinite(v) or v < -1e-9:
            raise ValueError(f"information value must be >= 0, got {v}")
        object.__setattr__(self, "nats", max(v, 0.0))

    @property
    def bits(self) -> float:
        return self.nats / LN2

    def __float__(self) -> float:
        return self.nats


@dataclass(frozen=True)
class GaussianJoint:
    """Block covariance model (K_x, K_xy, K_y) of a jointly Gaussian pair."""

    dim_x: int
    dim_y: int
    k_x: np.ndarray
    k_y: np.ndarray
    k_xy: np.ndarray
    eps_pd: float = DEFAULT_EPS_PD

    def block_covariance(self) -> np.ndarray:
        """Stacked (dim_x + dim_y) covariance of the concatenated vector."""
        top = np.hstack([self.k_x, self.k_xy])
        bottom = np.hstack([self.k_xy.T, self.k_y])
        return np.vstack([top, bottom])


@dataclass(frozen=True)
class DiscreteJoint:
    """Finite joint pmf p(x, y) over card_x * card_y cells."""

    card_x: int
    card_y: int
    pmf: np.ndarray

    def marginal_x(self) -> np.ndarray:
        return self.pmf.sum(axis=1)

    def marginal_y(self) -> np.ndarray:
        return self.pmf.sum(axis=0)


@dataclass(frozen=True)
class MultiDiscreteJoint:
    """Joint pmf p(x_1, ..., x_M) over M >= 2 finite alphabets."""

    cards: tuple
    pmf: np.ndarray

    @property
    def n_sources(self) -> int:
        return len(self.cards)

    def marginal(self, i: int) -> np.ndarray:
        axes = tuple(j for j in range(self.n_sources) if j != i)
        return self.pmf.sum(axis=axes)


def _check_symmetric(name, k):
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {k.shape}")
    scale = max(np.abs(k).max(), 1.0)
    if np.abs(k - k.T).max() > 1e-8 * scale:
        raise ShapeMismatch(f"{name} is not symmetric")


def validate_gaussian(k_x, k_y, k_xy, eps_pd: float = DEFAULT_EPS_PD) -> GaussianJoint:
    """Validate covariance blocks and build an immutable GaussianJoint.

    Raises NotPositiveDefinite if k_x or k_y has an eigenvalue <= eps_pd,
    InconsistentBlock if the stacked covariance has an eigenvalue below
    -1e-9, and ShapeMismatch on dimension errors.
    """
    k_x = np.asarray(k_x, dtype=float)
    k_y = np.asarray(k_y, dtype=float)
    k_xy = np.asarray(k_xy, dtype=float)
    _check_symmetric("k_x", k_x)
    _check_symmetric("k_y", k_y)
    dim_x, dim_y = k_x.shape[0], k_y.shape[0]
    if k_xy.ndim != 2 or k_xy.shape != (dim_x, dim_y):
        raise ShapeMismatch(
            f"k_xy must have shape ({dim_x}, {dim_y}), got {k_xy.shape}"
        )
    # symmetrize before eigenvalue checks so ulp-level asymmetry cannot bias them
    k_x = 0.5 * (k_x + k_x.T)
    k_y = 0.5 * (k_y + k_y.T)
    for name, k in (("k_x", k_x), ("k_y", k_y)):
        lam_min = np.linalg.eigvalsh(k)[0]
        if lam_min <= eps_pd:
            raise NotPositiveDefinite(
                f"{name} has minimum eigenvalue {lam_min:.3e} <= eps_pd={eps_pd:.1e}"
            )
    block = np.vstack(
        [np.hstack([k_x, k_xy]), np.hstack([k_xy.T, k_y])]
    )
    lam_min = np.linalg.eigvalsh(block)[0]
    if lam_min < -_BLOCK_PSD_TOL:
        raise InconsistentBlock(
            f"stacked covariance has eigenvalue {lam_min:.3e} < -1e-9"
        )
    return GaussianJoint(
        dim_x=dim_x,
        dim_y=dim_y,
        k_x=_frozen_array(k_x),
        k_y=_frozen_array(k_y),
        k_xy=_frozen_array(k_xy),
        eps_pd=float(eps_pd),
    )


def validate_discrete(pmf) -> DiscreteJoint:
    """Validate a 2-D probability table and build an immutable DiscreteJoint.

    Entries below -1e-14 raise NegativeMass; tiny negatives are clamped to
    zero. The clamped table must sum to 1 within 1e-12 (NotNormalized
    otherwise) and is then renormalized exactly.
    """
    pmf = np.array(pmf, dtype=float)
    if pmf.ndim != 2 or pmf.size == 0:
        raise ShapeMismatch(f"pmf must be a nonempty 2-D table, got shape {pmf.shape}")
    if pmf.min() < -_PMF_NEG_TOL:
        raise NegativeMass(f"pmf has entry {pmf.min():.3e} < -1e-14")
    pmf = np.maximum(pmf, 0.0)
    total = pmf.sum()
    if abs(total - 1.0) > _PMF_SUM_TOL:
        raise NotNormalized(f"pmf sums to {total!r}, expected 1 within 1e-12")
    pmf /= total
    return DiscreteJoint(card_x=pmf.shape[0], card_y=pmf.shape[1], pmf=_frozen_array(pmf))


def validate_multi_discrete(pmf) -> MultiDiscreteJoint:
    """Validate an M-dimensional probability table (M >= 2)."""
    pmf = np.array(pmf, dtype=float)
    if pmf.ndim < 2 or pmf.size == 0:
        raise ShapeMismatch(
            f"pmf must be a nonempty table with M >= 2 axes, got shape {pmf.shape}"
        )
    if pmf.min() < -_PMF_NEG_TOL:
        raise NegativeMass(f"pmf has entry {pmf.min():.3e} < -1e-14")
    pmf = np.maximum(pmf, 0.0)
    total = pmf.sum()
    if abs(total - 1.0) > _PMF_SUM_TOL:
        raise NotNormalized(f"pmf sums to {total!r}, expected 1 within 1e-12")
    pmf /= total
    return MultiDiscreteJoint(cards=tuple(pmf.shape), pmf=_frozen_array(pmf))
