"""Gaussian and Bernoulli belief algebra.

Beliefs are small immutable value objects. Fields may be Python floats or
numpy arrays of equal shape; every operation broadcasts elementwise, so a
single belief can carry all frequency bands of a block at once.

Log-domain quantities are in nats throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import entr, expit

VARIANCE_FLOOR = 1e-12
_LOG_2PIE = float(np.log(2.0 * np.pi * np.e))


@dataclass(frozen=True)
class GaussianBelief:
    """Univariate Gaussian message or marginal ``N(mean, variance)``.

    ``variance = inf`` is accepted and denotes an uninformative (flat)
    message with zero precision.
    """

    mean: float | np.ndarray
    variance: float | np.ndarray

    def __post_init__(self):
        # min() propagates NaN, so one reduction per field covers every case
        if not np.isfinite(_min(self.mean)) or not _min(self.variance) > 0:
            raise ValueError("invalid belief: non-finite mean or non-positive variance")

    @property
    def precision(self):
        return 1.0 / np.asarray(self.variance, dtype=float)

    @property
    def second_moment(self):
        """``E[x^2] = mean^2 + variance``."""
        return np.asarray(self.mean) ** 2 + np.asarray(self.variance)

    @classmethod
    def from_natural(cls, precision, weighted_mean) -> "GaussianBelief":
        """Build from natural parameters ``(1/v, m/v)``; precision must be > 0."""
        precision = np.asarray(precision, dtype=float)
        if not np.all(precision > 0):
            raise ValueError("invalid belief: precision must be positive")
        variance = np.maximum(1.0 / precision, VARIANCE_FLOOR)
        return cls(_scalarize(np.asarray(weighted_mean) / precision), _scalarize(variance))


@dataclass(frozen=True)
class BernoulliBelief:
    """Bernoulli message or marginal with success probability ``p``."""

    p: float | np.ndarray

    def __post_init__(self):
        p = self.p
        if not (_min(p) >= 0.0 and (p.max() if isinstance(p, np.ndarray) else p) <= 1.0):
            raise ValueError("invalid belief: probability outside [0, 1]")


def _min(x):
    # ndarray.min skips the np.min dispatch overhead on the hot path
    return x.min() if isinstance(x, np.ndarray) else np.min(x)


def _scalarize(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def gaussian_product(a: GaussianBelief, b: GaussianBelief) -> GaussianBelief:
    """Normalized product of two Gaussian densities.

    Precisions add and the mean is precision weighted. The result variance
    is floored at ``VARIANCE_FLOOR``. A flat input (infinite variance)
    returns the other factor unchanged.

    Examples
    --------
    >>> gaussian_product(GaussianBelief(1.0, 1.0), GaussianBelief(3.0, 1.0))
    GaussianBelief(mean=2.0, variance=0.5)
    """
    pa, pb = a.precision, b.precision
    prec = pa + pb
    if not np.min(prec) > 0:
        raise ValueError("invalid belief: product of two flat messages")
    mean = (pa * np.asarray(a.mean) + pb * np.asarray(b.mean)) / prec
    variance = np.maximum(1.0 / prec, VARIANCE_FLOOR)
    return GaussianBelief(_scalarize(mean), _scalarize(variance))


def bernoulli_from_log_odds(log_odds) -> BernoulliBelief:
    """Bernoulli belief with ``p = 1 / (1 + exp(-log_odds))``, overflow free."""
    x = np.asarray(log_odds, dtype=float)
    if np.any(np.isnan(x)):
        raise ValueError("log-odds must not be NaN")
    return BernoulliBelief(_scalarize(expit(x)))


def gaussian_entropy(b: GaussianBelief):
    """Differential entropy ``0.5 ln(2 pi e v)`` in nats."""
    return 0.5 * (_LOG_2PIE + np.log(b.variance))


def bernoulli_entropy(b: BernoulliBelief):
    """Discrete entropy in nats; zero at ``p`` in {0, 1}."""
    p = np.asarray(b.p, dtype=float)
    return _scalarize(entr(p) + entr(1.0 - p))
