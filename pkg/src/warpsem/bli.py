"""Bayesian leaky integrator (BLI).

A scalar random-walk Kalman filter whose process and observation variances
are tied together so that the steady-state Kalman gain equals a chosen
forgetting factor. The forgetting factor itself comes from a 90% settling
time through a backward-Euler discretization of a first-order smoother.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beliefs import VARIANCE_FLOOR, GaussianBelief, _scalarize, gaussian_product

# 90% settling time of a first-order lowpass is ln(10) tau, rounded as usual
SETTLING_RATIO = 2.3


@dataclass(frozen=True)
class BliConfig:
    lam: float
    process_variance: float
    observation_variance: float = 1.0
    tau90: float | None = None
    block_period: float | None = None

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"forgetting factor must lie in (0, 1), got {self.lam}")
        if self.process_variance < 0 or self.observation_variance <= 0:
            raise ValueError("variances must be non-negative (observation: positive)")


@dataclass(frozen=True)
class BliState:
    posterior: GaussianBelief

    @property
    def mean(self):
        return self.posterior.mean

    @property
    def variance(self):
        return self.posterior.variance


def config_from_lambda(lam: float, observation_variance: float = 1.0) -> BliConfig:
    """Config whose steady-state gain equals ``lam``.

    ``process_variance / observation_variance = lam^2 / (1 - lam)``.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"forgetting factor must lie in (0, 1), got {lam}")
    return BliConfig(lam, observation_variance * lam * lam / (1.0 - lam), observation_variance)


def config_from_tau90(tau90: float, block_period: float) -> BliConfig:
    """Forgetting factor ``T / (T + tau90 / 2.3)`` and its matched variances."""
    if tau90 <= 0 or block_period <= 0:
        raise ValueError("tau90 and block_period must be positive")
    lam = block_period / (block_period + tau90 / SETTLING_RATIO)
    base = config_from_lambda(lam)
    return BliConfig(lam, base.process_variance, base.observation_variance,
                     tau90=tau90, block_period=block_period)


def steady_state_variance(cfg: BliConfig) -> float:
    """Closed-form steady-state posterior variance ``(1 - K) sigma_s^2 / K``.

    Only valid for configs built from a forgetting factor (so ``K = lam``).
    """
    return (1.0 - cfg.lam) * cfg.process_variance / cfg.lam


def predict(state: BliState, cfg: BliConfig) -> GaussianBelief:
    """Random-walk prediction: mean kept, variance grows by ``sigma_s^2``."""
    post = state.posterior
    return GaussianBelief(post.mean, _scalarize(np.asarray(post.variance) + cfg.process_variance))


def update(prior: GaussianBelief, obs_message: GaussianBelief):
    """Condition a predicted belief on an observation message.

    Returns ``(BliState, kalman_gain)``. The gain is reported for the
    observation as a whole; a flat message (infinite variance) gives zero.
    """
    post = gaussian_product(prior, obs_message)
    pv = np.asarray(prior.variance, dtype=float)
    ov = np.asarray(obs_message.variance, dtype=float)
    with np.errstate(invalid="ignore"):
        gain = np.where(np.isinf(ov), 0.0, pv / (pv + ov))
    return BliState(post), _scalarize(gain)


def update_natural(prior: GaussianBelief, precision, weighted_mean) -> BliState:
    """:func:`update` with the observation given as natural parameters.

    ``precision`` may be zero (flat observation) where the moment form
    would need an infinite variance.
    """
    prec = 1.0 / np.asarray(prior.variance, dtype=float) + precision
    mean = (np.asarray(prior.mean) / prior.variance + weighted_mean) / prec
    return BliState(GaussianBelief(_scalarize(mean),
                                   _scalarize(np.maximum(1.0 / prec, VARIANCE_FLOOR))))


def steady_state_gain(cfg: BliConfig, max_iter: int = 1_000_000, tol: float = 1e-16) -> float:
    """Iterate the variance recursion to its fixed point and return ``K_inf``."""
    q, r = cfg.process_variance, cfg.observation_variance
    if q == 0.0:
        return 0.0
    var = 1.0
    gain = np.nan
    for _ in range(max_iter):
        pred = var + q
        new_gain = pred / (pred + r)
        var = (1.0 - new_gain) * pred
        if abs(new_gain - gain) <= tol:
            return new_gain
        gain = new_gain
    raise RuntimeError("Kalman gain did not converge")
