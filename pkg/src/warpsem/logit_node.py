"""Bernoulli-logistic factor ``Ber(y | sigma(x))`` under the Jaakkola-Jordan bound.

The node is stateless: the variational parameter ``zeta`` lives with the
caller and is refreshed from the incoming Gaussian before messages are
computed. Affine shifts of the logit input (the VAD threshold or the gain
shift) are applied by the caller, so ``x`` here is always the shifted input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit

from .beliefs import BernoulliBelief, GaussianBelief, _scalarize

_SMALL_ZETA = 1e-6


@dataclass(frozen=True)
class LogitNodeState:
    """Variational parameter and input offset for one logit node."""

    zeta: float | np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        if not np.all(np.asarray(self.zeta) > 0):
            raise ValueError("zeta must be positive")

    def shift(self, x: GaussianBelief) -> GaussianBelief:
        """Move the raw input into the node's frame (subtract the offset)."""
        return GaussianBelief(x.mean - self.offset, x.variance)

    def unshift(self, x: GaussianBelief) -> GaussianBelief:
        return GaussianBelief(x.mean + self.offset, x.variance)


def lambda_of_zeta(zeta):
    """``lambda(zeta) = (sigma(zeta) - 1/2) / (2 zeta)``, with limit 1/8 at 0.

    Evaluated as ``tanh(zeta/2) / (4 zeta)`` which is algebraically the same
    and does not cancel for small ``zeta``.
    """
    z = np.asarray(zeta, dtype=float)
    zmin = z.min() if z.size else 0.0
    if not zmin >= 0:
        raise ValueError("zeta must be non-negative")
    if zmin >= _SMALL_ZETA:
        return _scalarize(np.tanh(0.5 * z) / (4.0 * z))
    small = z < _SMALL_ZETA
    safe = np.where(small, 1.0, z)
    return _scalarize(np.where(small, 0.125, np.tanh(0.5 * safe) / (4.0 * safe)))


def jj_log_bound(x, zeta):
    """Log of the quadratic lower bound on ``ln sigma(x)``."""
    x = np.asarray(x, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    lam = lambda_of_zeta(np.abs(zeta))
    return log_expit(zeta) + 0.5 * (x - zeta) - lam * (x * x - zeta * zeta)


def jj_bound(x, zeta):
    """``sigma(zeta) exp((x - zeta)/2 - lambda(zeta)(x^2 - zeta^2)) <= sigma(x)``."""
    return _scalarize(np.exp(jj_log_bound(x, zeta)))


def forward_message_y(x: GaussianBelief) -> BernoulliBelief:
    """Message towards the binary output: ``Ber(sigma(E[x]))``."""
    return BernoulliBelief(_scalarize(expit(np.asarray(x.mean, dtype=float))))


def backward_message_x(y: BernoulliBelief, zeta) -> GaussianBelief:
    """Message towards the logit input.

    ``N((E[y] - 1/2) / (2 lambda), 1 / (2 lambda))``. The ``-1/2`` comes
    from the linear ``-(x + zeta)/2`` term of the bound.
    """
    p = np.asarray(y.p, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    if not zeta.min() > 0:
        raise ValueError("zeta must be positive")
    two_lam = 2.0 * np.asarray(lambda_of_zeta(zeta))
    return GaussianBelief(_scalarize((p - 0.5) / two_lam), _scalarize(1.0 / two_lam))


def update_zeta(x: GaussianBelief):
    """Optimal variational parameter ``sqrt(E[x]^2 + Var[x])``."""
    return _scalarize(np.sqrt(x.second_moment))


def average_energy(y: BernoulliBelief, x: GaussianBelief, zeta):
    """Average energy ``-E[ln f]`` of the node under the bound.

    ``U = -E[x]E[y] - ln sigma(zeta) + (E[x] + zeta)/2
    + lambda(zeta)(E[x^2] - zeta^2)``
    """
    zeta = np.asarray(zeta, dtype=float)
    xm = np.asarray(x.mean, dtype=float)
    lam = lambda_of_zeta(zeta)
    u = (-xm * np.asarray(y.p) - log_expit(zeta) + 0.5 * (xm + zeta)
         + lam * (x.second_moment - zeta * zeta))
    return _scalarize(u)
