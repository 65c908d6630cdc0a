"""Warped-frequency filter bank front end.

A tapped cascade of first-order all-pass sections ``A(q^-1) = (q^-1 - a) /
(1 - a q^-1)`` builds the warped delay line ``z``; the output is the
weighted sum ``y = w . z`` with weights held fixed over a block. Tap 0 is
the raw input, so ``J`` taps use ``J - 1`` all-pass stages.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.signal import lfilter


def warp_coefficient(sample_rate: float) -> float:
    """Bark-matching all-pass coefficient for a sampling rate in Hz.

    Uses ``1.0674 sqrt((2/pi) atan(0.06583 f_kHz)) - 0.1916`` which gives
    about 0.576 at 16 kHz. Values below zero (very low rates) are clamped
    to zero with a warning.
    """
    if sample_rate <= 0:
        raise ValueError("sample_rate must be positive")
    fs_khz = sample_rate / 1000.0
    alpha = 1.0674 * np.sqrt(2.0 / np.pi * np.arctan(0.06583 * fs_khz)) - 0.1916
    if alpha < 0.0:
        warnings.warn(f"warp coefficient {alpha:.4f} clamped to 0", RuntimeWarning, stacklevel=2)
        alpha = 0.0
    return float(min(alpha, np.nextafter(1.0, 0.0)))


def allpass_frequency_response(alpha: float, omega):
    """``A(e^{jw}) = (e^{-jw} - alpha) / (1 - alpha e^{-jw})``."""
    if not 0.0 <= alpha < 1.0:
        raise ValueError("alpha must lie in [0, 1)")
    e = np.exp(-1j * np.asarray(omega, dtype=float))
    return (e - alpha) / (1.0 - alpha * e)


def warped_frequency(omega, alpha: float):
    """Phase lag of one all-pass section, i.e. the warped frequency of ``omega``."""
    omega = np.asarray(omega, dtype=float)
    return omega + 2.0 * np.arctan2(alpha * np.sin(omega), 1.0 - alpha * np.cos(omega))


def band_center_frequencies(taps: int, alpha: float, sample_rate: float) -> np.ndarray:
    """Physical frequency (Hz) of each non-redundant warped DFT bin."""
    phi = 2.0 * np.pi * np.arange(taps // 2 + 1) / taps
    # the inverse of warping by alpha is warping by -alpha
    omega = warped_frequency(phi, -alpha)
    return omega * sample_rate / (2.0 * np.pi)


class WarpedFilterBank:
    """Stateful warped delay line with blockwise FIR synthesis weights.

    Parameters
    ----------
    taps : int
        Number of delay-line taps ``J``.
    alpha : float
        All-pass coefficient in ``[0, 1)``; 0 gives a plain FIR delay line.
    weights : array_like, optional
        Initial synthesis weights; defaults to ``e_0`` (passthrough).
    """

    def __init__(self, taps: int, alpha: float, weights=None):
        if taps < 1:
            raise ValueError("taps must be >= 1")
        if not 0.0 <= alpha < 1.0:
            raise ValueError("alpha must lie in [0, 1)")
        self.taps = int(taps)
        self.alpha = float(alpha)
        if weights is None:
            weights = np.zeros(self.taps)
            weights[0] = 1.0
        self._initial_weights = np.array(weights, dtype=float)
        self.reset()

    def reset(self):
        """Zero the delay line and all-pass memories, restore initial weights."""
        # internal_states[j] is the all-pass memory feeding tap j; index 0 unused
        self.internal_states = np.zeros(self.taps)
        self.delay_line = np.zeros(self.taps)
        self.set_weights(self._initial_weights)

    def set_weights(self, w):
        w = np.array(w, dtype=float)
        if w.shape != (self.taps,):
            raise ValueError(f"expected {self.taps} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        self.weights = w

    def snapshot(self) -> np.ndarray:
        return self.delay_line.copy()

    def step(self, x: float):
        """Advance one sample. Returns ``(y, z_snapshot)``."""
        x = float(x)
        if not np.isfinite(x):
            raise ValueError("invalid audio: non-finite sample")
        a = self.alpha
        v = self.internal_states
        z = self.delay_line
        prev = x
        z[0] = x
        for j in range(1, self.taps):
            cur = v[j] - a * prev
            v[j] = prev + a * cur
            z[j] = cur
            prev = cur
        y = float(np.dot(self.weights, z))
        return y, z.copy()

    def advance(self, x) -> np.ndarray:
        """Run the all-pass cascade over a segment; return every tap.

        Each stage runs as one ``lfilter`` call over the whole segment, so
        the result matches per-sample :meth:`step` calls. Returns an array of
        shape ``(J, len(x))``; weights are not touched.
        """
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise ValueError("invalid audio: expected a 1-D sample array")
        if not np.all(np.isfinite(x)):
            raise ValueError("invalid audio: non-finite sample")
        n = x.shape[0]
        Z = np.empty((self.taps, n))
        if n == 0:
            return Z
        Z[0] = x
        b = [-self.alpha, 1.0]
        a = [1.0, -self.alpha]
        for j in range(1, self.taps):
            # lfilter's transposed direct-form state is exactly the all-pass memory
            Z[j], zf = lfilter(b, a, Z[j - 1], zi=self.internal_states[j:j + 1])
            self.internal_states[j] = zf[0]
        self.delay_line[:] = Z[:, -1]
        return Z

    def process(self, x):
        """Run a segment with the current weights. Returns ``(y, Z)``."""
        Z = self.advance(x)
        return self.weights @ Z, Z
