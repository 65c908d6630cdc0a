"""Synthetic test signals with known clean and noise components."""

from __future__ import annotations

import numpy as np


def am_tone_speech(carrier_hz: float = 1000.0, duration: float = 10.0,
                   sample_rate: float = 16000.0, lead_in: float = 0.5,
                   syllable_rate: float = 4.0, amplitude: float = 0.3) -> np.ndarray:
    """Speech stand-in: a tone gated by ``sin^2`` syllables after a silent lead-in.

    The envelope ``sin^2(pi * rate * t)`` gives ``rate`` syllables per second.
    The lead-in lets a noise tracker see noise alone before speech starts,
    as in a real utterance.
    """
    t = np.arange(int(round(duration * sample_rate))) / sample_rate
    env = np.where(t < lead_in, 0.0, np.sin(np.pi * syllable_rate * (t - lead_in)) ** 2)
    return amplitude * env * np.sin(2.0 * np.pi * carrier_hz * t)


def white_noise(n: int, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal(n)


def scale_to_snr(clean, noise, snr_db: float, active=None) -> np.ndarray:
    """Scale ``noise`` so that ``clean`` is ``snr_db`` above it.

    Clean power is measured where ``active`` is true (default: where the
    clean signal is nonzero), noise power over the whole signal.
    """
    clean = np.asarray(clean, dtype=float)
    noise = np.asarray(noise, dtype=float)
    if active is None:
        active = clean != 0
    ps = np.mean(clean[active] ** 2)
    pn = np.mean(noise ** 2)
    return noise * np.sqrt(ps / (pn * 10.0 ** (snr_db / 10.0)))


def tone_in_noise(carrier_hz: float = 1000.0, duration: float = 10.0, snr_db: float = 0.0,
                  seed: int = 0, sample_rate: float = 16000.0):
    """AM-tone speech plus white noise. Returns ``(clean, noise)``; the mix is their sum."""
    clean = am_tone_speech(carrier_hz, duration, sample_rate)
    engaged = np.arange(clean.shape[0]) >= int(0.5 * sample_rate)
    noise = scale_to_snr(clean, white_noise(clean.shape[0], seed), snr_db, active=engaged)
    return clean, noise
