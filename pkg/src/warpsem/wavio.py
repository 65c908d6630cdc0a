"""Mono 16 kHz WAV reading and writing (PCM16 or float32)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

REQUIRED_RATE = 16000
PCM16_SCALE = 32768.0


class WavFormatError(ValueError):
    """The file is a readable WAV but not in an accepted format."""


@dataclass(frozen=True)
class WavSpec:
    sample_rate: int
    channels: int
    bit_depth: int
    length: int

    @property
    def is_float(self) -> bool:
        return self.bit_depth == 32


def read_wav(path, sample_rate: int = REQUIRED_RATE):
    """Read an accepted WAV. Returns ``(samples as float64 in [-1, 1], WavSpec)``."""
    rate, data = wavfile.read(path)
    channels = 1 if data.ndim == 1 else data.shape[1]
    if rate != sample_rate:
        raise WavFormatError(f"sample rate is {rate} Hz, expected {sample_rate} Hz")
    if channels != 1:
        raise WavFormatError(f"channels is {channels}, expected 1 (mono)")
    if data.dtype == np.int16:
        x, depth = data.astype(float) / PCM16_SCALE, 16
    elif data.dtype == np.float32:
        x, depth = data.astype(float), 32
    else:
        raise WavFormatError(f"bit depth/sample format is {data.dtype}, "
                             "expected 16-bit PCM or 32-bit float")
    if not np.all(np.isfinite(x)):
        raise WavFormatError("samples contain NaN or infinity")
    return x, WavSpec(int(rate), 1, depth, int(x.shape[0]))


def write_wav(path, x, spec: WavSpec):
    """Write ``x`` with the sample format of ``spec``; PCM16 output is clipped."""
    x = np.asarray(x, dtype=float)
    if spec.is_float:
        data = x.astype(np.float32)
    else:
        data = np.clip(np.round(x * PCM16_SCALE), -32768, 32767).astype(np.int16)
    wavfile.write(path, spec.sample_rate, data)
