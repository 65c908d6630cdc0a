"""Streaming orchestration of the filter bank and the SEM.

The filter bank runs at the audio rate; the SEM runs once per block of
``block_length`` samples on the delay-line snapshot taken after the last
sample of the block. New weights take effect from the first sample of the
next block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import sem
from .wfb import WarpedFilterBank

CHUNK_BLOCKS = 256


def default_sem_config(sample_rate: float = 16000.0, block_length: int = 32,
                       tau90_speech: float = 0.005, tau90_noise: float = 0.7,
                       **kwargs) -> sem.SemConfig:
    """SEM config with the published defaults (settling times in seconds)."""
    return sem.SemConfig.from_settling_times(tau90_speech, tau90_noise,
                                             block_length / sample_rate, **kwargs)


@dataclass(frozen=True)
class EngineConfig:
    sample_rate: float = 16000.0
    taps: int = 32
    block_length: int = 32
    alpha: float = 0.5
    sem: sem.SemConfig = field(default_factory=default_sem_config)

    def __post_init__(self):
        if self.taps < 2 or self.taps % 2:
            raise ValueError("taps must be even and >= 2")
        if self.block_length < 1:
            raise ValueError("block_length must be >= 1")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        period = self.block_length / self.sample_rate
        for name in ("speech_bli", "noise_bli"):
            bp = getattr(self.sem, name).block_period
            if bp is not None and not np.isclose(bp, period):
                raise ValueError(f"sem.{name} was derived for block period {bp} s, "
                                 f"engine block period is {period} s")

    @property
    def n_bands(self) -> int:
        return self.taps // 2 + 1

    @property
    def block_period(self) -> float:
        return self.block_length / self.sample_rate


class Engine:
    """Push-sample speech enhancer.

    Parameters
    ----------
    config : EngineConfig, optional
    keep_trace : bool
        Keep one :class:`~warpsem.sem.BlockDiagnostics` per block in
        :attr:`trace`.

    Examples
    --------
    >>> eng = Engine()
    >>> y = eng.process(np.zeros(320))
    >>> eng.block_count
    10
    """

    def __init__(self, config: EngineConfig | None = None, keep_trace: bool = False):
        self.config = config or EngineConfig()
        self.keep_trace = keep_trace
        self.wfb = WarpedFilterBank(self.config.taps, self.config.alpha,
                                    weights=self._initial_weights())
        self.reset()

    def _initial_weights(self):
        # before the first SEM update: the gain implied by the trackers' initial SNR
        gains = np.full(self.config.n_bands, sem.initial_gain(self.config.sem))
        return sem.synthesize(gains, self.config.sem)

    def reset(self):
        self.wfb.reset()
        self.bands = None
        self.sample_counter = 0
        self.block_count = 0
        self.latest_diagnostics = None
        self.trace = []

    def _end_of_block(self, z):
        self.bands, weights, diag = sem.process_block(self.bands, z, self.config.sem)
        self.wfb.set_weights(weights)
        self.block_count += 1
        self.latest_diagnostics = diag
        if self.keep_trace:
            self.trace.append(diag)

    def push(self, x: float) -> float:
        y, z = self.wfb.step(x)
        self.sample_counter += 1
        if self.sample_counter % self.config.block_length == 0:
            self._end_of_block(z)
        return y

    def process(self, x) -> np.ndarray:
        """Process a mono sample array; same result as pushing each sample."""
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise ValueError(f"expected mono (1-D) audio, got shape {x.shape}")
        M = self.config.block_length
        out = np.empty_like(x)
        start = 0
        while start < x.shape[0]:
            # the delay line does not depend on the weights, so run the
            # cascade over many blocks at once and apply weights afterwards
            chunk = x[start:start + CHUNK_BLOCKS * M]
            Z = self.wfb.advance(chunk)
            pos = 0
            while pos < chunk.shape[0]:
                todo = M - self.sample_counter % M
                end = min(pos + todo, chunk.shape[0])
                out[start + pos:start + end] = self.wfb.weights @ Z[:, pos:end]
                self.sample_counter += end - pos
                if end - pos == todo:
                    self._end_of_block(Z[:, end - 1])
                pos = end
            start += chunk.shape[0]
        return out


def enhance(x, config: EngineConfig | None = None) -> np.ndarray:
    """Enhance a whole mono signal with a fresh engine."""
    return Engine(config).process(x)
