"""Streaming single-channel speech enhancement.

A warped-frequency all-pass filter bank runs at the audio rate. Once per
block a per-band Bayesian model (speech and noise leaky integrators, a
switching voice-activity variable and a logistic gain readout) is updated
by variational message passing, and its gains become the filter weights.
"""

from .engine import Engine, EngineConfig, default_sem_config, enhance
from .sem import SemConfig

__all__ = ["Engine", "EngineConfig", "SemConfig", "default_sem_config", "enhance"]
__version__ = "0.1.0"
