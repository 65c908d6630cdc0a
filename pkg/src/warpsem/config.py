"""JSON configuration files for the engine.

A config file is a flat JSON object. dB-valued keys end in ``_db`` and
settling times are in milliseconds with an ``_ms`` suffix. Files must list
every key; unknown keys are rejected, so a typo never silently falls back
to a default.
"""

from __future__ import annotations

import json

from .engine import EngineConfig, default_sem_config

_ENGINE_KEYS = ("sample_rate", "taps", "block_length", "alpha")
_SEM_KEYS = ("kappa_db", "theta_db", "obs_var_speech", "obs_var_noise", "vmp_iterations",
             "power_floor", "vad_backward", "synthesis_window", "initial_snr_db",
             "speech_floor")
_TIME_KEYS = ("tau90_speech_ms", "tau90_noise_ms")
CONFIG_KEYS = _ENGINE_KEYS + _TIME_KEYS + _SEM_KEYS

_TYPES = {"taps": int, "block_length": int, "vmp_iterations": int,
          "vad_backward": bool, "speech_floor": bool, "synthesis_window": str}


class ConfigError(ValueError):
    """Malformed configuration file."""


def default_config_dict() -> dict:
    """The default configuration as a JSON-ready dict."""
    cfg = EngineConfig()
    out = {k: getattr(cfg, k) for k in _ENGINE_KEYS}
    out["tau90_speech_ms"] = cfg.sem.speech_bli.tau90 * 1e3
    out["tau90_noise_ms"] = cfg.sem.noise_bli.tau90 * 1e3
    out.update({k: getattr(cfg.sem, k) for k in _SEM_KEYS})
    return out


def config_from_dict(d: dict) -> EngineConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(d) - set(CONFIG_KEYS))
    missing = sorted(set(CONFIG_KEYS) - set(d))
    if unknown or missing:
        parts = []
        if unknown:
            parts.append("unknown keys: " + ", ".join(unknown))
        if missing:
            parts.append("missing keys: " + ", ".join(missing))
        raise ConfigError("; ".join(parts))
    for key in CONFIG_KEYS:
        want = _TYPES.get(key, float)
        val = d[key]
        ok = isinstance(val, want) if want in (bool, str) else (
            isinstance(val, (int, float)) and not isinstance(val, bool)
            and (want is float or float(val).is_integer()))
        if not ok:
            raise ConfigError(f"key {key!r} must be of type {want.__name__}, got {val!r}")
    try:
        sem = default_sem_config(
            sample_rate=float(d["sample_rate"]), block_length=int(d["block_length"]),
            tau90_speech=d["tau90_speech_ms"] / 1e3, tau90_noise=d["tau90_noise_ms"] / 1e3,
            **{k: (_TYPES.get(k, float))(d[k]) for k in _SEM_KEYS})
        return EngineConfig(sample_rate=float(d["sample_rate"]), taps=int(d["taps"]),
                            block_length=int(d["block_length"]), alpha=float(d["alpha"]),
                            sem=sem)
    except ValueError as exc:
        raise ConfigError(f"invalid value: {exc}") from exc


def load_config(path) -> EngineConfig:
    """Read and validate a JSON config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    return config_from_dict(d)
