"""Objective speech-quality metrics and an ideal-ratio-mask reference."""

from __future__ import annotations

import numpy as np
from scipy.signal import istft, stft

SEG_FRAME = 160
SEG_MIN_DB = -10.0
SEG_MAX_DB = 35.0
SILENCE_DBFS = -60.0


def _check_pair(clean, processed):
    clean = np.asarray(clean, dtype=float)
    processed = np.asarray(processed, dtype=float)
    if clean.shape != processed.shape:
        raise ValueError(f"length mismatch: {clean.shape} vs {processed.shape}")
    return clean, processed


def segmental_snr(clean, processed, frame: int = SEG_FRAME) -> float:
    """Mean per-frame SNR in dB over non-silent clean frames.

    Frames are ``frame`` samples, non-overlapping; each frame SNR is
    clipped to [-10, 35] dB and frames whose clean level is at or below
    -60 dBFS are skipped. Returns ``nan`` when every frame is silent.
    """
    clean, processed = _check_pair(clean, processed)
    n = clean.shape[0] // frame
    if n == 0:
        return float("nan")
    c = clean[:n * frame].reshape(n, frame)
    e = c - processed[:n * frame].reshape(n, frame)
    sig = np.sum(c * c, axis=1)
    err = np.sum(e * e, axis=1)
    active = 10.0 * np.log10(np.maximum(sig / frame, 1e-300)) > SILENCE_DBFS
    if not np.any(active):
        return float("nan")
    with np.errstate(divide="ignore"):
        snr = 10.0 * np.log10(sig[active] / err[active])
    return float(np.mean(np.clip(snr, SEG_MIN_DB, SEG_MAX_DB)))


def log_spectral_distance(clean, processed, nfft: int = 512, eps: float = 1e-10) -> float:
    """Frame-averaged RMS difference of log power spectra, in dB.

    Uses 50% overlapping Hann frames. As for :func:`segmental_snr`, frames
    whose clean level is at or below -60 dBFS are skipped; ``nan`` if all are.
    """
    clean, processed = _check_pair(clean, processed)
    kw = dict(nperseg=nfft, noverlap=nfft // 2, window="hann", boundary=None, padded=False)
    _, _, C = stft(clean, **kw)
    _, _, P = stft(processed, **kw)
    pc, pp = np.abs(C) ** 2, np.abs(P) ** 2
    # scipy scales by the window sum, so a full-scale sine peaks near 0.25 in power;
    # Parseval gives the frame's mean-square level from the one-sided spectrum
    win = np.hanning(nfft + 1)[:-1]
    level = (2.0 * np.sum(pc, axis=0) - pc[0] - pc[-1]) * np.sum(win) ** 2 / np.sum(win ** 2) / nfft
    active = 10.0 * np.log10(np.maximum(level, 1e-300)) > SILENCE_DBFS
    if not np.any(active):
        return float("nan")
    d = 10.0 * np.log10(pc[:, active] + eps) - 10.0 * np.log10(pp[:, active] + eps)
    return float(np.mean(np.sqrt(np.mean(d ** 2, axis=0))))


def ideal_ratio_mask(clean, noise, nfft: int = 512):
    """Apply the ideal ratio mask ``sqrt(|S|^2 / (|S|^2 + |N|^2))`` to ``clean + noise``.

    Needs the separate components, so it only serves as an oracle ceiling.
    """
    clean = np.asarray(clean, dtype=float)
    noise = np.asarray(noise, dtype=float)
    kw = dict(nperseg=nfft, noverlap=3 * nfft // 4, window="hann")
    _, _, S = stft(clean, **kw)
    _, _, N = stft(noise, **kw)
    _, _, X = stft(clean + noise, **kw)
    ps, pn = np.abs(S) ** 2, np.abs(N) ** 2
    mask = np.sqrt(ps / np.maximum(ps + pn, 1e-30))
    _, y = istft(mask * X, **kw)
    return y[:clean.shape[0]]


def filterbank_ratio_mask(clean, noise, config=None) -> np.ndarray:
    """Oracle enhancer with the engine's architecture and ideal gains.

    Runs the same warped filter bank, block schedule and synthesis as
    :class:`~warpsem.engine.Engine`, but each block's band gains are
    ``sqrt(Ps / (Ps + Pn))`` from the separate clean and noise delay lines
    instead of SEM inference. This is the ceiling of any gain rule on this
    front end.
    """
    from .engine import EngineConfig
    from .sem import SYNTHESIS_WINDOWS, periodic_hann
    from .wfb import WarpedFilterBank

    cfg = config or EngineConfig()
    clean = np.asarray(clean, dtype=float)
    noise = np.asarray(noise, dtype=float)
    if clean.shape != noise.shape or clean.ndim != 1:
        raise ValueError("clean and noise must be 1-D arrays of equal length")
    banks = [WarpedFilterBank(cfg.taps, cfg.alpha) for _ in range(3)]
    Zc, Zn, Zx = (b.advance(s) for b, s in zip(banks, (clean, noise, clean + noise)))
    synth = SYNTHESIS_WINDOWS[cfg.sem.synthesis_window]
    window = periodic_hann(cfg.taps)
    M = cfg.block_length
    weights = banks[2].weights
    out = np.empty_like(clean)
    for start in range(0, clean.shape[0], M):
        end = min(start + M, clean.shape[0])
        out[start:end] = weights @ Zx[:, start:end]
        pc = np.abs(np.fft.rfft(window * Zc[:, end - 1])) ** 2
        pn = np.abs(np.fft.rfft(window * Zn[:, end - 1])) ** 2
        weights = synth(np.sqrt(pc / np.maximum(pc + pn, 1e-30)))
    return out
