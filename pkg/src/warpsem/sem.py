"""Per-band Bayesian speech enhancement model.

Each block, the warped delay-line snapshot is turned into log-power bands.
Per band, two Bayesian leaky integrators track speech and noise log-power,
a switching variable (VAD) decides which tracker an observation feeds, and
a logistic readout of the log-SNR gives the spectral gain. Inference is
mean-field variational message passing with the Jaakkola-Jordan bound on
the two logistic links, hand-scheduled for this fixed graph.

All bands are carried together in numpy arrays of length ``B = J/2 + 1``;
they never interact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import bli, logit_node
from .beliefs import (
    BernoulliBelief,
    GaussianBelief,
    bernoulli_entropy,
    bernoulli_from_log_odds,
    gaussian_entropy,
)

DB_TO_NATS = np.log(10.0) / 10.0
INITIAL_VARIANCE = 10.0
_LOG_2PI = float(np.log(2.0 * np.pi))


def db_to_nats(db):
    return DB_TO_NATS * np.asarray(db, dtype=float)


def periodic_hann(n: int) -> np.ndarray:
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(n) / n))


@dataclass(frozen=True)
class SemConfig:
    """Clamped SEM hyperparameters. ``kappa_db``/``theta_db`` are in dB."""

    speech_bli: bli.BliConfig
    noise_bli: bli.BliConfig
    kappa_db: float = 2.0
    theta_db: float = 12.0
    obs_var_speech: float = 1.0
    obs_var_noise: float = 1.0
    vmp_iterations: int = 3
    power_floor: float = 1e-12
    vad_backward: bool = True
    synthesis_window: str = "tap"
    initial_snr_db: float = 0.0
    speech_floor: bool = True

    def __post_init__(self):
        if self.vmp_iterations < 1:
            raise ValueError("vmp_iterations must be >= 1")
        if self.power_floor <= 0:
            raise ValueError("power_floor must be positive")
        if self.obs_var_speech <= 0 or self.obs_var_noise <= 0:
            raise ValueError("observation variances must be positive")
        if self.synthesis_window not in SYNTHESIS_WINDOWS:
            raise ValueError(f"synthesis_window must be one of {sorted(SYNTHESIS_WINDOWS)}")

    @property
    def kappa(self) -> float:
        return float(db_to_nats(self.kappa_db))

    @property
    def theta(self) -> float:
        return float(db_to_nats(self.theta_db))

    @classmethod
    def from_settling_times(cls, tau90_speech: float, tau90_noise: float,
                            block_period: float, **kwargs) -> "SemConfig":
        """Build from speech/noise 90% settling times in seconds."""
        return cls(speech_bli=bli.config_from_tau90(tau90_speech, block_period),
                   noise_bli=bli.config_from_tau90(tau90_noise, block_period), **kwargs)


@dataclass(frozen=True)
class SpectralFrame:
    log_power: np.ndarray
    complex_bins: np.ndarray


@dataclass(frozen=True)
class BandState:
    """Posterior set for all bands of one stream.

    ``speech_prior``/``noise_prior`` are the predicted beliefs of the
    current block; VMP sweeps always condition these, never the previous
    sweep's posterior.
    """

    speech: bli.BliState
    noise: bli.BliState
    speech_prior: GaussianBelief
    noise_prior: GaussianBelief
    vad: BernoulliBelief
    gain: BernoulliBelief
    zeta_vad: np.ndarray
    zeta_gain: np.ndarray

    @property
    def snr(self) -> GaussianBelief:
        """Log-SNR marginal ``N(mu_s - mu_n, v_s + v_n)``."""
        s, n = self.speech.posterior, self.noise.posterior
        return GaussianBelief(s.mean - n.mean, s.variance + n.variance)

    @property
    def n_bands(self) -> int:
        return int(np.size(self.speech.mean))


@dataclass(frozen=True)
class BlockDiagnostics:
    snr_mean: np.ndarray
    snr_var: np.ndarray
    vad_p: np.ndarray
    gain: np.ndarray
    # shape (iterations + 1, B): before the first sweep, then after each
    free_energy: np.ndarray = field(repr=False)

    @property
    def total_free_energy(self) -> np.ndarray:
        return self.free_energy.sum(axis=1)


def analyze(z, cfg: SemConfig) -> SpectralFrame:
    """Hann-windowed DFT of the delay line, floored natural-log power."""
    z = np.asarray(z, dtype=float)
    bins = np.fft.rfft(periodic_hann(z.shape[0]) * z)
    power = np.maximum(bins.real ** 2 + bins.imag ** 2, cfg.power_floor)
    return SpectralFrame(np.log(power), bins)


def initial_bands(z_tilde, cfg: SemConfig) -> BandState:
    """Both trackers start at the first observation, ``initial_snr_db`` apart.

    Noise is placed ``initial_snr_db`` below speech. The default 0 dB assumes
    the stream begins in noise; with a large offset the noise tracker sits
    far below the data, the VAD keeps voting speech and noise never gets
    enough evidence to climb.
    """
    z_tilde = np.asarray(z_tilde, dtype=float)
    var = np.full_like(z_tilde, INITIAL_VARIANCE)
    speech = GaussianBelief(z_tilde.copy(), var.copy())
    noise = GaussianBelief(z_tilde - float(db_to_nats(cfg.initial_snr_db)), var.copy())
    band = BandState(
        speech=bli.BliState(speech), noise=bli.BliState(noise),
        speech_prior=speech, noise_prior=noise,
        vad=BernoulliBelief(np.full_like(z_tilde, 0.5)),
        gain=BernoulliBelief(np.full_like(z_tilde, 0.5)),
        zeta_vad=np.ones_like(z_tilde), zeta_gain=np.ones_like(z_tilde),
    )
    return replace(band, zeta_vad=_zeta(band.snr, cfg.kappa),
                   zeta_gain=_zeta(band.snr, cfg.theta))


def initial_gain(cfg: SemConfig) -> float:
    """Gain implied by the initial SNR, used before any block is seen."""
    return float(bernoulli_from_log_odds(db_to_nats(cfg.initial_snr_db) - cfg.theta).p)


def _zeta(snr: GaussianBelief, offset: float):
    return np.asarray(logit_node.update_zeta(GaussianBelief(snr.mean - offset, snr.variance)))


def predict(band: BandState, cfg: SemConfig) -> BandState:
    """Once-per-block random-walk prediction of both trackers."""
    sp = bli.predict(band.speech, cfg.speech_bli)
    npred = bli.predict(band.noise, cfg.noise_bli)
    if cfg.speech_floor:
        sp = GaussianBelief(np.maximum(sp.mean, npred.mean), sp.variance)
    return replace(band, speech=bli.BliState(sp), noise=bli.BliState(npred),
                   speech_prior=sp, noise_prior=npred)


def _expected_loglik(z, belief: GaussianBelief, obs_var):
    """``E_q[ln N(z | x, obs_var)]``."""
    return -0.5 * (_LOG_2PI + np.log(obs_var)
                   + ((z - belief.mean) ** 2 + belief.variance) / obs_var)


def vad_sweep(band: BandState, z_tilde, cfg: SemConfig) -> BandState:
    """Refresh the VAD logit parameter and the VAD posterior.

    The forward message carries ``sigma(E[snr] - kappa)``; the mixture
    observation contributes the log-likelihood ratio of the speech and
    noise hypotheses under the current tracker beliefs. Their product
    (sum of log-odds) is the new VAD marginal.
    """
    snr = band.snr
    x = GaussianBelief(snr.mean - cfg.kappa, snr.variance)
    zeta = np.asarray(logit_node.update_zeta(x))
    evidence = (_expected_loglik(z_tilde, band.speech.posterior, cfg.obs_var_speech)
                - _expected_loglik(z_tilde, band.noise.posterior, cfg.obs_var_noise))
    vad = bernoulli_from_log_odds(np.asarray(x.mean) + evidence)
    return replace(band, vad=vad, zeta_vad=zeta)


def observation_messages(z_tilde, vad: BernoulliBelief, cfg: SemConfig):
    """Precision-weighted observation messages for the two trackers.

    Returned as natural parameters ``(precision, precision * mean)`` so a
    zero weight is simply a zero-precision (flat) message.
    """
    p = np.asarray(vad.p, dtype=float)
    prec_s = p / cfg.obs_var_speech
    prec_n = (1.0 - p) / cfg.obs_var_noise
    return (prec_s, prec_s * z_tilde), (prec_n, prec_n * z_tilde)


def _condition(prior: GaussianBelief, precision, weighted_mean) -> bli.BliState:
    return bli.update_natural(prior, precision, weighted_mean)


def track_sweep(band: BandState, z_tilde, cfg: SemConfig) -> BandState:
    """Update the speech tracker, then the noise tracker.

    Each tracker conditions its predicted prior on the VAD-weighted
    observation and, when ``cfg.vad_backward`` is set, on the VAD logit's
    backward message mapped through ``snr = s - n``. The trackers are
    updated one after the other so that each update is an exact
    coordinate step on the free energy.
    """
    (ps, ws), (pn, wn) = observation_messages(z_tilde, band.vad, cfg)
    if cfg.vad_backward:
        back = logit_node.backward_message_x(band.vad, band.zeta_vad)
        back_prec = 1.0 / np.asarray(back.variance)
        # snr - kappa ~ back  =>  s ~ n + kappa + back   and   n ~ s - kappa - back
        target_s = np.asarray(band.noise.mean) + cfg.kappa + back.mean
        speech = _condition(band.speech_prior, ps + back_prec, ws + back_prec * target_s)
        target_n = np.asarray(speech.mean) - cfg.kappa - back.mean
        noise = _condition(band.noise_prior, pn + back_prec, wn + back_prec * target_n)
    else:
        speech = _condition(band.speech_prior, ps, ws)
        noise = _condition(band.noise_prior, pn, wn)
    return replace(band, speech=speech, noise=noise)


def gain_readout(band: BandState, cfg: SemConfig):
    """Spectral gain ``E[w] = sigma(E[snr] - theta)``; no message flows back."""
    snr = band.snr
    x = GaussianBelief(snr.mean - cfg.theta, snr.variance)
    gain = logit_node.forward_message_y(x)
    band = replace(band, gain=gain, zeta_gain=np.asarray(logit_node.update_zeta(x)))
    return band, np.asarray(gain.p)


def free_energy(band: BandState, z_tilde, cfg: SemConfig) -> np.ndarray:
    """Per-band variational free energy of the tracking graph.

    Sum of average energies (random-walk priors, VAD-weighted Gaussian
    observations, VAD logit node under the bound) minus the entropies of
    ``q(s)``, ``q(n)`` and ``q(vad)``. The gain node is a pure readout and
    is left out.
    """
    s, n = band.speech.posterior, band.noise.posterior
    p = np.asarray(band.vad.p, dtype=float)

    def prior_energy(q, prior):
        return 0.5 * (_LOG_2PI + np.log(prior.variance)
                      + ((q.mean - prior.mean) ** 2 + q.variance) / prior.variance)

    u = prior_energy(s, band.speech_prior) + prior_energy(n, band.noise_prior)
    # weights multiply explicitly so that a zero weight drops the term exactly
    u = u - p * _expected_loglik(z_tilde, s, cfg.obs_var_speech)
    u = u - (1.0 - p) * _expected_loglik(z_tilde, n, cfg.obs_var_noise)
    x = GaussianBelief(s.mean - n.mean - cfg.kappa, s.variance + n.variance)
    u = u + logit_node.average_energy(band.vad, x, band.zeta_vad)
    h = gaussian_entropy(s) + gaussian_entropy(n) + bernoulli_entropy(band.vad)
    return np.asarray(u - h, dtype=float)


def _spectral_mask(gains: np.ndarray) -> np.ndarray:
    """Mirror ``J/2 + 1`` band gains into a length-J even real spectrum."""
    return np.concatenate([gains, gains[-2:0:-1]])


def synthesize(gains, cfg: SemConfig | None = None) -> np.ndarray:
    """Turn band gains into FIR weights for the warped delay line.

    ``synthesis_window="spectral"`` multiplies the mirrored gain spectrum by
    a periodic Hann over the bin index before the inverse DFT.
    ``"tap"`` takes the inverse DFT of the mask, which is even and centred
    on tap 0, and tapers it with a Hann centred on tap 0; a unit mask then
    gives exact passthrough.
    """
    gains = np.asarray(gains, dtype=float)
    if np.any(gains < 0) or np.any(gains > 1) or np.any(np.isnan(gains)):
        raise ValueError("gains must lie in [0, 1]")
    mode = "tap" if cfg is None else cfg.synthesis_window
    return SYNTHESIS_WINDOWS[mode](gains)


def _synth_spectral(gains):
    mask = _spectral_mask(gains)
    spectrum = periodic_hann(mask.shape[0]) * mask
    w = np.fft.ifft(spectrum)
    if np.max(np.abs(w.imag)) > 1e-10:
        raise RuntimeError("synthesis produced a complex impulse response")
    return w.real


def _synth_tap(gains):
    mask = _spectral_mask(gains)
    n = mask.shape[0]
    w = np.fft.ifft(mask)
    if np.max(np.abs(w.imag)) > 1e-10:
        raise RuntimeError("synthesis produced a complex impulse response")
    taper = np.roll(periodic_hann(n), n // 2)
    return taper * w.real


SYNTHESIS_WINDOWS = {"spectral": _synth_spectral, "tap": _synth_tap}


def process_block(band: BandState | None, z, cfg: SemConfig):
    """One SEM update from a delay-line snapshot.

    Returns ``(band, weights, diagnostics)``. Pass ``band=None`` on the first
    block to initialize the trackers from that block's spectrum.
    """
    frame = analyze(z, cfg)
    z_tilde = frame.log_power
    if band is None:
        band = initial_bands(z_tilde, cfg)
    band = predict(band, cfg)
    energies = [free_energy(band, z_tilde, cfg)]
    for _ in range(cfg.vmp_iterations):
        band = vad_sweep(band, z_tilde, cfg)
        band = track_sweep(band, z_tilde, cfg)
        energies.append(free_energy(band, z_tilde, cfg))
    band, gains = gain_readout(band, cfg)
    weights = synthesize(gains, cfg)
    snr = band.snr
    diag = BlockDiagnostics(
        snr_mean=np.asarray(snr.mean), snr_var=np.asarray(snr.variance),
        vad_p=np.asarray(band.vad.p), gain=gains, free_energy=np.vstack(energies),
    )
    return band, weights, diag
