"""Acceptance criteria, one test per criterion.

Every criterion prints a PASS/FAIL line (in the pytest terminal summary,
or on stdout when this file is run as a script). Criterion 12 needs the
full VoiceBank+DEMAND test set and external PESQ tooling and is skipped.
"""

import time

import numpy as np
import pytest
from scipy.special import expit

from warpsem import bli, logit_node, sem
from warpsem.beliefs import GaussianBelief
from warpsem.engine import Engine, EngineConfig, enhance
from warpsem.metrics import filterbank_ratio_mask, ideal_ratio_mask, segmental_snr
from warpsem.synthetic import tone_in_noise
from warpsem.wfb import WarpedFilterBank, allpass_frequency_response

RESULTS = {}


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def criterion_1():
    def run():
        omega = np.linspace(0.0, np.pi, 512)
        return max(np.max(np.abs(np.abs(allpass_frequency_response(a, omega)) - 1.0))
                   for a in (0.3, 0.5, 0.58))
    err, dt = _timed(run)
    return err < 1e-12 and dt < 1.0, f"max ||A|-1| = {err:.2e}, {dt:.3f} s"


def criterion_2():
    def run():
        rng = np.random.default_rng(0)
        x, w = rng.standard_normal(16000), rng.standard_normal(32)
        y, _ = WarpedFilterBank(32, 0.0, weights=w).process(x)
        return np.max(np.abs(y - np.convolve(x, w)[:x.shape[0]]))
    err, dt = _timed(run)
    return err < 1e-12 and dt < 1.0, f"max abs error {err:.2e}, {dt:.3f} s"


def criterion_3():
    def run():
        return max(abs(bli.steady_state_gain(bli.config_from_lambda(lam)) - lam)
                   for lam in (0.01, 0.1, 0.5, 0.9))
    err, dt = _timed(run)
    return err < 1e-8 and dt < 1.0, f"max |K_inf - lambda| = {err:.2e}, {dt:.3f} s"


def criterion_4():
    lam = 0.1
    cfg = bli.config_from_lambda(lam)
    x = np.random.default_rng(1).standard_normal(10_000)
    state = bli.BliState(GaussianBelief(0.0, bli.steady_state_variance(cfg)))
    y_prev, err = 0.0, 0.0
    for xk in x:
        state, _ = bli.update(bli.predict(state, cfg), GaussianBelief(xk, 1.0))
        y_prev = y_prev + lam * (xk - y_prev)
        err = max(err, abs(state.mean - y_prev))
    return err < 1e-12, f"max deviation from leaky integrator {err:.2e}"


def criterion_5():
    def run():
        x = np.arange(-1000, 1001) * 0.01
        excess, tight = -np.inf, 0.0
        for zeta in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
            excess = max(excess, np.max(logit_node.jj_bound(x, zeta) - expit(x)))
            for s in (zeta, -zeta):
                tight = max(tight, abs(logit_node.jj_bound(s, zeta) - expit(s)))
        return excess, tight
    (excess, tight), dt = _timed(run)
    ok = excess <= 1e-14 and tight < 1e-12 and dt < 1.0
    return ok, f"max(bound - sigma) = {excess:.2e}, tightness {tight:.2e}, {dt:.3f} s"


def criterion_6():
    rng = np.random.default_rng(2)
    t, w = np.polynomial.hermite_e.hermegauss(201)
    w = w / np.sqrt(2 * np.pi)
    h, worst = 1e-5, 0.0
    for _ in range(100):
        mean, var = rng.normal(0.0, 3.0), rng.uniform(0.05, 5.0)
        x = mean + np.sqrt(var) * t
        zeta = logit_node.update_zeta(GaussianBelief(mean, var))
        up = np.sum(w * logit_node.jj_log_bound(x, zeta + h))
        down = np.sum(w * logit_node.jj_log_bound(x, zeta - h))
        worst = max(worst, abs(up - down) / (2 * h))
    return worst < 1e-6, f"max |dE[ln bound]/dzeta| at optimum {worst:.2e}"


def criterion_7():
    rng = np.random.default_rng(3)
    cfg = EngineConfig().sem
    band, worst = None, -np.inf
    for _ in range(100):
        z = rng.standard_normal(32) * 10 ** rng.uniform(-4, 1)
        band, _, diag = sem.process_block(band, z, cfg)
        worst = max(worst, np.max(np.diff(diag.total_free_energy)))
    return worst <= 1e-9, f"largest per-iteration increase {worst:.2e}"


def criterion_8():
    ps, pn = np.random.default_rng(4).uniform(1e-3, 1e3, (2, 1000))
    err = np.max(np.abs(expit(np.log(ps / pn)) - ps / (ps + pn)))
    return err < 1e-12, f"max error {err:.2e}"


def _corpus_file(k):
    carriers = (300.0, 500.0, 800.0, 1000.0, 1500.0, 2000.0, 2500.0, 3000.0, 4000.0, 600.0)
    clean, noise = tone_in_noise(carriers[k], duration=1.0, snr_db=(-5.0 + 2.5 * k), seed=k)
    x = clean + noise
    return x / np.max(np.abs(x))


def criterion_9():
    lo, hi, identical = np.inf, -np.inf, True
    for k in range(10):
        x = _corpus_file(k)
        runs = []
        for _ in range(2):
            eng = Engine(keep_trace=True)
            runs.append(eng.process(x).tobytes())
            g = np.array([d.gain for d in eng.trace])
            lo, hi = min(lo, g.min()), max(hi, g.max())
        identical &= runs[0] == runs[1]
    ok = identical and lo >= 0.0 and hi <= 1.0
    return ok, f"gains in [{lo:.3g}, {hi:.3g}], repeated runs identical: {identical}"


def criterion_10():
    parts, ok = [], True
    for carrier in (500.0, 1000.0, 2000.0):
        clean, noise = tone_in_noise(carrier, duration=10.0, snr_db=0.0)
        noisy = clean + noise
        base = segmental_snr(clean, noisy)
        y, dt = _timed(lambda: enhance(noisy))
        gain = segmental_snr(clean, y) - base
        oracle = segmental_snr(clean, filterbank_ratio_mask(clean, noise)) - base
        ok &= gain >= 0.4 * oracle and dt < 10.0
        parts.append(f"{carrier:g} Hz: {gain:.2f} dB of {oracle:.2f} dB oracle "
                     f"({gain / oracle:.0%}), {dt:.1f} s")
    return ok, "; ".join(parts)


def criterion_11():
    clean, noise = tone_in_noise(1000.0, duration=10.0, snr_db=0.0, seed=11)
    _, dt = _timed(lambda: Engine().process(clean + noise))
    return dt < 10.0, f"10 s of audio in {dt:.2f} s (real-time factor {dt / 10:.2f})"


CRITERIA = {
    1: ("all-pass unit magnitude", criterion_1),
    2: ("FIR equivalence at alpha = 0", criterion_2),
    3: ("BLI steady-state gain", criterion_3),
    4: ("leaky-integrator equivalence", criterion_4),
    5: ("logistic bound validity and tightness", criterion_5),
    6: ("zeta optimality", criterion_6),
    7: ("free-energy monotonicity", criterion_7),
    8: ("Wiener identity", criterion_8),
    9: ("mask bounds and determinism", criterion_9),
    10: ("desk-scale enhancement vs ideal-mask oracle", criterion_10),
    11: ("throughput", criterion_11),
}


def _line(n, name, ok, detail):
    return f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {name}: {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    name, fn = CRITERIA[n]
    ok, detail = fn()
    RESULTS[n] = _line(n, name, ok, detail)
    assert ok, RESULTS[n]


def test_criterion_12():
    RESULTS[12] = "criterion 12 SKIP  corpus PESQ reproduction: needs VoiceBank+DEMAND and PESQ tooling"
    pytest.skip("needs the VoiceBank+DEMAND test set and external PESQ tooling")


def test_stft_irm_reported_for_reference():
    # not a criterion: the STFT-domain mask is far beyond what 32 warped taps can resolve
    clean, noise = tone_in_noise(1000.0, duration=3.0)
    base = segmental_snr(clean, clean + noise)
    assert segmental_snr(clean, ideal_ratio_mask(clean, noise)) - base > 10.0


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        name, fn = CRITERIA[n]
        ok, detail = fn()
        failed += not ok
        print(_line(n, name, ok, detail), flush=True)
    print("criterion 12 SKIP  corpus PESQ reproduction: needs VoiceBank+DEMAND and PESQ tooling")
    raise SystemExit(1 if failed else 0)
