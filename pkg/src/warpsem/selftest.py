"""Fast built-in numerical checks, run by ``warpsem selftest``."""

from __future__ import annotations

import sys

import numpy as np
from scipy.special import expit

from . import bli, logit_node, sem
from .beliefs import GaussianBelief
from .engine import Engine
from .wfb import WarpedFilterBank, allpass_frequency_response


def _allpass_unit_magnitude():
    omega = np.linspace(0.0, np.pi, 512)
    return max(np.max(np.abs(np.abs(allpass_frequency_response(a, omega)) - 1.0))
               for a in (0.3, 0.5, 0.58)) < 1e-12


def _fir_at_zero_warp():
    rng = np.random.default_rng(1)
    x, w = rng.standard_normal(2000), rng.standard_normal(32)
    bank = WarpedFilterBank(32, 0.0, weights=w)
    y, _ = bank.process(x)
    return np.max(np.abs(y - np.convolve(x, w)[:x.shape[0]])) < 1e-12


def _bli_steady_gain():
    return all(abs(bli.steady_state_gain(bli.config_from_lambda(lam)) - lam) < 1e-8
               for lam in (0.01, 0.1, 0.5, 0.9))


def _jj_bound():
    x = np.linspace(-20.0, 20.0, 401)
    ok = True
    for zeta in (0.1, 1.0, 5.0):
        ok &= bool(np.all(logit_node.jj_bound(x, zeta) <= expit(x) + 1e-14))
        ok &= abs(logit_node.jj_bound(zeta, zeta) - expit(zeta)) < 1e-12
    return ok


def _wiener_identity():
    rng = np.random.default_rng(2)
    ps, pn = rng.uniform(1e-3, 1e3, (2, 1000))
    return np.max(np.abs(expit(np.log(ps / pn)) - ps / (ps + pn))) < 1e-12


def _free_energy_monotone():
    rng = np.random.default_rng(3)
    band = None
    cfg = Engine().config.sem
    for _ in range(20):
        band, _, diag = sem.process_block(band, rng.standard_normal(32), cfg)
        if np.max(np.diff(diag.total_free_energy)) > 1e-9:
            return False
    return True


def _passthrough_mask():
    w = sem.synthesize(np.ones(17))
    return np.allclose(w, np.eye(32)[0], atol=1e-12)


def _deterministic_engine():
    x = np.random.default_rng(4).standard_normal(3200) * 0.1
    return np.array_equal(Engine().process(x), Engine().process(x))


def _zeta_update():
    x = GaussianBelief(0.7, 0.3)
    return abs(logit_node.update_zeta(x) - np.sqrt(0.79)) < 1e-15


CHECKS = (
    ("all-pass unit magnitude", _allpass_unit_magnitude),
    ("FIR equivalence at alpha = 0", _fir_at_zero_warp),
    ("BLI steady-state gain", _bli_steady_gain),
    ("logistic bound validity and tightness", _jj_bound),
    ("Wiener identity", _wiener_identity),
    ("zeta update", _zeta_update),
    ("free energy non-increasing", _free_energy_monotone),
    ("unit mask is passthrough", _passthrough_mask),
    ("deterministic engine", _deterministic_engine),
)


def run_selftest(stream=None) -> bool:
    """Run every check, print one PASS/FAIL line each, return overall success."""
    stream = stream or sys.stdout
    ok = True
    for name, check in CHECKS:
        try:
            passed = bool(check())
        except Exception as exc:  # a crashing check is a failed check
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}", file=stream)
    return ok
