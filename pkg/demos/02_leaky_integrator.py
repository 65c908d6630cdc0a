"""Settling times, forgetting factors and the Kalman filter that matches them."""

import numpy as np

from warpsem import bli
from warpsem.beliefs import GaussianBelief

T = 0.002  # one SEM block at 16 kHz, M = 32

for label, tau in (("speech", 0.005), ("noise", 0.7)):
    cfg = bli.config_from_tau90(tau, T)
    k_inf = bli.steady_state_gain(cfg)
    print(f"{label:6s} tau90={tau * 1e3:5.0f} ms  lambda={cfg.lam:.6f}  "
          f"sigma_s^2={cfg.process_variance:.3e}  K_inf={k_inf:.6f}")

# A converged filter fed a unit step crosses 0.9 after about tau90 / T blocks.
for tau in (0.005, 0.05, 0.7):
    cfg = bli.config_from_tau90(tau, T)
    state = bli.BliState(GaussianBelief(0.0, bli.steady_state_variance(cfg)))
    k = 0
    while state.mean < 0.9:
        state, _ = bli.update(bli.predict(state, cfg), GaussianBelief(1.0, 1.0))
        k += 1
    print(f"tau90={tau:5.3f} s: crossed 0.9 after {k} blocks (tau90/T = {tau / T:.0f})")

# In steady state the posterior mean is exactly a first-order leaky integrator.
cfg = bli.config_from_lambda(0.1)
x = np.random.default_rng(0).standard_normal(10_000)
state = bli.BliState(GaussianBelief(0.0, bli.steady_state_variance(cfg)))
y, err = 0.0, 0.0
for xk in x:
    state, _ = bli.update(bli.predict(state, cfg), GaussianBelief(xk, 1.0))
    y += 0.1 * (xk - y)
    err = max(err, abs(state.mean - y))
print(f"\nmax |Kalman mean - leaky integrator| over 1e4 samples: {err:.1e}")
