"""The quadratic lower bound on the logistic function and its messages."""

import numpy as np
from scipy.special import expit

from warpsem.beliefs import BernoulliBelief, GaussianBelief
from warpsem.logit_node import (
    backward_message_x,
    forward_message_y,
    jj_bound,
    lambda_of_zeta,
    update_zeta,
)

x = np.linspace(-6, 6, 13)
for zeta in (0.5, 2.0):
    # adding 0.0 turns a rounded -0.0 into 0.0
    gap = np.round(expit(x) - jj_bound(x, zeta), 3) + 0.0
    print(f"zeta={zeta}: sigma(x) - bound  " + " ".join(f"{g:.3f}" for g in gap))
print("the gap is zero at x = +/- zeta and positive elsewhere\n")

print(f"lambda(0) = {lambda_of_zeta(0.0)}, lambda(2) = {lambda_of_zeta(2.0):.7f}")

# A belief about the log-odds sends a Bernoulli forward...
xi = GaussianBelief(1.2, 0.5)
print(f"forward: Ber({forward_message_y(xi).p:.4f})")

# ...and a Bernoulli observation sends a Gaussian back, evaluated at the optimal zeta.
zeta = update_zeta(xi)
for p in (0.0, 0.5, 0.9, 1.0):
    m = backward_message_x(BernoulliBelief(p), zeta)
    print(f"backward for E[y]={p:3.1f}:  N({m.mean:+.3f}, {m.variance:.3f})")
