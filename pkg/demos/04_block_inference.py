"""One stream of SEM blocks: trackers, VAD, gains and the free energy."""

import numpy as np

from warpsem import sem
from warpsem.engine import default_sem_config

cfg = default_sem_config()
rng = np.random.default_rng(0)
J = 32

# Noise alone for 500 blocks (1 s), then a strong tone centred on band 4.
t = np.arange(J * 700)
x = 0.1 * rng.standard_normal(t.shape[0])
x[500 * J:] += 10.0 * np.cos(2 * np.pi * 4 * t[500 * J:] / J)

band, gains, vad, energy = None, [], [], []
for k in range(700):
    # unwarped snapshot: the last J samples, newest first
    z = x[max(0, J * (k + 1) - J):J * (k + 1)][::-1]
    band, weights, diag = sem.process_block(band, z, cfg)
    gains.append(diag.gain)
    vad.append(diag.vad_p)
    energy.append(diag.total_free_energy)
gains, vad, energy = map(np.array, (gains, vad, energy))

print("mean gain, band 4 vs band 12")
for a, b in ((400, 500), (500, 510), (510, 550), (550, 700)):
    print(f"  blocks {a:3d}-{b:3d}: {gains[a:b, 4].mean():.3f}  {gains[a:b, 12].mean():.3f}")
print(f"VAD probability in band 4 before/after onset: {vad[400:500, 4].mean():.3f} / {vad[550:, 4].mean():.3f}")

# Within every block, each sweep lowers the free energy.
steps = np.diff(energy, axis=1)
print(f"\nlargest free-energy change per sweep over all blocks: {steps.max():+.2e}")
print("free energy of the last block per sweep:", np.round(energy[-1], 3))
