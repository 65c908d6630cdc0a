"""Build a tiny paired corpus on disk and score it with the command line tool."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from warpsem.synthetic import tone_in_noise

root = Path(tempfile.mkdtemp())
(root / "noisy").mkdir()
(root / "clean").mkdir()
manifest = {}
for k, snr in enumerate((2.5, 7.5, 12.5)):
    clean, noise = tone_in_noise(700.0, duration=2.0, snr_db=snr, seed=k)
    peak = np.max(np.abs(clean + noise))
    name = f"utt{k}.wav"
    wavfile.write(root / "clean" / name, 16000, (clean / peak).astype(np.float32))
    wavfile.write(root / "noisy" / name, 16000, ((clean + noise) / peak).astype(np.float32))
    manifest[name] = {"noise_type": "white", "snr_db": snr}
(root / "manifest.json").write_text(json.dumps(manifest))

cmd = [sys.executable, "-m", "warpsem", "evaluate", str(root / "noisy"), str(root / "clean"),
       "--manifest", str(root / "manifest.json"), "--report", str(root / "report.json")]
print(subprocess.run(cmd, capture_output=True, text=True).stdout)

cmd = [sys.executable, "-m", "warpsem", "enhance", str(root / "noisy" / "utt0.wav"),
       str(root / "enhanced.wav"), "--trace", str(root / "trace.csv")]
subprocess.run(cmd, check=True)
print((root / "trace.csv").read_text().splitlines()[:3])
print(f"files in {root}")
