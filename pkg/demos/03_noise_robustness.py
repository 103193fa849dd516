"""One-shot reconstruction from data with 50% white noise.

Gaussian noise is drawn per (time, node) sample and rescaled so that its
relative L2 size is exactly 0.5, half the signal.  The backward absorbing
solve averages the data over many time steps, so the reconstruction error
comes out far below the data noise level and all six inclusions stay
clearly visible.
"""

from pathlib import Path

import numpy as np

import pacavity as pv
from pacavity import io as pio

N = 257
T = 5.0
LEVEL = 0.5
SEED = 7
OUT = Path(__file__).parent / "out" / "03"
OUT.mkdir(parents=True, exist_ok=True)

grid = pv.Grid2D(N)
speed = pv.ScalarField.constant(grid, 1.0)
phantom = pv.paper_six_phantom(grid)
full = pv.BoundarySpec.full(grid)
clean = pv.synthesize_data(phantom, full, T, grid.dt)

for name, bspec in (("full", full), ("left_bottom", pv.BoundarySpec.left_bottom(grid))):
    masked = pv.BoundaryTrace(grid, clean.dt, clean.samples * bspec.gamma_mask[None, :],
                              gamma_mask=bspec.gamma_mask)
    noisy = pv.add_noise(masked, LEVEL, SEED)
    achieved = (np.linalg.norm(noisy.samples - masked.samples)
                / np.linalg.norm(masked.samples))
    cfg = pv.ReconConfig(T=T, iterations=1, c=speed, bspec=bspec)
    estimate = pv.initial_approximation(noisy, cfg).first
    err = pv.relative_l2(estimate, phantom)
    pio.write_field(OUT / f"recon_noisy_{name}.pgm", estimate)
    print(f"{name:12s}: data noise {achieved * 100:.1f}% -> "
          f"reconstruction error {err * 100:5.2f}%")
