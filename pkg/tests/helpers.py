"""Shared utilities for the test suite."""

import numpy as np

from pacavity import CosineCoeffs, Grid2D, ScalarField, StatePair, dct2_inverse


def smooth_random_field(grid: Grid2D, rng, kmax: int = 9, scale: float = 1.0) -> ScalarField:
    """Seeded random field built from low-order cosine modes.

    Keeps property tests reproducible and free of grid-scale noise that
    would pollute finite-difference gradients.
    """
    kmax = min(kmax, grid.n - 1)
    coeffs = np.zeros((grid.n, grid.n))
    coeffs[: kmax + 1, : kmax + 1] = scale * rng.standard_normal((kmax + 1, kmax + 1))
    return dct2_inverse(CosineCoeffs(grid, coeffs))


def smooth_random_state(grid: Grid2D, rng, kmax: int = 9) -> StatePair:
    return StatePair(smooth_random_field(grid, rng, kmax),
                     smooth_random_field(grid, rng, kmax))


def eigenfield(grid: Grid2D, k: int, l: int) -> ScalarField:
    """Sampled product cosine mode cos(k*pi*(x+1)/2) cos(l*pi*(y+1)/2)."""
    xb = 0.5 * np.pi * (grid.coords() + 1.0)
    return ScalarField(grid, np.outer(np.cos(k * xb), np.cos(l * xb)))


def plain_rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))
