"""Spectrally exact forward propagation in the cosine eigenbasis.

For unit sound speed, the Neumann Laplacian on the square [-1,1]^2 has
eigenfunctions

    phi_{k,l}(x, y) = cos(k*pi*(x+1)/2) * cos(l*pi*(y+1)/2)

with angular frequencies lam_{k,l} = (pi/2) * sqrt(k^2 + l^2).  On the
closed n x n grid the sampled eigenfunctions for k, l = 0 .. n-1 form an
orthogonal basis under the trapezoid weights, and the type-I discrete
cosine transform converts between node values and mode coefficients
exactly.  The solution of the wave equation with initial data (f, 0) is

    u(x, y, t) = sum c_{k,l} phi_{k,l}(x, y) cos(lam_{k,l} t),

which this module evaluates directly.  It is used to synthesize boundary
measurements independently of the finite-difference solvers, so inversion
is never tested against data produced by its own discretization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from .core import (
    BoundarySpec,
    ConfigError,
    Grid2D,
    GridMismatchError,
    ScalarField,
    boundary_count,
    boundary_indices,
    num_steps,
)
from .fdtd import BoundaryTrace


@dataclass
class CosineCoeffs:
    """Cosine-mode coefficients c_{k,l} of a field on its grid."""

    grid: Grid2D
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.grid.n, self.grid.n):
            raise GridMismatchError(
                f"coefficient shape {c.shape} does not match grid {self.grid.n}"
            )
        self.coeffs = c


def mode_frequencies(grid: Grid2D) -> np.ndarray:
    """Angular frequencies lam_{k,l} = (pi/2) sqrt(k^2 + l^2)."""
    k = np.arange(grid.n)
    return 0.5 * np.pi * np.hypot(k[:, None], k[None, :])


def _analysis_axis0(values: np.ndarray) -> np.ndarray:
    """DCT-I analysis along axis 0: values -> coefficients."""
    n = values.shape[0]
    out = dct(values, type=1, axis=0)
    out[0] *= 0.5
    out[-1] *= 0.5
    out /= (n - 1)
    return out


def _synthesis_axis0(coeffs: np.ndarray) -> np.ndarray:
    """DCT-I synthesis along axis 0: coefficients -> values."""
    y = coeffs.copy()
    y[1:-1] *= 0.5
    return dct(y, type=1, axis=0)


def dct2_forward(f: ScalarField) -> CosineCoeffs:
    """Expand a field in the sampled cosine eigenbasis (exact on the grid)."""
    a = _analysis_axis0(f.values)
    a = _analysis_axis0(a.T).T
    return CosineCoeffs(f.grid, a)


def dct2_inverse(c: CosineCoeffs) -> ScalarField:
    """Evaluate a cosine series at all grid nodes (inverse of dct2_forward)."""
    v = _synthesis_axis0(c.coeffs)
    v = _synthesis_axis0(v.T).T
    return ScalarField(c.grid, v)


def _require_unit_speed(c_sound) -> None:
    if c_sound is None:
        return
    if isinstance(c_sound, ScalarField):
        if np.allclose(c_sound.values, 1.0, rtol=0.0, atol=1e-14):
            return
    raise ConfigError(
        "the cosine series solution is only valid for unit sound speed; "
        "use the finite-difference solver for variable c(x)"
    )


def spectral_propagate(c: CosineCoeffs, t: float, c_sound: ScalarField | None = None) -> ScalarField:
    """Wave field u(., t) for initial data (f, 0), f = dct2_inverse(c)."""
    _require_unit_speed(c_sound)
    if t < 0:
        raise ConfigError("propagation time must be nonnegative")
    lam = mode_frequencies(c.grid)
    return dct2_inverse(CosineCoeffs(c.grid, c.coeffs * np.cos(lam * t)))


def spectral_velocity(c: CosineCoeffs, t: float, c_sound: ScalarField | None = None) -> ScalarField:
    """Time derivative u_t(., t) by term-wise differentiation of the series."""
    _require_unit_speed(c_sound)
    if t < 0:
        raise ConfigError("propagation time must be nonnegative")
    lam = mode_frequencies(c.grid)
    return dct2_inverse(CosineCoeffs(c.grid, -c.coeffs * lam * np.sin(lam * t)))


def spectral_energy(c: CosineCoeffs) -> float:
    """Conserved energy of the series solution, summed mode-wise.

    Modes are orthogonal with squared norms prod(2 for index 0 or n-1 else 1);
    the energy of initial data (f, 0) is sum c^2 lam^2 * weight, and stays
    constant in time by cos^2 + sin^2 = 1.
    """
    n = c.grid.n
    w1 = np.ones(n)
    w1[0] = 2.0
    w1[-1] = 2.0
    W = np.outer(w1, w1)
    lam = mode_frequencies(c.grid)
    return float(np.sum(W * (c.coeffs * lam) ** 2))


def synthesize_data(f: ScalarField, bspec: BoundarySpec, T: float, dt: float) -> BoundaryTrace:
    """Boundary pressure trace of the series solution with initial data (f, 0).

    Samples u at every boundary node at times t_j = j*dt, j = 0 .. T/dt;
    nodes outside Gamma carry zeros.  T must be an integer multiple of dt.
    """
    if f.grid != bspec.grid:
        raise GridMismatchError("field and boundary spec live on different grids")
    steps = num_steps(T, dt)
    grid = f.grid
    c = dct2_forward(f)
    lam = mode_frequencies(grid)
    ks, ls = boundary_indices(grid.n)
    rows = np.empty((steps + 1, boundary_count(grid.n)))
    for j in range(steps + 1):
        u = _synthesis_axis0(_synthesis_axis0(c.coeffs * np.cos(lam * (j * dt))).T).T
        rows[j] = u[ks, ls]
    rows *= bspec.gamma_mask[None, :]
    return BoundaryTrace(grid, dt, rows, gamma_mask=bspec.gamma_mask.copy())
