"""Smooth test phantoms and measurement noise.

The standard phantom is a sum of six radially symmetric bumps with compact
support strictly inside the square.  The bump kernel

    b(r) = a * (1 - (r/R)^2)^2   for r <= R,   0 otherwise

is C1 across the support edge (value and slope both vanish at r = R), so
the phantom is smooth enough that discretization error does not mask the
behavior of the reconstruction itself.  Its radial slope peaks at
8a / (3 sqrt(3) R).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConfigError, Grid2D, ScalarField
from .fdtd import BoundaryTrace


@dataclass(frozen=True)
class BumpSpec:
    """One radial bump: center inside (-1,1)^2, support radius, peak value."""

    center: tuple[float, float]
    radius: float
    amplitude: float

    def __post_init__(self):
        cx, cy = self.center
        if self.radius <= 0:
            raise ConfigError(f"bump radius must be positive, got {self.radius!r}")
        if max(abs(cx), abs(cy)) + self.radius >= 1.0:
            raise ConfigError(
                f"bump at ({cx}, {cy}) with radius {self.radius} "
                "does not fit strictly inside the domain"
            )


#: Six well-separated inclusions used by the demos and the verification runs.
PAPER_SIX = (
    BumpSpec((-0.45, 0.35), 0.22, 1.0),
    BumpSpec((0.1, 0.5), 0.22, 0.8),
    BumpSpec((0.5, 0.3), 0.22, 0.9),
    BumpSpec((-0.4, -0.25), 0.22, 0.85),
    BumpSpec((0.05, -0.4), 0.22, 1.0),
    BumpSpec((0.45, -0.35), 0.22, 0.75),
)


def radial_bump(r, radius: float, amplitude: float):
    """Bump kernel a*(1-(r/R)^2)^2 for r <= R, else 0 (vectorized in r)."""
    if radius <= 0:
        raise ConfigError(f"bump radius must be positive, got {radius!r}")
    rho2 = np.square(np.asarray(r, dtype=float) / radius)
    return np.where(rho2 <= 1.0, amplitude * (1.0 - rho2) ** 2, 0.0)


def render_phantom(specs, grid: Grid2D) -> ScalarField:
    """Pointwise sum of bumps sampled at the grid nodes."""
    x = grid.coords()
    X, Y = np.meshgrid(x, x, indexing="ij")
    values = np.zeros((grid.n, grid.n))
    for i, spec in enumerate(specs):
        if not isinstance(spec, BumpSpec):
            try:
                spec = BumpSpec(*spec)
            except ConfigError as exc:
                raise ConfigError(f"bump {i}: {exc}") from exc
        cx, cy = spec.center
        r = np.hypot(X - cx, Y - cy)
        values += radial_bump(r, spec.radius, spec.amplitude)
    return ScalarField(grid, values)


def paper_six_phantom(grid: Grid2D) -> ScalarField:
    """The default six-bump phantom on the given grid."""
    return render_phantom(PAPER_SIX, grid)


def add_noise(g: BoundaryTrace, level: float, seed: int) -> BoundaryTrace:
    """Add white Gaussian noise of prescribed relative L2 size to a trace.

    A seeded standard-normal draw per (time, Gamma-node) sample is rescaled
    globally so that ||noise|| / ||g|| equals ``level`` exactly, then added
    on Gamma nodes only; nodes outside Gamma stay zero.
    """
    if level < 0:
        raise ConfigError(f"noise level must be nonnegative, got {level!r}")
    if level == 0:
        return BoundaryTrace(g.grid, g.dt, g.samples.copy(),
                             gamma_mask=g.gamma_mask.copy())
    signal = np.linalg.norm(g.samples)
    if signal == 0.0:
        raise ConfigError("cannot scale noise relative to an all-zero trace")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(g.samples.shape) * g.gamma_mask[None, :]
    noise *= level * signal / np.linalg.norm(noise)
    return BoundaryTrace(g.grid, g.dt, g.samples + noise,
                         gamma_mask=g.gamma_mask.copy())
