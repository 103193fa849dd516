"""Leapfrog solvers: the measurement map (forward) and dissipative time reversal.

Interior nodes advance with the standard second-order centered stencil

    u^{j+1} = 2 u^j - u^{j-1} + dt^2 c^2 (D_xx + D_yy) u^j.

Boundary nodes are not evolved by the stencil; after each interior update
they are filled from the boundary condition:

* forward (perfectly reflecting walls): the zero Neumann condition is
  discretized with the two-point stencil, which sets every boundary node to
  the value of its inward neighbor;

* backward (time reversal): on the measured part Gamma the energy-absorbing
  condition  dv/dnu - lambda v_t = -lambda g_t  is discretized with
  two-point one-sided stencils, giving the update

      v_b = [v_in + gamma (v_b' - g' + g)] / (1 + gamma),
      gamma = lambda dx / dt,

  where v_in is the inward neighbor at the new time level, v_b' and g' are
  the boundary value and the data at the previous time level, and g is the
  data at the new level.  Off Gamma, lambda = 0 reduces this to the Neumann
  fill.

The Neumann fill is exactly the fixed point of the absorbing update driven
by the solution's own trace, so the backward error u - v obeys the
homogeneous absorbing dynamics at the discrete level and its energy decays
monotonically.  The price is first-order accuracy at the walls.

Non-corner boundary nodes are updated first (their inward neighbors are
interior), then the four corners, each owned by one side with priority
bottom, right, top, left; a corner's inward neighbor is the freshly updated
boundary node adjacent to it on its own side.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    BoundarySpec,
    ConfigError,
    Grid2D,
    GridMismatchError,
    ScalarField,
    StabilityError,
    StatePair,
    boundary_count,
    boundary_indices,
    corner_positions,
    num_steps,
)


@dataclass
class BoundaryTrace:
    """Pressure samples at every boundary node for every time level.

    samples[j, b] is the value at time t_j = j*dt at boundary node b in the
    canonical enumeration.  Nodes outside Gamma are zeroed on construction
    when a gamma_mask is supplied (the mask is in-memory metadata and is not
    serialized with the trace).
    """

    grid: Grid2D
    dt: float
    samples: np.ndarray
    gamma_mask: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        nb = boundary_count(self.grid.n)
        if s.ndim != 2 or s.shape[1] != nb:
            raise GridMismatchError(
                f"trace must have {nb} columns for n = {self.grid.n}, got shape {s.shape}"
            )
        if not np.all(np.isfinite(s)):
            raise ValueError("trace contains non-finite values")
        if self.dt <= 0:
            raise ConfigError(f"trace time step must be positive, got {self.dt!r}")
        if self.gamma_mask is None:
            self.gamma_mask = np.ones(nb, dtype=bool)
        else:
            mask = np.asarray(self.gamma_mask, dtype=bool)
            if mask.shape != (nb,):
                raise GridMismatchError("gamma_mask length does not match the grid")
            s = s.copy()
            s[:, ~mask] = 0.0
            self.gamma_mask = mask
        self.samples = s

    @property
    def n_steps(self) -> int:
        return self.samples.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.samples.shape[0])


@dataclass
class SolveResult:
    """Forward solve output: boundary trace plus the terminal state."""

    trace: BoundaryTrace
    final_state: StatePair
    snapshots: list | None = None


@lru_cache(maxsize=None)
def _boundary_ops(n: int):
    """Flat index arrays for the two-pass boundary update on an n x n grid."""
    ks, ls = boundary_indices(n)
    nb = boundary_count(n)
    bflat = ks * n + ls
    inw_k = ks.copy()
    inw_l = ls.copy()
    sl = slice(0, n)                 # bottom: inward +y
    inw_l[sl] = 1
    sl = slice(n, 2 * n - 1)         # right: inward -x
    inw_k[sl] = n - 2
    sl = slice(2 * n - 1, 3 * n - 2)  # top: inward -y
    inw_l[sl] = n - 2
    sl = slice(3 * n - 2, nb)        # left: inward +x
    inw_k[sl] = 1
    inflat = inw_k * n + inw_l
    corners = np.array(corner_positions(n))
    noncorner = np.ones(nb, dtype=bool)
    noncorner[corners] = False
    for a in (bflat, inflat, corners, noncorner):
        a.setflags(write=False)
    return bflat, inflat, corners, noncorner


def _fill_neumann(u: np.ndarray, n: int) -> None:
    """Two-point Neumann fill: boundary nodes copy their inward neighbors."""
    bflat, inflat, corners, noncorner = _boundary_ops(n)
    flat = u.reshape(-1)
    flat[bflat[noncorner]] = flat[inflat[noncorner]]
    flat[bflat[corners]] = flat[inflat[corners]]


def _apply_absorbing(vnew: np.ndarray, vold: np.ndarray, g_new: np.ndarray,
                     g_old: np.ndarray, gamma: np.ndarray, n: int) -> None:
    """Write the absorbing-boundary values into vnew (interior already set).

    vold is the previously computed time level; g_old / g_new are the data
    rows at the old and new levels.  gamma = lambda*dx/dt per boundary node
    (zero off Gamma, where the update degenerates to the Neumann fill).
    """
    bflat, inflat, corners, noncorner = _boundary_ops(n)
    fnew = vnew.reshape(-1)
    fold = vold.reshape(-1)
    for sel in (noncorner, corners):
        b = bflat[sel]
        gam = gamma[sel]
        fnew[b] = (fnew[inflat[sel]]
                   + gam * (fold[b] - g_old[sel] + g_new[sel])) / (1.0 + gam)


def interior_step(prev: ScalarField, curr: ScalarField, c: ScalarField) -> ScalarField:
    """One leapfrog level from the two preceding ones, interior nodes only.

    Boundary nodes of the result are left at zero for the subsequent
    boundary fill.  Time-symmetric: stepping forward then backward from
    matched levels returns the original level.
    """
    if prev.grid != curr.grid or curr.grid != c.grid:
        raise GridMismatchError("fields live on different grids")
    grid = curr.grid
    r2 = (grid.dt / grid.dx) ** 2
    u = curr.values
    out = np.zeros_like(u)
    out[1:-1, 1:-1] = (
        2.0 * u[1:-1, 1:-1] - prev.values[1:-1, 1:-1]
        + r2 * c.values[1:-1, 1:-1] ** 2
        * (u[2:, 1:-1] + u[:-2, 1:-1] + u[1:-1, 2:] + u[1:-1, :-2] - 4.0 * u[1:-1, 1:-1])
    )
    return ScalarField(grid, out)


def dissipative_boundary_update(level_new: ScalarField, level_old: ScalarField,
                                g_new: np.ndarray, g_old: np.ndarray,
                                bspec: BoundarySpec) -> np.ndarray:
    """Boundary values of the new time level under the absorbing condition.

    level_new must already hold the interior update; level_old is the
    previous time level.  g_new / g_old are data rows in canonical boundary
    order at the new and previous levels.  gamma is formed with the grid's
    own dx and dt.  Returns the 4n-4 boundary values in canonical order.
    """
    grid = level_new.grid
    if grid != level_old.grid or grid != bspec.grid:
        raise GridMismatchError("fields and boundary spec live on different grids")
    nb = boundary_count(grid.n)
    g_new = np.asarray(g_new, dtype=float)
    g_old = np.asarray(g_old, dtype=float)
    if g_new.shape != (nb,) or g_old.shape != (nb,):
        raise GridMismatchError(f"data rows must have length {nb}")
    gamma = bspec.lam * grid.dx / grid.dt
    work = level_new.values.copy()
    _apply_absorbing(work, level_old.values, g_new, g_old, gamma, grid.n)
    ks, ls = boundary_indices(grid.n)
    return work[ks, ls]


def _check_setup(grid: Grid2D, c: ScalarField, bspec: BoundarySpec, dt: float) -> None:
    if c.grid != grid or bspec.grid != grid:
        raise GridMismatchError("grid, sound speed and boundary spec are inconsistent")
    if np.any(c.values <= 0):
        raise ValueError("sound speed must be strictly positive")
    limit = grid.dx / (np.sqrt(2.0) * float(c.values.max()))
    if dt > limit * (1.0 + 1e-12):
        raise StabilityError(
            f"dt = {dt:g} exceeds the CFL limit {limit:g} for this grid and sound speed"
        )


def forward_solve(s0: StatePair, c: ScalarField, bspec: BoundarySpec, T: float,
                  record_every: int = 0) -> SolveResult:
    """Solve the Neumann problem from initial state s0 and record the trace.

    The trace holds u at every boundary node for t_j = 0 .. T (zeroed off
    Gamma).  The terminal velocity is extracted with the one-sided
    second-order difference (3 u^J - 4 u^{J-1} + u^{J-2}) / (2 dt).  With
    record_every > 0, snapshots (j, state at t_j) with centered-difference
    velocities are collected every record_every steps.
    """
    grid = s0.grid
    dt = grid.dt
    _check_setup(grid, c, bspec, dt)
    steps = num_steps(T, dt)
    n = grid.n
    coef = (dt / grid.dx) ** 2 * c.values ** 2
    ks, ls = boundary_indices(n)

    cur = s0.first.values.copy()
    _fill_neumann(cur, n)
    nxt = np.empty_like(cur)
    nxt[1:-1, 1:-1] = (
        cur[1:-1, 1:-1] + dt * s0.second.values[1:-1, 1:-1]
        + 0.5 * coef[1:-1, 1:-1]
        * (cur[2:, 1:-1] + cur[:-2, 1:-1] + cur[1:-1, 2:] + cur[1:-1, :-2] - 4.0 * cur[1:-1, 1:-1])
    )
    _fill_neumann(nxt, n)

    rows = np.empty((steps + 1, boundary_count(n)))
    rows[0] = cur[ks, ls]
    rows[1] = nxt[ks, ls]
    prev, cur = cur, nxt
    snapshots: list | None = [] if record_every else None
    prev2 = None
    for j in range(1, steps):
        nxt = np.empty_like(cur)
        nxt[1:-1, 1:-1] = (
            2.0 * cur[1:-1, 1:-1] - prev[1:-1, 1:-1]
            + coef[1:-1, 1:-1]
            * (cur[2:, 1:-1] + cur[:-2, 1:-1] + cur[1:-1, 2:] + cur[1:-1, :-2] - 4.0 * cur[1:-1, 1:-1])
        )
        _fill_neumann(nxt, n)
        rows[j + 1] = nxt[ks, ls]
        if record_every and j % record_every == 0:
            vel = (nxt - prev) / (2.0 * dt)
            snapshots.append((j, StatePair(ScalarField(grid, cur.copy()),
                                           ScalarField(grid, vel))))
        prev2, prev, cur = prev, cur, nxt
    if prev2 is None:  # steps == 1 cannot happen (num_steps enforces >= 2)
        raise ConfigError("forward solve needs at least two time steps")
    rows *= bspec.gamma_mask[None, :]
    u_t = (3.0 * cur - 4.0 * prev + prev2) / (2.0 * dt)
    final = StatePair(ScalarField(grid, cur), ScalarField(grid, u_t))
    trace = BoundaryTrace(grid, dt, rows, gamma_mask=bspec.gamma_mask.copy())
    return SolveResult(trace=trace, final_state=final, snapshots=snapshots)


def dissipative_reverse_solve(g: BoundaryTrace, c: ScalarField, bspec: BoundarySpec,
                              terminal_state: StatePair | None = None,
                              record_every: int = 0,
                              snapshots: list | None = None) -> StatePair:
    """Integrate backward from t = T with the absorbing boundary condition.

    Terminal data default to (0, 0); the measured trace g drives the
    boundary on Gamma.  Returns (v(., 0), v_t(., 0)), the velocity from the
    one-sided difference (-3 v^0 + 4 v^1 - v^2) / (2 dt).

    A nonzero terminal_state runs the same absorbing dynamics from that
    state instead, which with g = 0 realizes the free decay of the error
    equation.  If ``snapshots`` is a list, (j, state at t_j) pairs with
    centered-difference velocities are appended every record_every steps.
    """
    grid = g.grid
    dt = g.dt
    _check_setup(grid, c, bspec, dt)
    steps = g.n_steps
    if steps < 2:
        raise ConfigError(f"trace must cover at least two time steps, got {steps}")
    n = grid.n
    coef = (dt / grid.dx) ** 2 * c.values ** 2
    gamma = bspec.lam * grid.dx / dt
    data = g.samples

    if terminal_state is None:
        cur = np.zeros((n, n))
        w1 = None
    else:
        if terminal_state.grid != grid:
            raise GridMismatchError("terminal state lives on a different grid")
        cur = terminal_state.first.values.copy()
        _fill_neumann(cur, n)
        w1 = terminal_state.second.values

    # second-order start: v(T - dt) = v(T) - dt v_t(T) + dt^2/2 c^2 lap v(T)
    nxt = np.empty_like(cur)
    nxt[1:-1, 1:-1] = (
        cur[1:-1, 1:-1]
        + 0.5 * coef[1:-1, 1:-1]
        * (cur[2:, 1:-1] + cur[:-2, 1:-1] + cur[1:-1, 2:] + cur[1:-1, :-2] - 4.0 * cur[1:-1, 1:-1])
    )
    if w1 is not None:
        nxt[1:-1, 1:-1] -= dt * w1[1:-1, 1:-1]
    _apply_absorbing(nxt, cur, data[steps - 1], data[steps], gamma, n)

    levels = {steps: cur, steps - 1: nxt}
    later, cur = cur, nxt
    for j in range(steps - 1, 0, -1):
        nxt = np.empty_like(cur)
        nxt[1:-1, 1:-1] = (
            2.0 * cur[1:-1, 1:-1] - later[1:-1, 1:-1]
            + coef[1:-1, 1:-1]
            * (cur[2:, 1:-1] + cur[:-2, 1:-1] + cur[1:-1, 2:] + cur[1:-1, :-2] - 4.0 * cur[1:-1, 1:-1])
        )
        _apply_absorbing(nxt, cur, data[j - 1], data[j], gamma, n)
        if snapshots is not None and record_every and j % record_every == 0:
            vel = (later - nxt) / (2.0 * dt)
            snapshots.append((j, StatePair(ScalarField(grid, cur.copy()),
                                           ScalarField(grid, vel))))
        if j - 1 <= 2:
            levels[j - 1] = nxt
        later, cur = cur, nxt

    v0, v1, v2 = levels[0], levels[1], levels[2]
    v_t = (-3.0 * v0 + 4.0 * v1 - v2) / (2.0 * dt)
    return StatePair(ScalarField(grid, v0), ScalarField(grid, v_t))
