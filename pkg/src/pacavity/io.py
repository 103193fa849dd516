"""File formats and run configuration.

Fields and traces are stored as plain-text CSV with full shortest
round-trip decimals, so writing and re-reading reproduces every double
bit-exactly.  Fields can additionally be written as 16-bit binary
portable graymaps (PGM) for viewing; the affine value mapping is recorded
in a comment so the image is deterministic but not meant to be re-read.

Run configuration is a flat ``key = value`` text file with ``#`` comments.
Unknown keys are rejected rather than ignored, every key has a documented
default, and all values are range-checked with the offending key named in
the error message.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .core import BoundarySpec, ConfigError, Grid2D, ScalarField, boundary_count
from .fdtd import BoundaryTrace
from .phantom import PAPER_SIX, BumpSpec, render_phantom


class ParseError(ValueError):
    """A file could not be parsed; the message carries the line number."""


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

def write_field_csv(path, f: ScalarField) -> None:
    """Row-major CSV of raw values, full double precision."""
    lines = [f"# pacavity field v1", f"# n = {f.grid.n}"]
    for row in f.values:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_field_csv(path) -> ScalarField:
    """Reload a field CSV; bit-identical to what was written."""
    path = Path(path)
    rows = []
    n = None
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = re.match(r"#\s*n\s*=\s*(\d+)$", line)
            if m:
                n = int(m.group(1))
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
        if n is not None and len(rows[-1]) != n:
            raise ParseError(
                f"{path}:{lineno}: expected {n} values per row, got {len(rows[-1])}"
            )
    if n is None:
        raise ParseError(f"{path}: missing '# n = ...' header")
    if len(rows) != n:
        raise ParseError(f"{path}: expected {n} data rows, got {len(rows)}")
    return ScalarField(Grid2D(n), np.array(rows))


def write_field_pgm(path, f: ScalarField) -> None:
    """16-bit binary graymap for viewing; top image row is y = +1."""
    v = f.values
    lo, hi = float(v.min()), float(v.max())
    if hi > lo:
        pix = np.round((v - lo) / (hi - lo) * 65535.0).astype(">u2")
    else:
        pix = np.zeros_like(v, dtype=">u2")
    img = pix.T[::-1, :]  # rows run from y = +1 down to y = -1
    header = (f"P5\n# pacavity field v1 min={_fmt(lo)} max={_fmt(hi)}\n"
              f"{f.grid.n} {f.grid.n}\n65535\n")
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(img.tobytes())


def write_field(path, f: ScalarField) -> None:
    """Dispatch on extension: .csv for exact storage, .pgm for viewing."""
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        write_field_csv(path, f)
    elif suffix == ".pgm":
        write_field_pgm(path, f)
    else:
        raise ConfigError(f"unsupported field format {suffix!r} (use .csv or .pgm)")


def read_field(path) -> ScalarField:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return read_field_csv(path)
    raise ConfigError(f"cannot read field format {suffix!r}; only .csv reloads exactly")


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------

def write_trace(path, g: BoundaryTrace) -> None:
    """CSV with header row t,node_0,...,node_{4n-5}; one row per time level."""
    nb = boundary_count(g.grid.n)
    lines = ["# pacavity trace v1"]
    lines.append(",".join(["t"] + [f"node_{b}" for b in range(nb)]))
    for j, row in enumerate(g.samples):
        lines.append(",".join([_fmt(j * g.dt)] + [_fmt(v) for v in row]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace(path) -> BoundaryTrace:
    """Reload a trace CSV; sample values are bit-identical.

    The time step is recovered from the time column; a trace with fewer
    than two rows gets the default step of its grid.  The Gamma mask is not
    stored, so the loaded trace treats every boundary node as measured.
    """
    path = Path(path)
    header = None
    rows = []
    times = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
            if header[0] != "t" or len(header) < 2 or header[1] != "node_0":
                raise ParseError(f"{path}:{lineno}: expected header 't,node_0,...'")
            continue
        try:
            vals = [float(tok) for tok in line.split(",")]
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
        if len(vals) != len(header):
            raise ParseError(
                f"{path}:{lineno}: expected {len(header)} columns, got {len(vals)}"
            )
        times.append(vals[0])
        rows.append(vals[1:])
    if header is None:
        raise ParseError(f"{path}: missing header row")
    nb = len(header) - 1
    if nb % 4 != 0:
        raise ParseError(f"{path}: {nb} node columns is not 4n-4 for any grid size")
    n = nb // 4 + 1
    if boundary_count(n) != nb:
        raise ParseError(f"{path}: {nb} node columns is not 4n-4 for any grid size")
    grid = Grid2D(n)
    dt = times[1] - times[0] if len(times) >= 2 else grid.dt
    samples = np.array(rows) if rows else np.zeros((0, nb))
    return BoundaryTrace(grid, dt, samples)


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    """Validated experiment description; defaults reproduce the T=5 full-data run."""

    n: int = 257
    dt_factor: float = 0.5
    T: float = 5.0
    gamma: object = "full"          # "full" | "left_bottom" | list of node indices
    lambda_value: float = 1.0
    taper: float = 0.0
    phantom: str = "paper-six"
    bumps: tuple = None             # explicit BumpSpec list, overrides the preset
    noise: float = 0.0
    seed: int = 0
    iterations: int = 1
    subspace: str = "H1"
    out: str = "out"
    snap_time: bool = False

    def make_grid(self) -> Grid2D:
        grid = Grid2D(self.n)
        return Grid2D(self.n, self.dt_factor * grid.dx)

    def make_bspec(self, grid: Grid2D) -> BoundarySpec:
        if self.gamma == "full":
            if self.taper > 0:
                raise ConfigError("taper has no effect on the full boundary")
            return BoundarySpec.full(grid, self.lambda_value)
        if self.gamma == "left_bottom":
            return BoundarySpec.left_bottom(grid, self.lambda_value, self.taper)
        return BoundarySpec.from_node_list(grid, self.gamma, self.lambda_value, self.taper)

    def make_phantom(self, grid: Grid2D) -> ScalarField:
        specs = self.bumps if self.bumps is not None else PAPER_SIX
        return render_phantom(specs, grid)

    def resolve_T(self, dt: float) -> float:
        """Snap T to the time grid when snap_time is set, else require an
        exact multiple of dt."""
        from .core import num_steps, snap_duration
        if self.snap_time:
            return snap_duration(self.T, dt)
        num_steps(self.T, dt)
        return self.T


_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _parse_int(key, text, lo=None, hi=None):
    try:
        val = int(text)
    except ValueError:
        raise ConfigError(f"key '{key}': expected an integer, got {text!r}") from None
    if lo is not None and val < lo or hi is not None and val > hi:
        raise ConfigError(f"key '{key}': value {val} out of range")
    return val


def _parse_float(key, text, lo=None, lo_strict=None, hi=None):
    try:
        val = float(text)
    except ValueError:
        raise ConfigError(f"key '{key}': expected a number, got {text!r}") from None
    if not np.isfinite(val):
        raise ConfigError(f"key '{key}': value must be finite")
    if lo is not None and val < lo:
        raise ConfigError(f"key '{key}': value {val} out of range")
    if lo_strict is not None and val <= lo_strict:
        raise ConfigError(f"key '{key}': value {val} out of range")
    if hi is not None and val > hi:
        raise ConfigError(f"key '{key}': value {val} out of range")
    return val


def _parse_gamma(text):
    if text in ("full", "left_bottom"):
        return text
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(
            f"key 'gamma': expected 'full', 'left_bottom' or a comma-separated "
            f"node list, got {text!r}"
        ) from None


def _parse_bumps(text):
    specs = []
    for i, chunk in enumerate(part for part in text.split(";") if part.strip()):
        toks = chunk.split(",")
        if len(toks) != 4:
            raise ConfigError(
                f"key 'bumps': bump {i} must be 'cx,cy,radius,amplitude', got {chunk.strip()!r}"
            )
        try:
            cx, cy, r, a = (float(t) for t in toks)
        except ValueError:
            raise ConfigError(f"key 'bumps': bump {i} has a non-numeric entry") from None
        try:
            specs.append(BumpSpec((cx, cy), r, a))
        except ConfigError as exc:
            raise ConfigError(f"key 'bumps': bump {i}: {exc}") from None
    if not specs:
        raise ConfigError("key 'bumps': no bumps given")
    return tuple(specs)


def apply_config_entry(cfg: RunConfig, key: str, text: str) -> None:
    """Set one key = value pair on a RunConfig, validating both."""
    if key == "n":
        cfg.n = _parse_int(key, text, lo=4)
    elif key == "dt_factor":
        cfg.dt_factor = _parse_float(key, text, lo_strict=0.0, hi=1.0 / np.sqrt(2.0) + 1e-12)
    elif key == "T":
        cfg.T = _parse_float(key, text, lo_strict=0.0)
    elif key == "gamma":
        cfg.gamma = _parse_gamma(text)
    elif key == "lambda":
        cfg.lambda_value = _parse_float(key, text, lo_strict=0.0)
    elif key == "taper":
        cfg.taper = _parse_float(key, text, lo=0.0)
    elif key == "phantom":
        if text != "paper-six":
            raise ConfigError(f"key 'phantom': unknown preset {text!r} (only 'paper-six')")
        cfg.phantom = text
    elif key == "bumps":
        cfg.bumps = _parse_bumps(text)
    elif key == "noise":
        cfg.noise = _parse_float(key, text, lo=0.0)
    elif key == "seed":
        cfg.seed = _parse_int(key, text)
    elif key == "iterations":
        cfg.iterations = _parse_int(key, text, lo=0)
    elif key == "subspace":
        if text.upper() not in ("H0", "H1"):
            raise ConfigError(f"key 'subspace': expected H0 or H1, got {text!r}")
        cfg.subspace = text.upper()
    elif key == "out":
        cfg.out = text
    elif key == "snap_time":
        if text.lower() not in _BOOL:
            raise ConfigError(f"key 'snap_time': expected true or false, got {text!r}")
        cfg.snap_time = _BOOL[text.lower()]
    else:
        raise ConfigError(f"unknown key {key!r}")


def parse_config(path) -> RunConfig:
    """Parse a flat key = value file; unknown keys are an error."""
    cfg = RunConfig()
    path = Path(path)
    seen = set()
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, text = (part.strip() for part in line.split("=", 1))
        if key in seen:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        seen.add(key)
        try:
            apply_config_entry(cfg, key, text)
        except ConfigError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return cfg
