"""Position-space probability densities and their export.

A separable state (first register (x) spinor pair) is pushed to the
Cartesian product basis through the anti-diagonal expansions of the
circular modes, then evaluated on a rectangular grid as two matrix
products per spinor component.  Row blocks may be evaluated in parallel
(capped by LB_THREADS; 0 or unset means auto); results are written slot
by slot so the output does not depend on the parallelism.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .errors import ContractError
from .fock import circular_antidiagonals, oscillator_table
from .params import PhysicalParams
from .spinor import SpinorState

DEFAULT_GRID = "-8:8:257,-8:8:257"


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    nx: int
    y_min: float
    y_max: float
    ny: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ContractError("grid bounds must be increasing")
        if self.nx < 2 or self.ny < 2:
            raise ContractError("grid needs at least 2 points per axis")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    @staticmethod
    def parse(text: str) -> "GridSpec":
        """Parse 'xmin:xmax:nx,ymin:ymax:ny'."""
        try:
            xpart, ypart = text.split(",")
            x_min, x_max, nx = xpart.split(":")
            y_min, y_max, ny = ypart.split(":")
            return GridSpec(float(x_min), float(x_max), int(nx),
                            float(y_min), float(y_max), int(ny))
        except (ValueError, TypeError) as err:
            raise ContractError(f"bad grid spec {text!r}: {err}") from None


@dataclass
class DensityField:
    """Total and per-component densities on a rectangular grid; total is
    upper + lower pointwise by construction."""

    grid: GridSpec
    total: np.ndarray  # shape (nx, ny)
    upper: np.ndarray
    lower: np.ndarray
    meta: dict = field(default_factory=dict)

    def integral(self) -> float:
        return float(simpson(simpson(self.total, x=self.grid.y, axis=1), x=self.grid.x))


def thread_count() -> int:
    """Worker count from LB_THREADS (0 or unset = auto)."""
    raw = os.environ.get("LB_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        return min(8, os.cpu_count() or 1)
    return n


def _component_cartesian(fr: np.ndarray, comp: np.ndarray, table) -> np.ndarray:
    """Product-basis coefficient matrix C[j,k] of sum fr[n1] comp[n2]
    e_{n1,n2}; each mode contributes one anti-diagonal."""
    j_top = (fr.size - 1) + (comp.size - 1)
    out = np.zeros((j_top + 1, j_top + 1), dtype=complex)
    scale = np.abs(fr).max() * np.abs(comp).max()
    if scale == 0.0:
        return out
    for n1, w1 in enumerate(fr):
        if abs(w1) == 0.0:
            continue
        for n2, w2 in enumerate(comp):
            w = w1 * w2
            if abs(w) < 1e-18 * scale:
                continue
            diag = table[n1][n2]
            t = n1 + n2
            j = np.arange(t + 1)
            out[j, t - j] += w * diag
    return out


def _grid_values(cart: np.ndarray, px: np.ndarray, py: np.ndarray, workers: int) -> np.ndarray:
    """psi(x_i, y_j) = (px^T C py)[i, j], row blocks in parallel."""
    left = px.T @ cart  # (nx, J+1)
    nx = left.shape[0]
    out = np.empty((nx, py.shape[1]), dtype=complex)
    if workers <= 1 or nx < 4 * workers:
        np.matmul(left, py, out=out)
        return out
    chunk = (nx + workers - 1) // workers
    def run(i0):
        i1 = min(i0 + chunk, nx)
        out[i0:i1] = left[i0:i1] @ py
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(run, range(0, nx, chunk)))
    return out


def density(state: SpinorState, grid: GridSpec, params: PhysicalParams | None = None,
            extra_meta: dict | None = None) -> DensityField:
    """Evaluate |psi|^2 (total and per component) on the grid.

    The metadata echoes the state's construction record, the parameters
    (eps0 included) and the mass captured by the grid; a warning flag is
    set when less than 99.9% of the coefficient-space mass is captured.
    """
    if params is None:
        params = PhysicalParams()
    nmax1 = state.first_register.size - 1
    nmax2 = state.upper.size - 1
    table = circular_antidiagonals(nmax1, nmax2)
    j_top = nmax1 + nmax2
    px = oscillator_table(j_top, grid.x)
    py = oscillator_table(j_top, grid.y)
    workers = thread_count()

    fields = {}
    for name, comp in (("upper", state.upper), ("lower", state.lower)):
        cart = _component_cartesian(state.first_register, comp, table)
        vals = _grid_values(cart, px, py, workers)
        fields[name] = np.abs(vals) ** 2
    total = fields["upper"] + fields["lower"]

    norm2 = state.norm2()
    fld = DensityField(grid, total, fields["upper"], fields["lower"])
    captured = fld.integral()
    meta = {
        "state": _jsonable(state.meta),
        "params": {"vf": params.vf, "xi": params.xi, "V": params.V, "eps0": params.eps0},
        "cutoff": {"nmax1": nmax1, "nmax2": nmax2},
        "grid": {
            "x_min": grid.x_min, "x_max": grid.x_max, "nx": grid.nx,
            "y_min": grid.y_min, "y_max": grid.y_max, "ny": grid.ny,
        },
        "coefficient_norm2": norm2,
        "captured_mass": captured,
        "mass_warning": bool(captured < 0.999 * norm2),
    }
    if extra_meta:
        meta.update(_jsonable(extra_meta))
    fld.meta = meta
    return fld


@dataclass(frozen=True)
class GainLossReport:
    mass_upper: float
    mass_lower: float
    ratio: float
    per_level_alpha_table: list


def gain_loss(state: SpinorState, params: PhysicalParams | None = None) -> GainLossReport:
    """Component masses from coefficient space (no grid), their ratio, and
    the broken-region |alpha| table for context when V is large."""
    from .pt import gain_loss_asymptotics

    up, lo = state.component_masses()
    table = []
    if params is not None and params.V > 1.0:
        top = min(int(math.ceil(params.V ** 2)) - 1, state.upper.size - 1)
        for p in range(1, top + 1):
            if p < params.V ** 2:
                ap, am = gain_loss_asymptotics(p, params.V)
                table.append({"p": p, "abs_alpha_plus": ap, "abs_alpha_minus": am})
    ratio = up / lo if lo > 0 else math.inf
    return GainLossReport(up, lo, ratio, table)


def _fmt(value: float) -> str:
    return "%.17g" % value


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def export(fld: DensityField, fmt: str, path: str) -> None:
    """Write the field: CSV (header x,y,total,upper,lower, row-major over
    x then y, 17 significant digits, metadata in a .meta.json sidecar) or
    a single JSON document.  Byte-stable for identical inputs."""
    if fmt == "csv":
        lines = ["x,y,total,upper,lower"]
        x, y = fld.grid.x, fld.grid.y
        for i in range(fld.grid.nx):
            for j in range(fld.grid.ny):
                lines.append(",".join([
                    _fmt(x[i]), _fmt(y[j]),
                    _fmt(fld.total[i, j]), _fmt(fld.upper[i, j]), _fmt(fld.lower[i, j]),
                ]))
        _write_text(path, "\n".join(lines) + "\n")
        _write_text(_sidecar_path(path), json.dumps(fld.meta, indent=2, sort_keys=True) + "\n")
    elif fmt == "json":
        doc = {
            "meta": fld.meta,
            "grid": {"x": fld.grid.x.tolist(), "y": fld.grid.y.tolist()},
            "total": fld.total.tolist(),
            "upper": fld.upper.tolist(),
            "lower": fld.lower.tolist(),
        }
        _write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        raise ContractError(f"unknown export format {fmt!r}")


def _sidecar_path(path: str) -> str:
    return path + ".meta.json"


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
