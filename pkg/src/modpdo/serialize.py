"""JSON forms for sampled functions and symbols.

Functions serialize as ``{"grid": {"n", "L", "N"}, "k": k, "values": ...}``
with values as nested arrays of [re, im] pairs; phase-space symbols add a
``"space": "phase"`` marker and their xi-grid.  The forms are
self-describing and binary-free, for fixtures and golden files.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .grids import GridSpec, ModuleFunction, SampledSymbol

__all__ = [
    "function_to_dict",
    "function_from_dict",
    "symbol_to_dict",
    "symbol_from_dict",
]


def _grid_to_dict(grid: GridSpec) -> dict:
    return {"n": grid.n, "L": grid.half_width, "N": grid.points}


def _grid_from_dict(d: dict) -> GridSpec:
    return GridSpec(int(d["n"]), float(d["L"]), int(d["N"]))


def _values_to_lists(values: np.ndarray):
    pairs = np.stack([values.real, values.imag], axis=-1)
    return pairs.tolist()


def _values_from_lists(data, expected_shape) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[:-1] != expected_shape or arr.shape[-1] != 2:
        raise InvalidInputError(
            f"serialized values have shape {arr.shape}, expected {expected_shape} + (2,)"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def function_to_dict(f: ModuleFunction) -> dict:
    return {
        "grid": _grid_to_dict(f.grid),
        "k": f.k,
        "decay_class": f.decay_class,
        "values": _values_to_lists(f.values),
    }


def function_from_dict(d: dict) -> ModuleFunction:
    grid = _grid_from_dict(d["grid"])
    k = int(d["k"])
    values = _values_from_lists(d["values"], grid.shape + (k, k))
    return ModuleFunction(grid, values, d.get("decay_class", "schwartz"))


def symbol_to_dict(a: SampledSymbol) -> dict:
    return {
        "space": "phase",
        "grid": _grid_to_dict(a.grid_x),
        "grid_xi": _grid_to_dict(a.grid_xi),
        "k": a.k,
        "localization": a.localization,
        "values": _values_to_lists(a.values),
    }


def symbol_from_dict(d: dict) -> SampledSymbol:
    if d.get("space") != "phase":
        raise InvalidInputError("not a phase-space symbol record")
    grid_x = _grid_from_dict(d["grid"])
    grid_xi = _grid_from_dict(d["grid_xi"])
    k = int(d["k"])
    values = _values_from_lists(d["values"], grid_x.shape + grid_xi.shape + (k, k))
    return SampledSymbol(grid_x, grid_xi, values, d.get("localization", "bounded"))
