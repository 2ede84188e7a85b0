"""Sampled grids, algebra-valued functions, and the module inner product.

A :class:`GridSpec` describes the uniform cube grid on [-L, L)^n with N
points per axis (N a power of two).  Functions into the k x k matrix
algebra are stored as complex arrays of shape ``grid.shape + (k, k)``.

The module inner product is the rectangle-rule Riemann sum

    <f, g> = sum_x f(x)* g(x) h^n,

an element of the algebra; the module norm is ``cstar_norm(<f,f>)^(1/2)``.
For rapidly decaying integrands on a large enough box the rectangle rule
is spectrally accurate, and it matches the discrete transform's Parseval
identity exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .algebra import cstar_norm, involution
from .errors import GridMismatchError, InvalidInputError

__all__ = [
    "GridSpec",
    "ModuleFunction",
    "SampledSymbol",
    "grids_equal",
    "module_inner",
    "module_norm",
    "l2_norm",
    "pointwise_norms",
    "check_decay",
    "require_schwartz",
]

# Boundary-decay invariant for schwartz-tagged functions: sup over the outer
# 10% shell of the box must not exceed this fraction of the global sup.
DECAY_SHELL_FRACTION = 0.9
DECAY_TOLERANCE = 1e-6


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on [-L, L)^n with N points per axis."""

    n: int
    half_width: float
    points: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError("dimension must be >= 1")
        if self.half_width <= 0:
            raise InvalidInputError("half_width must be positive")
        if not _is_power_of_two(self.points):
            raise InvalidInputError("points per axis must be a power of two")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def shape(self) -> tuple:
        return (self.points,) * self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.n

    def axis(self) -> np.ndarray:
        return _axis(self.half_width, self.points)

    def dual(self) -> "GridSpec":
        """Frequency grid: spacing 2*pi/(2L), half-width pi/h, same N."""
        return GridSpec(self.n, np.pi / self.spacing, self.points)

    def meshgrid(self) -> list:
        return list(np.meshgrid(*([self.axis()] * self.n), indexing="ij"))


@lru_cache(maxsize=64)
def _axis_cached(half_width: float, points: int) -> np.ndarray:
    ax = -half_width + (2.0 * half_width / points) * np.arange(points)
    ax.flags.writeable = False
    return ax


def _axis(half_width: float, points: int) -> np.ndarray:
    return _axis_cached(float(half_width), int(points))


@dataclass
class ModuleFunction:
    """Sampled algebra-valued function on a grid.

    values has shape ``grid.shape + (k, k)``.  ``decay_class`` is either
    "schwartz" (rapidly decaying; boundary shell must be negligible) or
    "bounded" (smooth field with no decay).  ``evaluator``, when present,
    evaluates the underlying analytic recipe at arbitrary points (used by
    independent oracle paths); ``spectrum`` marks exact trigonometric
    content as ``(freqs, coeffs)`` with freqs of shape (M, n) and coeffs
    of shape (M, k, k).
    """

    grid: GridSpec
    values: np.ndarray
    decay_class: str = "schwartz"
    evaluator: Optional[Callable] = field(default=None, repr=False, compare=False)
    spectrum: Optional[tuple] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        expect = self.grid.shape
        if self.values.ndim != self.grid.n + 2 or self.values.shape[: self.grid.n] != expect:
            raise InvalidInputError(
                f"values shape {self.values.shape} does not match grid shape {expect} + (k, k)"
            )
        if self.values.shape[-1] != self.values.shape[-2]:
            raise InvalidInputError("algebra elements must be square matrices")
        if self.decay_class not in ("schwartz", "bounded"):
            raise InvalidInputError(f"unknown decay class {self.decay_class!r}")
        if not np.all(np.isfinite(self.values.view(float))):
            raise InvalidInputError("non-finite samples")

    @property
    def k(self) -> int:
        return self.values.shape[-1]

    def with_values(self, values: np.ndarray, decay_class: Optional[str] = None) -> "ModuleFunction":
        return ModuleFunction(self.grid, values, decay_class or self.decay_class)


@dataclass
class SampledSymbol:
    """Sampled phase-space symbol a(x, xi) on a product grid.

    values has shape ``grid_x.shape + grid_xi.shape + (k, k)``.
    ``localization`` selects the off-grid continuation rule: "schwartz"
    extends by zero, "bounded" by the boundary value.
    """

    grid_x: GridSpec
    grid_xi: GridSpec
    values: np.ndarray
    localization: str = "bounded"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.grid_x.n != self.grid_xi.n:
            raise GridMismatchError("x and xi grids must share the dimension")
        expect = self.grid_x.shape + self.grid_xi.shape
        if self.values.shape[:-2] != expect or self.values.shape[-1] != self.values.shape[-2]:
            raise InvalidInputError(
                f"values shape {self.values.shape} does not match {expect} + (k, k)"
            )
        if self.localization not in ("schwartz", "bounded"):
            raise InvalidInputError(f"unknown localization {self.localization!r}")
        if not np.all(np.isfinite(self.values.view(float))):
            raise InvalidInputError("non-finite samples")

    @property
    def n(self) -> int:
        return self.grid_x.n

    @property
    def k(self) -> int:
        return self.values.shape[-1]


def grids_equal(g1: GridSpec, g2: GridSpec) -> bool:
    """Grid equality up to floating-point rounding of the half-width.

    Dual grids are built through pi/h, which does not round-trip bit-exactly,
    so layout checks must not use strict equality.
    """
    return (
        g1.n == g2.n
        and g1.points == g2.points
        and math.isclose(g1.half_width, g2.half_width, rel_tol=1e-12)
    )


def _require_same_layout(f: ModuleFunction, g: ModuleFunction):
    if not grids_equal(f.grid, g.grid):
        raise GridMismatchError(f"grid mismatch: {f.grid} vs {g.grid}")
    if f.k != g.k:
        raise GridMismatchError(f"algebra dimension mismatch: {f.k} vs {g.k}")


def module_inner(f: ModuleFunction, g: ModuleFunction) -> np.ndarray:
    """Algebra-valued inner product sum_x f(x)* g(x) h^n.

    Conjugate-linear in the first slot; <f, g.a> = <f, g> a for algebra
    elements a.
    """
    _require_same_layout(f, g)
    k = f.k
    fv = f.values.reshape(-1, k, k)
    gv = g.values.reshape(-1, k, k)
    return np.einsum("mij,mik->jk", np.conj(fv), gv) * f.grid.cell_volume


def module_norm(f: ModuleFunction) -> float:
    """Hilbert-module norm ||<f, f>||^(1/2)."""
    gram = module_inner(f, f)
    return float(np.sqrt(cstar_norm(gram)))


def l2_norm(f: ModuleFunction) -> float:
    """Norm of f seen in L^2: (integral of ||f(x)||^2 dx)^(1/2).

    Dominates the module norm pointwise in exact arithmetic.
    """
    k = f.k
    norms = cstar_norm(f.values.reshape(-1, k, k))
    return float(np.sqrt(np.sum(norms**2) * f.grid.cell_volume))


def pointwise_norms(f: ModuleFunction) -> np.ndarray:
    """Grid array of C*-norms ||f(x)||."""
    k = f.k
    return cstar_norm(f.values.reshape(-1, k, k)).reshape(f.grid.shape)


def check_decay(f: ModuleFunction, tolerance: float = DECAY_TOLERANCE) -> float:
    """Verify the boundary-decay invariant for schwartz-tagged functions.

    Returns the shell-to-peak ratio; raises InvalidInputError when the
    outer shell carries more than ``tolerance`` of the peak norm.
    """
    norms = pointwise_norms(f)
    peak = norms.max()
    if peak == 0.0:
        return 0.0
    ax = np.abs(f.grid.axis())
    shell_1d = ax >= DECAY_SHELL_FRACTION * f.grid.half_width
    mask = np.zeros(f.grid.shape, dtype=bool)
    for axis_idx in range(f.grid.n):
        shape = [1] * f.grid.n
        shape[axis_idx] = f.grid.points
        mask |= shell_1d.reshape(shape)
    ratio = float(norms[mask].max() / peak)
    if ratio > tolerance:
        raise InvalidInputError(
            f"boundary shell carries {ratio:.2e} of the peak; function is not "
            "grid-representable as a rapidly decaying sample"
        )
    return ratio


def require_schwartz(f: ModuleFunction, what: str = "input"):
    """Precondition guard for operations that need decaying inputs."""
    if f.decay_class != "schwartz":
        raise InvalidInputError(f"{what} must be schwartz-class, got {f.decay_class!r}")
    check_decay(f)
