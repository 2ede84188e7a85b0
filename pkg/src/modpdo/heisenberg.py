"""Heisenberg group action on operators, smoothness probes, and the
commutant fingerprint.

The modulated translations

    (E_{z, zeta, t} f)(x) = e^{it} e^{i zeta.x} f(x - z)

act on operators by conjugation T_{z, zeta} = E^{-1} T E, independently of
the phase parameter t.  For an operator with symbol a the conjugate is the
operator of the displaced symbol a(x + z, xi + zeta); operators commuting
with every right representation satisfy the displacement law
T_{z, zeta} = T_{z - J zeta, 0}, whose verification (and the left-symbol
extraction it licenses) is the commutant fingerprint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidInputError, ResolutionError
from .fourier import modulate, translate
from .grids import ModuleFunction, SampledSymbol, module_norm
from .deformation import (
    DeformationMatrix,
    deformed_product,
    left_rep_apply,
    right_rep_apply,
)
from .quantize import quantize_apply

__all__ = [
    "heisenberg_translate",
    "OperatorHandle",
    "conjugate_operator",
    "displaced_symbol",
    "smoothness_probe",
    "displacement_law_deviation",
    "commutant_fingerprint",
]


def heisenberg_translate(f: ModuleFunction, z, zeta, t: float = 0.0,
                         interpolate: bool = False) -> ModuleFunction:
    """Modulated translation e^{it} e^{i zeta.x} f(x - z); an isometry.

    z must be grid-aligned unless ``interpolate=True`` selects the
    band-limited shift; zeta and t are unrestricted.
    """
    out = modulate(translate(f, z, interpolate=interpolate), zeta)
    if t != 0.0:
        out = out.with_values(np.exp(1j * t) * out.values)
    return out


def heisenberg_translate_inverse(f: ModuleFunction, z, zeta, t: float = 0.0,
                                 interpolate: bool = False) -> ModuleFunction:
    """Inverse of :func:`heisenberg_translate` with the same data."""
    zeta = np.atleast_1d(np.asarray(zeta, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    # E^{-1} g (x) = e^{-it} e^{-i zeta.(x+z)} g(x+z): modulate, then shift back
    out = translate(modulate(f, -zeta), -z, interpolate=interpolate)
    if t != 0.0:
        out = out.with_values(np.exp(-1j * t) * out.values)
    return out


@dataclass
class OperatorHandle:
    """Composable operator on sampled functions, held as a closure.

    Handles are immutable recipes; ``apply`` must be deterministic and
    right-linear over the algebra.  Dense matrices are never materialized.
    """

    kind: str
    apply: Callable[[ModuleFunction], ModuleFunction]
    meta: dict = field(default_factory=dict)

    @staticmethod
    def from_symbol(a: SampledSymbol) -> "OperatorHandle":
        return OperatorHandle("from_symbol", lambda phi: quantize_apply(a, phi),
                              {"symbol": a})

    @staticmethod
    def left_rep(F: ModuleFunction, J: DeformationMatrix) -> "OperatorHandle":
        return OperatorHandle("left_rep", lambda phi: left_rep_apply(F, phi, J),
                              {"field": F, "J": J})

    @staticmethod
    def right_rep(G: ModuleFunction, J: DeformationMatrix) -> "OperatorHandle":
        return OperatorHandle("right_rep", lambda phi: right_rep_apply(G, phi, J),
                              {"field": G, "J": J})


def conjugate_operator(T: OperatorHandle, z, zeta, t: float = 0.0,
                       interpolate: bool = False) -> OperatorHandle:
    """Conjugated operator E^{-1} T E as a composite handle.

    The phase parameter t cancels between the two factors, so the result
    does not depend on it; it is kept as an argument precisely so that the
    cancellation can be verified numerically.
    """

    def apply(phi: ModuleFunction) -> ModuleFunction:
        shifted = heisenberg_translate(phi, z, zeta, t, interpolate=interpolate)
        image = T.apply(shifted)
        return heisenberg_translate_inverse(image, z, zeta, t, interpolate=interpolate)

    return OperatorHandle("composite", apply, {"base": T, "z": z, "zeta": zeta, "t": t})


def displaced_symbol(a: SampledSymbol, z, zeta) -> SampledSymbol:
    """Symbol a(x + z, xi + zeta) for grid-aligned displacements.

    Samples are rolled; vacated slots follow the localization rule (zero
    for schwartz-localized symbols, boundary value for bounded ones).
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    zeta = np.atleast_1d(np.asarray(zeta, dtype=float))
    n = a.n
    vals = a.values
    for axis, (step, spacing) in enumerate(
        list(zip(z, [a.grid_x.spacing] * n)) + list(zip(zeta, [a.grid_xi.spacing] * n))
    ):
        m = step / spacing
        mi = int(round(m))
        if abs(m - mi) > 1e-9:
            raise InvalidInputError("displacement must be grid-aligned per axis")
        if mi == 0:
            continue
        # a(. + z) shifts samples toward lower indices
        vals = np.roll(vals, -mi, axis=axis)
        sl = [slice(None)] * vals.ndim
        sl[axis] = slice(vals.shape[axis] - mi, None) if mi > 0 else slice(0, -mi)
        if a.localization == "schwartz":
            vals[tuple(sl)] = 0.0
        else:
            edge = [slice(None)] * vals.ndim
            edge[axis] = slice(-mi - 1, -mi) if mi > 0 else slice(-mi, -mi + 1)
            vals[tuple(sl)] = vals[tuple(edge)]
    return SampledSymbol(a.grid_x, a.grid_xi, vals, localization=a.localization)


def smoothness_probe(builder: Callable[[np.ndarray, np.ndarray], OperatorHandle],
                     phi: ModuleFunction, order, step: float) -> ModuleFunction:
    """Centered finite-difference derivative of (z, zeta) -> T_{z,zeta} phi at 0.

    ``order`` is a pair (beta, gamma) of multi-indices with entries in
    {0, 1}; each flagged axis contributes one centered difference of the
    given step (z-steps must be grid-aligned).
    """
    beta, gamma = order
    n = phi.grid.n
    beta = tuple(beta)
    gamma = tuple(gamma)
    if len(beta) != n or len(gamma) != n:
        raise InvalidInputError("order must provide one flag per axis")
    if any(b not in (0, 1) for b in beta + gamma):
        raise InvalidInputError("only first-order mixed derivatives are supported")
    if step < phi.grid.spacing:
        raise ResolutionError("probe step is below the grid resolution")
    axes = [( "z", i) for i, b in enumerate(beta) if b] + \
           [("zeta", i) for i, g in enumerate(gamma) if g]

    def recurse(z, zeta, remaining):
        if not remaining:
            return builder(z, zeta).apply(phi).values
        which, axis = remaining[0]
        zp, zm = z.copy(), z.copy()
        cp, cm = zeta.copy(), zeta.copy()
        if which == "z":
            zp[axis] += step
            zm[axis] -= step
        else:
            cp[axis] += step
            cm[axis] -= step
        plus = recurse(zp, cp if which == "zeta" else zeta, remaining[1:])
        minus = recurse(zm, cm if which == "zeta" else zeta, remaining[1:])
        return (plus - minus) / (2.0 * step)

    zero = np.zeros(n)
    vals = recurse(zero, zero.copy(), axes)
    return ModuleFunction(phi.grid, vals, "bounded")


def displacement_law_deviation(T_builder: Callable, J: DeformationMatrix,
                               samples: Sequence, phis: Sequence[ModuleFunction]) -> float:
    """Sup over samples of ||T_{z,zeta} phi - T_{z-J zeta,0} phi|| / ||phi||.

    ``T_builder(z, zeta)`` must return the conjugated operator handle;
    z - J zeta is generically off-grid, so the comparison side uses the
    band-limited translate.
    """
    Jm = J.as_array()
    worst = 0.0
    for z, zeta in samples:
        z = np.asarray(z, dtype=float)
        zeta = np.asarray(zeta, dtype=float)
        reduced = z - Jm @ zeta
        for phi in phis:
            lhs = T_builder(z, zeta).apply(phi)
            rhs = T_builder(reduced, np.zeros_like(reduced)).apply(phi)
            dev = module_norm(lhs.with_values(lhs.values - rhs.values))
            worst = max(worst, dev / module_norm(phi))
    return worst


def commutant_fingerprint(a: SampledSymbol, J: DeformationMatrix,
                          G_suite: Sequence[ModuleFunction],
                          phi_suite: Sequence[ModuleFunction],
                          apply_fn: Callable = None) -> dict:
    """Two-sided commutant scenario for an operator given by its symbol.

    Measures (i) the worst relative commutator norm ||[Op(a), R_G] phi|| /
    ||phi|| over the suites, (ii) the sup-norm deviation of a(x, xi) from
    a(x - J xi, 0), and (iii) when the extraction is attempted, the
    relative operator deviation of Op(a) from the left representation of
    F(z) = a(z, 0).  ``apply_fn`` selects the quantization path (the
    brute-force variant for oracle runs).
    """
    from .algebra import cstar_norm

    if apply_fn is None:
        apply_fn = quantize_apply
    grid = a.grid_x
    dual = a.grid_xi
    commutation = 0.0
    images = {}
    for idx, phi in enumerate(phi_suite):
        images[idx] = apply_fn(a, phi)
        for G in G_suite:
            lhs = apply_fn(a, right_rep_apply(G, phi, J))
            rhs = right_rep_apply(G, images[idx], J)
            dev = module_norm(lhs.with_values(lhs.values - rhs.values))
            commutation = max(commutation, dev / module_norm(phi))

    # symbol displacement test: a(x, xi) vs F(x - J xi) with F(z) = a(z, 0),
    # compared where the displaced argument stays inside the sampled box
    # (outside, the slice cannot determine the symbol)
    zero_index = tuple([dual.points // 2] * dual.n)
    F_vals = a.values[(slice(None),) * grid.n + zero_index]
    F = ModuleFunction(grid, F_vals,
                       "schwartz" if a.localization == "schwartz" else "bounded")
    from .deformation import left_symbol

    displaced = left_symbol(F, J)
    k = a.k
    n = grid.n
    Jm = J.as_array()
    mesh_x = grid.meshgrid()
    mesh_xi = dual.meshgrid()
    inside = np.ones(grid.shape + dual.shape, dtype=bool)
    for axis in range(n):
        arg = (mesh_x[axis].reshape(grid.shape + (1,) * n)
               - sum(Jm[axis, j] * mesh_xi[j] for j in range(n)).reshape((1,) * n + dual.shape))
        inside &= np.abs(arg) <= grid.half_width
    diff = cstar_norm((a.values - displaced.values)[inside])
    scale = max(float(cstar_norm(a.values.reshape(-1, k, k)).max()), 1e-300)
    symbol_dev = float(diff.max()) / scale

    extraction = 0.0
    for idx, phi in enumerate(phi_suite):
        l_phi = left_rep_apply(F, phi, J)
        t_phi = images[idx]
        dev = module_norm(t_phi.with_values(t_phi.values - l_phi.values))
        extraction = max(extraction, dev / module_norm(phi))

    return {
        "commutation": commutation,
        "symbol_deviation": symbol_dev,
        "extraction_deviation": extraction,
        "extracted_field": F,
    }
