"""Deterministic generators for Schwartz-class and bounded smooth test data.

Recipe parameters are drawn from the splittable generator before any grid
sampling, so the same (recipe, seed) pair describes the same function on
every grid; each function also carries an ``evaluator`` closure so oracle
code paths can evaluate the analytic recipe at arbitrary points.
"""

from __future__ import annotations

import numpy as np

from .algebra import random_element
from .errors import InvalidInputError
from .grids import GridSpec, ModuleFunction, SampledSymbol, check_decay
from .rng import SplitMix

__all__ = ["make_test_function", "make_test_symbol", "RECIPES"]

RECIPES = ("gaussian", "modulated-gaussian", "bump", "bounded-field")


def _sample(grid: GridSpec, fn) -> np.ndarray:
    mesh = grid.meshgrid()
    return fn(*mesh)


def _matrix_profile(scalar: np.ndarray, mat: np.ndarray) -> np.ndarray:
    return scalar[..., None, None] * mat


def _gaussian_params(rng: SplitMix, grid: GridSpec, polynomial: bool):
    L = grid.half_width
    # lower bound keeps the gaussian band-limited on the grid (spectrum
    # negligible at the Nyquist frequency); upper bound keeps the boundary
    # shell below the decay tolerance
    lo = max(0.08 * L, 1.9 * grid.spacing)
    hi = max(0.13 * L, 1.02 * lo)
    sigma = rng.uniform_in(lo, hi)
    c_max = min(0.12 * L, max(0.9 * L - 5.45 * hi, 0.02 * L))
    center = np.array([rng.uniform_in(-c_max, c_max) for _ in range(grid.n)])
    if polynomial:
        # low-degree polynomial factor, kept small enough to preserve decay
        coeffs = np.array([rng.uniform_in(-0.4, 0.4) for _ in range(grid.n)])
        quad = rng.uniform_in(-0.15, 0.15)
    else:
        coeffs = np.zeros(grid.n)
        quad = 0.0
    return sigma, center, coeffs, quad


def make_test_function(recipe: str, grid: GridSpec, seed: int, dim: int = 2) -> ModuleFunction:
    """Build a deterministic test function on the grid.

    Recipes: "gaussian" (gaussian times low-degree polynomial, tensored
    with a random algebra element), "modulated-gaussian", "bump" (compactly
    supported), and "bounded-field" (sum of box-periodic plane waves
    tensored with algebra elements; tagged bounded).
    """
    if recipe not in RECIPES:
        raise InvalidInputError(f"unknown recipe {recipe!r}; choose from {RECIPES}")
    rng = SplitMix(seed).derive(f"testfn:{recipe}:n{grid.n}")
    mat = random_element(rng.derive("algebra"), dim)
    mat = mat / max(np.abs(mat).max(), 1e-12)

    if recipe in ("gaussian", "modulated-gaussian"):
        sigma, center, coeffs, quad = _gaussian_params(rng, grid, polynomial=True)
        if recipe == "modulated-gaussian":
            dxi = np.pi / grid.half_width
            omega = np.array([dxi * rng.integer(-3, 3) for _ in range(grid.n)])
        else:
            omega = np.zeros(grid.n)

        def profile(*pts):
            r2 = sum((p - c) ** 2 for p, c in zip(pts, center))
            poly = 1.0 + sum(c * (p - cc) for p, c, cc in zip(pts, coeffs, center))
            poly = poly + quad * r2 / (1.0 + r2 / (4.0 * sigma**2))
            phase = sum(w * p for w, p in zip(omega, pts))
            return poly * np.exp(-r2 / (2.0 * sigma**2)) * np.exp(1j * phase)

        decay = "schwartz"

    elif recipe == "bump":
        sigma, center, _, _ = _gaussian_params(rng, grid, polynomial=False)
        radius = 4.0 * sigma

        def profile(*pts):
            r2 = sum((p - c) ** 2 for p, c in zip(pts, center))
            s = np.sqrt(r2) / radius
            out = np.zeros_like(s)
            inside = s < 1.0
            out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
            return out.astype(complex)

        decay = "schwartz"

    else:  # bounded-field
        dxi = np.pi / grid.half_width
        terms = []
        for _ in range(rng.integer(2, 4)):
            freq = np.array([dxi * rng.integer(-3, 3) for _ in range(grid.n)])
            coeff = rng.complex_normal()
            terms.append((freq, coeff))

        def profile(*pts):
            out = 0.0
            for freq, coeff in terms:
                phase = 0.0 * pts[0] + sum(w * p for w, p in zip(freq, pts))
                out = out + coeff * np.exp(1j * phase)
            return out / len(terms)

        decay = "bounded"

    def evaluator(*pts):
        return _matrix_profile(np.asarray(profile(*pts), dtype=complex), mat)

    values = _matrix_profile(np.asarray(_sample(grid, profile), dtype=complex), mat)
    f = ModuleFunction(grid, values, decay, evaluator=evaluator)
    if decay == "schwartz":
        check_decay(f)
    if recipe == "bounded-field":
        freqs = np.array([t[0] for t in terms])
        coeffs = np.array([t[1] / len(terms) * mat for t in terms])
        f.spectrum = (freqs, coeffs)
    return f


def make_test_symbol(grid_x: GridSpec, grid_xi: GridSpec, seed: int, dim: int = 2,
                     localized: bool = False) -> SampledSymbol:
    """Deterministic smooth phase-space symbol.

    Bounded symbols are sums of low-frequency phase-space waves tensored
    with random algebra elements; ``localized=True`` multiplies in a
    gaussian envelope so the symbol decays on the sampled box.
    """
    rng = SplitMix(seed).derive(f"testsym:n{grid_x.n}:{'loc' if localized else 'cb'}")
    n = grid_x.n
    mesh_x = grid_x.meshgrid()
    mesh_xi = grid_xi.meshgrid()
    shape = grid_x.shape + grid_xi.shape
    scalar = np.zeros(shape, dtype=complex)
    wx_unit = np.pi / grid_x.half_width
    wxi_unit = 2.0 * grid_xi.half_width / grid_xi.points  # keep xi-frequencies resolvable
    for _ in range(rng.integer(2, 4)):
        wx = [wx_unit * rng.integer(-3, 3) for _ in range(n)]
        wxi = [wxi_unit * rng.integer(-2, 2) for _ in range(n)]
        coeff = rng.complex_normal()
        phase_x = sum(w * m for w, m in zip(wx, mesh_x))
        phase_xi = sum(w * m for w, m in zip(wxi, mesh_xi))
        bx = np.exp(1j * phase_x).reshape(grid_x.shape + (1,) * n)
        bxi = np.exp(1j * phase_xi).reshape((1,) * n + grid_xi.shape)
        scalar = scalar + coeff * (bx * bxi)
    scalar /= np.abs(scalar).max()
    if localized:
        # envelope widths keep the boundary values below ~1e-10 so that the
        # zero continuation off the box is honest
        sx = grid_x.half_width * rng.uniform_in(0.10, 0.14)
        sxi = grid_xi.half_width * rng.uniform_in(0.10, 0.14)
        env_x = np.exp(-sum(m**2 for m in mesh_x) / (2 * sx**2)).reshape(grid_x.shape + (1,) * n)
        env_xi = np.exp(-sum(m**2 for m in mesh_xi) / (2 * sxi**2)).reshape((1,) * n + grid_xi.shape)
        scalar = scalar * env_x * env_xi
    mat = random_element(rng.derive("algebra"), dim)
    mat = mat / max(np.abs(mat).max(), 1e-12)
    base = np.eye(dim, dtype=complex) + 0.35 * mat
    values = scalar[..., None, None] * base
    return SampledSymbol(grid_x, grid_xi, values,
                         localization="schwartz" if localized else "bounded")
