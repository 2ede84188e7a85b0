"""Finite-dimensional matrix-algebra arithmetic.

The coefficient algebra is the full matrix algebra of k x k complex
matrices.  Elements are plain complex ndarrays of shape (k, k); the
involution is the conjugate transpose and the norm is the operator norm
on C^k (largest singular value), so the C*-identity ||a* a|| = ||a||^2
holds exactly up to floating point.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .rng import SplitMix

__all__ = [
    "cstar_norm",
    "involution",
    "approximate_unit",
    "random_element",
]


def cstar_norm(a: np.ndarray) -> float:
    """Operator norm (largest singular value) of a matrix-algebra element.

    Accepts a single (k, k) matrix or a batch of shape (..., k, k); batches
    return an array of norms.  For k = 2 the largest singular value has a
    closed form (the top eigenvalue of the 2x2 Gram matrix), which keeps
    large batched norm evaluations cheap; other sizes go through LAPACK.
    """
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise InvalidInputError(f"expected square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float) if a.dtype.kind == "c" else a)):
        raise InvalidInputError("non-finite entries")
    if a.shape[-1] == 2:
        p = np.abs(a[..., 0, 0]) ** 2 + np.abs(a[..., 1, 0]) ** 2
        q = np.abs(a[..., 0, 1]) ** 2 + np.abs(a[..., 1, 1]) ** 2
        r = np.conj(a[..., 0, 0]) * a[..., 0, 1] + np.conj(a[..., 1, 0]) * a[..., 1, 1]
        top = 0.5 * (p + q) + np.sqrt(0.25 * (p - q) ** 2 + np.abs(r) ** 2)
        out = np.sqrt(np.maximum(top, 0.0))
    else:
        svals = np.linalg.svd(a, compute_uv=False)
        out = svals[..., 0]
    return float(out) if out.ndim == 0 else out


def involution(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose, batched over leading axes."""
    return np.conj(np.swapaxes(a, -1, -2))


def approximate_unit(k_index: int, dim: int) -> np.ndarray:
    """k-th member of an approximate unit.

    The matrix algebra is unital, so the identity is a valid choice for
    every index; the index argument exists so callers can treat the
    sequence uniformly.
    """
    if k_index < 1:
        raise InvalidInputError("k_index must be positive")
    return np.eye(dim, dtype=complex)


def random_element(rng: SplitMix, dim: int, scale: float = 1.0) -> np.ndarray:
    """Random matrix with independent complex-normal entries."""
    out = np.empty((dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            out[i, j] = rng.complex_normal()
    return scale * out
