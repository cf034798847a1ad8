"""Orthonormal 2-D DCT-II analysis/synthesis.

The transform is separable: ``dct2(x) = C_h @ x @ C_w.T`` with ``C_n`` the
orthonormal DCT-II matrix of size n. At face-image sizes (around 100 per
axis) the dense matrix products are cheaper than an FFT-based route and the
matrices are cached per size.
"""
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix; row k is the k-th cosine basis vector."""
    if n < 1:
        raise ValueError("size must be positive")
    k = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    c = np.cos(np.pi * (2 * i + 1) * k / (2 * n)) * np.sqrt(2.0 / n)
    c[0, :] = np.sqrt(1.0 / n)
    c.setflags(write=False)
    return c


def _plane(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D plane, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("plane contains non-finite values")
    return arr


def dct2(img) -> np.ndarray:
    """Spectral plane of ``img``; same shape, energy preserving."""
    x = _plane(img)
    h, w = x.shape
    return dct_matrix(h) @ x @ dct_matrix(w).T


def idct2(sp) -> np.ndarray:
    """Inverse of :func:`dct2`. The result is not clamped to [0, 255]."""
    v = _plane(sp)
    h, w = v.shape
    return dct_matrix(h).T @ v @ dct_matrix(w)
