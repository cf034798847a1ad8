"""Coefficient-selection measurement operator.

A mask keeps a low-frequency core (the first coefficients in zig-zag order)
plus a seeded uniform draw from the remaining positions. Because the DCT is
orthonormal, measuring is plain indexing and its adjoint is zero-filling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, EmptyMask, InsufficientBudget
from .rng import SplitMix64


@lru_cache(maxsize=16)
def zigzag_order(height: int, width: int) -> np.ndarray:
    """Flat (row-major) indices in JPEG zig-zag order starting at (0, 0).

    Anti-diagonal ``s = row + col`` is walked with the row increasing when
    ``s`` is odd and decreasing when it is even.
    """
    order = sorted(((r + c, r if (r + c) % 2 else -r, r, c)
                    for r in range(height) for c in range(width)))
    out = np.array([r * width + c for _, _, r, c in order], dtype=np.int64)
    out.setflags(write=False)
    return out


def _frac(x) -> Fraction:
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def retained_count(percent, n: int) -> int:
    """round(percent/100 * n), halves rounded up."""
    return math.floor(_frac(percent) * n / 100 + Fraction(1, 2))


def core_count(low_freq_percent, n: int) -> int:
    return math.ceil(_frac(low_freq_percent) * n / 100)


@dataclass(frozen=True, eq=False)
class SamplingMask:
    width: int
    height: int
    flat: np.ndarray = field(repr=False)  # sorted row-major indices of retained positions
    seed: int = 0
    percent: float = 100.0
    low_freq_percent: float = 0.0

    @property
    def retained(self) -> np.ndarray:
        """(k, 2) array of (row, col) positions, sorted."""
        return np.stack(np.divmod(self.flat, self.width), axis=1)

    @property
    def size(self) -> int:
        return int(self.flat.size)

    @property
    def is_full(self) -> bool:
        return self.flat.size == self.width * self.height

    def boolean(self) -> np.ndarray:
        m = np.zeros(self.height * self.width, dtype=bool)
        m[self.flat] = True
        return m.reshape(self.height, self.width)

    def __eq__(self, other):
        if not isinstance(other, SamplingMask):
            return NotImplemented
        return ((self.width, self.height, self.seed, self.percent, self.low_freq_percent)
                == (other.width, other.height, other.seed, other.percent, other.low_freq_percent)
                and np.array_equal(self.flat, other.flat))


@dataclass(frozen=True, eq=False)
class Measurements:
    mask: SamplingMask
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.values.shape != (self.mask.size,):
            raise DimensionMismatch("one value per retained position required")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("measurements must be finite")


def build_mask(width: int, height: int, percent, low_freq_percent=1, seed: int = 0) -> SamplingMask:
    """Zig-zag low-frequency core plus a seeded draw from the other positions."""
    if percent == 0:
        raise EmptyMask("percent must be positive")
    if not 0 < percent <= 100:
        raise ValueError("percent must lie in (0, 100]")
    if not 0 <= low_freq_percent <= percent:
        raise ValueError("low_freq_percent must lie in [0, percent]")
    n = width * height
    total = retained_count(percent, n)
    core = core_count(low_freq_percent, n)
    if total < core:
        raise InsufficientBudget(f"{total} coefficients cannot hold a core of {core}")
    zz = zigzag_order(height, width)
    core_idx = zz[:core]
    rest = np.sort(zz[core:])
    if total == n:
        chosen = rest
    else:
        chosen = np.array(SplitMix64(seed).sample(rest.tolist(), total - core), dtype=np.int64)
    flat = np.sort(np.concatenate([core_idx, chosen]))
    flat.setflags(write=False)
    return SamplingMask(width, height, flat, seed, percent, low_freq_percent)


def _check_plane(sp, mask: SamplingMask) -> np.ndarray:
    arr = np.asarray(sp, dtype=np.float64)
    if arr.shape != (mask.height, mask.width):
        raise DimensionMismatch(
            f"plane {arr.shape} does not match mask {(mask.height, mask.width)}")
    return arr


def measure(sp, mask: SamplingMask) -> Measurements:
    """Restrict a spectral plane to the mask positions (mask order)."""
    arr = _check_plane(sp, mask)
    return Measurements(mask, arr.reshape(-1)[mask.flat].copy())


def embed(m: Measurements, fill: float = 0.0) -> np.ndarray:
    """Plane with the measured values at their positions and ``fill`` elsewhere."""
    out = np.full(m.mask.height * m.mask.width, float(fill))
    out[m.mask.flat] = m.values
    return out.reshape(m.mask.height, m.mask.width)
