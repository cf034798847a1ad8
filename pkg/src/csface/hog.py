"""Histogram-of-oriented-gradients descriptor.

Pipeline: optional Gaussian pre-smoothing (the gradient scale ``sigma``,
replicated borders), centred [-1, 0, 1] derivatives with replicated borders, per-pixel
magnitude and orientation, per-cell orientation histograms with linear
interpolation between the two nearest bin centres, overlapping blocks
normalised with L2-Hys (L2, clip at 0.2, L2 again), blocks concatenated in
row-major order. Bin ``k`` is centred on ``k * bin_width`` degrees, so a
purely horizontal gradient lands entirely in bin 0. Pixels of partial cells
at the right and bottom edges are ignored.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

from . import _accel
from .errors import TooSmall

NORM_EPS = 1e-6


@dataclass(frozen=True)
class HogConfig:
    cell_size: int = 8
    block_size: int = 2
    block_stride: int = 1
    num_bins: int = 9
    signed: bool = False
    clip: float = 0.2
    # gradient scale in pixels; 0 disables smoothing. Makes the descriptor
    # agree between sharp training faces and blurrier reconstructions.
    sigma: float = 3.0

    def __post_init__(self):
        for name in ("cell_size", "block_size", "block_stride", "num_bins"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")

    @property
    def span(self) -> float:
        return 360.0 if self.signed else 180.0


def _grid(width: int, height: int, cfg: HogConfig):
    cells_x, cells_y = width // cfg.cell_size, height // cfg.cell_size
    if cells_x < 1 or cells_y < 1:
        raise TooSmall(f"{width}x{height} image is smaller than one {cfg.cell_size}px cell")
    if cells_x < cfg.block_size or cells_y < cfg.block_size:
        raise TooSmall(f"{width}x{height} image cannot hold one {cfg.block_size}x{cfg.block_size}-cell block")
    blocks_x = (cells_x - cfg.block_size) // cfg.block_stride + 1
    blocks_y = (cells_y - cfg.block_size) // cfg.block_stride + 1
    return cells_x, cells_y, blocks_x, blocks_y


def feature_dim(width: int, height: int, cfg: HogConfig = HogConfig()) -> int:
    _, _, bx, by = _grid(width, height, cfg)
    return bx * by * cfg.block_size * cfg.block_size * cfg.num_bins


def fingerprint(width: int, height: int, cfg: HogConfig = HogConfig()) -> str:
    """Short digest identifying the feature space (config + image size)."""
    blob = json.dumps({"hog": asdict(cfg), "width": width, "height": height}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def gradients(img: np.ndarray):
    """Centred differences with edge replication: (d/dcol, d/drow)."""
    p = np.pad(img, 1, mode="edge")
    gx = p[1:-1, 2:] - p[1:-1, :-2]
    gy = p[2:, 1:-1] - p[:-2, 1:-1]
    return gx, gy


def _orientation(gx, gy, span):
    ang = np.degrees(np.arctan2(gy, gx)) % span
    return np.where(ang >= span, ang - span, ang)


# -- cell histograms ---------------------------------------------------------

def _cell_histograms_numpy(mag, ang, cells_y, cells_x, cell, nbins, span):
    h, w = cells_y * cell, cells_x * cell
    mag = mag[:h, :w]
    pos = ang[:h, :w] / (span / nbins)
    lo_f = np.floor(pos)
    frac = pos - lo_f
    lo = lo_f.astype(np.int64) % nbins
    hi = (lo + 1) % nbins
    cell_id = (np.arange(h)[:, None] // cell) * cells_x + (np.arange(w)[None, :] // cell)
    size = cells_y * cells_x * nbins
    hist = np.bincount((cell_id * nbins + lo).ravel(), (mag * (1.0 - frac)).ravel(), minlength=size)
    hist += np.bincount((cell_id * nbins + hi).ravel(), (mag * frac).ravel(), minlength=size)
    return hist.reshape(cells_y, cells_x, nbins)


@_accel.njit
def _cell_histograms_numba(mag, ang, cells_y, cells_x, cell, nbins, span):
    hist = np.zeros((cells_y, cells_x, nbins))
    width = span / nbins
    for i in range(cells_y * cell):
        ci = i // cell
        for j in range(cells_x * cell):
            cj = j // cell
            pos = ang[i, j] / width
            lo_f = math.floor(pos)
            frac = pos - lo_f
            lo = int(lo_f) % nbins
            hi = (lo + 1) % nbins
            m = mag[i, j]
            hist[ci, cj, lo] += m * (1.0 - frac)
            hist[ci, cj, hi] += m * frac
    return hist


def _l2hys(v: np.ndarray, clip: float) -> np.ndarray:
    v = v / math.sqrt(float(v @ v) + NORM_EPS * NORM_EPS)
    v = np.minimum(v, clip)
    return v / math.sqrt(float(v @ v) + NORM_EPS * NORM_EPS)


def hog(img, cfg: HogConfig = HogConfig()) -> np.ndarray:
    """Flat non-negative HOG descriptor of a grey image."""
    x = np.asarray(img, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("expected a 2-D image")
    cells_x, cells_y, blocks_x, blocks_y = _grid(x.shape[1], x.shape[0], cfg)
    if cfg.sigma > 0:
        x = gaussian_filter(x, cfg.sigma, mode="nearest", truncate=4.0)
    gx, gy = gradients(x)
    mag = np.hypot(gx, gy)
    ang = _orientation(gx, gy, cfg.span)
    fn = _cell_histograms_numba if _accel.USE_NUMBA else _cell_histograms_numpy
    cells = fn(mag, ang, cells_y, cells_x, cfg.cell_size, cfg.num_bins, cfg.span)

    b, s = cfg.block_size, cfg.block_stride
    out = np.empty((blocks_y, blocks_x, b * b * cfg.num_bins))
    for by in range(blocks_y):
        for bx in range(blocks_x):
            block = cells[by * s:by * s + b, bx * s:bx * s + b].reshape(-1)
            out[by, bx] = _l2hys(block, cfg.clip)
    return out.reshape(-1)


def hog_many(images, cfg: HogConfig = HogConfig()) -> np.ndarray:
    return np.stack([hog(im, cfg) for im in images])
