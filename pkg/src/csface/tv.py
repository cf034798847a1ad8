"""Total-variation reconstruction from DCT coefficient measurements.

The discrete gradient uses forward differences with a zero at the last
index: ``dh[i, j] = x[i+1, j] - x[i, j]`` (zero on the last row) and
``dv[i, j] = x[i, j+1] - x[i, j]`` (zero on the last column), with ``i`` the
row and ``j`` the column.

The solver is projected gradient descent on the smoothed objective
``sum sqrt(dh**2 + dv**2 + eps**2)``. After every gradient step the measured
DCT coefficients are written back, which is the exact Euclidean projection
onto ``{x : A x = y}`` since ``A`` selects coordinates of an orthonormal
transform.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _accel
from .errors import SolverDiverged
from .sampling import Measurements, embed
from .transform import dct_matrix


class GradientField(NamedTuple):
    dh: np.ndarray
    dv: np.ndarray


def gradient_field(x) -> GradientField:
    x = np.asarray(x, dtype=np.float64)
    dh = np.zeros_like(x)
    dv = np.zeros_like(x)
    dh[:-1, :] = x[1:, :] - x[:-1, :]
    dv[:, :-1] = x[:, 1:] - x[:, :-1]
    return GradientField(dh, dv)


def total_variation(x) -> float:
    """Isotropic TV with exact (unsmoothed) gradient magnitudes."""
    dh, dv = gradient_field(x)
    return float(np.sqrt(dh * dh + dv * dv).sum())


# -- smoothed TV kernels ---------------------------------------------------

def _smoothed_tv_numpy(x: np.ndarray, eps: float, grad: np.ndarray) -> float:
    dh, dv = gradient_field(x)
    r = np.sqrt(dh * dh + dv * dv + eps * eps)
    ph = dh / r
    pv = dv / r
    grad.fill(0.0)
    grad[:-1, :] -= ph[:-1, :]
    grad[1:, :] += ph[:-1, :]
    grad[:, :-1] -= pv[:, :-1]
    grad[:, 1:] += pv[:, :-1]
    return float(r.sum())


@_accel.njit
def _smoothed_tv_numba(x, eps, grad):
    h, w = x.shape
    e2 = eps * eps
    total = 0.0
    for i in range(h):
        for j in range(w):
            grad[i, j] = 0.0
    for i in range(h):
        for j in range(w):
            dh = x[i + 1, j] - x[i, j] if i < h - 1 else 0.0
            dv = x[i, j + 1] - x[i, j] if j < w - 1 else 0.0
            r = math.sqrt(dh * dh + dv * dv + e2)
            total += r
            if i < h - 1:
                p = dh / r
                grad[i, j] -= p
                grad[i + 1, j] += p
            if j < w - 1:
                q = dv / r
                grad[i, j] -= q
                grad[i, j + 1] += q
    return total


def _kernel():
    return _smoothed_tv_numba if _accel.USE_NUMBA else _smoothed_tv_numpy


def smoothed_tv_and_gradient(x, epsilon: float):
    """Value and exact gradient of ``sum sqrt(dh**2 + dv**2 + epsilon**2)``.

    The sum runs over every pixel, so a constant plane scores ``H*W*epsilon``
    rather than 0 (no offset is subtracted).
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    x = np.ascontiguousarray(x, dtype=np.float64)
    grad = np.empty_like(x)
    value = _kernel()(x, float(epsilon), grad)
    return float(value), grad


# -- solver ----------------------------------------------------------------

@dataclass(frozen=True)
class SolverConfig:
    """Solver settings; ``epsilon`` is on the internal [0, 1] pixel scale."""
    max_iters: int = 1000
    step_size: float = 1.0
    epsilon: float = 1e-2
    tol: float = 1e-6
    line_search: bool = True

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.tol >= 0:
            raise ValueError("tol must be non-negative")


@dataclass
class ReconResult:
    image: np.ndarray = field(repr=False)
    objective_trace: np.ndarray = field(repr=False)
    iterations_run: int
    wall_time: float
    evaluations: int = 0
    stop_reason: str = ""


class _Projector:
    """Write measured coefficients back into a plane (internal scale)."""

    def __init__(self, m: Measurements, scale: float):
        self.ch = dct_matrix(m.mask.height)
        self.cw = dct_matrix(m.mask.width)
        self.flat = m.mask.flat
        self.values = m.values / scale

    def __call__(self, x: np.ndarray) -> np.ndarray:
        v = self.ch @ x @ self.cw.T
        v.reshape(-1)[self.flat] = self.values
        return self.ch.T @ v @ self.cw


def _iterate(x, f, grad, trace, project, kernel, eps, cfg):
    t = cfg.step_size
    iters = evals = 0
    reason = "max_iters"
    gz = np.empty_like(x)
    for k in range(1, cfg.max_iters + 1):
        if cfg.line_search:
            t = min(cfg.step_size, 2.0 * t)
        while True:
            z = project(x - t * grad)
            fz = kernel(z, eps, gz)
            evals += 1
            if not math.isfinite(fz):
                raise SolverDiverged(k)
            if not cfg.line_search:
                break
            d = z - x
            # quadratic upper bound: guarantees f(z) <= f(x)
            if fz <= f + float(np.vdot(grad, d)) + float(np.vdot(d, d)) / (2.0 * t):
                break
            t *= 0.5
            if t < 1e-18 * cfg.step_size:
                z = None
                break
        if z is None:
            reason = "stalled"
            break
        rel = (f - fz) / f if f > 0 else 0.0
        x, grad, gz = z, gz, grad
        f = fz
        trace.append(f)
        iters = k
        if rel < cfg.tol:
            reason = "tol"
            break
    return x, trace, iters, evals, reason


def reconstruct(m: Measurements, cfg: SolverConfig = SolverConfig()) -> ReconResult:
    """Minimum-TV image consistent with the measurements (0-255 scale).

    ``objective_trace`` holds the smoothed objective on the internal [0, 1]
    scale, starting with the zero-filled initial guess.
    """
    start = time.perf_counter()
    scale = 255.0
    project = _Projector(m, scale)
    kernel = _kernel()

    x = project.ch.T @ (embed(m, 0.0) / scale) @ project.cw
    grad = np.empty_like(x)
    trace = [kernel(x, float(cfg.epsilon), grad)]
    iters = evals = 0
    reason = "fully-determined"
    if not m.mask.is_full:
        with np.errstate(over="ignore", invalid="ignore"):
            x, trace, iters, evals, reason = _iterate(
                x, trace[0], grad, trace, project, kernel, float(cfg.epsilon), cfg)

    # final write-back on the 0-255 scale keeps the measured coefficients exact
    v = project.ch @ (x * scale) @ project.cw.T
    v.reshape(-1)[m.mask.flat] = m.values
    image = project.ch.T @ v @ project.cw
    if not np.all(np.isfinite(image)):
        raise SolverDiverged(iters)
    return ReconResult(image, np.asarray(trace), iters, time.perf_counter() - start, evals, reason)
