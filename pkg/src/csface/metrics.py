"""PSNR against a 255 peak."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

PEAK = 255.0


@dataclass(frozen=True)
class PsnrReport:
    mse: float
    psnr_db: float  # math.inf when the images are identical

    def to_dict(self) -> dict:
        return {"mse": self.mse, "psnr_db": format_db(self.psnr_db)}


def format_db(value: float):
    """JSON/CSV form: infinities become the string ``"inf"``."""
    return "inf" if math.isinf(value) else value


def psnr(reference, candidate) -> PsnrReport:
    """PSNR of ``candidate`` (clamped to [0, 255]) against ``reference``."""
    ref = np.asarray(reference, dtype=np.float64)
    cand = np.asarray(candidate, dtype=np.float64)
    if ref.shape != cand.shape:
        raise DimensionMismatch(f"shapes differ: {ref.shape} vs {cand.shape}")
    diff = ref - np.clip(cand, 0.0, PEAK)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return PsnrReport(0.0, math.inf)
    return PsnrReport(mse, 10.0 * math.log10(PEAK * PEAK / mse))
