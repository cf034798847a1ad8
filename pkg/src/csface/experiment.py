"""End-to-end benchmark: split, train on clean faces, degrade/reconstruct the
test faces at each retention percentage, score PSNR, accuracy and time.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import _accel
from .dataset_io import Gallery, LabeledImage, SplitSpec, encode_pgm, open_gallery, quantize, split_gallery
from .errors import CsFaceError
from .hog import HogConfig, fingerprint, hog
from .metrics import format_db, psnr
from .rng import ALGORITHM, derive_seed
from .sampling import build_mask, measure
from .svm import OvoModel, TrainConfig, save_model, train_ovo
from .transform import dct2
from .tv import SolverConfig, reconstruct

log = logging.getLogger(__name__)

DEFAULT_PERCENTAGES = (5, 10, 15, 20, 30, 45, 100)
SUMMARY_HEADER = ["percent", "mean_psnr_db", "accuracy", "recon_time_s", "n_images"]
DETAIL_HEADER = ["subject", "image_index", "percent", "psnr_db", "predicted", "correct",
                 "iterations", "recon_time_s"]


class ExperimentError(CsFaceError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    dataset_root: str
    output_dir: Optional[str] = None
    percentages: Sequence[float] = DEFAULT_PERCENTAGES
    low_freq_percent: float = 1.0
    train_fraction: float = 0.8
    split_seed: int = 42
    mask_seed: int = 0
    solver: SolverConfig = SolverConfig()
    hog: HogConfig = HogConfig()
    svm: TrainConfig = TrainConfig()
    jobs: int = 1

    def __post_init__(self):
        pcts = list(self.percentages)
        if not pcts:
            raise ValueError("at least one percentage required")
        if any(not 0 < p <= 100 for p in pcts):
            raise ValueError("percentages must lie in (0, 100]")
        if pcts != sorted(set(pcts)):
            raise ValueError("percentages must be ascending without duplicates")
        object.__setattr__(self, "percentages", tuple(pcts))
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["percentages"] = list(self.percentages)
        return d


@dataclass
class PercentRecord:
    percent: float
    mean_psnr_db: float
    accuracy_fraction: float
    recon_wall_time_s: float
    images_count: int
    mean_iterations: float = 0.0


@dataclass
class DetailRow:
    subject: str
    image_index: int
    percent: float
    psnr_db: float
    predicted: str
    correct: bool
    iterations: int = 0
    recon_time_s: float = 0.0


@dataclass
class RunReport:
    records: List[PercentRecord]
    details: List[DetailRow]
    config: dict
    prng_algorithm: str = ALGORITHM
    baseline_accuracy: float = float("nan")
    backend: str = field(default_factory=_accel.backend)
    feature_fingerprint: str = ""

    def record(self, percent) -> PercentRecord:
        for r in self.records:
            if r.percent == percent:
                return r
        raise KeyError(percent)

    def to_dict(self) -> dict:
        def clean(d):
            return {k: format_db(v) if isinstance(v, float) and math.isinf(v) else v for k, v in d.items()}
        return {
            "config": self.config,
            "prng_algorithm": self.prng_algorithm,
            "backend": self.backend,
            "feature_fingerprint": self.feature_fingerprint,
            "baseline_accuracy": self.baseline_accuracy,
            "summary": [clean(asdict(r)) for r in self.records],
            "details": [clean(asdict(r)) for r in self.details],
        }

    def without_timing(self) -> dict:
        """Report contents with every wall-time field removed."""
        d = self.to_dict()
        d.pop("backend")
        for r in d["summary"]:
            r.pop("recon_wall_time_s")
        for r in d["details"]:
            r.pop("recon_time_s")
        return d


def image_seed(mask_seed: int, subject: str, index: int) -> int:
    return derive_seed(mask_seed, subject, index)


def degrade_and_reconstruct(original: np.ndarray, percent, low_freq_percent, seed, solver: SolverConfig):
    """Mask, measure and reconstruct one image; returns (ReconResult, quantized image)."""
    h, w = original.shape
    mask = build_mask(w, h, percent, low_freq_percent, seed)
    res = reconstruct(measure(dct2(original), mask), solver)
    return res, quantize(res.image).astype(np.float64)


def _features(items: Sequence[LabeledImage], cfg: HogConfig) -> np.ndarray:
    return np.stack([hog(it.pixels, cfg) for it in items])


def run(cfg: ExperimentConfig, gallery: Optional[Gallery] = None) -> RunReport:
    gallery = gallery if gallery is not None else open_gallery(cfg.dataset_root)
    train, test = split_gallery(gallery, SplitSpec(cfg.train_fraction, cfg.split_seed))
    fp = fingerprint(gallery.width, gallery.height, cfg.hog)
    log.info("split: %d train, %d test; backend %s", len(train), len(test), _accel.backend())

    # the model only ever sees clean training images, before any degradation
    train_x = _features(train, cfg.hog)
    model = train_ovo([(it.subject, x) for it, x in zip(train, train_x)], cfg.svm, cfg.jobs, fp)
    clean_pred = model.predict_many(_features(test, cfg.hog))
    baseline = sum(p == it.subject for p, it in zip(clean_pred, test)) / len(test)
    log.info("clean baseline accuracy %.4f", baseline)

    records, details = [], []
    for pct in cfg.percentages:
        def one(item: LabeledImage):
            try:
                res, q = degrade_and_reconstruct(item.pixels, pct, cfg.low_freq_percent,
                                                 image_seed(cfg.mask_seed, item.subject, item.index),
                                                 cfg.solver)
                return res, q, psnr(item.pixels, q).psnr_db, hog(q, cfg.hog)
            except CsFaceError as exc:
                raise ExperimentError(f"{item.subject}/{item.index} at {pct}%: {exc}") from exc

        if cfg.jobs > 1:
            with ThreadPoolExecutor(cfg.jobs) as pool:
                outs = list(pool.map(one, test))
        else:
            outs = [one(it) for it in test]
        preds = model.predict_many(np.stack([o[3] for o in outs]))
        rows = [DetailRow(it.subject, it.index, pct, o[2], p, p == it.subject,
                          o[0].iterations_run, o[0].wall_time)
                for it, o, p in zip(test, outs, preds)]
        details.extend(rows)
        rec = PercentRecord(
            percent=pct,
            mean_psnr_db=float(np.mean([r.psnr_db for r in rows])),
            accuracy_fraction=sum(r.correct for r in rows) / len(rows),
            recon_wall_time_s=float(sum(r.recon_time_s for r in rows)),
            images_count=len(rows),
            mean_iterations=float(np.mean([r.iterations for r in rows])),
        )
        records.append(rec)
        log.info("%5.1f%%: psnr %.2f dB, accuracy %.4f, time %.2f s", pct, rec.mean_psnr_db,
                 rec.accuracy_fraction, rec.recon_wall_time_s)

    report = RunReport(records, details, cfg.to_dict(), baseline_accuracy=baseline, feature_fingerprint=fp)
    if cfg.output_dir:
        write_report(report, cfg.output_dir, model)
    return report


def _csv_value(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, float):
        return repr(v)
    return v


def write_report(report: RunReport, out_dir, model: Optional[OvoModel] = None) -> Dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"summary": out / "summary.csv", "detail": out / "detail.csv", "report": out / "report.json"}
    with paths["summary"].open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_HEADER)
        for r in report.records:
            w.writerow([_csv_value(v) for v in (r.percent, r.mean_psnr_db, r.accuracy_fraction,
                                                 r.recon_wall_time_s, r.images_count)])
    with paths["detail"].open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(DETAIL_HEADER)
        for r in report.details:
            w.writerow([_csv_value(v) for v in (r.subject, r.image_index, r.percent, r.psnr_db,
                                                 r.predicted, int(r.correct), r.iterations, r.recon_time_s)])
    paths["report"].write_text(json.dumps(report.to_dict(), indent=1))
    if model is not None:
        paths["model"] = save_model(model, out / "model.json")
    return paths


def export_reconstructions(cfg: ExperimentConfig, subject: str, image_index: int,
                           out_dir=None, gallery: Optional[Gallery] = None) -> Dict[str, Path]:
    """Write the original and one reconstruction per percentage as PGM files.

    Masks use the same per-image seeds as :func:`run`. Returns a mapping from
    ``"original"`` or the percentage to the written path.
    """
    gallery = gallery if gallery is not None else open_gallery(cfg.dataset_root)
    original = gallery.get(subject, image_index)
    out = Path(out_dir or cfg.output_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{subject}_{image_index}"
    paths = {"original": out / f"{stem}_original.pgm"}
    paths["original"].write_bytes(encode_pgm(original))
    seed = image_seed(cfg.mask_seed, subject, image_index)
    for pct in cfg.percentages:
        _, q = degrade_and_reconstruct(original, pct, cfg.low_freq_percent, seed, cfg.solver)
        p = out / f"{stem}_{pct:g}pct.pgm"
        p.write_bytes(encode_pgm(q))
        paths[pct] = p
    return paths


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **kw)
