"""Command line entry point: ``csface run | export | psnr``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .dataset_io import read_pgm
from .errors import CsFaceError
from .experiment import DEFAULT_PERCENTAGES, ExperimentConfig, export_reconstructions, run
from .metrics import psnr
from .tv import SolverConfig


def _percent_list(text: str):
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad percentage list {text!r}") from None
    return [int(v) if v.is_integer() else v for v in values]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="csface", description="Compressive-sensing face recognition benchmark")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="full benchmark over all retention percentages")
    r.add_argument("--dataset", required=True, help="sN/M.pgm tree or manifest file")
    r.add_argument("--out", required=True)
    r.add_argument("--percent", type=_percent_list, default=list(DEFAULT_PERCENTAGES))
    r.add_argument("--low-freq", type=float, default=1.0)
    r.add_argument("--split-seed", type=int, default=42)
    r.add_argument("--mask-seed", type=int, default=0)
    r.add_argument("--iters", type=int, default=SolverConfig.max_iters)
    r.add_argument("--epsilon", type=float, default=SolverConfig.epsilon)
    r.add_argument("--jobs", type=int, default=1)

    e = sub.add_parser("export", help="write reconstructions of one face as PGM files")
    e.add_argument("--dataset", required=True)
    e.add_argument("--subject", required=True)
    e.add_argument("--index", type=int, required=True)
    e.add_argument("--percent", type=_percent_list, default=list(DEFAULT_PERCENTAGES))
    e.add_argument("--out", required=True)
    e.add_argument("--low-freq", type=float, default=1.0)
    e.add_argument("--mask-seed", type=int, default=0)
    e.add_argument("--iters", type=int, default=SolverConfig.max_iters)
    e.add_argument("--epsilon", type=float, default=SolverConfig.epsilon)

    p = sub.add_parser("psnr", help="PSNR between two PGM files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    return ap


def _config(args, **extra) -> ExperimentConfig:
    solver = replace(SolverConfig(), max_iters=args.iters, epsilon=args.epsilon)
    return ExperimentConfig(dataset_root=args.dataset, output_dir=args.out, percentages=args.percent,
                            low_freq_percent=args.low_freq, mask_seed=args.mask_seed, solver=solver, **extra)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = _config(args, split_seed=args.split_seed, jobs=args.jobs)
            report = run(cfg)
            print(f"baseline accuracy {report.baseline_accuracy:.4f}")
            for r in report.records:
                print(f"{r.percent:>6g}%  psnr {r.mean_psnr_db:7.2f} dB  accuracy {r.accuracy_fraction:.4f}"
                      f"  time {r.recon_wall_time_s:8.2f} s  n={r.images_count}")
        elif args.command == "export":
            for key, path in export_reconstructions(_config(args), args.subject, args.index).items():
                print(f"{key}\t{path}")
        else:
            print(psnr(read_pgm(args.file_a), read_pgm(args.file_b)).to_dict()["psnr_db"])
    except (CsFaceError, OSError, ValueError) as exc:
        print(f"csface: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
