#!/usr/bin/env python3
"""Fetch the ORL (AT&T) face database and write it as ``sN/M.pgm``.

The only copy reachable through a plain package index is the one bundled in
the ``nimfa`` wheel. That copy went through an LF -> CRLF conversion, so 150
of the 400 files have every 0x0A byte in the raster turned into 0x0D 0x0A.
The conversion is undone here. Two files (s8/10, s9/8) also contain a real
0x0D 0x0A pair in the raster, which the conversion left untouched; for those
the single ambiguous pair is kept at the position that gives the smoothest
image (lowest anisotropic total variation).

Usage: python scripts/fetch_orl.py [--out data/ORL_faces] [--wheel PATH]
"""
import argparse
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

import numpy as np

WIDTH, HEIGHT = 92, 112
PREFIX = "nimfa/datasets/ORL_faces/"


def _tv(raster: bytes) -> float:
    a = np.frombuffer(raster, np.uint8).astype(float).reshape(HEIGHT, WIDTH)
    return float(np.abs(np.diff(a, axis=0)).sum() + np.abs(np.diff(a, axis=1)).sum())


def repair(blob: bytes) -> bytes:
    """Undo a text-mode LF -> CRLF conversion of a P5 file."""
    if not blob.startswith(b"P5\r\n"):
        return blob
    header = b"P5\r\n%d %d\r\n255\r\n" % (WIDTH, HEIGHT)
    if not blob.startswith(header):
        raise ValueError("unexpected header")
    body = blob[len(header):]
    n = WIDTH * HEIGHT
    fixed = body.replace(b"\r\n", b"\n")
    if len(fixed) == n:
        return b"P5\n%d %d\n255\n" % (WIDTH, HEIGHT) + fixed
    if len(fixed) != n - 1:
        raise ValueError(f"cannot repair: raster has {len(fixed)} bytes")
    best = None
    start = body.find(b"\r\n")
    while start >= 0:
        cand = (body[:start].replace(b"\r\n", b"\n") + b"\r\n"
                + body[start + 2:].replace(b"\r\n", b"\n"))
        score = _tv(cand)
        if best is None or score < best[0]:
            best = (score, cand)
        start = body.find(b"\r\n", start + 1)
    return b"P5\n%d %d\n255\n" % (WIDTH, HEIGHT) + best[1]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data" / "ORL_faces"))
    ap.add_argument("--wheel", help="path to an already downloaded nimfa wheel")
    args = ap.parse_args(argv)

    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel
        if wheel is None:
            subprocess.run([sys.executable, "-m", "pip", "download", "--no-deps", "-q",
                            "-d", tmp, "nimfa==1.4.0"], check=True)
            wheel = next(Path(tmp).glob("nimfa-*.whl"))
        out = Path(args.out)
        count = 0
        with zipfile.ZipFile(wheel) as zf:
            for name in zf.namelist():
                if not (name.startswith(PREFIX) and name.endswith(".pgm")):
                    continue
                dest = out / name[len(PREFIX):]
                dest.parent.mkdir(parents=True, exist_ok=True)
                dest.write_bytes(repair(zf.read(name)))
                count += 1
    print(f"wrote {count} images to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
