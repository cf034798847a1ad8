import os
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]


def dataset_root():
    return Path(os.environ.get("CSFACE_DATASET", ROOT / "data" / "ORL_faces"))


@pytest.fixture(scope="session")
def orl_root():
    root = dataset_root()
    if not (root / "s1" / "1.pgm").is_file():
        pytest.skip(f"ORL gallery not found at {root} (run scripts/fetch_orl.py or set CSFACE_DATASET)")
    return root


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_gallery_dir(path: Path, subjects=3, per_subject=10, shape=(16, 12), seed=0):
    """Write a tiny synthetic sN/M.pgm tree; returns the root."""
    from csface.dataset_io import write_pgm

    g = np.random.default_rng(seed)
    for s in range(1, subjects + 1):
        base = g.integers(0, 256, size=shape)
        for m in range(1, per_subject + 1):
            noise = g.integers(-10, 11, size=shape)
            write_pgm(path / f"s{s}" / f"{m}.pgm", np.clip(base + noise, 0, 255))
    return path


# acceptance criteria report ---------------------------------------------------

CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
