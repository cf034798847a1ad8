"""Face gallery loading (binary PGM), validation and train/test splitting.

Images are handled as 2-D float64 numpy arrays of shape ``(height, width)``
holding intensities in [0, 255]; conversion to bytes happens only when a
PGM is written.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, FormatError, NotFound, SplitError
from .rng import SplitMix64


# --------------------------------------------------------------------------
# images and PGM I/O
# --------------------------------------------------------------------------

def validate_image(pixels) -> np.ndarray:
    """Return ``pixels`` as a float64 (H, W) array, checking the value range."""
    arr = np.asarray(pixels, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionMismatch(f"expected a non-empty 2-D image, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    if arr.min() < 0 or arr.max() > 255:
        raise ValueError("pixel values must lie in [0, 255]")
    return arr


def _header_tokens(data: bytes, count: int, name: str) -> Tuple[List[bytes], int]:
    tokens, pos, n = [], 0, len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise FormatError(f"{name}: truncated PGM header")
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    if pos >= n or not data[pos:pos + 1].isspace():
        raise FormatError(f"{name}: missing whitespace after PGM header")
    return tokens, pos + 1


def decode_pgm(data: bytes, name: str = "<bytes>") -> np.ndarray:
    """Decode a binary (P5) PGM with maxval 255."""
    tokens, offset = _header_tokens(data, 4, name)
    if tokens[0] != b"P5":
        raise FormatError(f"{name}: unsupported PGM variant {tokens[0].decode(errors='replace')!r} (only P5)")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError(f"{name}: non-numeric PGM header field") from None
    if width <= 0 or height <= 0:
        raise FormatError(f"{name}: bad dimensions {width}x{height}")
    if maxval != 255:
        raise FormatError(f"{name}: maxval {maxval} unsupported (need 255)")
    raster = data[offset:offset + width * height]
    if len(raster) < width * height:
        raise FormatError(f"{name}: truncated raster ({len(raster)} of {width * height} bytes)")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).astype(np.float64)


def read_pgm(path) -> np.ndarray:
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise NotFound(f"{path}: no such file") from None
    return decode_pgm(data, str(path))


def quantize(image) -> np.ndarray:
    """Round to the nearest grey level and clamp to [0, 255]."""
    return np.clip(np.rint(np.asarray(image, dtype=np.float64)), 0, 255).astype(np.uint8)


def encode_pgm(image) -> bytes:
    q = quantize(image)
    height, width = q.shape
    return b"P5\n%d %d\n255\n" % (width, height) + q.tobytes()


def write_pgm(path, image) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_pgm(image))
    return path


# --------------------------------------------------------------------------
# gallery
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LabeledImage:
    subject: str
    index: int  # 1-based position within the subject
    pixels: np.ndarray = field(repr=False, compare=False)


@dataclass
class Gallery:
    subjects: List[str]
    images: List[List[np.ndarray]]
    width: int
    height: int
    paths: List[List[str]] = field(default_factory=list)

    def __post_init__(self):
        if len(set(self.subjects)) != len(self.subjects):
            raise ValueError("subject identifiers must be unique")
        if len(self.images) != len(self.subjects):
            raise ValueError("one image list per subject required")
        for imgs in self.images:
            for img in imgs:
                if img.shape != (self.height, self.width):
                    raise DimensionMismatch(
                        f"image of shape {img.shape} in a {self.height}x{self.width} gallery")

    def __len__(self) -> int:
        return sum(len(imgs) for imgs in self.images)

    def labeled(self) -> List[LabeledImage]:
        return [LabeledImage(s, i + 1, img)
                for s, imgs in zip(self.subjects, self.images)
                for i, img in enumerate(imgs)]

    def get(self, subject: str, index: int) -> np.ndarray:
        try:
            k = self.subjects.index(subject)
        except ValueError:
            raise NotFound(f"unknown subject {subject!r}") from None
        if not 1 <= index <= len(self.images[k]):
            raise NotFound(f"subject {subject!r} has no image {index}")
        return self.images[k][index - 1]

    def path(self, subject: str, index: int) -> str:
        self.get(subject, index)
        return self.paths[self.subjects.index(subject)][index - 1]


_SUBJECT_DIR = re.compile(r"^s(\d+)$")
_IMAGE_FILE = re.compile(r"^(\d+)\.pgm$", re.IGNORECASE)


def natural_key(label: str):
    """Sort key ordering ``s2`` before ``s10``."""
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", str(label))]


def _assemble(entries, root) -> Gallery:
    subjects, images, paths = [], [], []
    shape = None
    for subject, files in entries:
        imgs = []
        for f in files:
            img = read_pgm(f)
            if shape is None:
                shape = img.shape
            elif img.shape != shape:
                raise DimensionMismatch(
                    f"{f}: {img.shape[1]}x{img.shape[0]} differs from {shape[1]}x{shape[0]}")
            imgs.append(img)
        subjects.append(subject)
        images.append(imgs)
        paths.append([str(f) for f in files])
    if shape is None:
        raise NotFound(f"{root}: no images found")
    return Gallery(subjects, images, width=shape[1], height=shape[0], paths=paths)


def load_gallery(root_path) -> Gallery:
    """Load an ORL-style ``sN/M.pgm`` tree, subjects and images in numeric order."""
    root = Path(root_path)
    if not root.is_dir():
        raise NotFound(f"{root}: dataset directory not found")
    subject_dirs = sorted((d for d in root.iterdir() if d.is_dir() and _SUBJECT_DIR.match(d.name)),
                          key=lambda d: int(_SUBJECT_DIR.match(d.name).group(1)))
    entries = []
    for d in subject_dirs:
        files = sorted((f for f in d.iterdir() if _IMAGE_FILE.match(f.name)),
                       key=lambda f: int(_IMAGE_FILE.match(f.name).group(1)))
        if files:
            entries.append((d.name, files))
    return _assemble(entries, root)


def load_manifest(manifest_path) -> Gallery:
    """Load a gallery listed as ``path<TAB>subject_id`` lines (UTF-8).

    Relative paths are resolved against the manifest's directory. Subjects keep
    their order of first appearance, images their line order.
    """
    manifest = Path(manifest_path)
    if not manifest.is_file():
        raise NotFound(f"{manifest}: manifest not found")
    groups = {}
    for lineno, line in enumerate(manifest.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1].strip():
            raise FormatError(f"{manifest}:{lineno}: expected 'path<TAB>subject_id'")
        p = Path(parts[0])
        if not p.is_absolute():
            p = manifest.parent / p
        groups.setdefault(parts[1].strip(), []).append(p)
    return _assemble(groups.items(), manifest)


def open_gallery(path) -> Gallery:
    """Directory tree or manifest file, whichever ``path`` is."""
    p = Path(path)
    return load_manifest(p) if p.is_file() else load_gallery(p)


# --------------------------------------------------------------------------
# splitting
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 42
    per_subject: bool = True

    def __post_init__(self):
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must lie in (0, 1)")


def _train_count(fraction: float, n: int) -> int:
    count = int(Fraction(str(fraction)) * n)  # floor
    return min(max(count, 1), n - 1)


def split_gallery(g: Gallery, spec: SplitSpec) -> Tuple[List[LabeledImage], List[LabeledImage]]:
    """Seeded partition into (train, test).

    With ``per_subject`` each subject contributes ``floor(fraction * M)`` (at
    least 1, at most M-1) training images; the held-out indices are a uniform
    draw from the pinned generator, one generator shared over subjects in
    gallery order. Both lists are returned in gallery order.
    """
    if len(g) == 0:
        raise SplitError("empty gallery")
    gen = SplitMix64(spec.seed)
    train, test = [], []
    if spec.per_subject:
        for subject, imgs in zip(g.subjects, g.images):
            m = len(imgs)
            if m < 2:
                raise SplitError(f"subject {subject!r} has {m} image(s); need at least 2")
            held = set(gen.sample(range(m), m - _train_count(spec.train_fraction, m)))
            for i, img in enumerate(imgs):
                (test if i in held else train).append(LabeledImage(subject, i + 1, img))
    else:
        items = g.labeled()
        if len(items) < 2:
            raise SplitError("need at least 2 images")
        held = set(gen.sample(range(len(items)), len(items) - _train_count(spec.train_fraction, len(items))))
        for i, item in enumerate(items):
            (test if i in held else train).append(item)
    return train, test


def stack(items: Sequence[LabeledImage]) -> np.ndarray:
    return np.stack([it.pixels for it in items])
