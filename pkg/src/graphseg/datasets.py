"""Synthetic data, IDX digit files, CSV point clouds, and trial splits.

Randomness always flows through numpy's PCG64 generator.  Per-trial streams
are derived by seeding with the pair ``(master_seed, trial_index)``, so
trials are independent, reproducible, and order-insensitive.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass

import numpy as np

from .build import PointCloud
from .exceptions import DataFormatError

__all__ = [
    "make_moons",
    "load_idx",
    "write_idx",
    "load_idx_pair",
    "subset_by_class",
    "TrialSplit",
    "trial_split",
    "csv_read",
    "csv_write",
]

_IMAGES_MAGIC = 0x00000803
_LABELS_MAGIC = 0x00000801


def make_moons(classes: int, per_class: int, noise_sd: float = 0.0,
               seed: int = 0) -> PointCloud:
    """Interleaved half-circle classes in the plane.

    Class ``j`` is sampled on the unit half-circle arc with angle
    theta ~ Uniform[0, pi] around center ``(j, 0)``; odd classes are
    flipped vertically and shifted up by 0.3, so consecutive arcs
    interleave.  Isotropic Gaussian noise of standard deviation
    ``noise_sd`` is added when nonzero.  Points are grouped by class and
    the cloud is bit-identical for a given seed.
    """
    if classes < 2:
        raise ValueError("need at least two classes")
    if per_class < 1:
        raise ValueError("per_class must be at least 1")
    if noise_sd < 0:
        raise ValueError("noise_sd must be nonnegative")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    blocks = []
    for j in range(classes):
        theta = rng.uniform(0.0, np.pi, per_class)
        x = j + np.cos(theta)
        if j % 2 == 0:
            y = np.sin(theta)
        else:
            y = 0.3 - np.sin(theta)
        pts = np.column_stack([x, y])
        if noise_sd > 0:
            pts = pts + rng.normal(0.0, noise_sd, size=pts.shape)
        blocks.append(pts)
    points = np.vstack(blocks)
    labels = np.repeat(np.arange(classes, dtype=np.intp), per_class)
    return PointCloud(points, labels)


def _read_exact(data: bytes, offset: int, count: int, what: str) -> bytes:
    if len(data) < offset + count:
        raise DataFormatError(
            f"IDX file truncated: {what} needs bytes {offset}..{offset + count - 1} "
            f"but file ends at byte {len(data)}")
    return data[offset:offset + count]


def load_idx(path) -> np.ndarray:
    """Load an IDX file of unsigned bytes.

    Image files (magic 0x00000803, three dimensions) come back as float64
    rows scaled to [0, 1], one flattened image per row.  Label files
    (magic 0x00000801, one dimension) come back as an integer vector.
    Violations raise DataFormatError naming the offending byte offset.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise DataFormatError(f"cannot read IDX file {path}: {exc}") from exc
    magic = struct.unpack(">I", _read_exact(data, 0, 4, "magic"))[0]
    if magic == _IMAGES_MAGIC:
        ndim = 3
    elif magic == _LABELS_MAGIC:
        ndim = 1
    else:
        raise DataFormatError(
            f"bad IDX magic 0x{magic:08x} at byte offset 0 "
            f"(expected 0x{_IMAGES_MAGIC:08x} for images or 0x{_LABELS_MAGIC:08x} for labels)")
    dims = []
    for i in range(ndim):
        off = 4 + 4 * i
        dims.append(struct.unpack(">I", _read_exact(data, off, 4, f"dimension {i}"))[0])
    header = 4 + 4 * ndim
    expected = int(np.prod(dims, dtype=np.int64))
    if len(data) - header != expected:
        raise DataFormatError(
            f"IDX payload mismatch: dimensions {tuple(dims)} require {expected} bytes "
            f"from offset {header}, file ends at byte {len(data)}")
    raw = np.frombuffer(data, dtype=np.uint8, offset=header)
    if ndim == 1:
        return raw.astype(np.intp)
    count, rows, cols = dims
    return raw.reshape(count, rows * cols).astype(np.float64) / 255.0


def write_idx(path, values: np.ndarray) -> None:
    """Write unsigned-byte data as IDX: 3-D arrays as images, 1-D as labels."""
    arr = np.ascontiguousarray(values, dtype=np.uint8)
    if arr.ndim == 3:
        magic = _IMAGES_MAGIC
    elif arr.ndim == 1:
        magic = _LABELS_MAGIC
    else:
        raise ValueError(f"expected a 1-D label or 3-D image array, got ndim={arr.ndim}")
    with open(path, "wb") as fh:
        fh.write(struct.pack(">I", magic))
        for dim in arr.shape:
            fh.write(struct.pack(">I", dim))
        fh.write(arr.tobytes())


def load_idx_pair(images_path, labels_path) -> tuple[np.ndarray, np.ndarray]:
    """Load matched image and label IDX files, checking the counts agree."""
    X = load_idx(images_path)
    y = load_idx(labels_path)
    if X.ndim != 2:
        raise DataFormatError(f"{images_path} is not an image file")
    if y.ndim != 1:
        raise DataFormatError(f"{labels_path} is not a label file")
    if X.shape[0] != y.shape[0]:
        raise DataFormatError(
            f"image count {X.shape[0]} does not match label count {y.shape[0]}")
    return X, y


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(np.random.SeedSequence(rng))


def subset_by_class(labels, classes, per_class: int, rng) -> np.ndarray:
    """Choose ``per_class`` indices of each class without replacement.

    ``rng`` is a numpy Generator or a seed.  Selected indices are returned
    grouped by class in the order given; a class with too few members is an
    error.
    """
    labels = np.asarray(labels)
    rng = _as_rng(rng)
    picks = []
    for c in classes:
        members = np.flatnonzero(labels == c)
        if members.size < per_class:
            raise ValueError(
                f"class {c} has {members.size} members, cannot draw {per_class}")
        picks.append(np.sort(rng.choice(members, size=per_class, replace=False)))
    return np.concatenate(picks)


@dataclass(frozen=True)
class TrialSplit:
    """Labeled indices for one benchmark trial plus its RNG stream identity."""

    indices_by_class: tuple
    trial: int
    stream_key: tuple

    @property
    def indices(self) -> np.ndarray:
        return np.concatenate(self.indices_by_class)


def trial_split(labels, classes, per_class: int, master_seed: int,
                trial: int) -> TrialSplit:
    """Per-trial labeled subset drawn from the stream ``(master_seed, trial)``."""
    rng = np.random.default_rng(np.random.SeedSequence((master_seed, trial)))
    picked = subset_by_class(labels, classes, per_class, rng)
    parts = np.split(picked, len(classes))
    return TrialSplit(indices_by_class=tuple(parts), trial=trial,
                      stream_key=(master_seed, trial))


def _parse_float(token: str, row: int, col: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DataFormatError(f"row {row}: column {col} is not a number: {token!r}") from None
    if not np.isfinite(value):
        raise DataFormatError(f"row {row}: column {col} overflows to {value}")
    return value


def csv_read(path) -> PointCloud:
    """Read a point cloud CSV: columns x_0..x_{d-1} then an integer label.

    A label of -1 marks an unknown class.  A header row is detected by a
    non-numeric first token and skipped.  Files are UTF-8 with LF endings.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise DataFormatError(f"cannot read CSV file {path}: {exc}") from exc
    if not rows:
        raise DataFormatError(f"{path}: empty CSV file")
    start = 0
    try:
        float(rows[0][0])
    except ValueError:
        start = 1
    if start == len(rows):
        raise DataFormatError(f"{path}: CSV has a header but no data rows")
    width = len(rows[start])
    if width < 2:
        raise DataFormatError(f"row {start + 1}: need at least one coordinate and a label")
    points = np.empty((len(rows) - start, width - 1))
    labels = np.empty(len(rows) - start, dtype=np.intp)
    for i, row in enumerate(rows[start:], start=start):
        if len(row) != width:
            raise DataFormatError(f"row {i + 1}: expected {width} columns, got {len(row)}")
        for j in range(width - 1):
            points[i - start, j] = _parse_float(row[j].strip(), i + 1, j)
        tok = row[-1].strip()
        try:
            labels[i - start] = int(tok)
        except ValueError:
            raise DataFormatError(f"row {i + 1}: label is not an integer: {tok!r}") from None
    return PointCloud(points, labels)


def csv_write(path, pc: PointCloud, predictions=None) -> None:
    """Write a point cloud CSV; with predictions, append a predicted column.

    Floats use shortest round-trip formatting, so read-back parses to the
    same values.
    """
    d = pc.points.shape[1]
    header = [f"x_{j}" for j in range(d)] + ["label"]
    if predictions is not None:
        predictions = np.asarray(predictions, dtype=np.intp).ravel()
        if predictions.size != pc.n:
            raise ValueError("predictions length must match point count")
        header.append("predicted")
    labels = pc.labels if pc.labels is not None else np.full(pc.n, -1, dtype=np.intp)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(pc.n):
            row = [repr(float(v)) for v in pc.points[i]]
            row.append(str(int(labels[i])))
            if predictions is not None:
                row.append(str(int(predictions[i])))
            writer.writerow(row)
