"""Labeled point sets, the canonical synthetic generators and CSV I/O.

CSV layout: header ``y,x1,...,xd`` followed by one row per point, floats
written with 17 significant digits so that a write/read cycle is exact.

Random generators use numpy's ``default_rng`` (PCG64) seeded with a 64-bit
unsigned integer.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SUPPORT_VECTORS = np.array([[0.5, 1.5], [1.5, 0.5]])
DEFAULT_FILLERS = (2, 3, 4)


class DatasetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable labeled point cloud; ``points`` is (n, d), ``labels`` in {-1, +1}."""

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        X = np.array(self.points, dtype=np.float64, copy=True)
        y = np.array(self.labels, dtype=np.float64, copy=True).reshape(-1)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise DatasetError(f"points must be a non-empty (n, d) array, got shape {X.shape}")
        if y.shape[0] != X.shape[0]:
            raise DatasetError(f"{y.shape[0]} labels for {X.shape[0]} points")
        if not np.all(np.isfinite(X)):
            raise DatasetError("points contain non-finite coordinates")
        if not np.all((y == 1.0) | (y == -1.0)):
            raise DatasetError("labels must be exactly -1 or +1")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "points", X)
        object.__setattr__(self, "labels", y)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def signed_points(self) -> np.ndarray:
        """Rows ``y_j * x_j``; every margin is a dot product with these."""
        return self.labels[:, None] * self.points

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.points.shape == other.points.shape
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.labels, other.labels)
        )

    def __hash__(self):
        return hash((self.points.tobytes(), self.labels.tobytes()))


def paper_dataset(filler_multipliers=DEFAULT_FILLERS) -> Dataset:
    """Four support vectors at +-(0.5, 1.5), +-(1.5, 0.5) plus scaled copies.

    Every filler ``m * v`` keeps the label of ``v`` and sits at margin ``m``
    under ``w* = (0.5, 0.5)``. With the default multipliers {2, 3, 4} the set
    has 16 points and the regularization path is flat for lambda <= 8/n = 0.5.
    """
    mults = list(filler_multipliers)
    for m in mults:
        if isinstance(m, bool) or not float(m).is_integer():
            raise DatasetError(f"filler multiplier {m!r} is not an integer")
        if int(m) < 2:
            raise DatasetError(f"filler multiplier {m!r} must be >= 2")
    mults = [int(m) for m in mults]
    if len(set(mults)) != len(mults):
        raise DatasetError("filler multipliers must be distinct")

    base = np.vstack([SUPPORT_VECTORS, -SUPPORT_VECTORS])
    base_y = np.array([1.0, 1.0, -1.0, -1.0])
    pts = [base]
    ys = [base_y]
    for m in sorted(mults):
        pts.append(m * base)
        ys.append(base_y)
    return Dataset(np.vstack(pts), np.concatenate(ys))


def scaled_dataset(base: Dataset, axis: int, factor: float) -> Dataset:
    if not 0 <= axis < base.d:
        raise DatasetError(f"axis {axis} out of range for d={base.d}")
    if factor == 0:
        raise DatasetError("scale factor must be nonzero")
    X = base.points.copy()
    X[:, axis] *= factor
    return Dataset(X, base.labels)


def random_separable(seed: int, n: int, d: int, margin: float = 0.1) -> Dataset:
    """Gaussian cloud relabeled/pushed so that ``y_j x_j . u >= margin`` for a random unit ``u``."""
    if n < 2 or d < 1:
        raise DatasetError("need n >= 2 and d >= 1")
    if not margin > 0:
        raise DatasetError("margin must be positive")
    rng = np.random.default_rng(np.uint64(seed))
    u = rng.standard_normal(d)
    u /= np.linalg.norm(u)
    X = rng.standard_normal((n, d))
    y = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    # both classes present
    y[0], y[1] = 1.0, -1.0
    along = margin + rng.exponential(1.0, n)
    X += ((y * along) - X @ u)[:, None] * u[None, :]
    return Dataset(X, y)


def write_csv(dataset: Dataset, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(",".join(["y"] + [f"x{i + 1}" for i in range(dataset.d)]) + "\n")
        for yj, xj in zip(dataset.labels, dataset.points):
            fh.write(",".join([f"{int(yj)}"] + [f"{v:.17g}" for v in xj]) + "\n")


def read_csv(path) -> Dataset:
    path = Path(path)
    rows = []
    labels = []
    width = None
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if lineno == 1 and row[0].strip().lower() == "y":
                width = len(row)
                continue
            if width is None:
                width = len(row)
            if len(row) != width:
                raise DatasetError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
            if width < 2:
                raise DatasetError(f"{path}:{lineno}: need a label and at least one coordinate")
            try:
                label = float(row[0])
            except ValueError:
                raise DatasetError(f"{path}:{lineno}: label {row[0]!r} is not numeric") from None
            if label not in (1.0, -1.0):
                raise DatasetError(f"{path}:{lineno}: label must be +1 or -1, got {row[0]!r}")
            try:
                coords = [float(v) for v in row[1:]]
            except ValueError as exc:
                raise DatasetError(f"{path}:{lineno}: non-numeric coordinate ({exc})") from None
            if not all(np.isfinite(coords)):
                raise DatasetError(f"{path}:{lineno}: non-finite coordinate")
            labels.append(label)
            rows.append(coords)
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    return Dataset(np.array(rows), np.array(labels))
