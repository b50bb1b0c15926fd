"""Cube and ground-truth containers, raw-binary I/O, and labeled splits.

On-disk cube format: a raw binary file next to a JSON sidecar declaring
``bands``, ``lines``, ``samples``, ``dtype`` ("u16" or "f32"),
``interleave`` ("bsq", "bil" or "bip") and ``byte_order`` ("little" or
"big").  Whatever the on-disk interleave, the in-memory layout is always
band-major (bands, lines, samples).

Ground truth is a plain-text grid of integer labels (one row per line,
space separated, 0 = unlabeled), or the same raw+sidecar scheme.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from bandselect.info_theory import PixelMask
from bandselect.rng import PortableRng

_DTYPES = {"u16": np.dtype(np.uint16), "f32": np.dtype(np.float32)}
_INTERLEAVES = ("bsq", "bil", "bip")


@dataclass(frozen=True)
class HsiCube:
    """An ordered band-major stack of raw-valued bands."""

    data: np.ndarray  # (bands, lines, samples)

    def __post_init__(self):
        if self.data.ndim != 3 or self.data.shape[0] < 1:
            raise ValueError("cube data must be (bands, lines, samples) with bands >= 1")

    @property
    def bands(self) -> int:
        return self.data.shape[0]

    @property
    def lines(self) -> int:
        return self.data.shape[1]

    @property
    def samples(self) -> int:
        return self.data.shape[2]


@dataclass(frozen=True)
class GroundTruthMap:
    """Per-pixel class labels; 0 marks unlabeled pixels."""

    labels: np.ndarray  # 2-D int32
    n_classes: int

    def __post_init__(self):
        lab = self.labels
        if lab.ndim != 2 or lab.size == 0:
            raise ValueError("label grid must be a nonempty 2-D grid")
        if lab.min() < 0 or lab.max() > self.n_classes:
            raise ValueError("labels outside [0, n_classes]")

    @property
    def lines(self) -> int:
        return self.labels.shape[0]

    @property
    def samples(self) -> int:
        return self.labels.shape[1]

    @property
    def n_labeled(self) -> int:
        return int((self.labels != 0).sum())

    def labeled_mask(self) -> PixelMask:
        return PixelMask(self.labels != 0)


@dataclass(frozen=True)
class TrainTestSplit:
    """Disjoint train/test pixel coordinates covering all labeled pixels."""

    train: np.ndarray  # (k, 2) int64 row/col pairs
    test: np.ndarray
    seed: int


def _read_header(header_path: Path) -> dict:
    with open(header_path, encoding="utf-8") as fh:
        header = json.load(fh)
    for key in ("bands", "lines", "samples", "dtype", "interleave", "byte_order"):
        if key not in header:
            raise ValueError(f"sidecar {header_path} missing field '{key}'")
    if header["dtype"] not in _DTYPES:
        raise ValueError(f"unsupported dtype '{header['dtype']}' (expected u16 or f32)")
    if header["interleave"] not in _INTERLEAVES:
        raise ValueError(f"unknown interleave '{header['interleave']}'")
    if header["byte_order"] not in ("little", "big"):
        raise ValueError(f"unknown byte_order '{header['byte_order']}'")
    for key in ("bands", "lines", "samples"):
        if int(header[key]) < 1:
            raise ValueError(f"sidecar field '{key}' must be >= 1")
    return header


def load_cube(data_path, header_path=None) -> HsiCube:
    """Read a raw cube described by its JSON sidecar into band-major layout."""
    data_path = Path(data_path)
    header_path = Path(header_path) if header_path else data_path.with_suffix(".json")
    header = _read_header(header_path)
    bands, lines, samples = int(header["bands"]), int(header["lines"]), int(header["samples"])
    dtype = _DTYPES[header["dtype"]]
    expected = bands * lines * samples * dtype.itemsize
    raw = data_path.read_bytes()
    if len(raw) != expected:
        raise ValueError(
            f"{data_path}: expected {expected} bytes "
            f"({bands}x{lines}x{samples} {header['dtype']}), found {len(raw)}"
        )
    order = "<" if header["byte_order"] == "little" else ">"
    flat = np.frombuffer(raw, dtype=dtype.newbyteorder(order))
    interleave = header["interleave"]
    if interleave == "bsq":
        data = flat.reshape(bands, lines, samples)
    elif interleave == "bil":
        data = flat.reshape(lines, bands, samples).transpose(1, 0, 2)
    else:  # bip
        data = flat.reshape(lines, samples, bands).transpose(2, 0, 1)
    return HsiCube(data=np.ascontiguousarray(data.astype(dtype)))


def save_cube(cube: HsiCube, data_path, dtype: str = "u16",
              interleave: str = "bsq", byte_order: str = "little") -> None:
    """Write a cube as raw binary plus its JSON sidecar."""
    if dtype not in _DTYPES:
        raise ValueError(f"unsupported dtype '{dtype}' (expected u16 or f32)")
    if interleave not in _INTERLEAVES:
        raise ValueError(f"unknown interleave '{interleave}'")
    data_path = Path(data_path)
    arr = cube.data.astype(_DTYPES[dtype])
    if interleave == "bil":
        arr = arr.transpose(1, 0, 2)
    elif interleave == "bip":
        arr = arr.transpose(1, 2, 0)
    order = "<" if byte_order == "little" else ">"
    data_path.write_bytes(np.ascontiguousarray(arr).astype(arr.dtype.newbyteorder(order)).tobytes())
    header = {
        "bands": cube.bands,
        "lines": cube.lines,
        "samples": cube.samples,
        "dtype": dtype,
        "interleave": interleave,
        "byte_order": byte_order,
    }
    with open(data_path.with_suffix(".json"), "w", encoding="utf-8") as fh:
        json.dump(header, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_ground_truth(path) -> GroundTruthMap:
    """Read a label map from a text grid (or a raw file via its sidecar)."""
    path = Path(path)
    if path.suffix == ".json":
        header = _read_header(path)
        if int(header["bands"]) != 1:
            raise ValueError("ground-truth sidecar must declare a single band")
        cube = load_cube(path.with_suffix(".raw"), path)
        grid = cube.data[0]
        if not np.issubdtype(grid.dtype, np.integer):
            raise ValueError("ground-truth labels must be integers")
        labels = grid.astype(np.int32)
    else:
        rows = []
        width = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.split()
                if not parts:
                    continue
                try:
                    row = [int(p) for p in parts]
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: non-integer label") from exc
                if width is None:
                    width = len(row)
                elif len(row) != width:
                    raise ValueError(f"{path}:{lineno}: ragged row (expected {width} labels)")
                rows.append(row)
        if not rows:
            raise ValueError(f"{path}: empty label grid")
        labels = np.asarray(rows, dtype=np.int32)
    if labels.min() < 0:
        raise ValueError("negative labels are not allowed")
    return GroundTruthMap(labels=labels, n_classes=int(labels.max()))


def save_ground_truth(gt: GroundTruthMap, path) -> None:
    """Write a label map as a plain-text grid."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in gt.labels:
            fh.write(" ".join(str(int(v)) for v in row))
            fh.write("\n")


def split_labeled_pixels(gt: GroundTruthMap, fraction: float, seed: int) -> TrainTestSplit:
    """Seeded uniform split of the labeled pixels into train/test.

    |train| = round(fraction * labeled count); unlabeled pixels land in
    neither side.  Identical (gt, fraction, seed) gives an identical split.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must be in (0, 1)")
    coords = np.argwhere(gt.labels != 0).astype(np.int64)
    n = coords.shape[0]
    if n < 2:
        raise ValueError("need at least 2 labeled pixels to split")
    keys = PortableRng(seed).uniform(n)
    order = np.argsort(keys, kind="stable")
    n_train = int(round(fraction * n))
    train_idx = np.sort(order[:n_train])
    test_idx = np.sort(order[n_train:])
    return TrainTestSplit(train=coords[train_idx], test=coords[test_idx], seed=seed)
