"""Histogram-based information estimators over masked rasters.

Entropies are in bits throughout.  Every estimator is a pure function of
the included pixels: masked-out values never influence a result.
"""

from dataclasses import dataclass

import numpy as np

from bandselect import backend


@dataclass(frozen=True)
class DiscreteRaster:
    """A 2-D grid of quantized symbols in [0, alphabet_size)."""

    values: np.ndarray  # 2-D int32
    alphabet_size: int

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.size == 0:
            raise ValueError("raster must be a nonempty 2-D grid")
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")
        if v.min() < 0 or v.max() >= self.alphabet_size:
            raise ValueError("raster values outside [0, alphabet_size)")

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class PixelMask:
    """Per-pixel inclusion grid restricting where estimation happens."""

    included: np.ndarray  # 2-D bool

    def __post_init__(self):
        if self.included.ndim != 2 or self.included.size == 0:
            raise ValueError("mask must be a nonempty 2-D grid")

    @property
    def shape(self) -> tuple:
        return self.included.shape

    @property
    def n_included(self) -> int:
        return int(self.included.sum())

    @staticmethod
    def full(shape) -> "PixelMask":
        return PixelMask(np.ones(shape, dtype=bool))


@dataclass(frozen=True)
class JointHistogram:
    """Co-occurrence counts of two rasters over a shared mask."""

    counts: np.ndarray  # 2-D int64
    total: int

    @staticmethod
    def from_rasters(a: DiscreteRaster, b: DiscreteRaster, mask: PixelMask) -> "JointHistogram":
        _check_dims(a, b, mask)
        sel = mask.included
        if not sel.any():
            raise ValueError("empty estimation support")
        av = np.ascontiguousarray(a.values[sel], dtype=np.int32)
        bv = np.ascontiguousarray(b.values[sel], dtype=np.int32)
        counts = backend.joint_counts(av, bv, a.alphabet_size, b.alphabet_size)
        return JointHistogram(counts=counts, total=int(counts.sum()))

    def marginal_a(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        return self.counts.sum(axis=0)


@dataclass(frozen=True)
class FanoBounds:
    """Lower/upper bounds on classification error probability."""

    lower: float
    upper: float
    h_c: float
    i_cx: float
    n_classes: int


def _check_dims(*items) -> None:
    shapes = set()
    for item in items:
        if isinstance(item, DiscreteRaster):
            shapes.add(item.values.shape)
        elif isinstance(item, PixelMask):
            shapes.add(item.included.shape)
        else:
            shapes.add(np.asarray(item).shape)
    if len(shapes) > 1:
        raise ValueError(f"dimension mismatch: {sorted(shapes)}")


def quantize_band(raw: np.ndarray, bins: int, mask: PixelMask | None = None) -> DiscreteRaster:
    """Linear min-max binning of a real-valued raster into ``bins`` symbols.

    Value v maps to floor((v - min) * bins / (max - min)), clamped to
    bins - 1.  A constant raster maps entirely to symbol 0.  When a mask
    is given the min/max range comes from the included pixels only;
    excluded pixels are still binned (and clamped) by the same rule.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 2 or raw.size == 0:
        raise ValueError("raster must be a nonempty 2-D grid")
    if bins < 2:
        raise ValueError("bins must be >= 2")
    bad = ~np.isfinite(raw)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise ValueError(f"non-finite value at pixel (row={r}, col={c})")
    if mask is not None:
        _check_dims(raw, mask)
        ranged = raw[mask.included]
        if ranged.size == 0:
            raise ValueError("empty estimation support")
    else:
        ranged = raw
    lo = float(ranged.min())
    hi = float(ranged.max())
    if hi == lo:
        symbols = np.zeros(raw.shape, dtype=np.int32)
    else:
        scaled = np.floor((raw - lo) * (bins / (hi - lo)))
        symbols = np.clip(scaled, 0, bins - 1).astype(np.int32)
    return DiscreteRaster(values=symbols, alphabet_size=bins)


def _entropy_from_counts(counts: np.ndarray, total: int) -> float:
    p = counts[counts > 0].astype(np.float64) / float(total)
    return float(-(p * np.log2(p)).sum())


def entropy(x: DiscreteRaster, mask: PixelMask) -> float:
    """Shannon entropy H(X) in bits over the masked pixels."""
    _check_dims(x, mask)
    sel = mask.included
    if not sel.any():
        raise ValueError("empty estimation support")
    counts = np.bincount(x.values[sel].ravel(), minlength=x.alphabet_size)
    return _entropy_from_counts(counts, int(counts.sum()))


def joint_entropy(a: DiscreteRaster, b: DiscreteRaster, mask: PixelMask) -> float:
    """Joint entropy H(A, B) in bits over the masked pixels."""
    hist = JointHistogram.from_rasters(a, b, mask)
    return _entropy_from_counts(hist.counts.ravel(), hist.total)


def mutual_information(a: DiscreteRaster, b: DiscreteRaster, mask: PixelMask) -> float:
    """MI(A, B) = sum p(a,b) * log2(p(a,b) / (p(a) p(b))) in bits."""
    hist = JointHistogram.from_rasters(a, b, mask)
    total = float(hist.total)
    pab = hist.counts / total
    pa = hist.marginal_a() / total
    pb = hist.marginal_b() / total
    nz = hist.counts > 0
    ratio = pab[nz] / (pa[:, None] * pb[None, :])[nz]
    return float((pab[nz] * np.log2(ratio)).sum())


def normalized_mi(a: DiscreteRaster, b: DiscreteRaster, mask: PixelMask) -> float:
    """MI normalized by the geometric mean of the marginal entropies.

    Defined as 0 when either marginal entropy is 0 (nothing to share).
    """
    h_a = entropy(a, mask)
    h_b = entropy(b, mask)
    if h_a == 0.0 or h_b == 0.0:
        return 0.0
    return mutual_information(a, b, mask) / float(np.sqrt(h_a * h_b))


def fano_bounds(h_c: float, i_cx: float, n_classes: int) -> FanoBounds:
    """Error-probability bounds from class entropy and captured information.

    lower = (H(C) - I(C;X) - 1) / log2(Nc), upper = (H(C) - I(C;X)) / log2(Nc),
    both clamped into [0, 1].
    """
    if n_classes < 2:
        raise ValueError("n_classes must be >= 2")
    if i_cx < 0 or h_c < 0:
        raise ValueError("entropies must be nonnegative")
    if i_cx > h_c:
        raise ValueError("invalid information decomposition: I(C;X) > H(C)")
    denom = float(np.log2(n_classes))
    h_cond = h_c - i_cx
    lower = min(1.0, max(0.0, (h_cond - 1.0) / denom))
    upper = min(1.0, max(0.0, h_cond / denom))
    return FanoBounds(lower=lower, upper=upper, h_c=h_c, i_cx=i_cx, n_classes=n_classes)


def relevance_curve(cube, gt, bins: int) -> np.ndarray:
    """Per-band MI (bits) between each quantized band and the label map.

    Estimation is masked to the labeled pixels (label != 0); each band's
    binning range is taken over that mask.
    """
    if (gt.lines, gt.samples) != (cube.lines, cube.samples):
        raise ValueError("cube and ground truth differ in spatial dimensions")
    mask = gt.labeled_mask()
    if mask.n_included == 0:
        raise ValueError("ground truth has no labeled pixels")
    gt_raster = DiscreteRaster(
        values=gt.labels.astype(np.int32), alphabet_size=gt.n_classes + 1
    )
    out = np.empty(cube.bands, dtype=np.float64)
    for i in range(cube.bands):
        band = quantize_band(cube.data[i], bins, mask=mask)
        out[i] = mutual_information(band, gt_raster, mask)
    return out
