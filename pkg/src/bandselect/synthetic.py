"""Synthetic band suites with planted relevance/redundancy structure.

Each band is a per-pixel recoloring of the label map (class label ->
reflectance level) with additive Gaussian noise, optionally with some
classes erased to the background level.  On top of that the spec can
plant near-duplicate pairs (copy = source + small independent noise),
disjoint pairs (complementary class coverage) and pure-noise bands, so a
selection run has known right answers to recover.

All randomness flows through :class:`bandselect.rng.PortableRng`; band
``i`` draws from substream ``i``, making every band a pure function of
(gt, spec, seed, i).
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from bandselect.data_model import GroundTruthMap, HsiCube
from bandselect.rng import PortableRng


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a synthetic suite; indices refer to bands 0..n_bands-1."""

    n_bands: int
    class_means: tuple  # reflectance level per label, index 0 = background
    noise_sigma: float
    erase_classes: dict  # band -> tuple of class labels rendered as background
    duplicate_pairs: tuple  # (source, copy, extra_noise) triples
    disjoint_pairs: tuple  # (band_a, band_b) with complementary coverage
    noise_only_bands: tuple = field(default_factory=tuple)

    def validate(self, gt: GroundTruthMap) -> None:
        if self.n_bands < 1:
            raise ValueError("n_bands must be >= 1")
        if len(self.class_means) != gt.n_classes + 1:
            raise ValueError(
                f"class_means must list {gt.n_classes + 1} levels (background + classes)"
            )
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")

        def check_band(i):
            if not 0 <= i < self.n_bands:
                raise ValueError(f"band index {i} outside [0, {self.n_bands})")

        for i in self.noise_only_bands:
            check_band(i)
        noise = set(self.noise_only_bands)
        copies = set()
        for src, copy, extra in self.duplicate_pairs:
            check_band(src)
            check_band(copy)
            if extra < 0:
                raise ValueError("duplicate extra_noise must be nonnegative")
            if src == copy or copy in copies:
                raise ValueError(f"invalid duplicate pair ({src}, {copy})")
            copies.add(copy)
            if copy in self.erase_classes:
                raise ValueError(f"duplicate copy {copy} cannot have its own erasures")
        for src, copy, _ in self.duplicate_pairs:
            # a copy may not source another copy or be noise-only
            if src in copies or src in noise or copy in noise:
                raise ValueError(f"invalid duplicate pair ({src}, {copy})")
        for band, classes in self.erase_classes.items():
            check_band(band)
            if band in self.noise_only_bands:
                raise ValueError(f"noise-only band {band} cannot have erasures")
            for c in classes:
                if not 1 <= c <= gt.n_classes:
                    raise ValueError(f"erased class {c} outside [1, {gt.n_classes}]")
        for a, b in self.disjoint_pairs:
            check_band(a)
            check_band(b)
            covered_a = self._covered(a, gt.n_classes)
            covered_b = self._covered(b, gt.n_classes)
            if covered_a & covered_b:
                raise ValueError(
                    f"disjoint pair ({a}, {b}) shares classes {sorted(covered_a & covered_b)}"
                )

    def _covered(self, band: int, n_classes: int) -> set:
        erased = set(self.erase_classes.get(band, ()))
        return set(range(1, n_classes + 1)) - erased

    def to_json_dict(self) -> dict:
        return {
            "n_bands": self.n_bands,
            "class_means": list(self.class_means),
            "noise_sigma": self.noise_sigma,
            "erase_classes": {str(k): list(v) for k, v in sorted(self.erase_classes.items())},
            "duplicate_pairs": [list(p) for p in self.duplicate_pairs],
            "disjoint_pairs": [list(p) for p in self.disjoint_pairs],
            "noise_only_bands": list(self.noise_only_bands),
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "SyntheticSpec":
        return SyntheticSpec(
            n_bands=int(doc["n_bands"]),
            class_means=tuple(float(v) for v in doc["class_means"]),
            noise_sigma=float(doc["noise_sigma"]),
            erase_classes={int(k): tuple(v) for k, v in doc.get("erase_classes", {}).items()},
            duplicate_pairs=tuple(
                (int(s), int(c), float(e)) for s, c, e in doc.get("duplicate_pairs", [])
            ),
            disjoint_pairs=tuple((int(a), int(b)) for a, b in doc.get("disjoint_pairs", [])),
            noise_only_bands=tuple(int(b) for b in doc.get("noise_only_bands", [])),
        )

    @staticmethod
    def load(path) -> "SyntheticSpec":
        with open(Path(path), encoding="utf-8") as fh:
            return SyntheticSpec.from_json_dict(json.load(fh))

    def save(self, path) -> None:
        with open(Path(path), "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def default_spec(n_classes: int = 16) -> SyntheticSpec:
    """The default 19-band suite used by the tests and the CLI.

    Bands 0-10: straight recolorings with progressively more classes
    erased (so their relevance values spread out).  Bands 11/12 duplicate
    bands 3/7 with small extra noise.  Bands 13/14 cover complementary
    halves of the class set.  Bands 15-18 are pure noise.
    """
    third = max(1, n_classes // 3)
    means = tuple(1000.0 + 450.0 * c for c in range(n_classes + 1))
    erase = {
        1: (n_classes,),
        2: tuple(range(n_classes - 1, n_classes + 1)),
        4: (1,),
        5: (1, 2),
        6: (2, n_classes),
        8: (3,),
        9: (1, n_classes - 1, n_classes),
        10: (4, 5),
        # the disjoint pair covers two small non-overlapping class subsets
        13: tuple(range(third + 1, n_classes + 1)),
        14: tuple(range(1, third + 1)) + tuple(range(2 * third + 1, n_classes + 1)),
    }
    return SyntheticSpec(
        n_bands=19,
        class_means=means,
        noise_sigma=180.0,
        erase_classes=erase,
        duplicate_pairs=((3, 11, 25.0), (7, 12, 25.0)),
        disjoint_pairs=((13, 14),),
        noise_only_bands=(15, 16, 17, 18),
    )


def synthesize_bands(gt: GroundTruthMap, spec: SyntheticSpec, seed: int) -> HsiCube:
    """Render the suite described by ``spec`` over the label map.

    Deterministic per (gt, spec, seed); output dtype is float32.
    """
    spec.validate(gt)
    lines, samples = gt.labels.shape
    n_px = lines * samples
    labels = gt.labels.ravel()
    means = np.asarray(spec.class_means, dtype=np.float64)
    lo, hi = float(means.min()), float(means.max())
    root = PortableRng(seed)

    copies = {copy: (src, extra) for src, copy, extra in spec.duplicate_pairs}
    bands = np.empty((spec.n_bands, n_px), dtype=np.float64)
    for i in range(spec.n_bands):  # everything except duplicate copies
        if i in copies:
            continue
        rng = root.spawn(i)
        if i in spec.noise_only_bands:
            bands[i] = lo + (hi - lo) * rng.uniform(n_px)
        else:
            shifted = labels.copy()
            for c in spec.erase_classes.get(i, ()):
                shifted[shifted == c] = 0
            bands[i] = means[shifted] + spec.noise_sigma * rng.normal(n_px)
    for i, (src, extra) in copies.items():
        bands[i] = bands[src] + extra * root.spawn(i).normal(n_px)
    return HsiCube(data=bands.reshape(spec.n_bands, lines, samples).astype(np.float32))


def make_synthetic_gt(lines: int, samples: int, n_classes: int,
                      labeled_fraction: float, seed: int) -> GroundTruthMap:
    """Seeded random label map: uniform classes, rest left unlabeled."""
    if n_classes < 1:
        raise ValueError("n_classes must be >= 1")
    if not 0.0 < labeled_fraction <= 1.0:
        raise ValueError("labeled_fraction must be in (0, 1]")
    rng = PortableRng(seed)
    n = lines * samples
    labeled = rng.uniform(n) < labeled_fraction
    classes = np.floor(rng.uniform(n) * n_classes).astype(np.int32) + 1
    classes = np.minimum(classes, n_classes)
    labels = np.where(labeled, classes, 0).reshape(lines, samples).astype(np.int32)
    return GroundTruthMap(labels=labels, n_classes=n_classes)
