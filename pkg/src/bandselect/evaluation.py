"""Classification harness and the threshold-grid sweep.

Classification uses raw (unquantized) reflectance; quantization only ever
feeds the information estimators.  The built-in classifier is 1-nearest
neighbor, deterministic by construction (ties go to the lowest train-row
index); feature matrices can be exported as CSV for external classifiers.
"""

import json
from dataclasses import dataclass

import numpy as np

from bandselect import backend
from bandselect.data_model import GroundTruthMap, HsiCube, TrainTestSplit, split_labeled_pixels
from bandselect.selection import Thresholds, algorithm2


@dataclass(frozen=True)
class FeatureMatrix:
    """One row per pixel, one column per selected band, labels aligned."""

    values: np.ndarray  # (n_pixels, n_bands) float64
    labels: np.ndarray  # (n_pixels,) int64


@dataclass(frozen=True)
class AccuracyReport:
    """Overall accuracy of one classification run."""

    n_bands: int
    accuracy: float  # percentage in [0, 100]
    thresholds: Thresholds | None
    seed: int
    classifier: str = "1nn"

    def to_json_dict(self) -> dict:
        doc = {
            "schema": "bandselect.accuracy/1",
            "n_bands": self.n_bands,
            "accuracy_pct": self.accuracy,
            "thresholds": None,
            "seed": self.seed,
            "classifier": self.classifier,
        }
        if self.thresholds is not None:
            doc["thresholds"] = {
                "relevance_bits": self.thresholds.th_relevance,
                "redundancy": self.thresholds.th_redundancy,
            }
        return doc


@dataclass(frozen=True)
class SweepCell:
    """One threshold couple: retained bands and (when usable) accuracy."""

    th_relevance: float
    th_redundancy: float
    n_bands: int
    accuracy: float | None  # None marks an absent cell (no usable subset)
    selected: tuple
    decision_log: tuple


@dataclass(frozen=True)
class SweepGrid:
    """Per-couple results over the full relevance x redundancy grid."""

    relevance_axis: tuple
    redundancy_axis: tuple
    cells: tuple  # row-major: relevance outer, redundancy inner
    seed: int
    bins: int


def extract_features(cube: HsiCube, selected, pixels, gt: GroundTruthMap) -> FeatureMatrix:
    """Reflectance vectors over the selected bands for the given pixels."""
    selected = list(selected)
    if not selected:
        raise ValueError("selected band list is empty")
    for b in selected:
        if not 0 <= b < cube.bands:
            raise ValueError(f"band index {b} outside [0, {cube.bands})")
    coords = np.asarray(pixels, dtype=np.int64)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise ValueError("pixels must be (n, 2) row/col coordinates")
    rows, cols = coords[:, 0], coords[:, 1]
    labels = gt.labels[rows, cols].astype(np.int64)
    if (labels == 0).any():
        bad = coords[labels == 0][0]
        raise ValueError(f"unlabeled pixel at (row={bad[0]}, col={bad[1]})")
    values = np.ascontiguousarray(
        cube.data[selected][:, rows, cols].T.astype(np.float64)
    )
    return FeatureMatrix(values=values, labels=labels)


def classify_1nn(train: FeatureMatrix, test: FeatureMatrix) -> np.ndarray:
    """Predicted labels for the test rows, nearest-train-row rule."""
    if train.values.shape[0] == 0:
        raise ValueError("train matrix is empty")
    if train.values.shape[1] != test.values.shape[1]:
        raise ValueError(
            f"column mismatch: train has {train.values.shape[1]}, "
            f"test has {test.values.shape[1]}"
        )
    return backend.nn_classify(train.values, train.labels, test.values)


def accuracy(predicted, truth) -> float:
    """Percentage of matching labels."""
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ValueError(f"length mismatch: {predicted.shape} vs {truth.shape}")
    if predicted.size == 0:
        raise ValueError("empty label vectors")
    return 100.0 * float((predicted == truth).sum()) / predicted.size


def evaluate_subset(cube: HsiCube, gt: GroundTruthMap, selected,
                    split: TrainTestSplit) -> float:
    """1-NN accuracy of a band subset on a fixed train/test split."""
    train = extract_features(cube, selected, split.train, gt)
    test = extract_features(cube, selected, split.test, gt)
    return accuracy(classify_1nn(train, test), test.labels)


def sweep(cube: HsiCube, gt: GroundTruthMap, relevance_axis, redundancy_axis,
          bins: int, split_seed: int, fraction: float = 0.5) -> SweepGrid:
    """Run the selection pipeline for every threshold couple.

    One split (from split_seed) serves every cell, so the grid isolates
    threshold effects from split noise.  Couples yielding an empty subset
    are recorded with n_bands 0 and no accuracy.
    """
    relevance_axis = tuple(float(v) for v in relevance_axis)
    redundancy_axis = tuple(float(v) for v in redundancy_axis)
    if not relevance_axis or not redundancy_axis:
        raise ValueError("threshold axes must be nonempty")
    split = split_labeled_pixels(gt, fraction, split_seed)
    acc_cache: dict = {}  # selected tuple -> accuracy (subsets repeat across couples)
    cells = []
    for th_rel in relevance_axis:
        for th_red in redundancy_axis:
            result = algorithm2(cube, gt, Thresholds(th_rel, th_red), bins)
            key = tuple(sorted(result.selected))
            if not key:
                acc = None
            elif key in acc_cache:
                acc = acc_cache[key]
            else:
                acc = evaluate_subset(cube, gt, result.selected, split)
                acc_cache[key] = acc
            cells.append(SweepCell(
                th_relevance=th_rel,
                th_redundancy=th_red,
                n_bands=len(result.selected),
                accuracy=acc,
                selected=result.selected,
                decision_log=result.decision_log,
            ))
    return SweepGrid(relevance_axis=relevance_axis, redundancy_axis=redundancy_axis,
                     cells=tuple(cells), seed=split_seed, bins=bins)


_SWEEP_CSV_HEADER = "th_relevance,th_redundancy,n_bands,accuracy_pct,seed"


def _fmt(x: float) -> str:
    return repr(float(x))


def emit_report(obj, fmt: str) -> str:
    """Render a sweep grid or accuracy report as CSV or JSON text.

    Byte-stable for fixed input: floats use shortest round-trip repr and
    JSON keys are sorted.
    """
    if fmt == "csv":
        if isinstance(obj, SweepGrid):
            lines = [_SWEEP_CSV_HEADER]
            for cell in obj.cells:
                acc = "" if cell.accuracy is None else _fmt(cell.accuracy)
                lines.append(
                    f"{_fmt(cell.th_relevance)},{_fmt(cell.th_redundancy)},"
                    f"{cell.n_bands},{acc},{obj.seed}"
                )
            return "\n".join(lines) + "\n"
        if isinstance(obj, AccuracyReport):
            lines = [_SWEEP_CSV_HEADER]
            rel = "" if obj.thresholds is None else _fmt(obj.thresholds.th_relevance)
            red = "" if obj.thresholds is None else _fmt(obj.thresholds.th_redundancy)
            acc = _fmt(obj.accuracy)
            lines.append(f"{rel},{red},{obj.n_bands},{acc},{obj.seed}")
            return "\n".join(lines) + "\n"
        raise ValueError(f"cannot render {type(obj).__name__} as csv")
    if fmt == "json":
        if isinstance(obj, SweepGrid):
            doc = {
                "schema": "bandselect.sweep/1",
                "relevance_axis": list(obj.relevance_axis),
                "redundancy_axis": list(obj.redundancy_axis),
                "seed": obj.seed,
                "bins": obj.bins,
                "cells": [
                    {
                        "th_relevance": cell.th_relevance,
                        "th_redundancy": cell.th_redundancy,
                        "n_bands": cell.n_bands,
                        "accuracy_pct": cell.accuracy,
                        "selected": list(cell.selected),
                        "decision_log": [
                            {
                                "pair": list(dec.pair),
                                "value": dec.value,
                                "outcomes": [
                                    {
                                        "band": out.band,
                                        "admitted": out.admitted,
                                        "already_member": out.already_member,
                                        "blocked_by": out.blocked_by,
                                    }
                                    for out in dec.outcomes
                                ],
                            }
                            for dec in cell.decision_log
                        ],
                    }
                    for cell in obj.cells
                ],
            }
        elif isinstance(obj, AccuracyReport):
            doc = obj.to_json_dict()
        else:
            raise ValueError(f"cannot render {type(obj).__name__} as json")
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    raise ValueError(f"unknown report format '{fmt}' (expected csv or json)")


def feature_matrix_to_csv(fm: FeatureMatrix) -> str:
    """CSV rendering with the label as last column, for external classifiers."""
    n_bands = fm.values.shape[1]
    lines = [",".join(f"band_{i}" for i in range(n_bands)) + ",label"]
    for row, label in zip(fm.values, fm.labels):
        lines.append(",".join(_fmt(v) for v in row) + f",{int(label)}")
    return "\n".join(lines) + "\n"
