"""Two-threshold band selection and the bandwidth-rejection baseline.

The main procedure filters bands by MI with the ground truth (relevance
threshold), orders the survivors by ascending MI, builds the pairwise
normalized-MI table, then greedily admits bands pair-by-pair starting
from the least redundant pair.  Both thresholds act strictly: a band
survives relevance only with MI > th_relevance, and is admitted only if
its normalized MI with every already-selected band is < th_redundancy.
"""

from dataclasses import dataclass

import numpy as np

from bandselect.data_model import GroundTruthMap, HsiCube
from bandselect.info_theory import (
    entropy,
    mutual_information,
    quantize_band,
    relevance_curve,
)

SENTINEL = 2.0  # exceeds every legal threshold and every legal U value


@dataclass(frozen=True)
class Thresholds:
    """The selection couple: MI cutoff (bits) and redundancy cap (unitless)."""

    th_relevance: float
    th_redundancy: float

    def __post_init__(self):
        if self.th_relevance < 0:
            raise ValueError("th_relevance must be >= 0")
        if not 0.0 < self.th_redundancy <= 1.0:
            raise ValueError("th_redundancy must be in (0, 1]")


@dataclass(frozen=True)
class RelevanceRanking:
    """Bands surviving the relevance cutoff, ascending by MI value."""

    surviving: tuple  # original band indices
    mi_values: tuple  # aligned MI values, non-decreasing

    def __post_init__(self):
        if len(self.surviving) != len(self.mi_values):
            raise ValueError("surviving and mi_values must align")
        if any(self.mi_values[i] > self.mi_values[i + 1]
               for i in range(len(self.mi_values) - 1)):
            raise ValueError("mi_values must be non-decreasing")


@dataclass(frozen=True)
class RedundancyMatrix:
    """Pairwise normalized MI among surviving bands, in ranking order."""

    bands: tuple  # original band indices, ascending-MI order
    cells: np.ndarray  # (n, n) float64, diagonal 1, symmetric
    sentinel: float = SENTINEL

    @property
    def n(self) -> int:
        return len(self.bands)


@dataclass(frozen=True)
class MemberOutcome:
    """What happened to one element of a picked pair."""

    band: int
    admitted: bool
    already_member: bool
    blocked_by: int | None  # first selected band with U >= threshold


@dataclass(frozen=True)
class PairDecision:
    """One iteration of the selection loop: the picked cell and outcomes."""

    pair: tuple  # (band_x, band_y) as picked
    value: float  # the cell's normalized MI
    outcomes: tuple  # (MemberOutcome, MemberOutcome)


@dataclass(frozen=True)
class SelectionResult:
    """Selected bands in admission order plus full provenance."""

    selected: tuple
    thresholds: Thresholds
    ranking: RelevanceRanking | None
    decision_log: tuple

    def to_json_dict(self) -> dict:
        doc = {
            "schema": "bandselect.selection/1",
            "thresholds": {
                "relevance_bits": self.thresholds.th_relevance,
                "redundancy": self.thresholds.th_redundancy,
            },
            "ranking": None,
            "selected": list(self.selected),
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
                for dec in self.decision_log
            ],
        }
        if self.ranking is not None:
            doc["ranking"] = {
                "bands": list(self.ranking.surviving),
                "mi_bits": list(self.ranking.mi_values),
            }
        return doc


def rank_by_relevance(mi_curve, th_relevance: float) -> RelevanceRanking:
    """Keep bands with MI strictly above the cutoff, ascending by MI.

    Ties are broken by ascending band index.  No survivors is legal and
    yields an empty ranking.
    """
    mi = np.asarray(mi_curve, dtype=np.float64)
    if mi.ndim != 1 or mi.size == 0:
        raise ValueError("mi_curve must be a nonempty 1-D sequence")
    surviving = [i for i in range(mi.size) if mi[i] > th_relevance]
    surviving.sort(key=lambda i: (mi[i], i))
    return RelevanceRanking(
        surviving=tuple(surviving),
        mi_values=tuple(float(mi[i]) for i in surviving),
    )


def build_redundancy_matrix(cube: HsiCube, ranking: RelevanceRanking, bins: int,
                            mask) -> RedundancyMatrix:
    """Full pairwise-U table over the surviving bands (diagonal 1)."""
    n = len(ranking.surviving)
    if n == 0:
        raise ValueError("ranking has no surviving bands")
    rasters = [quantize_band(cube.data[b], bins, mask=mask) for b in ranking.surviving]
    entropies = [entropy(r, mask) for r in rasters]
    cells = np.ones((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            if entropies[i] == 0.0 or entropies[j] == 0.0:
                u = 0.0
            else:
                mi = mutual_information(rasters[i], rasters[j], mask)
                u = mi / float(np.sqrt(entropies[i] * entropies[j]))
            cells[i, j] = u
            cells[j, i] = u
    return RedundancyMatrix(bands=tuple(ranking.surviving), cells=cells)


def select_nonredundant(d: RedundancyMatrix, th_redundancy: float,
                        th_relevance: float = 0.0,
                        ranking: RelevanceRanking | None = None) -> SelectionResult:
    """Greedy admission from the least-redundant pair upward.

    Repeatedly picks the minimum cell (x, y) of the working table (ties:
    smallest row, then smallest column); each element is admitted iff its
    U with every already-selected band is below the threshold, measured on
    the pristine table so sentinel overwrites never corrupt membership
    tests.  The picked cell and its mirror are then overwritten with the
    sentinel.  Stops when no remaining cell is below the threshold.
    """
    thresholds = Thresholds(th_relevance=th_relevance, th_redundancy=th_redundancy)
    n = d.n
    work = d.cells.copy()
    pristine = d.cells
    selected_pos: list[int] = []
    members: set[int] = set()
    log = []
    while n > 0:
        flat = int(np.argmin(work))
        value = float(work.flat[flat])
        if not value < th_redundancy:
            break
        x, y = divmod(flat, n)
        outcomes = []
        for pos, is_row in ((x, True), (y, False)):
            band = d.bands[pos]
            if pos in members:
                outcomes.append(MemberOutcome(band=band, admitted=False,
                                              already_member=True, blocked_by=None))
                continue
            blocker = None
            for sel in selected_pos:  # admission order
                u = pristine[pos, sel] if is_row else pristine[sel, pos]
                if not u < th_redundancy:
                    blocker = d.bands[sel]
                    break
            if blocker is None:
                selected_pos.append(pos)
                members.add(pos)
                outcomes.append(MemberOutcome(band=band, admitted=True,
                                              already_member=False, blocked_by=None))
            else:
                outcomes.append(MemberOutcome(band=band, admitted=False,
                                              already_member=False, blocked_by=blocker))
        work[x, y] = d.sentinel
        work[y, x] = d.sentinel
        log.append(PairDecision(pair=(d.bands[x], d.bands[y]), value=value,
                                outcomes=tuple(outcomes)))
    return SelectionResult(
        selected=tuple(d.bands[p] for p in selected_pos),
        thresholds=thresholds,
        ranking=ranking,
        decision_log=tuple(log),
    )


def algorithm2(cube: HsiCube, gt: GroundTruthMap, th: Thresholds, bins: int) -> SelectionResult:
    """The full two-threshold pipeline: relevance filter, then redundancy control."""
    mi = relevance_curve(cube, gt, bins)
    ranking = rank_by_relevance(mi, th.th_relevance)
    if not ranking.surviving:
        return SelectionResult(selected=(), thresholds=th, ranking=ranking,
                               decision_log=())
    d = build_redundancy_matrix(cube, ranking, bins, gt.labeled_mask())
    return select_nonredundant(d, th.th_redundancy,
                               th_relevance=th.th_relevance, ranking=ranking)


@dataclass(frozen=True)
class GuoResult:
    """Baseline output; exhausted_early flags a run that ran out of bands."""

    selected: tuple
    exhausted_early: bool


def guo_baseline(mi_curve, bandwidth: int, target: int, d_threshold: float) -> GuoResult:
    """Iterative top-MI picking with bandwidth rejection of flat neighborhoods.

    Each round picks the remaining band with the highest MI (ties: lowest
    index).  If every first difference of the MI curve over the picked
    band's clipped neighborhood [S - bandwidth, S + bandwidth] falls below
    d_threshold, the whole neighborhood is dropped from the remaining set
    along with the pick; otherwise only the pick is dropped.  Stops after
    ``target`` picks or when nothing remains.
    """
    mi = np.asarray(mi_curve, dtype=np.float64)
    if mi.ndim != 1 or mi.size == 0:
        raise ValueError("mi_curve must be a nonempty 1-D sequence")
    if target < 1:
        raise ValueError("target must be >= 1")
    if bandwidth < 0:
        raise ValueError("bandwidth must be >= 0")
    n = mi.size
    remaining = set(range(n))
    selected = []
    while len(selected) < target and remaining:
        s = min(remaining, key=lambda i: (-mi[i], i))
        lo = max(0, s - bandwidth)
        hi = min(n - 1, s + bandwidth)
        diffs = [mi[k] - mi[k - 1] for k in range(lo, hi + 1) if k >= 1]
        selected.append(s)
        if not diffs or max(diffs) < d_threshold:
            remaining -= set(range(lo, hi + 1))
        remaining.discard(s)
    return GuoResult(selected=tuple(selected), exhausted_early=len(selected) < target)


def estimate_ground_truth(cube: HsiCube, band_range, levels: int) -> GroundTruthMap:
    """Reference label map from the per-pixel mean of a band range.

    The mean image is min-max quantized into ``levels`` labels 1..levels,
    so every pixel is labeled.
    """
    lo, hi = int(band_range[0]), int(band_range[1])
    if lo > hi:
        raise ValueError("band range is empty")
    if lo < 0 or hi >= cube.bands:
        raise ValueError(f"band range [{lo}, {hi}] outside [0, {cube.bands})")
    if levels < 2:
        raise ValueError("levels must be >= 2")
    mean = cube.data[lo : hi + 1].astype(np.float64).mean(axis=0)
    symbols = quantize_band(mean, levels).values
    return GroundTruthMap(labels=symbols.astype(np.int32) + 1, n_classes=levels)
