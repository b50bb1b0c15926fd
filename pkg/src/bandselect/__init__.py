"""Band selection for hyperspectral cubes.

Ranks bands by mutual information with a ground-truth label map, then
greedily eliminates redundant bands with a normalized-MI threshold.
Includes a bandwidth-rejection baseline, a synthetic-suite generator,
a 1-NN evaluation harness with threshold-grid sweeps, and a CLI.
"""

from bandselect.backend import backend_name
from bandselect.data_model import (
    GroundTruthMap,
    HsiCube,
    TrainTestSplit,
    load_cube,
    load_ground_truth,
    save_cube,
    save_ground_truth,
    split_labeled_pixels,
)
from bandselect.evaluation import (
    AccuracyReport,
    FeatureMatrix,
    SweepCell,
    SweepGrid,
    accuracy,
    classify_1nn,
    emit_report,
    evaluate_subset,
    extract_features,
    feature_matrix_to_csv,
    sweep,
)
from bandselect.info_theory import (
    DiscreteRaster,
    FanoBounds,
    JointHistogram,
    PixelMask,
    entropy,
    fano_bounds,
    joint_entropy,
    mutual_information,
    normalized_mi,
    quantize_band,
    relevance_curve,
)
from bandselect.selection import (
    GuoResult,
    MemberOutcome,
    PairDecision,
    RedundancyMatrix,
    RelevanceRanking,
    SelectionResult,
    Thresholds,
    algorithm2,
    build_redundancy_matrix,
    estimate_ground_truth,
    guo_baseline,
    rank_by_relevance,
    select_nonredundant,
)
from bandselect.synthetic import SyntheticSpec, default_spec, make_synthetic_gt, synthesize_bands

__version__ = "0.1.0"
