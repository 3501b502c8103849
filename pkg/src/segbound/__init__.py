"""Temporal action boundary detection and evaluation toolkit."""

from .candidates import CandidateSet, detect_candidates
from .diff import DifferenceSeries, compute_difference
from .estimator import BoundaryDetector, EqualSplitBaseline
from .features import (
    BoundarySet,
    FeatureSequence,
    FormatError,
    Segmentation,
    boundaries_to_segmentation,
    load_boundaries,
    load_features,
    load_labels,
    save_boundaries,
    save_features,
    save_labels,
    segmentation_to_boundaries,
)
from .fusion import (
    BoundaryProvenance,
    FusionConfig,
    FusionResult,
    confidence_scores,
    equal_split,
    select_boundaries,
)
from .graphs import (
    Detection,
    DetectionFrame,
    RelationGraph,
    RelationTable,
    box_gap,
    build_graph,
    build_table,
)
from .metrics import (
    F1Report,
    MofReport,
    VideoReport,
    boundary_f1,
    dataset_mean,
    evaluate_video,
    f1_threshold,
    hungarian,
    mof,
)
from .pipeline import detect_boundaries
from .synth import SynthSpec, generate, generate_streams

__all__ = [
    "BoundaryDetector",
    "BoundaryProvenance",
    "BoundarySet",
    "CandidateSet",
    "Detection",
    "DetectionFrame",
    "DifferenceSeries",
    "EqualSplitBaseline",
    "F1Report",
    "FeatureSequence",
    "FormatError",
    "FusionConfig",
    "FusionResult",
    "MofReport",
    "RelationGraph",
    "RelationTable",
    "Segmentation",
    "SynthSpec",
    "VideoReport",
    "boundaries_to_segmentation",
    "boundary_f1",
    "box_gap",
    "build_graph",
    "build_table",
    "compute_difference",
    "confidence_scores",
    "dataset_mean",
    "detect_boundaries",
    "detect_candidates",
    "equal_split",
    "evaluate_video",
    "f1_threshold",
    "generate",
    "generate_streams",
    "hungarian",
    "load_boundaries",
    "load_features",
    "load_labels",
    "mof",
    "save_boundaries",
    "save_features",
    "save_labels",
    "segmentation_to_boundaries",
    "select_boundaries",
]
