"""Hierarchical classification over class DAGs."""

from ._hiercls import (
    ChecksumMismatch,
    CycleDetected,
    DimensionMismatch,
    DuplicateName,
    EmptyCandidateSet,
    EmptyDataset,
    Error,
    GridMismatch,
    Hierarchy,
    IndexOutOfRange,
    InvalidConfig,
    LabelNotInHierarchy,
    LengthMismatch,
    Model,
    ParseError,
    SelfLoop,
    ShapeMismatch,
    UnknownName,
    compute_speedup,
    encode_label,
    generate_synthetic,
    hierarchical_loss,
    loss_mask,
    marginals,
    noisy_or,
    onehot_loss,
    predict,
    prediction_scores,
    run_comparison,
    train,
)

__all__ = [name for name in dir() if not name.startswith("_")]
