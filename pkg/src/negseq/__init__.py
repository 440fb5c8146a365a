"""Negative sequential pattern mining with gap constraints."""
from .model import (
    Element,
    InvalidPatternError,
    MinedPattern,
    Pattern,
    Sequence,
    SequenceDb,
    partial_order_leq,
    positive_part,
    validate,
)
from .negpspan import MinerConfig, ProjectionPointer, frequent_items, match, mine
from .oracle import (
    EmbeddingMode,
    GapConstraints,
    Inclusion,
    OccurrenceMode,
    SemanticsConfig,
    occurs,
    support,
)

__version__ = "0.1.0"
