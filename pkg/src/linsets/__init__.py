"""Linear sets in finite projective spaces: exact weights, size bounds and constructions."""

from __future__ import annotations

from .errors import EnumerationCapExceeded, HypothesisError, InternalInconsistency, TheoremViolation
from .fields import FieldTower, tower_for
from .linset import FqSubspace, LinearSetReport, report, span_fq, weight
from .projgeo import ProjSubspace

__all__ = [
    "EnumerationCapExceeded",
    "FieldTower",
    "FqSubspace",
    "HypothesisError",
    "InternalInconsistency",
    "LinearSetReport",
    "ProjSubspace",
    "TheoremViolation",
    "report",
    "span_fq",
    "tower_for",
    "weight",
]
