"""Enumeration and counting of monotone and unate Boolean functions."""

from .bfcore import BoolFn, Signature, parse_boolfn, signature
from .enumerate import (
    enumerate_balanced_monotone, enumerate_monotone, enumerate_unate, filter_balanced,
    filter_nondegenerate,
)
from .equiv import canonical_form, class_census_by_canonical, filter_classes
from .sets import FunctionSet, Origin

__version__ = "0.1.0"

__all__ = [
    "BoolFn", "FunctionSet", "Origin", "Signature", "canonical_form", "class_census_by_canonical",
    "enumerate_balanced_monotone", "enumerate_monotone", "enumerate_unate", "filter_balanced",
    "filter_classes", "filter_nondegenerate", "parse_boolfn", "signature",
]
