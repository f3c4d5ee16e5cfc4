"""
fclass
======

Subpackage for function classes and the regression oracle.

Modules
-------
function_class
    FunctionClass base class, FiniteClass and ProductGridClass.
linear_cover
    LinearClass with its axis-grid eps_c-cover.
class_family
    Per-level value and second-moment classes.
level_dataset
    Transitions observed at one level with their weights.
regression
    Weighted least-squares fits with lowest-index tie-breaking.
clip_compose
    Clipped composition of a fit with a bonus.
fclass_exceptions
    Exceptions for the fclass subpackage.
"""

from .class_family import (
    ClassFamily,
    finite_family,
    linear_family,
    tabular_family,
)
from .clip_compose import clip_compose
from .fclass_exceptions import (
    CoverSizeError,
    EmptyClassError,
    SizeMismatchError,
)
from .function_class import FiniteClass, FunctionClass, ProductGridClass
from .level_dataset import LevelDataset
from .linear_cover import LinearClass, build_linear_cover
from .regression import ridge_solution, weighted_loss, weighted_regression

__all__ = [
    "ClassFamily",
    "finite_family",
    "linear_family",
    "tabular_family",
    "clip_compose",
    "CoverSizeError",
    "EmptyClassError",
    "SizeMismatchError",
    "FiniteClass",
    "FunctionClass",
    "ProductGridClass",
    "LevelDataset",
    "LinearClass",
    "build_linear_cover",
    "ridge_solution",
    "weighted_loss",
    "weighted_regression",
]
