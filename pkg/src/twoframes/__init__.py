"""Two-frames groups and invariant Kalman filtering for navigation."""

__version__ = "0.1.0"

from .group import (
    ShapeMismatch,
    SingularNu,
    TfgElement,
    TfgShape,
    TfgTangent,
    compose,
    exp_tfg,
    identity,
    inverse,
    left_error,
    log_tfg,
    right_error,
    star_action,
)
from .lie import AngleNearPi
from .system import (
    FrameClass,
    FrameMismatch,
    GenericFrame,
    NaturalFrame,
    OutputModel,
    TwoFramesSystem,
    VectorDynamics,
)
from .filter import FilterState, NoiseModel, SingularInnovationCovariance, propagate, update

__all__ = [
    "AngleNearPi",
    "FilterState",
    "FrameClass",
    "FrameMismatch",
    "GenericFrame",
    "NaturalFrame",
    "NoiseModel",
    "OutputModel",
    "ShapeMismatch",
    "SingularInnovationCovariance",
    "SingularNu",
    "TfgElement",
    "TfgShape",
    "TfgTangent",
    "TwoFramesSystem",
    "VectorDynamics",
    "compose",
    "exp_tfg",
    "identity",
    "inverse",
    "left_error",
    "log_tfg",
    "propagate",
    "right_error",
    "star_action",
    "update",
]
