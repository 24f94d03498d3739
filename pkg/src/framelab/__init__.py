"""Numerical workbench for finite frames, subspace angles and weighted dual frames."""

from .errors import (
    DimensionError,
    FrameLabError,
    GeometryError,
    InvalidInputError,
    NotInSpanError,
    ParseError,
    WeightError,
)
from .subspace import (
    AngleData,
    Subspace,
    Tolerance,
    Weight,
    alternating_projection_error,
    angle,
    column_space,
    d_projection,
    intersect,
    null_space,
    pinv,
    project,
    reduced_min_modulus,
)
from .frames import (
    Frame,
    FrameBounds,
    canonical_dual,
    frame_bounds,
    frame_coefficients,
    frame_operator,
    subframe_analysis,
)
from .riesz import (
    CassaSpec,
    cassa_frame,
    compatibility_profile,
    conditional_riesz_check,
    nullspace_density,
    riesz_certificate,
)
from .duals import (
    ObliqueDualProblem,
    chi_d,
    minimality_oracle,
    oblique_dual,
    weight_sup_probe,
    weighted_dual,
)

__version__ = "0.1.0"
