"""Conic sections in the hyperbolic plane: metric, two-focus, focus/directrix,
Klein-algebraic and Molnar definitions, their implicit polynomials in the
upper half-plane, and numerical checks of where the definitions agree."""

from .conicdefs import (
                     ConicClass,
                     ConicError,
                     FocusDirectrix,
                     MetricCircle,
                     NoMatchError,
                     TwoFocus,
                     classify_fd,
                     residual,
)
from .hypgeo import (
                     Geodesic,
                     GeometryError,
                     IdealPoint,
                     Isometry,
                     ModelKind,
                     ModelPoint,
                     distance,
                     metric_circle_to_euclidean,
)
from .implicit import BivarPoly, SampledCurve, TraceRegion, audit, trace

__version__ = "0.1.0"

__all__ = [
    "BivarPoly", "ConicClass", "ConicError", "FocusDirectrix", "Geodesic", "GeometryError", "IdealPoint",
    "Isometry", "MetricCircle", "ModelKind", "ModelPoint", "NoMatchError", "SampledCurve", "TraceRegion",
    "TwoFocus", "audit", "classify_fd", "distance", "metric_circle_to_euclidean", "residual", "trace",
]
