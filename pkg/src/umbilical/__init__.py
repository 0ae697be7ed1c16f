"""Curves in the space forms H^3, S^3 and R^3 and the totally umbilical surfaces containing them."""

from .detect import (
    DetectionReport,
    RMRelation,
    Thresholds,
    Verdict,
    detect,
    detect_euclidean,
    detect_rm,
    detect_rm_linear_relation,
    fourth_order_residual,
    invariant_C,
    recover_surface,
)
from .errors import UmbilicalError
from .frames import SampledCurve, arclength_reparametrize, frenet_apparatus, rm_apparatus
from .spaceform import (
    SurfaceKind,
    UmbilicalSurface,
    classify_surface,
    inner,
    random_isometry,
)
from .synth import (
    synthesize_geodesic_sphere_s3,
    synthesize_horosphere,
    synthesize_on_surface,
)

__version__ = "0.1.0"
