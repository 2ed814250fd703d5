"""Elastic shape analysis of curves in homogeneous spaces.

Curves on the sphere S^n = SO(n+1)/SO(n) and on unit-determinant positive
definite matrices SL(n)/SO(n) are lifted horizontally to the group, mapped
to square-root velocity transforms, and compared modulo rotations of the
isotropy group and reparametrization.
"""

from .errors import (
    AmbiguousLog,
    AntipodalPoints,
    DimMismatch,
    GroupMismatch,
    InvalidGamma,
    NoConvergence,
    NotInGroup,
    NotOneDimensional,
    NotSPD,
    ShapeError,
    SingularJacobian,
    SubgroupMismatch,
)
from .geo_path import GeodesicSweep, geodesic_sweep, resample_curve
from .homog import PDSM, DiscreteManifoldCurve, Sphere, curve_at, efficient_rotation, k_act, lift
from .matgroup import SpecialLinear, SpecialOrthogonal, group_distance, sl_riemannian_exp, sl_riemannian_log
from .register import (
    AlignmentResult,
    AlignOptions,
    DpGrid,
    ac_manifold_distance,
    align,
    alignment_cost,
    alignment_cost_gradient,
    dp_reparametrize,
    k_exhaustive,
    k_gradient_descent,
    mod_G_distance,
    shape_distance,
    shape_distance_group,
    shape_mod_G_distance,
)
from .srvf import (
    DiscreteGroupCurve,
    Reparametrization,
    SrvPair,
    StepMap,
    ac_distance,
    g_act,
    gamma_act,
    product_geodesic,
    srvf_forward,
    srvf_inverse,
)

__version__ = "0.1.0"

__all__ = [
    "ac_distance",
    "ac_manifold_distance",
    "align",
    "alignment_cost",
    "alignment_cost_gradient",
    "AlignmentResult",
    "AlignOptions",
    "AmbiguousLog",
    "AntipodalPoints",
    "curve_at",
    "DimMismatch",
    "DiscreteGroupCurve",
    "DiscreteManifoldCurve",
    "dp_reparametrize",
    "DpGrid",
    "efficient_rotation",
    "g_act",
    "gamma_act",
    "geodesic_sweep",
    "GeodesicSweep",
    "group_distance",
    "GroupMismatch",
    "InvalidGamma",
    "k_act",
    "k_exhaustive",
    "k_gradient_descent",
    "lift",
    "mod_G_distance",
    "NoConvergence",
    "NotInGroup",
    "NotOneDimensional",
    "NotSPD",
    "PDSM",
    "product_geodesic",
    "Reparametrization",
    "resample_curve",
    "shape_distance",
    "shape_distance_group",
    "shape_mod_G_distance",
    "ShapeError",
    "SingularJacobian",
    "sl_riemannian_exp",
    "sl_riemannian_log",
    "SpecialLinear",
    "SpecialOrthogonal",
    "Sphere",
    "srvf_forward",
    "srvf_inverse",
    "SrvPair",
    "StepMap",
    "SubgroupMismatch",
]
