"""Elliptic fibrations over P^1: Weierstrass models, singular fibers, sections."""
from fibration.curve import FunctionFieldCurve, invariant_ratio, invariants, rescale_at_infinity
from fibration.fibers import FiberReport, ShiodaInput, classify_fibers, component_counts, local_fiber, shioda_rank
from fibration.group_law import (
    CurvePoint,
    group_add,
    is_on_curve,
    multiply,
    negate,
    point_order,
    recover_y,
    verify_section,
)

__all__ = [
    "CurvePoint",
    "FiberReport",
    "FunctionFieldCurve",
    "ShiodaInput",
    "classify_fibers",
    "component_counts",
    "group_add",
    "invariant_ratio",
    "invariants",
    "is_on_curve",
    "local_fiber",
    "multiply",
    "negate",
    "point_order",
    "recover_y",
    "rescale_at_infinity",
    "shioda_rank",
    "verify_section",
]
