"""Laurent series, coefficient recurrences, shearing and strong-regularity classification."""

from .classify import (
    ClassificationReport,
    Reason,
    Verdict,
    katsnelson_volok_check,
    second_order_pole_check,
    strong_regularity_classify,
)
from .laurent import GaugeTransform, LaurentMatrix, gauge_transform
from .recurrence import LaurentSolution, forward_recurrence, inverse_recurrence, solution_space
from .shearing import reduce_to_min_spectrum, shearing_step

__all__ = [
    "ClassificationReport",
    "GaugeTransform",
    "LaurentMatrix",
    "LaurentSolution",
    "Reason",
    "Verdict",
    "forward_recurrence",
    "gauge_transform",
    "inverse_recurrence",
    "katsnelson_volok_check",
    "reduce_to_min_spectrum",
    "second_order_pole_check",
    "shearing_step",
    "solution_space",
    "strong_regularity_classify",
]
