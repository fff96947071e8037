"""Numerical toolkit for differential subordination on p-valent analytic functions."""

from .disk import ProbeConfig, Status, SubordinationVerdict, subordination_check, univalence_check
from .dsl import parse_function_spec, parse_map
from .operators import ClassParams, OperatorParams, F_op, psi_op, th31_lhs
from .series import PowerSeries
from .zoo import (
    AnalyticMap,
    PValentFunction,
    make_binomial_power,
    make_exp_line,
    make_moebius,
    make_pvalent,
    make_spiral_power,
)

__all__ = [
    "AnalyticMap",
    "ClassParams",
    "F_op",
    "OperatorParams",
    "PValentFunction",
    "PowerSeries",
    "ProbeConfig",
    "Status",
    "SubordinationVerdict",
    "make_binomial_power",
    "make_exp_line",
    "make_moebius",
    "make_pvalent",
    "make_spiral_power",
    "parse_function_spec",
    "parse_map",
    "psi_op",
    "subordination_check",
    "th31_lhs",
    "univalence_check",
]
