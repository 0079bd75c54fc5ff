"""A small dense second-order cone solver."""
from .program import ConeProgram, LinearConstraint, SocConstraint, StandardForm
from .solver import Residuals, Solution, Status, solve
from .kkt import KKTReport, check_kkt

__all__ = [
    "ConeProgram", "LinearConstraint", "SocConstraint", "StandardForm",
    "Residuals", "Solution", "Status", "solve", "KKTReport", "check_kkt",
]
