"""Complex-analysis core: expressions, parsing, contour analysis."""

from .expr import (Add, Const, Exp, Expr, IntPow, Log, Mul, Neg, RealPow, Recip,
                   Var, Z, as_expr, const, differentiate, evaluate, exp,
                   has_branch, ipow, log, rpow, to_text)
from .parser import parse
from .analysis import (DEFAULT_RADII, SingularityVerdict, check_single_valued,
                       circle_points, classify_singularity, laurent_coefficient,
                       loop_period, path_integral, schwarzian)

__all__ = [
    "Add", "Const", "Exp", "Expr", "IntPow", "Log", "Mul", "Neg", "RealPow",
    "Recip", "Var", "Z", "as_expr", "const", "differentiate", "evaluate", "exp",
    "has_branch", "ipow", "log", "rpow", "to_text", "parse", "DEFAULT_RADII",
    "SingularityVerdict", "check_single_valued", "circle_points",
    "classify_singularity", "laurent_coefficient", "loop_period",
    "path_integral", "schwarzian",
]
