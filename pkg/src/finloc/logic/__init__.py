"""[0,1]-valued formula language: AST, parser, evaluators, prime-ladder scans."""

from .nodes import (  # noqa: F401
    Const,
    Dist,
    Formula,
    Inf,
    IntConst,
    Max,
    Min,
    MinusTrunc,
    Neg,
    PlusTrunc,
    RatConst,
    Sup,
    Term,
    TermAdd,
    TermMul,
    TermSub,
    Var,
    ZeroPred,
    free_variables,
    print_formula,
    print_term,
)
from .parser import parse_formula  # noqa: F401
from .evaluate import eval_finite, eval_limit, required_modulus  # noqa: F401
from .ladder import PrimeLadder, Rung, ScanReport, los_scan  # noqa: F401
