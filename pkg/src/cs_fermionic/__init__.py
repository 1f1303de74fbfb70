from .algebra import BETA, ONE, ZERO, BetaScalar, PPoly, XPoly, ZSeries
from .config import CSConfig
from .debug_utils import DebugContext, debug_mode, dump_debug_info
from .errors import (
    CSAlgebraError,
    NonzeroRemainder,
    NotAntisymmetric,
    NotSymmetric,
    ParseError,
    PartitionTooLong,
    UnknownSuite,
    UsageError,
    WindowBudgetExceeded,
    WindowTooNarrow,
)
from .logging_config import get_logger, setup_logging
from .parser import parse_poly
from .pdiff import PDiffOp
from .suites import SuiteReport, run_suite
from .symfun import Partition

__all__ = [
    "BETA",
    "ONE",
    "ZERO",
    "BetaScalar",
    "PPoly",
    "XPoly",
    "ZSeries",
    "PDiffOp",
    "Partition",
    "CSConfig",
    "CSAlgebraError",
    "NonzeroRemainder",
    "NotAntisymmetric",
    "NotSymmetric",
    "ParseError",
    "PartitionTooLong",
    "UnknownSuite",
    "UsageError",
    "WindowBudgetExceeded",
    "WindowTooNarrow",
    "parse_poly",
    "run_suite",
    "SuiteReport",
    "setup_logging",
    "get_logger",
    "DebugContext",
    "debug_mode",
    "dump_debug_info",
]
