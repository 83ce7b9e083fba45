"""Entanglement purification built on iSWAP and sqrt(SWAP) interactions."""
from .bell import BellLabel, BilateralOp, BKind
from .errors import (CutoffTooSmall, InvalidArgument, ParseError, PreconditionError,
                     SingularDetuning, UnsupportedSize)
from .purify import PulseError, bennett_round_analytic, bennett_round_with_error, iterate, werner

__all__ = [
    "BellLabel", "BilateralOp", "BKind",
    "CutoffTooSmall", "InvalidArgument", "ParseError", "PreconditionError", "SingularDetuning",
    "UnsupportedSize",
    "PulseError", "bennett_round_analytic", "bennett_round_with_error", "iterate", "werner",
]
__version__ = "0.1.0"
