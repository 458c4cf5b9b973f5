"""Acceptance in abstract argumentation decided by strategy-logic model
checking of proponent/opponent debates."""

__version__ = "0.1.0"

from .errors import (ApxParseError, ArgDebateError, CheckTimeout, FormulaSyntaxError,
                     FrameworkError, IncompleteAssignment, ResourceExceeded)
from .framework import (ArgumentationFramework, SemanticsKind, accepted, example1, extensions,
                        format_set, generate_random, grounded_extension, ideal_extension,
                        parse_apx, read_apx)
from .dispute import ProponentStrategy, WinningKind, exists_winning, is_winning
from .interpreted import AgentId, InterpretedSystem, build
from .logic import (admissible_formula, grounded_formula, ideal_formula, normalize,
                    parse_formula, to_text)
from .checker import (Budget, Verdict, VerdictResult, check, check_grounded_fixpoint, decide,
                      to_proponent_strategy)
from .estimator import DebateVerifier, ExtensionSolver

__all__ = [
    "__version__",
    "ApxParseError", "ArgDebateError", "CheckTimeout", "FormulaSyntaxError", "FrameworkError",
    "IncompleteAssignment", "ResourceExceeded",
    "ArgumentationFramework", "SemanticsKind", "accepted", "example1", "extensions",
    "format_set", "generate_random", "grounded_extension", "ideal_extension", "parse_apx",
    "read_apx",
    "ProponentStrategy", "WinningKind", "exists_winning", "is_winning",
    "AgentId", "InterpretedSystem", "build",
    "admissible_formula", "grounded_formula", "ideal_formula", "normalize", "parse_formula",
    "to_text",
    "Budget", "Verdict", "VerdictResult", "check", "check_grounded_fixpoint", "decide",
    "to_proponent_strategy",
    "DebateVerifier", "ExtensionSolver",
]
