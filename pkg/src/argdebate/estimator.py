"""Estimator-style front ends: ``fit`` a framework, ``predict`` acceptance.

Both classes follow scikit-learn conventions (constructor stores parameters
only, ``fit`` returns ``self``, learned state ends in ``_``), so
``get_params``/``set_params``/``clone`` work as usual.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import framework as fw
from ._validation import check_arguments, check_choice, check_framework, check_positive
from .checker import ENGINES, Budget, decide
from .errors import CheckTimeout, ResourceExceeded


class ExtensionSolver(BaseEstimator):
    """Extensions of a framework, with per-argument acceptance.

    Acceptance is skeptical for grounded and ideal, credulous otherwise.
    """

    def __init__(self, semantics="grounded", max_args=fw.MAX_ENUMERATION_ARGS):
        self.semantics = semantics
        self.max_args = max_args

    def fit(self, X, y=None):
        kind = fw.SemanticsKind.parse(self.semantics)
        check_positive("max_args", self.max_args, integral=True, allow_none=False)
        self.framework_ = check_framework(X)
        self.extensions_ = fw.extensions(self.framework_, kind, self.max_args)
        if kind in (fw.SemanticsKind.GROUNDED, fw.SemanticsKind.IDEAL):
            self.accepted_ = frozenset(self.extensions_[0])
        else:
            self.accepted_ = frozenset().union(*self.extensions_)
        return self

    def predict(self, X):
        check_is_fitted(self, "extensions_")
        names = check_arguments(self.framework_, X)
        return np.array([a in self.accepted_ for a in names], dtype=bool)


class DebateVerifier(BaseEstimator):
    """Decides acceptance by model checking the debate of each argument.

    ``predict`` raises :class:`CheckTimeout` or :class:`ResourceExceeded`
    when the budget runs out; ``verdicts_`` keeps every verdict computed so
    far, keyed by argument.
    """

    def __init__(self, semantics="grounded", engine="sl", timeout=None,
                 max_strategies=None, state_space="collapsed"):
        self.semantics = semantics
        self.engine = engine
        self.timeout = timeout
        self.max_strategies = max_strategies
        self.state_space = state_space

    def _validate_params(self):
        check_choice("semantics", self.semantics, {"grounded", "admissible", "ideal"})
        check_choice("engine", self.engine, set(ENGINES))
        check_choice("state_space", self.state_space, {"collapsed", "full"})
        check_positive("timeout", self.timeout)
        check_positive("max_strategies", self.max_strategies, integral=True)
        if self.engine == "fixpoint" and self.semantics != "grounded":
            raise ValueError("the fixpoint engine only decides grounded acceptance")

    def fit(self, X, y=None):
        self._validate_params()
        self.framework_ = check_framework(X)
        self.verdicts_ = {}
        return self

    def verdict(self, argument):
        check_is_fitted(self, "framework_")
        (argument,) = check_arguments(self.framework_, argument)
        if argument not in self.verdicts_:
            self.verdicts_[argument] = decide(
                self.framework_, argument, self.semantics, self.engine,
                Budget(self.timeout, self.max_strategies), self.state_space == "full")
        return self.verdicts_[argument]

    def predict(self, X):
        check_is_fitted(self, "framework_")
        out = []
        for a in check_arguments(self.framework_, X):
            v = self.verdict(a)
            if v.value is None:
                exc = CheckTimeout if v.result.value == "timeout" else ResourceExceeded
                raise exc(f"no verdict for {a}: {v.message or v.result.value}")
            out.append(v.value)
        return np.array(out, dtype=bool)

    def score(self, X, y):
        """Fraction of arguments whose predicted acceptance matches ``y``."""
        return float(np.mean(self.predict(X) == np.asarray(y, dtype=bool)))
