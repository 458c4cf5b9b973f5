"""Input checks shared by the estimators and the command line."""

import os
from numbers import Integral, Real
from pathlib import Path

from .framework import ArgumentationFramework, parse_apx, read_apx


def check_framework(X):
    """Accept a framework, apx text, or a path to an apx file."""
    if isinstance(X, ArgumentationFramework):
        return X
    if isinstance(X, Path):
        return read_apx(X)
    if isinstance(X, str):
        # apx text always contains a statement terminator
        if "(" in X and "." in X and not os.path.exists(X):
            return parse_apx(X)
        return read_apx(X)
    raise TypeError(f"expected an ArgumentationFramework, apx text or a path, got {type(X).__name__}")


def check_arguments(af, X):
    """A single argument name or an iterable of names, checked against ``af``."""
    names = [X] if isinstance(X, str) else list(X)
    for name in names:
        af.check_argument(name)
    return names


def check_choice(name, value, choices):
    if value not in choices:
        raise ValueError(f"{name} must be one of {sorted(choices)}, got {value!r}")
    return value


def check_positive(name, value, integral=False, allow_none=True):
    if value is None and allow_none:
        return value
    kind = Integral if integral else Real
    if isinstance(value, bool) or not isinstance(value, kind) or value <= 0:
        raise ValueError(f"{name} must be a positive {'integer' if integral else 'number'}, got {value!r}")
    return value
