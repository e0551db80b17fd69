"""Argument checks shared by the estimator and the command line."""

from __future__ import annotations

from pathlib import Path

from .exceptions import ScheduleLiftError
from .model import Instance, check_epsilon, load_instance
from .rational import as_fraction

MODES = ("sym", "order")


class NotFittedError(ScheduleLiftError, AttributeError):
    pass


def check_instance(X) -> Instance:
    if isinstance(X, Instance):
        return X
    if isinstance(X, dict):
        return Instance.from_dict(X)
    if isinstance(X, (str, Path)):
        return load_instance(X)
    raise TypeError(f"expected an Instance, a dict or a path, got {type(X).__name__}")


def check_epsilon_param(epsilon):
    return check_epsilon(as_fraction(epsilon))


def check_degree(degree, instance: Instance) -> int:
    """``None`` means the number of assignment variables (the exact-hull degree)."""
    if degree is None:
        return instance.machines * instance.n
    if isinstance(degree, bool) or not isinstance(degree, int) or degree < 1:
        raise ValueError(f"degree must be a positive integer, got {degree!r}")
    return degree


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def check_target(T) -> int:
    if isinstance(T, bool) or not isinstance(T, int) or T < 1:
        raise ValueError(f"T must be a positive integer, got {T!r}")
    return T


def check_is_fitted(estimator, attributes=("result_",)):
    missing = [a for a in attributes if not hasattr(estimator, a)]
    if missing:
        raise NotFittedError(f"{type(estimator).__name__} is not fitted yet; call fit first")
