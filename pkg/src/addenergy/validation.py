"""Input coercion shared by the estimators and the command line."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import UsageError
from .exact import as_fraction
from .groups import GroupSet, GroupSpec


def check_group_spec(group) -> GroupSpec:
    if isinstance(group, GroupSpec):
        return group
    if isinstance(group, dict):
        return GroupSpec.from_json(group)
    raise UsageError(f"expected a GroupSpec or its JSON form, got {type(group).__name__}")


def _plain(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (list, tuple, np.ndarray)):
        return tuple(int(c) for c in x)
    return x


def check_group_set(X, group=None, allow_empty: bool = True) -> GroupSet:
    """Coerce ``X`` to a :class:`GroupSet`.

    Accepts a GroupSet, its JSON dict, or a sequence of elements together
    with ``group``.  Elements must already be canonical; duplicates are an
    error, as in set files.
    """
    if isinstance(X, GroupSet):
        A = X
        if group is not None and check_group_spec(group) != A.spec:
            raise UsageError("set belongs to a different group than requested")
    elif isinstance(X, dict):
        A = GroupSet.from_json(X)
    else:
        if group is None:
            raise UsageError("a group is required when X is a plain sequence")
        spec = check_group_spec(group)
        try:
            items = list(X)
        except TypeError:
            raise UsageError(f"expected a sequence of elements, got {type(X).__name__}") from None
        A = GroupSet(spec, tuple(spec.check(_plain(x)) for x in items))
    if not allow_empty and not len(A):
        raise UsageError("expected a nonempty set")
    return A


def check_elements(X, spec: GroupSpec) -> list:
    """Canonical elements of ``X`` in input order (duplicates allowed)."""
    if isinstance(X, GroupSet):
        if X.spec != spec:
            raise UsageError("set belongs to a different group")
        return list(X.elems)
    return [spec.check(_plain(x)) for x in X]


def check_rational(value, name: str, low=None, high=None, low_open: bool = False, high_open: bool = False) -> Fraction:
    try:
        v = as_fraction(value)
    except UsageError as exc:
        raise UsageError(f"{name}: {exc}") from None
    if low is not None and (v < low or (low_open and v == low)):
        raise UsageError(f"{name} = {v} below the allowed range")
    if high is not None and (v > high or (high_open and v == high)):
        raise UsageError(f"{name} = {v} above the allowed range")
    return v
