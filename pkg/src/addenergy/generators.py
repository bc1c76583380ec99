"""Seeded set generators for tests and experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .dissociation import span_contains
from .errors import ConfigError
from .groups import CYCLIC, INTEGERS, VECTOR, GroupSet, GroupSpec, subgroup_closure

FAMILIES = ("random", "ap", "multi_ap", "subspace", "dissociated", "coset_union")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    group: GroupSpec
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> dict:
        return {"family": self.family, "group": self.group.to_json(), "params": self.params, "seed": self.seed}


def generate(spec: GeneratorSpec) -> GroupSet:
    if spec.family not in FAMILIES:
        raise ConfigError(f"unknown family {spec.family!r}; choose from {', '.join(FAMILIES)}")
    rng = random.Random(spec.seed)
    try:
        return _BUILDERS[spec.family](spec.group, rng, **spec.params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {spec.family}: {exc}") from None


def make(family: str, group: GroupSpec, seed: int = 0, **params) -> GroupSet:
    """Shorthand for ``generate(GeneratorSpec(family, group, params, seed))``."""
    return generate(GeneratorSpec(family, group, params, seed))


def _random_elem(G: GroupSpec, rng: random.Random, lo: int = 0, hi: int | None = None):
    if G.kind == CYCLIC:
        return rng.randrange(G.n)
    if G.kind == VECTOR:
        return tuple(rng.randrange(G.q) for _ in range(G.dim))
    return rng.randrange(lo, hi)


def _random(G: GroupSpec, rng, size: int, window: tuple | None = None) -> GroupSet:
    if size < 0:
        raise ConfigError("size must be >= 0")
    if G.kind == INTEGERS:
        lo, hi = window if window is not None else (0, max(4 * size, 1))
        if hi - lo < size:
            raise ConfigError(f"window [{lo}, {hi}) holds fewer than {size} integers")
        return GroupSet.from_iterable(G, rng.sample(range(lo, hi), size))
    if size > G.order:
        raise ConfigError(f"size {size} exceeds the group order {G.order}")
    if G.kind == CYCLIC:
        return GroupSet.from_iterable(G, rng.sample(range(G.n), size))
    codes = rng.sample(range(G.order), size)
    return GroupSet.from_iterable(G, (_decode(G, c) for c in codes))


def _decode(G: GroupSpec, code: int) -> tuple:
    out = []
    for _ in range(G.dim):
        code, r = divmod(code, G.q)
        out.append(r)
    return tuple(reversed(out))


def _ap(G: GroupSpec, rng, start, step, length: int) -> GroupSet:
    start, step = G.reduce(start), G.reduce(step)
    elems = [G.add(start, G.scale(step, i)) for i in range(length)]
    if len(set(elems)) != length:
        raise ConfigError("progression wraps around; terms are not distinct")
    return GroupSet.from_iterable(G, elems)


def _multi_ap(G: GroupSpec, rng, base, steps, lengths) -> GroupSet:
    if len(steps) != len(lengths) or any(n < 1 for n in lengths):
        raise ConfigError("steps and lengths must have equal length and positive lengths")
    base = G.reduce(base)
    steps = [G.reduce(s) for s in steps]
    elems = []
    for ns in product(*(range(n) for n in lengths)):
        x = base
        for n, s in zip(ns, steps):
            x = G.add(x, G.scale(s, n))
        elems.append(x)
    return GroupSet.from_iterable(G, elems)


def _random_subspace(G: GroupSpec, rng, dim: int) -> frozenset:
    if G.kind != VECTOR:
        raise ConfigError("subspaces need a vector group")
    if not 0 <= dim <= G.dim:
        raise ConfigError(f"subspace dimension {dim} not in [0, {G.dim}]")
    basis: list = []
    span = frozenset([G.zero])
    while len(basis) < dim:
        v = _random_elem(G, rng)
        if v not in span:
            basis.append(v)
            span = subgroup_closure(G, basis)
    return span


def _subspace(G: GroupSpec, rng, dim: int) -> GroupSet:
    return GroupSet.from_iterable(G, _random_subspace(G, rng, dim))


def _dissociated(G: GroupSpec, rng, size: int, window: tuple | None = None, attempts: int | None = None) -> GroupSet:
    if size < 0:
        raise ConfigError("size must be >= 0")
    # over F_2 and F_3 the signs +-1 exhaust the nonzero scalars: dissociated means independent
    if G.kind == VECTOR and G.q <= 3 and size > G.dim:
        raise ConfigError(f"vector({G.q}, {G.dim}) has no dissociated set of size {size}")
    # distinct {0,1}-sums force 2^size <= |G|
    if G.is_finite and 2**size > G.order:
        raise ConfigError(f"group of order {G.order} has no dissociated set of size {size}")
    lo, hi = window if window is not None else (1, 4 * 3**size)
    chosen = GroupSet(G, ())
    budget = attempts or 2000 * max(size, 1)
    for _ in range(budget):
        if len(chosen) == size:
            return chosen
        x = _random_elem(G, rng, lo, hi)
        if x == G.zero or x in chosen:
            continue
        if not span_contains(chosen, x):
            chosen = chosen.with_elems((*chosen.elems, x))
    if len(chosen) == size:
        return chosen
    raise ConfigError(f"could not find a dissociated set of size {size} in {budget} attempts")


def _coset_union(G: GroupSpec, rng, subgroup_dim: int, num_cosets: int) -> GroupSet:
    """Union of ``num_cosets`` distinct cosets of a random subgroup.

    For vector groups ``subgroup_dim`` is a dimension; for cyclic groups
    it is the subgroup order, which must divide the modulus.
    """
    if G.kind == VECTOR:
        H = _random_subspace(G, rng, subgroup_dim)
        index = G.q ** (G.dim - subgroup_dim)
    elif G.kind == CYCLIC:
        if subgroup_dim < 1 or G.n % subgroup_dim:
            raise ConfigError(f"subgroup order {subgroup_dim} must divide {G.n}")
        H = frozenset(range(0, G.n, G.n // subgroup_dim))
        index = G.n // subgroup_dim
    else:
        raise ConfigError("coset unions need a finite group")
    if not 1 <= num_cosets <= index:
        raise ConfigError(f"need 1 <= num_cosets <= {index}")
    reps: list = []
    covered: set = set()
    while len(reps) < num_cosets:
        t = _random_elem(G, rng)
        if t in covered:
            continue
        reps.append(t)
        covered.update(G.add(h, t) for h in H)
    return GroupSet.from_iterable(G, covered)


_BUILDERS = {
    "random": _random,
    "ap": _ap,
    "multi_ap": _multi_ap,
    "subspace": _subspace,
    "dissociated": _dissociated,
    "coset_union": _coset_union,
}
