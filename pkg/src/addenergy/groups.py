"""Abelian group families, canonical elements and finite sets of elements.

Three families are supported:

* ``cyclic``   -- Z/NZ, elements are ints in ``[0, N)``
* ``vector``   -- (Z/qZ)^n with q prime, elements are n-tuples of residues
* ``integers`` -- Z itself, elements are Python ints (unbounded)

Elements are plain Python values in canonical form so they hash, compare
and sort natively; canonical sort order is numeric for ints and
lexicographic for tuples.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Iterable, Iterator, Sequence, Union

from .errors import UsageError

Elem = Union[int, tuple]

CYCLIC = "cyclic"
VECTOR = "vector"
INTEGERS = "integers"


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


@dataclass(frozen=True)
class GroupSpec:
    """Descriptor of the ambient group. Equality is structural."""

    kind: str
    n: int | None = None
    q: int | None = None
    dim: int | None = None

    def __post_init__(self):
        if self.kind == CYCLIC:
            if not _is_int(self.n) or self.n < 2:
                raise UsageError(f"cyclic modulus must be an integer >= 2, got {self.n!r}")
            if self.q is not None or self.dim is not None:
                raise UsageError("cyclic group takes only a modulus")
        elif self.kind == VECTOR:
            if not _is_int(self.q) or not _is_prime(self.q):
                raise UsageError(f"vector group needs a prime q, got {self.q!r}")
            if not _is_int(self.dim) or self.dim < 1:
                raise UsageError(f"vector dimension must be >= 1, got {self.dim!r}")
            if self.n is not None:
                raise UsageError("vector group takes q and dim only")
        elif self.kind == INTEGERS:
            if self.n is not None or self.q is not None or self.dim is not None:
                raise UsageError("integers group takes no parameters")
        else:
            raise UsageError(f"unknown group kind {self.kind!r}")

    @classmethod
    def cyclic(cls, n: int) -> "GroupSpec":
        return cls(CYCLIC, n=n)

    @classmethod
    def vector(cls, q: int, dim: int) -> "GroupSpec":
        return cls(VECTOR, q=q, dim=dim)

    @classmethod
    def integers(cls) -> "GroupSpec":
        return cls(INTEGERS)

    # -- structure ---------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind != INTEGERS

    @property
    def order(self) -> int | None:
        if self.kind == CYCLIC:
            return self.n
        if self.kind == VECTOR:
            return self.q ** self.dim
        return None

    @property
    def zero(self) -> Elem:
        if self.kind == VECTOR:
            return (0,) * self.dim
        return 0

    def __str__(self) -> str:
        if self.kind == CYCLIC:
            return f"Z/{self.n}"
        if self.kind == VECTOR:
            return f"(Z/{self.q})^{self.dim}"
        return "Z"

    # -- elements ----------------------------------------------------------

    def is_valid(self, x: Any) -> bool:
        if self.kind == CYCLIC:
            return _is_int(x) and 0 <= x < self.n
        if self.kind == INTEGERS:
            return _is_int(x)
        return (
            isinstance(x, tuple)
            and len(x) == self.dim
            and all(_is_int(c) and 0 <= c < self.q for c in x)
        )

    def check(self, x: Any) -> Elem:
        """Return ``x`` as a canonical element, rejecting anything out of range."""
        if self.kind == VECTOR and isinstance(x, list):
            x = tuple(x)
        if not self.is_valid(x):
            raise UsageError(f"{x!r} is not a canonical element of {self}")
        return x

    def reduce(self, x: Any) -> Elem:
        """Map an integer (or integer vector) to its canonical representative."""
        if self.kind == CYCLIC:
            return int(x) % self.n
        if self.kind == INTEGERS:
            return int(x)
        x = tuple(int(c) % self.q for c in x)
        if len(x) != self.dim:
            raise UsageError(f"expected a vector of length {self.dim}, got {len(x)}")
        return x

    def add(self, a: Elem, b: Elem) -> Elem:
        if self.kind == CYCLIC:
            return (a + b) % self.n
        if self.kind == INTEGERS:
            return a + b
        q = self.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def neg(self, a: Elem) -> Elem:
        if self.kind == CYCLIC:
            return -a % self.n
        if self.kind == INTEGERS:
            return -a
        q = self.q
        return tuple(-x % q for x in a)

    def sub(self, a: Elem, b: Elem) -> Elem:
        return self.add(a, self.neg(b))

    def scale(self, a: Elem, lam: int) -> Elem:
        if self.kind == CYCLIC:
            return (a * lam) % self.n
        if self.kind == INTEGERS:
            return a * lam
        return tuple((x * lam) % self.q for x in a)

    def adder(self) -> Callable[[Elem, Elem], Elem]:
        """Specialised two-argument addition for hot loops."""
        if self.kind == CYCLIC:
            n = self.n
            return lambda a, b: (a + b) % n
        if self.kind == INTEGERS:
            return lambda a, b: a + b
        q = self.q
        return lambda a, b: tuple((x + y) % q for x, y in zip(a, b))

    def elements(self) -> Iterator[Elem]:
        if self.kind == CYCLIC:
            return iter(range(self.n))
        if self.kind == VECTOR:
            return product(range(self.q), repeat=self.dim)
        raise UsageError("the integers group cannot be enumerated")

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == CYCLIC:
            return {"type": CYCLIC, "n": self.n}
        if self.kind == VECTOR:
            return {"type": VECTOR, "q": self.q, "dim": self.dim}
        return {"type": INTEGERS}

    @classmethod
    def from_json(cls, obj: dict) -> "GroupSpec":
        if not isinstance(obj, dict) or "type" not in obj:
            raise UsageError(f"malformed group descriptor {obj!r}")
        kind = obj["type"]
        extra = set(obj) - {"type", "n", "q", "dim"}
        if extra:
            raise UsageError(f"unexpected group fields {sorted(extra)}")
        if kind == CYCLIC:
            return cls.cyclic(obj.get("n"))
        if kind == VECTOR:
            return cls.vector(obj.get("q"), obj.get("dim"))
        if kind == INTEGERS:
            return cls.integers()
        raise UsageError(f"unknown group type {kind!r}")

    def elem_to_json(self, x: Elem):
        return list(x) if self.kind == VECTOR else x

    def elem_from_json(self, obj) -> Elem:
        return self.check(tuple(obj) if isinstance(obj, list) else obj)


def _same_spec(*specs: GroupSpec) -> GroupSpec:
    first = specs[0]
    for s in specs[1:]:
        if s != first:
            raise UsageError(f"group mismatch: {first} vs {s}")
    return first


def elem_add(spec: GroupSpec, a: Elem, b: Elem) -> Elem:
    spec.check(a)
    spec.check(b)
    return spec.add(a, b)


def elem_neg(spec: GroupSpec, a: Elem) -> Elem:
    return spec.neg(spec.check(a))


@dataclass(frozen=True)
class GroupSet:
    """Finite set of distinct canonical elements, stored in sorted order.

    The constructor rejects duplicates and non-canonical elements; use
    :meth:`from_iterable` to build from raw data with deduplication and
    reduction.
    """

    spec: GroupSpec
    elems: tuple = ()
    _members: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        elems = tuple(self.spec.check(x) for x in self.elems)
        members = frozenset(elems)
        if len(members) != len(elems):
            raise UsageError("duplicate elements in set")
        object.__setattr__(self, "elems", tuple(sorted(elems)))
        object.__setattr__(self, "_members", members)

    @classmethod
    def from_iterable(cls, spec: GroupSpec, items: Iterable, reduce: bool = True) -> "GroupSet":
        conv = spec.reduce if reduce else spec.check
        return cls(spec, tuple(set(conv(x) for x in items)))

    @classmethod
    def full(cls, spec: GroupSpec) -> "GroupSet":
        return cls(spec, tuple(spec.elements()))

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self) -> Iterator[Elem]:
        return iter(self.elems)

    def __contains__(self, x) -> bool:
        if self.spec.kind == VECTOR and isinstance(x, list):
            x = tuple(x)
        return x in self._members

    def __getitem__(self, i):
        return self.elems[i]

    def __repr__(self) -> str:
        return f"GroupSet({self.spec}, {list(self.elems)!r})"

    @property
    def members(self) -> frozenset:
        return self._members

    def subset(self, indices: Iterable[int]) -> "GroupSet":
        return GroupSet(self.spec, tuple(self.elems[i] for i in indices))

    def with_elems(self, elems: Iterable) -> "GroupSet":
        return GroupSet(self.spec, tuple(elems))

    def union(self, other: "GroupSet") -> "GroupSet":
        _same_spec(self.spec, other.spec)
        return GroupSet(self.spec, tuple(self._members | other._members))

    def difference(self, other: "GroupSet | Iterable") -> "GroupSet":
        drop = other._members if isinstance(other, GroupSet) else set(other)
        return GroupSet(self.spec, tuple(x for x in self.elems if x not in drop))

    def issubset(self, other: "GroupSet") -> bool:
        return self.spec == other.spec and self._members <= other._members

    def translate(self, t: Elem) -> "GroupSet":
        add = self.spec.add
        return GroupSet(self.spec, tuple(add(x, t) for x in self.elems))

    def dilate(self, lam: int) -> "GroupSet":
        out = [self.spec.scale(x, lam) for x in self.elems]
        if len(set(out)) != len(out):
            raise UsageError(f"dilation by {lam} is not injective on this set")
        return GroupSet(self.spec, tuple(out))

    def negate(self) -> "GroupSet":
        return GroupSet(self.spec, tuple(self.spec.neg(x) for x in self.elems))

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "group": self.spec.to_json(),
            "elements": [self.spec.elem_to_json(x) for x in self.elems],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GroupSet":
        if not isinstance(obj, dict) or "group" not in obj or "elements" not in obj:
            raise UsageError("set file needs 'group' and 'elements'")
        spec = GroupSpec.from_json(obj["group"])
        if not isinstance(obj["elements"], list):
            raise UsageError("'elements' must be a list")
        return cls(spec, tuple(spec.elem_from_json(e) for e in obj["elements"]))

    def dumps(self) -> str:
        return canonical_json(self.to_json())

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def sumset(A: GroupSet, B: GroupSet) -> GroupSet:
    spec = _same_spec(A.spec, B.spec)
    add = spec.adder()
    return GroupSet(spec, tuple({add(a, b) for a in A.elems for b in B.elems}))


def difference_set(A: GroupSet, B: GroupSet) -> GroupSet:
    spec = _same_spec(A.spec, B.spec)
    return GroupSet(spec, tuple({spec.sub(a, b) for a in A.elems for b in B.elems}))


def load_set(path) -> GroupSet:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: not valid JSON ({exc})") from None
    return GroupSet.from_json(obj)


def save_set(A: GroupSet, path) -> None:
    with open(path, "w") as fh:
        fh.write(A.dumps() + "\n")


def subgroup_closure(spec: GroupSpec, gens: Sequence[Elem], limit: int | None = None) -> frozenset:
    """Subgroup generated by ``gens`` (breadth-first closure; finite groups only)."""
    if not spec.is_finite:
        raise UsageError("subgroup closure needs a finite group")
    gens = [g for g in set(gens) if g != spec.zero]
    gens += [spec.neg(g) for g in gens]
    seen = {spec.zero}
    frontier = [spec.zero]
    add = spec.adder()
    cap = limit or spec.order
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        if len(seen) > cap:
            raise UsageError("subgroup closure exceeded the group order")
    return frozenset(seen)
