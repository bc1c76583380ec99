"""Exact convolutions and higher additive energies.

Functions on the group are sparse maps ``elem -> positive int`` (zero
values are never stored).  Everything is integer-exact; no floating
point is used on any decision path.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, UsageError
from .exact import Inequality, compare_log_ratios, frac_json
from .groups import Elem, GroupSet, GroupSpec, _same_spec, sumset


@dataclass(frozen=True)
class IntFn:
    """Finitely supported non-negative integer function on a group."""

    spec: GroupSpec
    values: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for x, v in self.values.items():
            if not isinstance(v, int) or v < 0:
                raise UsageError(f"IntFn values must be non-negative ints, got {v!r}")
            if v:
                clean[self.spec.check(x)] = v
        object.__setattr__(self, "values", clean)

    @classmethod
    def indicator(cls, A: GroupSet) -> "IntFn":
        return cls(A.spec, {a: 1 for a in A})

    @classmethod
    def delta(cls, spec: GroupSpec, x: Elem | None = None) -> "IntFn":
        return cls(spec, {spec.zero if x is None else x: 1})

    def __call__(self, x) -> int:
        return self.values.get(x, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntFn) and self.spec == other.spec and self.values == other.values

    def __hash__(self):
        return hash((self.spec, frozenset(self.values.items())))

    @property
    def support(self) -> GroupSet:
        return GroupSet(self.spec, tuple(self.values))

    def mass(self) -> int:
        return sum(self.values.values())

    def l2(self) -> int:
        return sum(v * v for v in self.values.values())

    def items(self):
        return sorted(self.values.items())

    def reflect(self) -> "IntFn":
        neg = self.spec.neg
        return IntFn(self.spec, {neg(x): v for x, v in self.values.items()})

    def dot(self, other: "IntFn") -> int:
        _same_spec(self.spec, other.spec)
        small, big = sorted((self.values, other.values), key=len)
        return sum(v * big.get(x, 0) for x, v in small.items())

    def to_json(self) -> dict:
        return {
            "group": self.spec.to_json(),
            "values": [[self.spec.elem_to_json(x), v] for x, v in self.items()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IntFn":
        spec = GroupSpec.from_json(obj["group"])
        vals = {}
        for x, v in obj["values"]:
            x = spec.elem_from_json(x)
            if x in vals:
                raise UsageError(f"duplicate key {x!r} in IntFn")
            vals[x] = v
        return cls(spec, vals)


def _as_fn(f) -> IntFn:
    return IntFn.indicator(f) if isinstance(f, GroupSet) else f


def convolve(f, g) -> IntFn:
    """``(f*g)(x) = sum_s f(s) g(x-s)``."""
    f, g = _as_fn(f), _as_fn(g)
    spec = _same_spec(f.spec, g.spec)
    add = spec.adder()
    out: dict = defaultdict(int)
    gi = list(g.values.items())
    for s, fs in f.values.items():
        for t, gt in gi:
            out[add(s, t)] += fs * gt
    return IntFn(spec, out)


def correlate(f, g) -> IntFn:
    """``(f o g)(x) = sum_s f(s) g(s-x)``, i.e. ``f * reflect(g)``."""
    f, g = _as_fn(f), _as_fn(g)
    return convolve(f, g.reflect())


def convolve_many(fs: Sequence) -> IntFn:
    if not fs:
        raise UsageError("need at least one function")
    acc = _as_fn(fs[0])
    for f in fs[1:]:
        acc = convolve(acc, f)
    return acc


def iterated_self_conv(A, j: int) -> IntFn:
    """``A *_j A``: the (j+1)-fold representation function of ``A``.

    ``j = 0`` gives the indicator of ``A`` itself.  Accepts a set or an
    :class:`IntFn`.
    """
    if j < 0:
        raise DomainError("iteration count must be >= 0")
    base = _as_fn(A)
    if not base.values:
        raise DomainError("iterated convolution of an empty function")
    acc = base
    for _ in range(j):
        acc = convolve(acc, base)
    return acc


@dataclass(frozen=True)
class Energy:
    value: int
    k: int

    def __int__(self):
        return self.value

    def to_json(self):
        return {"k": self.k, "value": self.value}


def energy(A, k: int) -> Energy:
    """``T_k(A) = sum_x (A *_{k-1} A)(x)^2``.

    ``A`` may be a set or an :class:`IntFn` (giving ``T_k(f)``).
    """
    if k < 2:
        raise DomainError("energy order k must be >= 2")
    f = _as_fn(A)
    if not f.values:
        return Energy(0, k)
    return Energy(iterated_self_conv(f, k - 1).l2(), k)


def T(A, k: int) -> int:
    """Shorthand for ``energy(A, k).value``; the empty set has energy 0."""
    f = _as_fn(A)
    if not f.values:
        return 0
    return energy(f, k).value


def brute_energy(A: GroupSet, k: int) -> int:
    """Histogram oracle: count 2k-tuples by tabulating every k-fold sum.

    Deliberately independent of :func:`convolve`: it walks all ``|A|^k``
    ordered k-tuples directly.
    """
    from itertools import product

    spec = A.spec
    hist: dict = defaultdict(int)
    for tup in product(A.elems, repeat=k):
        s = spec.zero
        for a in tup:
            s = spec.add(s, a)
        hist[s] += 1
    return sum(c * c for c in hist.values())


@dataclass(frozen=True)
class ZetaValue:
    """``zeta_k(A) = log T_k(A) / log |A|`` carried as the exact pair."""

    energy: int
    size: int
    k: int

    @property
    def approx(self) -> float:
        from math import log

        return log(self.energy) / log(self.size)

    def compare(self, other: "ZetaValue") -> int:
        return compare_log_ratios(self.energy, self.size, other.energy, other.size)

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __lt__(self, other):
        return self.compare(other) < 0

    def bounds(self) -> tuple[Inequality, Inequality]:
        m, k = self.size, self.k
        return (
            Inequality("|A|^k <= T_k(A)", m**k, "<=", self.energy),
            Inequality("T_k(A) <= |A|^(2k-1)", self.energy, "<=", m ** (2 * k - 1)),
        )

    def to_json(self) -> dict:
        return {"energy": self.energy, "size": self.size, "k": self.k, "decimal": f"{self.approx:.12f}"}


def zeta(A: GroupSet, k: int) -> ZetaValue:
    if len(A) < 2:
        raise DomainError("zeta needs |A| >= 2")
    z = ZetaValue(T(A, k), len(A), k)
    lo, hi = z.bounds()
    if not (lo and hi):
        raise ArithmeticError(f"energy outside [|A|^k, |A|^(2k-1)]: {z}")
    return z


def zeta_from(t: int, m: int, k: int) -> ZetaValue:
    return ZetaValue(t, m, k)


# -- inequality checkers -----------------------------------------------------


def _is_pow2(k: int) -> bool:
    return isinstance(k, int) and k >= 2 and k & (k - 1) == 0


@dataclass(frozen=True)
class HolderVerdict:
    sigma: int
    inequality: Inequality
    k1: int
    k2: int

    @property
    def holds(self) -> bool:
        return self.inequality.holds

    @property
    def equality(self) -> bool:
        return self.inequality.lhs == self.inequality.rhs

    def to_json(self):
        return {"sigma": self.sigma, "k1": self.k1, "k2": self.k2, "inequality": self.inequality.to_json()}


def check_holder(fs: Sequence, gs: Sequence, k1: int | None = None, k2: int | None = None) -> HolderVerdict:
    """Cross-powered Hoelder-type bound for iterated convolutions.

    Verifies ``sigma^(4 k1 k2) <= prod T_k1(f_i)^(2 k2) * prod T_k2(g_j)^(2 k1)``
    where ``sigma = sum_x (f_1*...*f_k1)(x) (g_1*...*g_k2)(x)``.
    """
    fs = [_as_fn(f) for f in fs]
    gs = [_as_fn(g) for g in gs]
    k1 = len(fs) if k1 is None else k1
    k2 = len(gs) if k2 is None else k2
    if not (_is_pow2(k1) and _is_pow2(k2)):
        raise DomainError(f"k1, k2 must be powers of two >= 2, got {k1}, {k2}")
    if len(fs) != k1 or len(gs) != k2:
        raise UsageError("number of functions must equal k1 and k2")
    _same_spec(*(f.spec for f in fs + gs))
    if any(not f.values for f in fs + gs):
        sigma = 0
    else:
        sigma = convolve_many(fs).dot(convolve_many(gs))
    rhs = 1
    for f in fs:
        rhs *= T(f, k1) ** (2 * k2)
    for g in gs:
        rhs *= T(g, k2) ** (2 * k1)
    ineq = Inequality("sigma^(4k1k2) <= prod T_k1(f)^(2k2) prod T_k2(g)^(2k1)", abs(sigma) ** (4 * k1 * k2), "<=", rhs)
    return HolderVerdict(sigma, ineq, k1, k2)


def check_tk_vs_t2(A: GroupSet, k: int) -> Inequality:
    """``T_k(A) |A|^(k-2) >= T_2(A)^(k-1)``."""
    if not len(A):
        raise DomainError("need a nonempty set")
    if k < 2:
        raise DomainError("k must be >= 2")
    m = len(A)
    return Inequality("T_k(A)|A|^(k-2) >= T_2(A)^(k-1)", T(A, k) * m ** (k - 2), ">=", T(A, 2) ** (k - 1))


@dataclass(frozen=True)
class DoublingVerdict:
    sumset_size: int
    energy: int
    size: int
    inequality: Inequality

    @property
    def doubling(self) -> Fraction:
        return Fraction(self.sumset_size, self.size)

    @property
    def holds(self) -> bool:
        return self.inequality.holds

    def to_json(self):
        return {
            "sumset_size": self.sumset_size,
            "T_2": self.energy,
            "size": self.size,
            "doubling": frac_json(self.doubling),
            "inequality": self.inequality.to_json(),
        }


def doubling_energy_bound(A: GroupSet) -> DoublingVerdict:
    """Cauchy-Schwarz: ``|A|^4 <= T_2(A) |A+A|``."""
    if not len(A):
        raise DomainError("need a nonempty set")
    m = len(A)
    s = len(sumset(A, A))
    t2 = T(A, 2)
    return DoublingVerdict(s, t2, m, Inequality("|A|^4 <= T_2(A)|A+A|", m**4, "<=", t2 * s))


def cut_weight(A: GroupSet, k: int) -> IntFn:
    """``w = (A *_{k-2} A) o (A *_{k-2} A)``, the weight behind ``e(E, F)``."""
    if k < 2:
        raise DomainError("k must be >= 2")
    r = iterated_self_conv(A, k - 2)
    return correlate(r, r)


def sum_T(sets: Iterable[GroupSet], k: int) -> int:
    return sum(T(S, k) for S in sets)
