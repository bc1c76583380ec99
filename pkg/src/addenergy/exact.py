"""Exact rational constants and rigorous log bounds.

Constants such as ``C``, ``beta`` and ``epsilon`` are :class:`fractions.Fraction`
throughout.  Wherever a logarithm enters a derived quantity we work with
outward-rounded rational enclosures obtained from mpmath's interval
arithmetic, so a bound is never certified by a rounding artefact.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

from mpmath import iv
from mpmath.libmp import to_rational

from .errors import DomainError, UsageError

Rational = Union[int, Fraction, str]

MAX_PREC = 1 << 14


def as_fraction(x: Rational) -> Fraction:
    """Parse ``1/32``, ``0.5``, ints and Fractions. Floats are refused."""
    if isinstance(x, bool):
        raise UsageError("booleans are not rational constants")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"cannot parse rational constant {x!r}") from None
    raise UsageError(f"rational constants must be int, Fraction or str, got {type(x).__name__}")


@contextmanager
def _workprec(prec: int):
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


def frac_json(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _endpoints(val) -> tuple[Fraction, Fraction]:
    lo, hi = (to_rational(x) for x in val._mpi_)
    return Fraction(int(lo[0]), int(lo[1])), Fraction(int(hi[0]), int(hi[1]))


def _iv(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def log2_bounds(x: Rational, prec: int = 96) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= log2(x) <= hi``."""
    x = as_fraction(x)
    if x <= 0:
        raise DomainError("log of a non-positive number")
    if x == 1:
        return Fraction(0), Fraction(0)
    with _workprec(prec):
        return _endpoints(iv.log(_iv(x)) / iv.log(2))


def ln_bounds(x: Rational, prec: int = 96) -> tuple[Fraction, Fraction]:
    x = as_fraction(x)
    if x <= 0:
        raise DomainError("log of a non-positive number")
    if x == 1:
        return Fraction(0), Fraction(0)
    with _workprec(prec):
        return _endpoints(iv.log(_iv(x)))


def interval(expr, prec: int = 96) -> tuple[Fraction, Fraction]:
    """Evaluate ``expr(iv)`` in interval arithmetic and return rational endpoints.

    ``expr`` receives the mpmath ``iv`` context and a converter for Fractions.
    """
    with _workprec(prec):
        return _endpoints(expr(iv, _iv))


def floor_log2_ln(m: int) -> int:
    """``floor(log2(ln m))`` for ``m >= 2``; exact (ln m is never a power of two)."""
    if m < 2:
        raise DomainError("need m >= 2")
    prec = 64
    while prec <= MAX_PREC:
        with _workprec(prec):
            lo, hi = _endpoints(iv.log(iv.log(iv.mpf(m))) / iv.log(2))
        flo, fhi = _floor(lo), _floor(hi)
        if flo == fhi:
            return flo
        prec *= 2
    raise DomainError("could not resolve floor(log2 ln m)")


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def iroot_floor(x: Fraction, k: int) -> int:
    """Largest integer ``n >= 0`` with ``n**k <= x``."""
    if x < 0:
        raise DomainError("negative radicand")
    lo, hi = 0, 1
    while Fraction(hi) ** k <= x:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if Fraction(mid) ** k <= x:
            lo = mid
        else:
            hi = mid
    return lo


# -- comparison of log ratios ----------------------------------------------


def coprime_base(nums) -> list[int]:
    """Pairwise coprime integers > 1 such that every input factors over them."""
    base: list[int] = []

    def insert(n: int):
        if n == 1:
            return
        for i, b in enumerate(base):
            g = gcd(n, b)
            if g > 1:
                base.pop(i)
                for piece in (g, b // g, n // g):
                    insert(piece)
                return
        base.append(n)

    for n in nums:
        insert(int(n))
    return sorted(base)


def exponents_over(n: int, base: list[int]) -> list[int]:
    out = []
    for b in base:
        e = 0
        while n % b == 0:
            n //= b
            e += 1
        out.append(e)
    if n != 1:
        raise ArithmeticError("number does not factor over the coprime base")
    return out


def compare_log_ratios(t1: int, m1: int, t2: int, m2: int) -> int:
    """Sign of ``log t1 / log m1 - log t2 / log m2`` for integers ``t >= 1``, ``m >= 2``.

    Exact equality is decided symbolically over a coprime base; otherwise
    the sign is resolved by interval arithmetic at increasing precision.
    """
    if min(m1, m2) < 2 or min(t1, t2) < 1:
        raise DomainError("log ratio needs t >= 1 and m >= 2")
    base = coprime_base([t1, m1, t2, m2])
    et1, em1, et2, em2 = (exponents_over(x, base) for x in (t1, m1, t2, m2))
    r = len(base)
    # log t1 * log m2 - log t2 * log m1 as a quadratic form in log(base)
    coeff = {}
    for i in range(r):
        for j in range(r):
            c = et1[i] * em2[j] - et2[i] * em1[j]
            key = (min(i, j), max(i, j))
            coeff[key] = coeff.get(key, 0) + c
    if all(c == 0 for c in coeff.values()):
        return 0
    prec = 64
    while prec <= MAX_PREC:
        with _workprec(prec):
            d = iv.log(iv.mpf(t1)) * iv.log(iv.mpf(m2)) - iv.log(iv.mpf(t2)) * iv.log(iv.mpf(m1))
            lo, hi = _endpoints(d)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2
    raise DomainError("log ratio comparison unresolved at maximum precision")


# -- exact verdicts ----------------------------------------------------------

_RELATIONS = {
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "==": lambda a, b: a == b,
}


@dataclass(frozen=True)
class Inequality:
    """One integer inequality instance ``lhs <relation> rhs`` with its verdict.

    Both sides are exact integers (rationals are cleared before
    construction), so the verdict can be re-derived from the JSON alone.
    """

    name: str
    lhs: int
    relation: str
    rhs: int

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise UsageError(f"unknown relation {self.relation!r}")
        for side in (self.lhs, self.rhs):
            if not isinstance(side, int) or isinstance(side, bool):
                raise UsageError(f"inequality sides must be integers, got {side!r}")

    @property
    def holds(self) -> bool:
        return _RELATIONS[self.relation](self.lhs, self.rhs)

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "relation": self.relation,
            "rhs": self.rhs,
            "holds": self.holds,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Inequality":
        return cls(obj["name"], obj["lhs"], obj["relation"], obj["rhs"])


def recheck_inequality(obj: dict) -> bool:
    """True iff the stored verdict matches a fresh evaluation of the sides."""
    ineq = Inequality.from_json(obj)
    return ineq.holds == bool(obj.get("holds"))
