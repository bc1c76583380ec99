"""Dissociated sets and signed spans.

``Span L`` is the set of all sums ``sum eps_i l_i`` with ``eps_i`` in
``{-1, 0, 1}``.  ``L`` is dissociated when the only such sum equal to zero
is the trivial one.

Membership and dissociativity are decided by meet-in-the-middle over a
balanced split of ``L``: the ``3^h`` signed sums of each half are
tabulated as integer codes and matched by sorted search.  Both routines
are exact; sizes above the configured caps raise :class:`CapacityError`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .energy import T
from .errors import CapacityError, DomainError
from .exact import Inequality, Rational, as_fraction, frac_json
from .groups import CYCLIC, INTEGERS, Elem, GroupSet, GroupSpec

ENUMERATE_CAP = 12
MITM_CAP = 30
RUDIN_M = 288

_SAFE = 1 << 62


class _SignedSums:
    """Codes of all ``3^h`` signed sums of ``elems``.

    Index ``i`` written in base 3 with digit ``d_j`` for ``elems[j]`` encodes
    ``eps_j = 0, +1, -1`` for ``d_j = 0, 1, 2``; index 0 is the empty sum.
    """

    def __init__(self, spec: GroupSpec, elems):
        self.spec = spec
        self.elems = list(elems)
        if spec.kind == CYCLIC:
            n = spec.n
            dtype = np.int64 if 2 * n < _SAFE else object
            codes = np.zeros(1, dtype=dtype)
            for lam in self.elems:
                codes = np.concatenate([codes, (codes + lam) % n, (codes - lam) % n])
            self.codes = codes
        elif spec.kind == INTEGERS:
            dtype = np.int64 if sum(abs(x) for x in self.elems) < _SAFE else object
            codes = np.zeros(1, dtype=dtype)
            for lam in self.elems:
                codes = np.concatenate([codes, codes + lam, codes - lam])
            self.codes = codes
        else:
            q, dim = spec.q, spec.dim
            rows = np.zeros((1, dim), dtype=np.int64)
            for lam in self.elems:
                v = np.array(lam, dtype=np.int64)
                rows = np.concatenate([rows, (rows + v) % q, (rows - v) % q])
            self.rows = rows
            self.codes = self._encode(rows)

    def _encode(self, rows):
        q, dim = self.spec.q, self.spec.dim
        if q**dim < _SAFE:
            weights = np.array([q ** (dim - 1 - i) for i in range(dim)], dtype=np.int64)
            return rows @ weights
        weights = np.array([q ** (dim - 1 - i) for i in range(dim)], dtype=object)
        return rows.astype(object) @ weights

    def encode_elem(self, x: Elem):
        if self.spec.kind == CYCLIC or self.spec.kind == INTEGERS:
            return x
        q, dim = self.spec.q, self.spec.dim
        return sum(c * q ** (dim - 1 - i) for i, c in enumerate(x))

    def target_codes(self, x: Elem):
        """Codes of ``x - s`` for every signed sum ``s`` of this half."""
        spec = self.spec
        if spec.kind == CYCLIC:
            return (x - self.codes) % spec.n
        if spec.kind == INTEGERS:
            return x - self.codes
        return self._encode((np.array(x, dtype=np.int64) - self.rows) % spec.q)

    def signs(self, index: int) -> list[int]:
        out = []
        for _ in self.elems:
            d = index % 3
            out.append((0, 1, -1)[d])
            index //= 3
        return out

    def __len__(self):
        return len(self.codes)


def _find_match(left: _SignedSums, targets, skip_trivial: bool):
    """First pair ``(i_left, i_right)`` with ``left.codes[i_left] == targets[i_right]``.

    With ``skip_trivial`` the pair ``(0, 0)`` does not count.
    """
    order = np.argsort(left.codes, kind="stable")
    sorted_codes = left.codes[order]
    pos = np.searchsorted(sorted_codes, targets)
    pos_c = np.minimum(pos, len(sorted_codes) - 1)
    hit = sorted_codes[pos_c] == targets
    hit = np.asarray(hit, dtype=bool)
    hits = np.nonzero(hit)[0]
    for i_right in hits:
        i_right = int(i_right)
        start = int(pos_c[i_right])
        if not skip_trivial or i_right != 0:
            return int(order[start]), i_right
        # right index 0: need a nonzero left index carrying the same code
        j = start
        while j < len(sorted_codes) and sorted_codes[j] == targets[0]:
            if int(order[j]) != 0:
                return int(order[j]), 0
            j += 1
    return None


def _split(elems):
    h = (len(elems) + 1) // 2
    return elems[:h], elems[h:]


@dataclass(frozen=True)
class DissociationVerdict:
    dissociated: bool
    witness: tuple | None
    method: str

    def __bool__(self):
        return self.dissociated

    def to_json(self):
        return {"dissociated": self.dissociated, "witness": list(self.witness) if self.witness else None, "method": self.method}


def _relation_exhaustive(L: GroupSet):
    table = _SignedSums(L.spec, L.elems)
    zeros = np.nonzero(np.asarray(table.codes == table.encode_elem(L.spec.zero), dtype=bool))[0]
    for idx in zeros:
        if idx != 0:
            return tuple(table.signs(int(idx)))
    return None


def _relation_mitm(L: GroupSet):
    left_e, right_e = _split(list(L.elems))
    left = _SignedSums(L.spec, left_e)
    right = _SignedSums(L.spec, right_e)
    found = _find_match(left, right.target_codes(L.spec.zero), skip_trivial=True)
    if found is None:
        return None
    i_left, i_right = found
    # left + right = 0  <=>  left = 0 - right; signs of right enter with +
    return tuple(left.signs(i_left) + right.signs(i_right))


def is_dissociated(L: GroupSet, method: str = "mitm", mitm_cap: int = MITM_CAP) -> DissociationVerdict:
    """Decide dissociativity; on failure return a ``{-1,0,1}`` relation aligned with ``L.elems``."""
    if method == "exhaustive":
        if len(L) > ENUMERATE_CAP:
            raise CapacityError(f"|L| = {len(L)} exceeds the enumeration cap {ENUMERATE_CAP}")
        w = _relation_exhaustive(L)
    elif method == "mitm":
        if len(L) > mitm_cap:
            raise CapacityError(f"|L| = {len(L)} exceeds the meet-in-the-middle cap {mitm_cap}")
        w = _relation_mitm(L)
    else:
        raise DomainError(f"unknown method {method!r}")
    return DissociationVerdict(w is None, w, method)


def signed_sum(spec: GroupSpec, elems, signs) -> Elem:
    acc = spec.zero
    for x, e in zip(elems, signs):
        if e:
            acc = spec.add(acc, x if e > 0 else spec.neg(x))
    return acc


@dataclass(frozen=True)
class SpanMembership:
    member: bool
    witness: tuple | None

    def __bool__(self):
        return self.member


def span_contains(L: GroupSet, x: Elem, mitm_cap: int = MITM_CAP) -> SpanMembership:
    """Exact test of ``x in Span L`` with a sign vector witness."""
    if len(L) > mitm_cap:
        raise CapacityError(f"|L| = {len(L)} exceeds the meet-in-the-middle cap {mitm_cap}")
    x = L.spec.check(x)
    if x == L.spec.zero:
        return SpanMembership(True, (0,) * len(L))
    if len(L) == 0:
        return SpanMembership(False, None)
    left_e, right_e = _split(list(L.elems))
    left = _SignedSums(L.spec, left_e)
    right = _SignedSums(L.spec, right_e)
    found = _find_match(left, right.target_codes(x), skip_trivial=False)
    if found is None:
        return SpanMembership(False, None)
    return SpanMembership(True, tuple(left.signs(found[0]) + right.signs(found[1])))


class SpanIndex:
    """Reusable membership oracle for one ``L`` (tables built once)."""

    def __init__(self, L: GroupSet, mitm_cap: int = MITM_CAP):
        if len(L) > mitm_cap:
            raise CapacityError(f"|L| = {len(L)} exceeds the meet-in-the-middle cap {mitm_cap}")
        self.L = L
        left_e, right_e = _split(list(L.elems))
        self.left = _SignedSums(L.spec, left_e)
        self.right = _SignedSums(L.spec, right_e)
        order = np.argsort(self.left.codes, kind="stable")
        self._sorted = self.left.codes[order]

    def __contains__(self, x) -> bool:
        targets = self.right.target_codes(self.L.spec.check(x))
        pos = np.minimum(np.searchsorted(self._sorted, targets), len(self._sorted) - 1)
        return bool(np.any(np.asarray(self._sorted[pos] == targets, dtype=bool)))

    def count(self, A: GroupSet) -> int:
        return sum(1 for a in A if a in self)


@dataclass(frozen=True)
class SpanResult:
    lam: GroupSet
    elements: GroupSet
    target_count: int | None = None

    @property
    def size(self) -> int:
        return len(self.elements)

    def to_json(self):
        out = {"lambda": self.lam.to_json()["elements"], "span_size": self.size}
        if self.target_count is not None:
            out["covered_count"] = self.target_count
        return out


def span_enumerate(L: GroupSet, target: GroupSet | None = None, cap: int = ENUMERATE_CAP) -> SpanResult:
    if len(L) > cap:
        raise CapacityError(f"|L| = {len(L)} exceeds the enumeration cap {cap}; use span_contains")
    spec = L.spec
    out = {spec.zero}
    for lam in L.elems:
        neg = spec.neg(lam)
        out |= {spec.add(s, lam) for s in out} | {spec.add(s, neg) for s in out}
    elems = GroupSet(spec, tuple(out))
    count = None if target is None else len(target.members & elems.members)
    return SpanResult(L, elems, count)


@dataclass(frozen=True)
class DissociatedSet:
    base: GroupSet
    certificate: str

    def __len__(self):
        return len(self.base)

    def to_json(self):
        return {"elements": self.base.to_json()["elements"], "certificate": self.certificate}


def certify(L: GroupSet, mitm_cap: int = MITM_CAP) -> DissociatedSet:
    method = "exhaustive" if len(L) <= ENUMERATE_CAP else "mitm"
    v = is_dissociated(L, method=method, mitm_cap=mitm_cap)
    if not v:
        raise DomainError(f"set is not dissociated; relation {v.witness}")
    return DissociatedSet(L, "exhaustive" if method == "exhaustive" else "meet-in-the-middle")


def maximal_dissociated_subset(
    A: GroupSet, seed: int | None = None, order=None, mitm_cap: int = MITM_CAP
) -> DissociatedSet:
    """Greedy maximal dissociated subset of ``A``.

    ``L + {a}`` stays dissociated exactly when ``a`` is outside ``Span L``,
    so each candidate costs one membership test.  Candidates are taken in
    sorted order, a seeded shuffle of it, or an explicit ``order``.
    """
    if order is None:
        order = list(A.elems)
        if seed is not None:
            random.Random(seed).shuffle(order)
    chosen: list = []
    spec = A.spec
    for a in order:
        if a == spec.zero:
            continue
        if len(chosen) >= mitm_cap:
            raise CapacityError(f"dissociated subset grew past the cap {mitm_cap}")
        if not span_contains(GroupSet(spec, tuple(chosen)), a, mitm_cap=mitm_cap):
            chosen.append(a)
    return certify(GroupSet(spec, tuple(chosen)), mitm_cap=mitm_cap)


def check_rudin(L, k: int) -> Inequality:
    """``T_k(L) <= 288^k k^k |L|^k`` for dissociated ``L``."""
    if isinstance(L, DissociatedSet):
        L = L.base
    if k < 2:
        raise DomainError("k must be >= 2")
    n = len(L)
    return Inequality("T_k(L) <= 288^k k^k |L|^k", T(L, k), "<=", RUDIN_M**k * k**k * n**k)


@dataclass(frozen=True)
class SmallBasisReport:
    lam: DissociatedSet
    bound: Inequality
    covered: int
    size: int
    k: int
    C: Fraction

    @property
    def spans_all(self) -> bool:
        return self.covered == self.size

    def to_json(self):
        return {
            "lambda": self.lam.to_json(),
            "k": self.k,
            "C": frac_json(self.C),
            "bound": self.bound.to_json(),
            "covered_count": self.covered,
            "size": self.size,
            "spans_all": self.spans_all,
        }


def small_basis_bound(A: GroupSet, k: int, C: Rational = 1, seed: int | None = None) -> SmallBasisReport:
    """Maximal dissociated subset against ``|L| <= 288 C^-2 k |A|^2 / T_k(A)^(1/k)``.

    Cross-powered: ``|L|^k T_k(A) p^(2k) <= (288 q^2 k |A|^2)^k`` for ``C = p/q``.
    """
    C = as_fraction(C)
    if not len(A):
        raise DomainError("need a nonempty set")
    if C <= 0:
        raise DomainError("C must be positive")
    lam = maximal_dissociated_subset(A, seed=seed)
    p, q = C.numerator, C.denominator
    m = len(A)
    lhs = len(lam) ** k * T(A, k) * p ** (2 * k)
    rhs = (RUDIN_M * q * q * k * m * m) ** k
    covered = SpanIndex(lam.base).count(A) if len(lam) else sum(1 for a in A if a == A.spec.zero)
    return SmallBasisReport(lam, Inequality("|L|^k T_k(A) C^2k <= (288 k |A|^2)^k", lhs, "<=", rhs), covered, m, k, C)
