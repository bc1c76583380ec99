import random

import pytest
from oracles import dissociated_oracle

from addenergy.dissociation import (
    SpanIndex,
    certify,
    check_rudin,
    is_dissociated,
    maximal_dissociated_subset,
    signed_sum,
    small_basis_bound,
    span_contains,
    span_enumerate,
)
from addenergy.errors import CapacityError, DomainError
from addenergy.generators import make
from addenergy.groups import GroupSet, GroupSpec

ZZ = GroupSpec.integers()


def ints(*xs):
    return GroupSet(ZZ, xs)


def test_dissociation_examples():
    assert is_dissociated(ints(1, 2))
    v = is_dissociated(ints(1, 2, 3))
    assert not v and signed_sum(ZZ, (1, 2, 3), v.witness) == 0 and any(v.witness)
    w = is_dissociated(ints(0, 5))
    assert not w and w.witness[0] != 0 and w.witness[1] == 0


def test_methods_agree():
    rng = random.Random(2)
    for G in (GroupSpec.cyclic(101), GroupSpec.vector(3, 3), ZZ):
        for _ in range(30):
            L = make("random", G, seed=rng.randrange(10**6), size=rng.randint(1, 6))
            a = is_dissociated(L, method="exhaustive")
            b = is_dissociated(L, method="mitm")
            assert bool(a) == bool(b)
            for v in (a, b):
                if not v:
                    assert signed_sum(G, L.elems, v.witness) == G.zero


def test_maximal_subset_examples():
    P = make("subspace", GroupSpec.vector(2, 4), seed=0, dim=3)
    L = maximal_dissociated_subset(P).base
    assert len(L) == 3
    assert span_enumerate(L).elements.members == P.members
    assert len(maximal_dissociated_subset(ints(0)).base) == 0
    assert maximal_dissociated_subset(ints(1, 2, 3, 4)).base.elems == (1, 2, 4)
    D = make("dissociated", GroupSpec.cyclic(10**6), seed=4, size=5)
    assert maximal_dissociated_subset(D).base == D


def test_maximal_subset_is_maximal():
    rng = random.Random(3)
    G = GroupSpec.cyclic(97)
    add, neg = (lambda a, b: (a + b) % 97), (lambda a: (-a) % 97)
    for s in range(20):
        A = make("random", G, seed=rng.randrange(10**6), size=10)
        L = maximal_dissociated_subset(A, seed=s).base
        ok, span = dissociated_oracle(list(L.elems), add, neg, 0)
        assert ok and set(A.elems) <= span


def test_span_examples():
    assert span_enumerate(ints()).elements.elems == (0,)
    r = span_enumerate(ints(1, 2))
    assert r.elements.elems == tuple(range(-3, 4)) and r.size == 7
    V22 = GroupSpec.vector(2, 2)
    assert span_enumerate(GroupSet(V22, ((1, 0), (0, 1)))).size == 4
    assert span_enumerate(ints(1, 2), target=ints(3, 4)).target_count == 1


def test_span_contains_examples():
    L = ints(1, 2)
    assert span_contains(L, 0)
    hit = span_contains(L, 3)
    assert hit and signed_sum(ZZ, L.elems, hit.witness) == 3
    assert not span_contains(L, 4)
    D = make("dissociated", ZZ, seed=1, size=6)
    for x in D:
        w = span_contains(D, x).witness
        assert sum(abs(c) for c in w) == 1


def test_span_index_counts():
    L = ints(1, 2)
    idx = SpanIndex(L)
    assert 3 in idx and 4 not in idx
    assert idx.count(ints(-3, 0, 4, 5)) == 2


def test_caps_raise_instead_of_guessing():
    L = GroupSet(ZZ, tuple(3**i for i in range(8)))
    with pytest.raises(CapacityError):
        is_dissociated(L, mitm_cap=4)
    with pytest.raises(CapacityError):
        span_contains(L, 1, mitm_cap=4)
    with pytest.raises(CapacityError):
        span_enumerate(L, cap=4)


def test_certify_rejects_dependent_sets():
    assert certify(ints(1, 2)).certificate == "exhaustive"
    with pytest.raises(DomainError):
        certify(ints(1, 2, 3))


def test_rudin_examples():
    assert check_rudin(ints(1), 3).lhs == 1
    v = check_rudin(ints(1, 2, 4), 2)
    assert v.lhs == 15 and v.rhs == 288**2 * 4 * 9 and v.holds
    D = make("dissociated", GroupSpec.cyclic(10**6), seed=8, size=8)
    assert is_dissociated(D) and check_rudin(D, 4).holds


def test_small_basis_examples():
    P = make("subspace", GroupSpec.vector(2, 3), seed=0, dim=3)
    rep = small_basis_bound(P, 2, 1)
    assert len(rep.lam) == 3 and rep.spans_all and rep.bound.holds
    # |L|^2 T_2 <= (288 * 2 * 64)^2 cross-powered
    assert rep.bound.lhs == 9 * 8**3 and rep.bound.rhs == (288 * 2 * 64) ** 2
    rep0 = small_basis_bound(ints(0), 2)
    assert len(rep0.lam) == 0 and rep0.spans_all
    D = make("dissociated", ZZ, seed=5, size=5)
    assert small_basis_bound(D, 2).lam.base == D
