import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from oracles import cyclic_energy_table, exhaustive_connected, zeta_geq

from addenergy.connectivity import (
    CONNECTED,
    NO_COUNTEREXAMPLE,
    VIOLATED,
    ConnectivityParams,
    almost_basis_l_floor,
    check_connected,
    check_strong_implies_weak,
    check_strongly_connected,
    extract_almost_basis,
    extract_connected_subset,
    konyagin_containment,
    replay_extraction,
    window_sizes,
)
from addenergy.energy import T
from addenergy.exact import Inequality
from addenergy.errors import CapacityError, DomainError, UnsupportedSpecError
from addenergy.generators import make
from addenergy.groups import GroupSet, GroupSpec

F = Fraction
ZZ = GroupSpec.integers()
Z100 = GroupSpec.cyclic(100)


def P(q=2, d=3, dim=3, seed=0):
    return make("subspace", GroupSpec.vector(q, d), seed=seed, dim=dim)


def params(**kw):
    base = dict(k=2, C=F(1), beta1=F(0), beta2=F(1))
    base.update(kw)
    return ConnectivityParams(**base)


def test_params_validation():
    with pytest.raises(DomainError):
        ConnectivityParams(C=F(3, 2))
    with pytest.raises(DomainError):
        ConnectivityParams(beta1=F(3, 4), beta2=F(1, 2))
    with pytest.raises(DomainError):
        ConnectivityParams(k=1)
    assert ConnectivityParams().to_json()["C"] == "1"


def test_window_sizes():
    assert window_sizes(8, F(0), F(1)) == list(range(1, 9))
    assert window_sizes(8, F(1, 4), F(1, 2)) == [2, 3, 4]


def test_subspace_connected_at_c1():
    v = check_connected(P(d=2, dim=2), params())
    assert v.status == CONNECTED and v.certified and v.checked == 15


def test_two_point_set_connected_at_half():
    A = GroupSet(ZZ, (0, 10**6))
    v = check_connected(A, params(C=F(1, 2)))
    assert v.status == CONNECTED and v.checked == 3
    # worst B is A itself: 6 * 2^4 * 2^4 >= 1 * 2^4 * 6
    assert v.witness == A
    assert v.inequality.lhs == 1536 and v.inequality.rhs == 96


def test_whole_set_always_passes():
    rng = random.Random(0)
    for _ in range(20):
        A = make("random", GroupSpec.cyclic(30), seed=rng.randrange(999), size=6)
        v = check_connected(A, params(C=F(1), beta1=F(1), beta2=F(1)))
        assert v.status == CONNECTED


def test_connected_agrees_with_table_oracle():
    table = cyclic_energy_table(16, 2)
    rng = random.Random(7)
    G = GroupSpec.cyclic(16)
    for _ in range(150):
        c = tuple(sorted(rng.sample(range(16), rng.randint(2, 12))))
        C = rng.choice((F(1, 2), F(3, 4), F(1)))
        b1, b2 = rng.choice(((F(0), F(1)), (F(1, 4), F(3, 4)), (F(1, 2), F(1, 2))))
        v = check_connected(GroupSet(G, c), params(C=C, beta1=b1, beta2=b2))
        ok, count = exhaustive_connected(list(c), table, C, b1, b2)
        assert (v.status == CONNECTED) == ok and v.checked == count


def test_capacity_and_heuristic():
    A = make("random", GroupSpec.cyclic(1000), seed=1, size=12)
    with pytest.raises(CapacityError):
        check_connected(A, params(), cap=10)
    v = check_connected(A, params(C=F(1, 32)), mode="heuristic", seed=3)
    assert v.status == NO_COUNTEREXAMPLE and not v.certified
    w = check_connected(GroupSet(Z100, (0, 1, 50)), params(C=F(1)), mode="heuristic")
    assert w.status in (VIOLATED, NO_COUNTEREXAMPLE)
    if w.status == VIOLATED:
        assert w.certified and not w.inequality.holds
    with pytest.raises(DomainError):
        check_connected(A, params(), mode="guess")


def test_strong_examples():
    A = GroupSet(Z100, (0, 1))
    v = check_strongly_connected(A, params(C=F(1)))
    assert v.status == VIOLATED and v.cut_value == 1
    # e |A|^2 q = 4 against p |E||F| T = 6
    assert (v.inequality.lhs, v.inequality.rhs) == (4, 6)
    assert check_strongly_connected(A, params(C=F(1, 2))).status == CONNECTED
    S = P()
    s = check_strongly_connected(S, params(C=F(1)))
    assert s.status == CONNECTED and s.inequality.lhs == s.inequality.rhs
    assert check_strongly_connected(GroupSet(Z100, (5,)), params()).status == CONNECTED


def test_strong_implies_weak_examples():
    rep = check_strong_implies_weak(P(), params(C=F(1)))
    assert rep.holds and not rep.vacuous
    rep2 = check_strong_implies_weak(GroupSet(Z100, (0, 1)), params(C=F(1, 2)))
    assert rep2.holds and rep2.weak.status == CONNECTED and rep2.weak.checked == 3
    rep3 = check_strong_implies_weak(GroupSet(Z100, (0, 1)), params(C=F(1)))
    assert rep3.vacuous and rep3.holds and rep3.weak is None
    with pytest.raises(DomainError):
        check_strong_implies_weak(P(), params(k=3))


def test_konyagin_examples():
    S = P()
    rep = konyagin_containment(S, 2, 1)
    assert rep.contained and rep.subgroup_order == 8 and set(rep.S.elems) == set(S.elems)
    one = konyagin_containment(GroupSet(Z100, (7,)), 2, 1)
    assert one.contained and 0 in one.S
    with pytest.raises(UnsupportedSpecError):
        konyagin_containment(GroupSet(ZZ, (0, 1)), 2, 1)


def test_extraction_keeps_connected_sets():
    S = P(d=4, dim=3, seed=2)
    res = extract_connected_subset(S, ConnectivityParams(k=2, C=F(1, 32), beta1=F(1, 4), beta2=F(3, 4)))
    assert res.subset == S and res.certified
    assert [s.action for s in res.trace] == ["stop"]


def test_extraction_cannot_remove_at_small_sizes():
    # T_2(B) >= |B|^2 and T_2(A) <= m^3 force connectedness whenever m <= C^-4
    rng = random.Random(11)
    G = GroupSpec.cyclic(10**6)
    for _ in range(30):
        A = make("random", G, seed=rng.randrange(10**6), size=rng.randint(2, 16))
        res = extract_connected_subset(A, params(C=F(1, 2)))
        assert res.subset == A and res.certified


def test_extraction_with_large_constant_against_oracle():
    table = cyclic_energy_table(16, 2)
    G = GroupSpec.cyclic(16)
    rng = random.Random(5)
    removals = 0
    for _ in range(300):
        c = tuple(sorted(rng.sample(range(16), rng.randint(3, 10))))
        A = GroupSet(G, c)
        res = extract_connected_subset(A, params(C=F(1)))
        final = list(res.subset.elems)
        assert res.trace.all_hold() and res.certified
        assert exhaustive_connected(final, table, F(1))[0]
        assert replay_extraction(A, res.trace) == res.subset
        cur = set(c)
        for step in res.trace:
            if step.action == "remove":
                removals += 1
                d = step.data
                assert d["T_before"] == table[sum(1 << x for x in cur)]
                cur -= set(d["removed"])
                assert d["T_after"] == table[sum(1 << x for x in cur)]
                want = d["size_after"] < 2 or zeta_geq(d["T_after"], d["size_after"], d["T_before"], d["size_before"])
                cmp = d["zeta_cmp"]
                assert cmp is None or (cmp >= 0) == want
    assert removals > 0


def test_extraction_guards():
    with pytest.raises(DomainError):
        extract_connected_subset(GroupSet(ZZ, (1,)), params())
    with pytest.raises(DomainError):
        extract_connected_subset(GroupSet(ZZ, (1, 2)), params(k=3))


def test_extraction_bounds_reported_when_kappa_positive():
    A = make("random", GroupSpec.cyclic(101), seed=3, size=10)
    res = extract_connected_subset(A, ConnectivityParams(k=2, C=F(1, 32), beta1=F(1, 2), beta2=F(3, 4)))
    b = res.bounds
    assert b["kappa_positive"] and b["steps_within_bound"]["holds"] and b["size_within_bound"]["holds"]
    assert not extract_connected_subset(A, params(C=F(1, 2))).bounds["kappa_positive"]


def test_almost_basis_examples():
    S = P()
    ab = extract_almost_basis(S, ConnectivityParams(k=2, C=F(1), beta1=F(0), beta2=F(1)))
    assert ab.success and len(ab.lam) == 3 and ab.coverage == 8
    one = extract_almost_basis(GroupSet(Z100, (0,)), ConnectivityParams(k=2, C=F(1), beta1=F(0), beta2=F(1)))
    assert one.success and len(one.lam) == 0 and one.coverage == 1
    with pytest.raises(DomainError):
        extract_almost_basis(S, ConnectivityParams(k=2, C=F(1), beta1=F(1, 2), beta2=F(1, 2)))


def test_almost_basis_failure_certificate():
    # a constant far below the default shrinks l until peeling exhausts A
    D = make("dissociated", ZZ, seed=2, size=9)
    ab = extract_almost_basis(D, ConnectivityParams(k=2, C=F(1), beta1=F(1, 2), beta2=F(1)), constant=F(1, 64))
    assert not ab.success and ab.lam is None
    cert = ab.certificate
    assert len(cert["B"]) == 5 and set(cert["B"]) <= set(D.elems)
    assert T(D.with_elems(cert["B"]), 2) == cert["T_k(B)"] and cert["T_k(A)"] == T(D, 2)
    names = [c["name"] for c in cert["checks"]]
    assert set(cert["failed"]) <= set(names)
    assert all(Inequality.from_json(c).holds == c["holds"] for c in cert["checks"])


def test_l_floor_is_exact():
    for m, ta, k, C in ((8, 512, 2, F(1)), (10, 300, 4, F(1, 32)), (3, 15, 2, F(1, 2))):
        X = F(2**13) * k * m * m / (C * C)
        l = almost_basis_l_floor(m, ta, k, C)
        assert F(l) ** k * ta <= X**k < F(l + 1) ** k * ta


def test_exhaustive_connected_oracle_self_check():
    # the oracle itself on a subspace-like coset of Z/16: {0, 4, 8, 12}
    table = cyclic_energy_table(16, 2)
    assert exhaustive_connected([0, 4, 8, 12], table, F(1))[0]
    assert int(table[0b1]) == 1 and int(table[0b11]) == 6
    assert np.all(table[[1 << i for i in range(16)]] == 1)
    assert all(int(table[sum(1 << x for x in c)]) == 6 for c in combinations(range(16), 2) if (c[1] - c[0]) != 8)
