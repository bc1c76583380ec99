import json

import pytest

from addenergy.errors import UsageError
from addenergy.groups import (
    GroupSet,
    GroupSpec,
    canonical_json,
    difference_set,
    load_set,
    save_set,
    subgroup_closure,
    sumset,
)

Z5 = GroupSpec.cyclic(5)
V23 = GroupSpec.vector(2, 3)
ZZ = GroupSpec.integers()


def test_addition_examples():
    assert Z5.add(3, 4) == 2
    assert V23.add((1, 0, 1), (1, 1, 1)) == (0, 1, 0)
    assert ZZ.add(7, -7) == 0


def test_negation_examples():
    assert Z5.neg(3) == 2
    assert V23.neg((1, 0, 1)) == (1, 0, 1)
    assert ZZ.neg(0) == 0


def test_sumset_examples():
    B = GroupSet(ZZ, (3, -5, 12))
    assert sumset(GroupSet(ZZ, (0,)), B) == B
    assert sumset(GroupSet(ZZ, (0, 1)), GroupSet(ZZ, (0, 1))).elems == (0, 1, 2)
    V22 = GroupSpec.vector(2, 2)
    full = GroupSet.full(V22)
    assert sumset(full, GroupSet(V22, ((0, 0),))) == full


def test_difference_set():
    A = GroupSet(ZZ, (0, 1, 3))
    assert difference_set(A, A).elems == (-3, -2, -1, 0, 1, 2, 3)


def test_mismatched_groups_rejected():
    with pytest.raises(UsageError):
        sumset(GroupSet(Z5, (1,)), GroupSet(GroupSpec.cyclic(7), (1,)))


@pytest.mark.parametrize(
    "kind, kwargs",
    [("cyclic", {"n": 1}), ("vector", {"q": 4, "dim": 2}), ("vector", {"q": 3, "dim": 0}), ("integers", {"n": 3}), ("torus", {})],
)
def test_invalid_specs(kind, kwargs):
    with pytest.raises(UsageError):
        GroupSpec(kind, **kwargs)


def test_canonical_elements_enforced():
    with pytest.raises(UsageError):
        GroupSet(Z5, (5,))
    with pytest.raises(UsageError):
        GroupSet(Z5, (1, 1))
    with pytest.raises(UsageError):
        GroupSet(V23, ((1, 2, 0),))
    with pytest.raises(UsageError):
        GroupSet(Z5, (True,))
    assert GroupSet.from_iterable(Z5, [7, 2, 12]).elems == (2,)


def test_sorted_storage_and_membership():
    A = GroupSet(Z5, (4, 0, 2))
    assert A.elems == (0, 2, 4)
    assert 2 in A and 3 not in A
    assert [1, 0, 1] in GroupSet(V23, ((1, 0, 1),))


def test_set_operations():
    A = GroupSet(Z5, (0, 1, 2))
    assert A.translate(4).elems == (0, 1, 4)
    assert A.negate().elems == (0, 3, 4)
    assert A.dilate(2).elems == (0, 2, 4)
    assert A.difference([1]).elems == (0, 2)
    assert A.union(GroupSet(Z5, (4,))).elems == (0, 1, 2, 4)
    assert GroupSet(Z5, (1,)).issubset(A)
    with pytest.raises(UsageError):
        GroupSet(GroupSpec.cyclic(4), (0, 2)).dilate(2)


def test_json_round_trip(tmp_path):
    for A in (GroupSet(Z5, (0, 3)), GroupSet(V23, ((0, 1, 1), (1, 0, 0))), GroupSet(ZZ, (-10**30, 4))):
        assert GroupSet.from_json(json.loads(A.dumps())) == A
        path = tmp_path / "a.json"
        save_set(A, path)
        assert load_set(path) == A
    assert GroupSet(Z5, (0, 3)).digest() == GroupSet(Z5, (3, 0)).digest()


def test_bad_files(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(UsageError):
        load_set(p)
    with pytest.raises(UsageError):
        GroupSet.from_json({"elements": [1]})


def test_canonical_json_is_key_sorted():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_subgroup_closure():
    assert subgroup_closure(GroupSpec.cyclic(12), [8]) == frozenset({0, 4, 8})
    assert len(subgroup_closure(V23, [(1, 0, 0), (0, 1, 0)])) == 4
    with pytest.raises(UsageError):
        subgroup_closure(ZZ, [1])


def test_group_order_and_elements():
    assert V23.order == 8 and len(list(V23.elements())) == 8
    assert ZZ.order is None and not ZZ.is_finite
    assert GroupSpec.from_json(V23.to_json()) == V23
