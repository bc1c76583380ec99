import pytest

from addenergy.dissociation import is_dissociated
from addenergy.errors import ConfigError
from addenergy.generators import FAMILIES, GeneratorSpec, generate, make
from addenergy.groups import GroupSet, GroupSpec, sumset

ZZ = GroupSpec.integers()


def test_ap_example():
    assert make("ap", ZZ, start=0, step=1, length=8).elems == tuple(range(8))
    assert make("ap", GroupSpec.cyclic(10), start=7, step=3, length=4).elems == (0, 3, 6, 7)
    with pytest.raises(ConfigError):
        make("ap", GroupSpec.cyclic(10), start=0, step=5, length=3)


def test_multi_ap():
    A = make("multi_ap", ZZ, base=1, steps=[1, 10], lengths=[3, 2])
    assert A.elems == (1, 2, 3, 11, 12, 13)
    with pytest.raises(ConfigError):
        make("multi_ap", ZZ, base=0, steps=[1], lengths=[2, 2])


def test_subspace_is_closed():
    G = GroupSpec.vector(2, 3)
    P = make("subspace", G, seed=4, dim=2)
    assert len(P) == 4 and sumset(P, P) == P
    with pytest.raises(ConfigError):
        make("subspace", G, dim=4)
    with pytest.raises(ConfigError):
        make("subspace", ZZ, dim=1)


def test_dissociated_generator():
    for G in (GroupSpec.cyclic(10**6), GroupSpec.vector(2, 8), GroupSpec.vector(5, 3), ZZ):
        D = make("dissociated", G, seed=9, size=6)
        assert len(D) == 6 and is_dissociated(D)
    with pytest.raises(ConfigError):
        make("dissociated", GroupSpec.vector(2, 3), size=4)
    with pytest.raises(ConfigError):
        make("dissociated", GroupSpec.vector(3, 3), size=4)
    with pytest.raises(ConfigError):
        make("dissociated", GroupSpec.cyclic(16), size=5)


def test_random_generator():
    A = make("random", GroupSpec.cyclic(20), seed=1, size=7)
    assert len(A) == 7
    assert make("random", GroupSpec.cyclic(20), seed=1, size=7) == A
    B = make("random", ZZ, seed=2, size=5, window=(100, 110))
    assert all(100 <= x < 110 for x in B)
    with pytest.raises(ConfigError):
        make("random", GroupSpec.cyclic(5), size=6)
    with pytest.raises(ConfigError):
        make("random", ZZ, size=5, window=(0, 3))


def test_coset_union():
    V = GroupSpec.vector(2, 4)
    A = make("coset_union", V, seed=3, subgroup_dim=2, num_cosets=2)
    assert len(A) == 8
    C = make("coset_union", GroupSpec.cyclic(24), seed=3, subgroup_dim=6, num_cosets=3)
    assert len(C) == 18 and len({x % 4 for x in C}) == 3
    with pytest.raises(ConfigError):
        make("coset_union", GroupSpec.cyclic(24), subgroup_dim=5, num_cosets=1)
    with pytest.raises(ConfigError):
        make("coset_union", ZZ, subgroup_dim=1, num_cosets=1)


def test_family_registry_and_errors():
    assert set(FAMILIES) == {"random", "ap", "multi_ap", "subspace", "dissociated", "coset_union"}
    with pytest.raises(ConfigError):
        generate(GeneratorSpec("lattice", ZZ))
    with pytest.raises(ConfigError):
        make("ap", ZZ, start=0)
    spec = GeneratorSpec("random", GroupSpec.cyclic(9), {"size": 3}, seed=5)
    assert spec.to_json()["family"] == "random"
    assert isinstance(generate(spec), GroupSet)
