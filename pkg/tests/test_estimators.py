from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from addenergy.errors import UsageError
from addenergy.estimators import AlmostBasis, ConnectedSubsetExtractor, DissociatedBasis, EnergyPartition, StrongPartition
from addenergy.generators import make
from addenergy.groups import GroupSpec

F = Fraction
V23 = GroupSpec.vector(2, 3)
ZZ = GroupSpec.integers()
ALL = (DissociatedBasis, ConnectedSubsetExtractor, AlmostBasis, EnergyPartition, StrongPartition)


def subspace_rows():
    return np.array(make("subspace", GroupSpec.vector(2, 4), seed=1, dim=3).elems)


@pytest.mark.parametrize("cls", ALL)
def test_clone_and_params(cls):
    est = cls()
    params = est.get_params()
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    key = next(iter(params))
    est.set_params(**{key: params[key]})
    with pytest.raises(NotFittedError):
        est.predict([0])


def test_dissociated_basis():
    X = np.array([1, 2, 3, 4])
    est = DissociatedBasis().fit(X, group=ZZ)
    assert est.n_basis_ == 3 and list(est.basis_) == [1, 2, 4]
    assert est.predict([7, 8]).tolist() == [True, False]
    coeffs = est.transform([3, 8])
    assert coeffs.shape == (2, 3) and int(coeffs[0] @ np.array([1, 2, 4])) == 3 and not coeffs[1].any()


def test_array_rows_for_vector_groups():
    X = subspace_rows()
    est = DissociatedBasis().fit(X, group=GroupSpec.vector(2, 4))
    assert est.n_basis_ == 3 and est.predict(X).all()


def test_extractor_and_almost_basis():
    S = make("subspace", V23, seed=0, dim=3)
    ex = ConnectedSubsetExtractor().fit(S)
    assert ex.certified_ and ex.predict(S).all() and ex.transform(S) == S
    ab = AlmostBasis(C=F(1), beta1=F(0)).fit(S)
    assert ab.coverage_ == 8 and ab.predict(S).all()


def test_almost_basis_without_basis_refuses_predict():
    D = make("dissociated", ZZ, seed=2, size=9)
    ab = AlmostBasis(C=F(1), beta1=F(1, 2), constant=F(1, 64)).fit(D)
    assert ab.basis_ is None and ab.certificate_ is not None
    with pytest.raises(UsageError):
        ab.predict([0])


def test_partitions():
    S = make("subspace", V23, seed=0, dim=3)
    ep = EnergyPartition().fit(S)
    assert ep.labels_.tolist() == [0] * 8 and ep.fit_predict(S).tolist() == [0] * 8
    sp = StrongPartition().fit(S)
    assert sp.success_ and sp.labels_.tolist() == [0] * 8
    assert sp.predict([(0, 0, 0)]).tolist() == [0]


def test_validation_errors():
    with pytest.raises(UsageError):
        DissociatedBasis().fit([1, 2])
    with pytest.raises(UsageError):
        DissociatedBasis().fit([1, 1], group=ZZ)
    est = DissociatedBasis().fit([1], group=ZZ)
    with pytest.raises(UsageError):
        est.predict([(0, 1)])
