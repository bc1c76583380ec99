"""scikit-learn style wrappers.

A fitted estimator holds the result of one algorithm run on a set ``A``
(passed as ``X``).  ``predict`` answers membership questions for new
elements and ``transform`` maps elements to coordinates, so the objects
compose with ordinary sklearn tooling such as ``clone`` and
``get_params``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .connectivity import ALMOST_BASIS_CONSTANT, ConnectivityParams, extract_almost_basis, extract_connected_subset
from .dissociation import MITM_CAP, SpanIndex, maximal_dissociated_subset, span_contains
from .errors import UsageError
from .partition import CUT_CAP, partition_min_sigma, strong_partition
from .validation import check_elements, check_group_set


class _GroupEstimator(BaseEstimator):
    def _validate(self, X, group):
        return check_group_set(X, group)

    def _elements(self, X):
        check_is_fitted(self)
        return check_elements(X, self.group_)


class DissociatedBasis(TransformerMixin, _GroupEstimator):
    """Greedy maximal dissociated subset; ``transform`` gives sign vectors."""

    def __init__(self, seed=None, mitm_cap=MITM_CAP):
        self.seed = seed
        self.mitm_cap = mitm_cap

    def fit(self, X, y=None, group=None):
        A = self._validate(X, group)
        self.group_ = A.spec
        self.basis_ = maximal_dissociated_subset(A, seed=self.seed, mitm_cap=self.mitm_cap).base
        self.n_basis_ = len(self.basis_)
        self._index = SpanIndex(self.basis_, mitm_cap=self.mitm_cap)
        return self

    def predict(self, X):
        """True where the element lies in ``Span basis_``."""
        return np.array([x in self._index for x in self._elements(X)], dtype=bool)

    def transform(self, X):
        """Row of coefficients in {-1, 0, 1} for each element; rows of elements outside the span are zero."""
        els = self._elements(X)
        out = np.zeros((len(els), self.n_basis_), dtype=np.int8)
        for i, x in enumerate(els):
            hit = span_contains(self.basis_, x, mitm_cap=self.mitm_cap)
            if hit.member and hit.witness:
                out[i] = hit.witness
        return out


class ConnectedSubsetExtractor(TransformerMixin, _GroupEstimator):
    """Strip low-energy subsets until the remainder is connected."""

    def __init__(self, k=2, C=Fraction(1, 32), beta1=Fraction(1, 2), beta2=Fraction(3, 4), mode="exact", seed=0):
        self.k = k
        self.C = C
        self.beta1 = beta1
        self.beta2 = beta2
        self.mode = mode
        self.seed = seed

    def fit(self, X, y=None, group=None):
        A = self._validate(X, group)
        self.group_ = A.spec
        params = ConnectivityParams(k=self.k, C=self.C, beta1=self.beta1, beta2=self.beta2)
        res = extract_connected_subset(A, params, mode=self.mode, seed=self.seed)
        self.subset_ = res.subset
        self.trace_ = res.trace
        self.certified_ = res.certified
        self.result_ = res
        return self

    def predict(self, X):
        els = self._elements(X)
        return np.array([x in self.subset_.members for x in els], dtype=bool)

    def transform(self, X):
        """Elements of ``X`` that survived the extraction."""
        els = self._elements(X)
        return self.subset_.with_elems(x for x in dict.fromkeys(els) if x in self.subset_.members)


class AlmostBasis(_GroupEstimator):
    """Small ``Lambda`` whose span covers most of ``A``, or a failure certificate."""

    def __init__(self, k=2, C=Fraction(1, 32), beta1=Fraction(1, 2), beta2=Fraction(1), seed=None, constant=ALMOST_BASIS_CONSTANT):
        self.k = k
        self.C = C
        self.beta1 = beta1
        self.beta2 = beta2
        self.seed = seed
        self.constant = constant

    def fit(self, X, y=None, group=None):
        A = self._validate(X, group)
        self.group_ = A.spec
        params = ConnectivityParams(k=self.k, C=self.C, beta1=self.beta1, beta2=self.beta2)
        res = extract_almost_basis(A, params, seed=self.seed, constant=self.constant)
        self.basis_ = res.lam
        self.coverage_ = res.coverage
        self.certificate_ = res.certificate
        self.trace_ = res.trace
        self._index = SpanIndex(res.lam) if res.lam is not None else None
        return self

    def predict(self, X):
        els = self._elements(X)
        if self._index is None:
            raise UsageError("no basis was found; see certificate_")
        return np.array([x in self._index for x in els], dtype=bool)


class EnergyPartition(ClusterMixin, _GroupEstimator):
    """Sigma-minimal partition; ``labels_`` follow the sorted order of ``A``."""

    def __init__(self, k=2, epsilon1=Fraction(1, 2), mode="exact", seed=0, start="singletons", cut_cap=CUT_CAP):
        self.k = k
        self.epsilon1 = epsilon1
        self.mode = mode
        self.seed = seed
        self.start = start
        self.cut_cap = cut_cap

    def fit(self, X, y=None, group=None):
        A = self._validate(X, group)
        self.group_ = A.spec
        st = partition_min_sigma(A, self.k, self.epsilon1, mode=self.mode, seed=self.seed, start=self.start, cut_cap=self.cut_cap)
        self.state_ = st
        self.parts_ = st.parts
        self.labels_ = np.array(st.labels(), dtype=int)
        self.sigma_ = st.sigma
        return self

    def predict(self, X):
        els = self._elements(X)
        where = {x: i for i, P in enumerate(self.parts_) for x in P}
        return np.array([where.get(x, -1) for x in els], dtype=int)


class StrongPartition(ClusterMixin, _GroupEstimator):
    """Strongly connected parts of degree 2; the remainder gets label -1."""

    def __init__(self, epsilon=Fraction(1, 2), beta=Fraction(1, 2), mode="exact", seed=0):
        self.epsilon = epsilon
        self.beta = beta
        self.mode = mode
        self.seed = seed

    def fit(self, X, y=None, group=None):
        A = self._validate(X, group)
        self.group_ = A.spec
        res = strong_partition(A, self.epsilon, self.beta, seed=self.seed, mode=self.mode)
        self.result_ = res
        self.parts_ = res.parts
        self.omega_ = res.omega
        self.labels_ = np.array(res.labels(), dtype=int)
        self.success_ = res.success
        return self

    def predict(self, X):
        els = self._elements(X)
        where = {x: i for i, P in enumerate(self.parts_) for x in P}
        return np.array([where.get(x, -1) for x in els], dtype=int)
