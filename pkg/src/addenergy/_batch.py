"""Vectorised exact energies for many subsets of one ground set.

The exhaustive searches (connectedness, cuts, extraction) evaluate
``T_k(B)`` for thousands of subsets ``B`` of a fixed set ``A``.  Here a
batch of subsets is a 0/1 matrix of shape ``(M, |A|)`` and the iterated
convolutions are carried out over the index space of the sumsets
``A, 2A, ..., kA``, so each step is a handful of numpy operations.

Values stay in int64 only when the a-priori bound ``|A|^(2k-1)`` fits;
otherwise the arrays hold Python ints (dtype=object).  Either way the
result is exact and is cross-checked against the sparse path in tests.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .groups import GroupSet

_INT64_SAFE = 1 << 62


class SubsetEnergy:
    """Precomputed sumset layers of ``A`` for batched ``T_k`` of subsets."""

    def __init__(self, A: GroupSet, k: int):
        self.A = A
        self.k = k
        self.n = len(A)
        add = A.spec.adder()
        elems = list(A.elems)
        layers = [elems]
        index = [{x: i for i, x in enumerate(elems)}]
        shifts = []
        for _ in range(1, k):
            prev = layers[-1]
            nxt = sorted({add(s, a) for s in prev for a in elems})
            idx = {x: i for i, x in enumerate(nxt)}
            shifts.append([np.fromiter((idx[add(s, a)] for s in prev), dtype=np.intp, count=len(prev)) for a in elems])
            layers.append(nxt)
            index.append(idx)
        self.layers = layers
        self.shifts = shifts
        self.dtype = np.int64 if self.n ** (2 * k - 1) < _INT64_SAFE else object

    def energies(self, masks: np.ndarray) -> np.ndarray:
        masks = np.asarray(masks)
        if masks.ndim != 2 or masks.shape[1] != self.n:
            raise ValueError("masks must have shape (M, |A|)")
        m = masks.astype(self.dtype)
        r = m
        for i, step in enumerate(self.shifts):
            nxt = np.zeros((m.shape[0], len(self.layers[i + 1])), dtype=self.dtype)
            for a, tgt in enumerate(step):
                nxt[:, tgt] += r * m[:, a : a + 1]
            r = nxt
        return (r * r).sum(axis=1)

    def energy_list(self, masks) -> list[int]:
        return [int(v) for v in self.energies(masks)]


def pair_weights(A: GroupSet, w) -> np.ndarray:
    """Matrix ``W[i, j] = w(a_i - a_j)`` for an IntFn weight ``w``."""
    spec = A.spec
    n = len(A)
    vals = [[w(spec.sub(a, b)) for b in A.elems] for a in A.elems]
    big = max((v for row in vals for v in row), default=0) * n * n
    dtype = np.int64 if big < _INT64_SAFE else object
    return np.array(vals, dtype=dtype).reshape(n, n)


def cut_values(W: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """``e(E, F) = sum_{i in E, j in F} W[i, j]`` for each row ``E`` of ``masks``."""
    E = np.asarray(masks).astype(W.dtype)
    F = 1 - E
    return ((E @ W) * F).sum(axis=1)


@lru_cache(maxsize=256)
def _combination_rows(n: int, s: int) -> np.ndarray:
    idx = np.array(list(combinations(range(n), s)), dtype=np.intp).reshape(-1, s)
    rows = np.zeros((len(idx), n), dtype=np.int8)
    rows[np.arange(len(idx))[:, None], idx] = 1
    rows.setflags(write=False)
    return rows


def masks_of_size(n: int, sizes, chunk: int = 4096):
    """Yield 0/1 matrices covering every subset of ``range(n)`` with size in ``sizes``."""
    for s in sizes:
        rows = _combination_rows(n, s)
        for start in range(0, len(rows), chunk):
            yield rows[start : start + chunk]


def bipartition_masks(n: int, chunk: int = 1 << 14):
    """Yield masks ``E`` for every unordered bipartition with both sides nonempty.

    Index ``n-1`` is pinned to ``F`` so each cut appears once.
    """
    if n < 2:
        return
    total = 1 << (n - 1)
    bits = np.arange(n - 1, dtype=np.int64)
    for start in range(1, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        rows = ((codes[:, None] >> bits[None, :]) & 1).astype(np.int8)
        yield np.hstack([rows, np.zeros((len(codes), 1), dtype=np.int8)])
