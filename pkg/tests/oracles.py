"""Reference computations that share no code with the package.

Everything here works on plain integers, tuples and numpy arrays.  Group
operations are re-implemented locally so a bug in ``addenergy.groups``
cannot hide behind an oracle that reuses it.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import combinations, product

import numpy as np


def cyclic_add(n):
    return lambda a, b: (a + b) % n


def vector_add(q):
    return lambda a, b: tuple((x + y) % q for x, y in zip(a, b))


def int_add(a, b):
    return a + b


def hist_energy(elems, add, zero, k):
    """``T_k`` by tabulating every ordered k-fold sum."""
    hist = Counter()
    for tup in product(elems, repeat=k):
        s = zero
        for a in tup:
            s = add(s, a)
        hist[s] += 1
    return sum(c * c for c in hist.values())


def masks_up_to(n, max_size):
    """0/1 rows for every subset of ``range(n)`` of size 1..max_size, plus the index tuples."""
    combos = [c for s in range(1, max_size + 1) for c in combinations(range(n), s)]
    rows = np.zeros((len(combos), n), dtype=np.int64)
    for i, c in enumerate(combos):
        rows[i, list(c)] = 1
    return combos, rows


def cyclic_energies(rows, n, k):
    """Dense circular convolution of indicator rows: ``T_k`` for each row of subsets of Z/n."""
    r = rows.copy()
    for _ in range(k - 1):
        nxt = np.zeros_like(r)
        for x in range(n):
            nxt += rows[:, x : x + 1] * np.roll(r, x, axis=1)
        r = nxt
    return (r * r).sum(axis=1)


def window_energies(rows, k):
    """``T_k`` for subsets of ``{0..n-1}`` inside the integers (linear convolution)."""
    out = np.empty(len(rows), dtype=np.int64)
    for i, row in enumerate(rows):
        r = row
        for _ in range(k - 1):
            r = np.convolve(r, row)
        out[i] = int((r * r).sum())
    return out


def xor_energies(rows, k):
    """``T_k`` for subsets of F_2^d with elements coded as integers ``0..2^d-1``."""
    n = rows.shape[1]
    r = rows.copy()
    for _ in range(k - 1):
        nxt = np.zeros_like(r)
        for x in range(n):
            perm = np.arange(n) ^ x
            nxt += rows[:, x : x + 1] * r[:, perm]
        r = nxt
    return (r * r).sum(axis=1)


@lru_cache(maxsize=4)
def cyclic_energy_table(n, k=2):
    """``T_k`` of every subset of Z/n indexed by bitmask (bit i set when i is a member)."""
    codes = np.arange(1 << n, dtype=np.int64)
    rows = ((codes[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    step = 1 << 13
    for start in range(0, 1 << n, step):
        out[start : start + step] = cyclic_energies(rows[start : start + step], n, k)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=16)
def _selector(m):
    codes = np.arange(1 << m, dtype=np.int64)
    return ((codes[:, None] >> np.arange(m)[None, :]) & 1).astype(np.int64)


def exhaustive_connected(members, table, C, beta1=0, beta2=1, k=2):
    """All nonempty ``B`` in the size window satisfy ``T(B) m^2k q^2k >= p^2k |B|^2k T(A)``.

    ``members`` are residues in Z/n and ``table`` is :func:`cyclic_energy_table`.
    Returns ``(ok, number_checked)``.
    """
    m = len(members)
    sel = _selector(m)
    bits = np.array([1 << x for x in members], dtype=np.int64)
    subs = sel @ bits
    sizes = sel.sum(axis=1)
    ta = int(table[int(bits.sum())])
    p, q = C.numerator, C.denominator
    keep = (sizes >= 1) & (sizes * beta1.denominator >= beta1.numerator * m) & (
        sizes * beta2.denominator <= beta2.numerator * m
    )
    tb = table[subs[keep]].astype(object)
    s = sizes[keep].astype(object)
    lhs = tb * (m ** (2 * k) * q ** (2 * k))
    rhs = s ** (2 * k) * (p ** (2 * k) * ta)
    return bool(np.all(lhs >= rhs)), int(keep.sum())


def signed_combinations(elems, add, neg, zero):
    """Map every sign vector in ``{-1,0,1}^n`` to its sum."""
    out = {}
    for signs in product((-1, 0, 1), repeat=len(elems)):
        s = zero
        for e, x in zip(signs, elems):
            if e == 1:
                s = add(s, x)
            elif e == -1:
                s = add(s, neg(x))
        out[signs] = s
    return out


def dissociated_oracle(elems, add, neg, zero):
    table = signed_combinations(elems, add, neg, zero)
    trivial = (0,) * len(elems)
    return all(s != zero for v, s in table.items() if v != trivial), set(table.values())


def pair_weight_matrix(elems, add, neg, k):
    """``W[i][j] = w(a_i - a_j)`` with ``w = r o r`` and ``r`` the (k-1)-fold representation count."""
    r = Counter({x: 1 for x in elems})
    for _ in range(k - 2):
        nxt = Counter()
        for s, c in r.items():
            for a in elems:
                nxt[add(s, a)] += c
        r = nxt
    w = Counter()
    for s, c in r.items():
        for t, d in r.items():
            w[add(s, neg(t))] += c * d
    return np.array([[w[add(a, neg(b))] for b in elems] for a in elems], dtype=object)


def all_bipartition_cuts(W):
    """Sizes ``|E|`` and values ``e(E,F)`` over every unordered bipartition (last index pinned to ``F``)."""
    n = W.shape[0]
    W = np.asarray(W, dtype=np.int64)
    codes = np.arange(1, 1 << (n - 1), dtype=np.int64)
    E = ((codes[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int64)
    E[:, n - 1] = 0
    F = 1 - E
    vals = np.einsum("ci,ij,cj->c", E, W, F)
    return E.sum(axis=1), vals


def zeta_geq(t1, m1, t2, m2, digits=80):
    """``log t1 / log m1 >= log t2 / log m2`` via high-precision floats, ties included."""
    import mpmath

    with mpmath.workdps(digits):
        a = mpmath.log(t1) * mpmath.log(m2)
        b = mpmath.log(t2) * mpmath.log(m1)
        return a - b >= -mpmath.mpf(10) ** (-(digits - 10))
