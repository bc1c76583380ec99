"""Energy-respecting partitions.

``partition_min_sigma`` runs a descent on

    sigma(A_1, ..., A_s) = sum_{i<j} e(A_i, A_j) - eps1 c_i c_j T_k(A)

with two moves: merging two parts whose cut is heavy, and splitting a
part along a light internal cut.  Both strictly decrease sigma, so the
search ends in a partition whose parts have heavy internal cuts and light
mutual cuts.  Everything is scaled by ``|A|^2 * den(eps1)`` so the objective
is an integer.

``strong_partition`` applies it recursively (k = 2) until most of the
energy sits on parts that are strongly beta-connected.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._batch import bipartition_masks, pair_weights
from .energy import T, cut_weight
from .errors import DomainError, GuardTripError
from .exact import Inequality, Rational, as_fraction, ceil_fraction, frac_json, interval
from .groups import GroupSet
from .trace import ExtractionTrace

CUT_CAP = 16
SINGLETONS = "singletons"
WHOLE = "whole"


@dataclass
class PartitionState:
    """Disjoint cover of ``ground`` with its exact objective and certification flags."""

    ground: GroupSet
    parts: list
    sigma: Fraction
    k: int
    epsilon1: Fraction
    energy: int
    certified_parts: list = field(default_factory=list)
    uncertified_parts: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    trace: ExtractionTrace = field(default_factory=ExtractionTrace)
    moves: int = 0

    @property
    def property1(self) -> bool:
        return self.checks["property1"].holds

    @property
    def property2(self) -> bool:
        return self.checks["property2"].holds

    @property
    def property3(self) -> bool:
        return self.checks["property3"].holds

    def labels(self) -> list[int]:
        where = {x: i for i, P in enumerate(self.parts) for x in P}
        return [where[x] for x in self.ground]

    def to_json(self):
        return {
            "k": self.k,
            "epsilon1": frac_json(self.epsilon1),
            "T_k(A)": self.energy,
            "sigma": frac_json(self.sigma),
            "parts": [P.to_json()["elements"] for P in self.parts],
            "certified_parts": self.certified_parts,
            "uncertified_parts": self.uncertified_parts,
            "moves": self.moves,
            "checks": {name: c.to_json() for name, c in self.checks.items()},
            "trace": self.trace.to_json(),
        }


class _Objective:
    """Integer-scaled pieces of sigma for one ground set."""

    def __init__(self, A: GroupSet, k: int, eps1: Fraction):
        self.A = A
        self.n = len(A)
        self.k = k
        self.ta = T(A, k)
        self.W = pair_weights(A, cut_weight(A, k))
        self.Wl = self.W.tolist()
        self.a, self.b = eps1.numerator, eps1.denominator
        self.scale = self.n * self.n * self.b

    def term(self, e: int, s1: int, s2: int) -> int:
        """``(e - eps1 c_1 c_2 T) * |A|^2 den`` for a cut of sizes ``s1, s2``."""
        return e * self.scale - self.a * s1 * s2 * self.ta

    def cut(self, P: list, Q: list) -> int:
        Wl = self.Wl
        return sum(Wl[i][j] for i in P for j in Q)

    def sigma(self, parts: list) -> int:
        return sum(
            self.term(self.cut(parts[i], parts[j]), len(parts[i]), len(parts[j]))
            for i in range(len(parts))
            for j in range(i + 1, len(parts))
        )

    def best_split_exact(self, P: list):
        """Bipartition of ``P`` minimising ``term``; returns (value, E, F)."""
        sub = self.W[np.ix_(P, P)]
        n = len(P)
        best = None
        for chunk in bipartition_masks(n):
            E = chunk.astype(sub.dtype)
            e = ((E @ sub) * (1 - E)).sum(axis=1)
            sizes = chunk.sum(axis=1)
            for s in np.unique(sizes):
                sel = np.nonzero(sizes == s)[0]
                i = sel[int(np.argmin(e[sel]))]
                val = self.term(int(e[i]), int(s), n - int(s))
                if best is None or val < best[0]:
                    best = (val, chunk[i].copy())
        mask = best[1]
        return best[0], [P[i] for i in range(n) if mask[i]], [P[i] for i in range(n) if not mask[i]]

    def best_split_heuristic(self, P: list, rng: random.Random, restarts: int = 6):
        n = len(P)
        best = None
        for _ in range(restarts):
            mask = [rng.random() < 0.5 for _ in range(n)]
            if all(mask) or not any(mask):
                mask[0] = not mask[0]
            E = [P[i] for i in range(n) if mask[i]]
            F = [P[i] for i in range(n) if not mask[i]]
            val = self.term(self.cut(E, F), len(E), len(F))
            improved = True
            while improved:
                improved = False
                for v in range(n):
                    ns = sum(mask) + (-1 if mask[v] else 1)
                    if ns in (0, n):
                        continue
                    mask[v] = not mask[v]
                    E2 = [P[i] for i in range(n) if mask[i]]
                    F2 = [P[i] for i in range(n) if not mask[i]]
                    v2 = self.term(self.cut(E2, F2), len(E2), len(F2))
                    if v2 < val:
                        val, E, F, improved = v2, E2, F2, True
                    else:
                        mask[v] = not mask[v]
            if best is None or val < best[0]:
                best = (val, E, F)
        return best


def _validate_eps1(epsilon1) -> Fraction:
    eps1 = as_fraction(epsilon1)
    if not 0 <= eps1 <= 1:
        raise DomainError(f"epsilon1 must lie in [0, 1], got {eps1}")
    return eps1


def partition_min_sigma(
    A: GroupSet,
    k: int = 2,
    epsilon1: Rational = Fraction(1, 2),
    mode: str = "exact",
    seed: int = 0,
    start: str = SINGLETONS,
    cut_cap: int = CUT_CAP,
) -> PartitionState:
    """Steepest-descent search for a sigma-minimal partition.

    In ``exact`` mode splits of parts up to ``cut_cap`` elements are
    searched exhaustively; larger parts always use the seeded local search
    and are listed as uncertified.  ``heuristic`` mode uses the local search
    for every part.
    """
    if not len(A):
        raise DomainError("need a nonempty set")
    if k < 2:
        raise DomainError("k must be >= 2")
    if mode not in ("exact", "heuristic"):
        raise DomainError(f"unknown mode {mode!r}")
    eps1 = _validate_eps1(epsilon1)
    obj = _Objective(A, k, eps1)
    n = obj.n
    rng = random.Random(seed)
    if start == SINGLETONS:
        parts = [[i] for i in range(n)]
    elif start == WHOLE:
        parts = [list(range(n))]
    else:
        raise DomainError(f"unknown start {start!r}")

    split_cache: dict = {}

    def best_split(P):
        key = tuple(P)
        if key not in split_cache:
            if mode == "exact" and len(P) <= cut_cap:
                split_cache[key] = (*obj.best_split_exact(P), True)
            else:
                split_cache[key] = (*obj.best_split_heuristic(P, rng), False)
        return split_cache[key]

    trace = ExtractionTrace()
    sigma = obj.sigma(parts)
    guard = 100 * n * n
    moves = 0
    while True:
        if moves >= guard:
            raise GuardTripError(f"partition search exceeded {guard} moves")
        best = None
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                delta = -obj.term(obj.cut(parts[i], parts[j]), len(parts[i]), len(parts[j]))
                # zero-gain merges break ties towards fewer parts; (sigma, #parts) still strictly decreases
                if delta <= 0 and (best is None or delta < best[0]):
                    best = (delta, "merge", i, j)
        for i, P in enumerate(parts):
            if len(P) < 2:
                continue
            val, E, F, _ = best_split(P)
            if val < 0 and (best is None or val < best[0]):
                best = (val, "split", i, (E, F))
        if best is None:
            break
        delta, action, i, arg = best
        if action == "merge":
            merged = sorted(parts[i] + parts[arg])
            parts = [P for t, P in enumerate(parts) if t not in (i, arg)] + [merged]
            data = {"parts": [_elems(A, parts[-1])]}
        else:
            E, F = arg
            parts = [P for t, P in enumerate(parts) if t != i] + [E, F]
            data = {"parts": [_elems(A, E), _elems(A, F)]}
        parts.sort()
        new_sigma = obj.sigma(parts)
        if new_sigma - sigma != delta or (delta == 0 and action != "merge"):
            raise ArithmeticError("sigma failed to decrease by the predicted amount")
        trace.add(action, sigma=frac_json(Fraction(new_sigma, obj.scale)), **data)
        sigma = new_sigma
        moves += 1

    groups = [A.subset(P) for P in parts]
    certified, uncertified, worst2 = [], [], 0
    for idx, P in enumerate(parts):
        if len(P) < 2:
            certified.append(idx)
            continue
        val, _, _, exact = best_split(P)
        (certified if exact else uncertified).append(idx)
        worst2 = min(worst2, val)
    checks = _partition_checks(obj, parts, groups, eps1, k, worst2)
    return PartitionState(
        A, groups, Fraction(sigma, obj.scale), k, eps1, obj.ta, certified, uncertified, checks, trace, moves
    )


def _elems(A: GroupSet, idx) -> list:
    return A.subset(idx).to_json()["elements"]


def _partition_checks(obj: _Objective, parts, groups, eps1, k, worst2: int) -> dict:
    a, b, m, ta = eps1.numerator, eps1.denominator, obj.n, obj.ta
    worst1 = None
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            t = obj.term(obj.cut(parts[i], parts[j]), len(parts[i]), len(parts[j]))
            if worst1 is None or t > worst1:
                worst1 = t
    factor = b - (2 * k - 1) * a
    total = sum(T(G, k) for G in groups)
    largest = max(len(P) for P in parts)
    checks = {
        "property1": Inequality("max_{i<j} (e(A_i,A_j) - eps1 c_i c_j T_k(A)) |A|^2 den <= 0", worst1 or 0, "<=", 0),
        "property2": Inequality("min internal (e(E,F) - eps1 c_E c_F T_k(A)) |A|^2 den >= 0", worst2, ">=", 0),
        "property3": Inequality("sum T_k(A_i) den >= (den - (2k-1) num) T_k(A)", total * b, ">=", factor * ta),
    }
    if factor > 0:
        checks["floor"] = Inequality("max |A_i|^2 den^2 >= (den - (2k-1) num)^2 |A|", largest**2 * b * b, ">=", factor**2 * m)
    return checks


# -- recursive strong partition ------------------------------------------------

S0_GRID = 1024


@dataclass
class StrongPartitionResult:
    ground: GroupSet
    parts: list
    witnesses: list
    omega: GroupSet
    success: bool
    status: str
    epsilon: Fraction
    beta: Fraction
    epsilon_prime: Fraction
    rounds: int
    s0_bounds: tuple
    checks: dict
    trace: ExtractionTrace
    uncertified: list = field(default_factory=list)

    def labels(self) -> list[int]:
        where = {x: i for i, P in enumerate(self.parts) for x in P}
        return [where.get(x, -1) for x in self.ground]

    def to_json(self):
        return {
            "status": self.status,
            "success": self.success,
            "epsilon": frac_json(self.epsilon),
            "beta": frac_json(self.beta),
            "epsilon_prime": frac_json(self.epsilon_prime),
            "C": frac_json(self.epsilon_prime),
            "s0": [frac_json(x) for x in self.s0_bounds],
            "rounds": self.rounds,
            "parts": [P.to_json()["elements"] for P in self.parts],
            "witnesses": [W.to_json()["elements"] for W in self.witnesses],
            "omega": self.omega.to_json()["elements"],
            "uncertified": self.uncertified,
            "checks": {name: c.to_json() for name, c in self.checks.items()},
            "trace": self.trace.to_json(),
        }


def strong_partition_schedule(m: int, epsilon: Fraction, beta: Fraction):
    """Rounds, ``eps'`` and the enclosure of ``s0 = log(2m/eps) / (2 log(1/beta))``.

    ``s0`` is replaced by an upper bound on the 1/1024 grid, which makes
    ``eps'`` slightly smaller (safe) and the round count possibly larger.
    """
    lo, hi = interval(lambda ctx, F: ctx.log(2 * m / F(epsilon)) / (2 * ctx.log(1 / F(beta))))
    s0_up = Fraction(ceil_fraction(hi * S0_GRID), S0_GRID)
    rounds = max(1, ceil_fraction(s0_up))
    return rounds, epsilon / (6 * s0_up), (lo, hi)


def strong_partition(
    A: GroupSet,
    epsilon: Rational,
    beta: Rational,
    seed: int = 0,
    mode: str = "exact",
    cut_cap: int = CUT_CAP,
) -> StrongPartitionResult:
    """Split ``A`` into strongly beta-connected parts (degree 2) plus a remainder ``Omega``.

    A pending set ``X`` is partitioned with ``eps1 = eps'``; if some part has
    at least ``beta |X|`` elements that part witnesses strong
    beta-connectedness of ``X`` (constant ``eps'``) and ``X`` is kept.
    Otherwise the parts of ``X`` are pending in the next round.
    """
    eps, beta = as_fraction(epsilon), as_fraction(beta)
    if not (0 < eps < 1 and 0 < beta < 1):
        raise DomainError("epsilon and beta must lie in (0, 1)")
    m = len(A)
    if m == 0:
        raise DomainError("need a nonempty set")
    if m * 2 * beta * beta < eps:
        raise DomainError("need |A| >= epsilon / (2 beta^2)")
    k = 2
    rounds, eps_p, s0 = strong_partition_schedule(m, eps, beta)
    t_total = T(A, k)
    trace = ExtractionTrace()
    good: list = []
    witnesses: list = []
    uncertified: list = []
    pending = [A]
    success = False
    for r in range(1, rounds + 1):
        nxt = []
        for X in pending:
            st = partition_min_sigma(X, k, eps_p, mode=mode, seed=seed + r, cut_cap=cut_cap)
            big = [i for i, P in enumerate(st.parts) if len(P) * beta.denominator >= beta.numerator * len(X)]
            if big:
                i = max(big, key=lambda i: (len(st.parts[i]), -i))
                good.append(X)
                witnesses.append(st.parts[i])
                if i not in st.certified_parts:
                    uncertified.append(len(good) - 1)
                trace.add("good", round=r, set=X.to_json()["elements"], witness=st.parts[i].to_json()["elements"])
            else:
                nxt.extend(st.parts)
                trace.add("bad", [st.checks["property3"]], round=r, set=X.to_json()["elements"], pieces=len(st.parts))
        pending = nxt
        t_good = sum(T(G, k) for G in good)
        reached = t_good * eps.denominator >= (eps.denominator - eps.numerator) * t_total
        trace.add("round", round=r, good_energy=t_good, pending=len(pending), target_met=reached)
        if reached:
            success = True
            break
        if not pending:
            break
    omega = GroupSet(A.spec, tuple(sorted(x for X in pending for x in X.elems)))
    order = sorted(range(len(good)), key=lambda i: good[i].elems)
    remap = {old: new for new, old in enumerate(order)}
    good = [good[i] for i in order]
    witnesses = [witnesses[i] for i in order]
    uncertified = sorted(remap[i] for i in uncertified)
    checks = _strong_checks(A, good, omega, eps, t_total)
    return StrongPartitionResult(
        A,
        good,
        witnesses,
        omega,
        success,
        "success" if success else "theorem-guarantee-not-met",
        eps,
        beta,
        eps_p,
        rounds,
        s0,
        checks,
        trace,
        uncertified,
    )


def _strong_checks(A, good, omega, eps, t_total) -> dict:
    covered = sorted(x for G in good for x in G.elems) + list(omega.elems)
    cover_ok = sorted(covered) == list(A.elems) and len(covered) == len(set(covered))
    t_good = sum(T(G, 2) for G in good)
    t_omega = T(omega, 2)
    a, b = eps.numerator, eps.denominator
    return {
        "partition": Inequality("parts and Omega partition A", int(cover_ok), "==", 1),
        "property2": Inequality("sum T_2(A_i) den >= (den - num) T_2(A)", t_good * b, ">=", (b - a) * t_total),
        "omega": Inequality("T_2(Omega) den <= num T_2(A)", t_omega * b, "<=", a * t_total),
        "cross_terms": Inequality("T_2(A) - sum T_2(A_i) - T_2(Omega) >= 0", t_total - t_good - t_omega, ">=", 0),
    }
