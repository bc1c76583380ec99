"""Connectedness of sets in terms of higher energy, and the extraction algorithms.

A set ``A`` is (beta1, beta2)-connected of degree k with constant ``C`` if
every ``B`` with ``beta1 |A| <= |B| <= beta2 |A|`` keeps

    T_k(B) >= C^(2k) (|B| / |A|)^(2k) T_k(A).

``A`` is strongly connected if every bipartition ``E | F`` carries cut
weight ``e(E, F) >= C c_E c_F T_k(A)`` where ``e`` sums the weight
``w = (A *_{k-2} A) o (A *_{k-2} A)`` over pairs ``(e, f)``.

Exact modes enumerate all candidates below a cap.  Heuristic modes run a
seeded local search and can only ever report a concrete violation or
"no-counterexample-found"; they never certify.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from ._batch import SubsetEnergy, bipartition_masks, cut_values, masks_of_size, pair_weights
from .dissociation import SpanIndex, maximal_dissociated_subset
from .energy import T, ZetaValue, cut_weight
from .errors import CapacityError, DomainError, GuardTripError, UnsupportedSpecError
from .exact import Inequality, Rational, as_fraction, frac_json, interval, iroot_floor
from .groups import GroupSet, subgroup_closure
from .trace import ExtractionTrace

SUBSET_CAP = 20
CUT_CAP = 20

CONNECTED = "connected"
VIOLATED = "violated"
NO_COUNTEREXAMPLE = "no-counterexample-found"


@dataclass(frozen=True)
class ConnectivityParams:
    """Exact constants for the connectedness notions.

    ``beta1 = 0`` with ``beta2 = 1`` is plain connectedness (all nonempty B).
    """

    k: int = 2
    C: Fraction = Fraction(1)
    beta1: Fraction = Fraction(0)
    beta2: Fraction = Fraction(1)
    epsilon1: Fraction = Fraction(1, 2)
    epsilon: Fraction = Fraction(1, 2)
    beta: Fraction = Fraction(1, 2)

    def __post_init__(self):
        for name in ("C", "beta1", "beta2", "epsilon1", "epsilon", "beta"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not isinstance(self.k, int) or self.k < 2:
            raise DomainError(f"k must be an integer >= 2, got {self.k!r}")
        if not 0 < self.C <= 1:
            raise DomainError(f"C must lie in (0, 1], got {self.C}")
        if not 0 <= self.beta1 <= self.beta2 <= 1:
            raise DomainError(f"need 0 <= beta1 <= beta2 <= 1, got {self.beta1}, {self.beta2}")
        if self.epsilon1 <= 0 or self.epsilon <= 0 or not 0 < self.beta < 1:
            raise DomainError("need epsilon1 > 0, epsilon > 0 and 0 < beta < 1")

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "C": frac_json(self.C),
            "beta1": frac_json(self.beta1),
            "beta2": frac_json(self.beta2),
            "epsilon1": frac_json(self.epsilon1),
            "epsilon": frac_json(self.epsilon),
            "beta": frac_json(self.beta),
        }


def _pow2(k: int) -> bool:
    return k >= 2 and k & (k - 1) == 0


def window_sizes(m: int, beta1: Fraction, beta2: Fraction) -> list[int]:
    """Sizes ``s >= 1`` with ``beta1 m <= s <= beta2 m``."""
    return [s for s in range(1, m + 1) if beta1 * m <= s <= beta2 * m]


def connectivity_inequality(tb: int, b: int, ta: int, m: int, k: int, C: Fraction) -> Inequality:
    """``T_k(B) |A|^2k q^2k >= p^2k |B|^2k T_k(A)`` for ``C = p/q``."""
    p, q = C.numerator, C.denominator
    return Inequality(
        "T_k(B) >= C^2k (|B|/|A|)^2k T_k(A)",
        tb * m ** (2 * k) * q ** (2 * k),
        ">=",
        p ** (2 * k) * b ** (2 * k) * ta,
    )


@dataclass(frozen=True)
class ConnectivityVerdict:
    status: str
    witness: GroupSet | None
    inequality: Inequality | None
    checked: int
    certified: bool
    energy: int

    @property
    def connected(self) -> bool | None:
        if self.status == CONNECTED:
            return True
        if self.status == VIOLATED:
            return False
        return None

    def __bool__(self):
        return self.status == CONNECTED

    def to_json(self):
        return {
            "status": self.status,
            "certified": self.certified,
            "witness": None if self.witness is None else self.witness.to_json()["elements"],
            "inequality": None if self.inequality is None else self.inequality.to_json(),
            "checked": self.checked,
            "T_k(A)": self.energy,
        }


def _worst_subset_exact(A: GroupSet, k: int, sizes, engine: SubsetEnergy | None = None):
    """Subset minimising ``T_k(B) / |B|^2k`` over the given sizes; returns (indices, T_k(B), count)."""
    n = len(A)
    engine = engine or SubsetEnergy(A, k)
    best = None
    count = 0
    for s in sizes:
        best_s = None
        for chunk in masks_of_size(n, [s]):
            vals = engine.energies(chunk)
            count += len(vals)
            i = int(np.argmin(vals))
            if best_s is None or vals[i] < best_s[1]:
                best_s = (np.nonzero(chunk[i])[0].tolist(), int(vals[i]))
        if best_s is None:
            continue
        if best is None or best_s[1] * len(best[0]) ** (2 * k) < best[1] * s ** (2 * k):
            best = best_s
    return best, count


def _worst_subset_heuristic(A: GroupSet, k: int, sizes, rng: random.Random, restarts: int):
    """Seeded swap search for small ``T_k(B) / |B|^2k`` at each size."""
    n = len(A)
    best = None
    count = 0
    for s in sizes:
        for _ in range(restarts):
            cur = sorted(rng.sample(range(n), s))
            cur_t = T(A.subset(cur), k)
            count += 1
            improved = True
            while improved:
                improved = False
                outside = [i for i in range(n) if i not in cur]
                rng.shuffle(outside)
                for pos in range(len(cur)):
                    for j in outside:
                        cand = sorted(cur[:pos] + cur[pos + 1 :] + [j])
                        t = T(A.subset(cand), k)
                        count += 1
                        if t < cur_t:
                            cur, cur_t, improved = cand, t, True
                            break
                    if improved:
                        break
            if best is None or cur_t * len(best[0]) ** (2 * k) < best[1] * s ** (2 * k):
                best = (cur, cur_t)
    return best, count


def check_connected(
    A: GroupSet,
    params: ConnectivityParams,
    mode: str = "exact",
    seed: int = 0,
    cap: int = SUBSET_CAP,
    restarts: int = 8,
) -> ConnectivityVerdict:
    """Search for ``B`` in the size window violating the connectedness inequality."""
    m = len(A)
    if m == 0:
        raise DomainError("connectedness is defined for nonempty sets")
    k, C = params.k, params.C
    ta = T(A, k)
    sizes = window_sizes(m, params.beta1, params.beta2)
    if mode == "exact":
        if m > cap:
            raise CapacityError(f"|A| = {m} exceeds the exhaustive subset cap {cap}; use mode='heuristic'")
        best, count = _worst_subset_exact(A, k, sizes)
    elif mode == "heuristic":
        best, count = _worst_subset_heuristic(A, k, sizes, random.Random(seed), restarts)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    if best is None:
        return ConnectivityVerdict(CONNECTED if mode == "exact" else NO_COUNTEREXAMPLE, None, None, count, mode == "exact", ta)
    idx, tb = best
    ineq = connectivity_inequality(tb, len(idx), ta, m, k, C)
    if not ineq.holds:
        status = VIOLATED
    else:
        status = CONNECTED if mode == "exact" else NO_COUNTEREXAMPLE
    return ConnectivityVerdict(status, A.subset(idx), ineq, count, mode == "exact" or status == VIOLATED, ta)


# -- strong connectedness ----------------------------------------------------


def strong_inequality(e: int, sE: int, sF: int, ta: int, m: int, C: Fraction) -> Inequality:
    """``e(E,F) |A|^2 q >= p |E||F| T_k(A)``."""
    return Inequality("e(E,F) >= C c_E c_F T_k(A)", e * m * m * C.denominator, ">=", C.numerator * sE * sF * ta)


@dataclass(frozen=True)
class CutVerdict:
    status: str
    cut: tuple | None
    cut_value: int | None
    inequality: Inequality | None
    checked: int
    certified: bool
    energy: int

    @property
    def connected(self) -> bool | None:
        return {CONNECTED: True, VIOLATED: False}.get(self.status)

    def __bool__(self):
        return self.status == CONNECTED

    def to_json(self):
        return {
            "status": self.status,
            "certified": self.certified,
            "cut": None if self.cut is None else [c.to_json()["elements"] for c in self.cut],
            "cut_value": self.cut_value,
            "inequality": None if self.inequality is None else self.inequality.to_json(),
            "checked": self.checked,
            "T_k(A)": self.energy,
        }


def min_ratio_cut_exact(W: np.ndarray):
    """Bipartition minimising ``e(E,F) / (|E||F|)``; returns (mask, e, count)."""
    n = W.shape[0]
    best = None
    count = 0
    for chunk in bipartition_masks(n):
        e = cut_values(W, chunk)
        sizes = chunk.sum(axis=1)
        count += len(e)
        for s in np.unique(sizes):
            sel = np.nonzero(sizes == s)[0]
            i = sel[int(np.argmin(e[sel]))]
            val = int(e[i])
            s = int(s)
            if best is None or val * best[2] < best[1] * s * (n - s):
                best = (chunk[i].copy(), val, s * (n - s))
    return best[0], best[1], count


def min_ratio_cut_heuristic(W: np.ndarray, rng: random.Random, restarts: int = 8):
    """Single-vertex move local search (Kernighan-Lin flavour) on ``e / (|E||F|)``."""
    n = W.shape[0]
    Wl = W.tolist()
    best = None
    count = 0

    def value(mask):
        return sum(Wl[i][j] for i in range(n) if mask[i] for j in range(n) if not mask[j])

    for _ in range(restarts):
        mask = [rng.random() < 0.5 for _ in range(n)]
        if all(mask) or not any(mask):
            mask[rng.randrange(n)] = not mask[0]
        if all(mask) or not any(mask):
            mask[0] = not mask[0]
        e = value(mask)
        s = sum(mask)
        improved = True
        while improved:
            improved = False
            order = list(range(n))
            rng.shuffle(order)
            for v in order:
                ns = s - 1 if mask[v] else s + 1
                if ns == 0 or ns == n:
                    continue
                mask[v] = not mask[v]
                ne = value(mask)
                count += 1
                if ne * s * (n - s) < e * ns * (n - ns):
                    e, s, improved = ne, ns, True
                    break
                mask[v] = not mask[v]
        if best is None or e * best[2] < best[1] * s * (n - s):
            best = (np.array(mask, dtype=np.int8), e, s * (n - s))
    return best[0], best[1], count


def check_strongly_connected(
    A: GroupSet,
    params: ConnectivityParams,
    mode: str = "exact",
    seed: int = 0,
    cap: int = CUT_CAP,
    weight=None,
    ta: int | None = None,
) -> CutVerdict:
    """Minimise ``e(E,F)/(|E||F|)`` over bipartitions and compare with ``C T_k(A) / |A|^2``.

    ``weight`` and ``ta`` let callers evaluate cuts of a subset under the
    weight and energy of a larger ambient set (the beta-strong notion).
    """
    m = len(A)
    if m == 0:
        raise DomainError("strong connectedness is defined for nonempty sets")
    k, C = params.k, params.C
    w = weight if weight is not None else cut_weight(A, k)
    ta = T(A, k) if ta is None else ta
    if m == 1:
        return CutVerdict(CONNECTED, None, None, None, 0, True, ta)
    W = pair_weights(A, w)
    if mode == "exact":
        if m > cap:
            raise CapacityError(f"|A| = {m} exceeds the exhaustive cut cap {cap}; use mode='heuristic'")
        mask, e, count = min_ratio_cut_exact(W)
    elif mode == "heuristic":
        mask, e, count = min_ratio_cut_heuristic(W, random.Random(seed))
    else:
        raise DomainError(f"unknown mode {mode!r}")
    E = A.subset([i for i in range(m) if mask[i]])
    F = A.subset([i for i in range(m) if not mask[i]])
    ineq = strong_inequality(e, len(E), len(F), ta, m, C)
    if not ineq.holds:
        status = VIOLATED
    else:
        status = CONNECTED if mode == "exact" else NO_COUNTEREXAMPLE
    return CutVerdict(status, (E, F), e, ineq, count, mode == "exact" or status == VIOLATED, ta)


@dataclass(frozen=True)
class ImplicationReport:
    strong: CutVerdict
    weak: ConnectivityVerdict | None

    @property
    def vacuous(self) -> bool:
        return not self.strong

    @property
    def holds(self) -> bool:
        return self.vacuous or bool(self.weak)

    def to_json(self):
        return {
            "strong": self.strong.to_json(),
            "weak": None if self.weak is None else self.weak.to_json(),
            "vacuous": self.vacuous,
            "holds": self.holds,
        }


def check_strong_implies_weak(A: GroupSet, params: ConnectivityParams, cap: int = SUBSET_CAP) -> ImplicationReport:
    """Strong connectedness with ``C`` must give plain connectedness with ``C/8``."""
    if not _pow2(params.k):
        raise DomainError("k must be a power of two")
    strong = check_strongly_connected(A, params, cap=cap)
    if not strong:
        return ImplicationReport(strong, None)
    weak_params = replace(params, C=params.C / 8, beta1=Fraction(0), beta2=Fraction(1))
    return ImplicationReport(strong, check_connected(A, weak_params, cap=cap))


# -- Konyagin containment ------------------------------------------------------


@dataclass(frozen=True)
class ContainmentReport:
    S: GroupSet
    subgroup_order: int
    anchor: object
    contained: bool
    strong: CutVerdict | None

    @property
    def consistent(self) -> bool:
        """False only if the set is certified strongly connected yet escapes the coset."""
        return not (self.strong is not None and self.strong.certified and bool(self.strong)) or self.contained

    def to_json(self):
        spec = self.S.spec
        return {
            "S": self.S.to_json()["elements"],
            "subgroup_order": self.subgroup_order,
            "anchor": spec.elem_to_json(self.anchor),
            "contained": self.contained,
            "strongly_connected": None if self.strong is None else self.strong.to_json(),
            "consistent": self.consistent,
        }


def konyagin_containment(
    A: GroupSet, k: int, C: Rational, check_strong: bool = True, cap: int = CUT_CAP
) -> ContainmentReport:
    """Popular-difference set ``S`` and the test ``A - a`` inside ``<S>``."""
    if not A.spec.is_finite:
        raise UnsupportedSpecError("subgroup closure needs a finite group")
    if not len(A):
        raise DomainError("need a nonempty set")
    C = as_fraction(C)
    params = ConnectivityParams(k=k, C=C)
    m = len(A)
    w = cut_weight(A, k)
    ta = T(A, k)
    p, q = C.numerator, C.denominator
    S = GroupSet(A.spec, tuple(h for h, v in w.values.items() if v * m * m * q >= p * ta))
    H = subgroup_closure(A.spec, S.elems)
    a = A.elems[0]
    contained = all(A.spec.sub(x, a) in H for x in A)
    strong = check_strongly_connected(A, params, weight=w, ta=ta, cap=cap) if check_strong and m <= cap else None
    return ContainmentReport(S, len(H), a, contained, strong)


# -- connected subset extraction ---------------------------------------------


@dataclass
class ExtractionResult:
    subset: GroupSet
    trace: ExtractionTrace
    certified: bool
    params: ConnectivityParams
    initial: ZetaValue | None
    final: ZetaValue | None
    zeta_monotone: bool
    bounds: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "params": self.params.to_json(),
            "subset": self.subset.to_json()["elements"],
            "certified": self.certified,
            "zeta_initial": None if self.initial is None else self.initial.to_json(),
            "zeta_final": None if self.final is None else self.final.to_json(),
            "zeta_monotone": self.zeta_monotone,
            "bounds": self.bounds,
            "trace": self.trace.to_json(),
        }


def replay_extraction(A: GroupSet, trace) -> GroupSet:
    """Re-apply the recorded removals to ``A``."""
    cur = A
    for step in trace:
        data = step.to_json() if hasattr(step, "to_json") else step
        if data["action"] == "remove":
            removed = cur.with_elems(cur.spec.elem_from_json(x) for x in data["removed"])
            if not removed.issubset(cur):
                raise DomainError("trace removes elements that are not present")
            cur = cur.difference(removed)
    return cur


def _zeta_or_none(t: int, m: int, k: int) -> ZetaValue | None:
    return ZetaValue(t, m, k) if m >= 2 else None


def _theorem_bounds(m: int, ta: int, final_size: int, steps: int, params: ConnectivityParams) -> dict:
    """Step-count and size bounds from the extraction theorem, as observations.

    Only meaningful when ``kappa > 0`` (``C < 1/16`` and ``beta1 > 0``).
    """
    k, b1, b2 = params.k, params.beta1, params.beta2
    out: dict = {"kappa_positive": False}
    if not (b1 > 0 and params.C < Fraction(1, 16) and m >= 2 and b1 < 1):
        return out
    out["kappa_positive"] = True
    # number of steps N <= log((2k-1)/zeta) / log(1 + kappa)
    def steps_expr(ctx, F):
        kappa = ctx.log(1 / (1 - F(b1))) / ctx.log(ctx.mpf(m)) * (1 - 16 * F(params.C))
        zeta = ctx.log(ctx.mpf(ta)) / ctx.log(ctx.mpf(m))
        return ctx.log((2 * k - 1) / zeta) / ctx.log(1 + kappa)

    lo, hi = interval(steps_expr)
    out["step_bound"] = [frac_json(lo), frac_json(hi)]
    out["steps_within_bound"] = Inequality(
        "steps <= log((2k-1)/zeta)/log(1+kappa) (upper enclosure)", steps * hi.denominator, "<=", hi.numerator
    ).to_json()
    if b2 < 1:
        def size_expr(ctx, F):
            return ctx.mpf(m) * ctx.exp(steps_expr(ctx, F) * ctx.log(1 - F(b2)))

        lo, hi = interval(size_expr)
        out["size_bound"] = [frac_json(lo), frac_json(hi)]
        out["size_within_bound"] = Inequality(
            "|A'| >= m 2^(N log(1-beta2)) (upper enclosure)", final_size * hi.denominator, ">=", hi.numerator
        ).to_json()
    return out


def extract_connected_subset(
    A: GroupSet,
    params: ConnectivityParams,
    mode: str = "exact",
    seed: int = 0,
    cap: int = SUBSET_CAP,
) -> ExtractionResult:
    """Repeatedly strip a window-sized ``B`` violating connectedness until none exists.

    Every removal records the exact form of
    ``T_k(A \\ B) > T_k(A) (1 - C c_B)^(2k)`` and the zeta comparison
    between consecutive sets.  ``zeta`` cannot decrease when ``C <= 1/2``;
    a decrease in that regime raises, since it signals a bug.
    """
    if len(A) < 2:
        raise DomainError("extraction needs |A| >= 2")
    if not _pow2(params.k):
        raise DomainError("k must be a power of two")
    k, C = params.k, params.C
    p, q = C.numerator, C.denominator
    trace = ExtractionTrace()
    cur = A
    t_cur = T(A, k)
    initial = ZetaValue(t_cur, len(A), k)
    monotone = True
    guard = 4 * len(A)
    certified = False
    for it in range(guard + 1):
        if it == guard:
            raise GuardTripError(f"extraction did not terminate within {guard} steps")
        verdict = check_connected(cur, params, mode=mode, seed=seed + it, cap=cap)
        if verdict.status != VIOLATED:
            certified = verdict.status == CONNECTED
            trace.add("stop", status=verdict.status, size=len(cur), checked=verdict.checked)
            break
        B = verdict.witness
        rest = cur.difference(B)
        t_rest = T(rest, k)
        m, b = len(cur), len(B)
        v = verdict.inequality
        checks = [
            # the witness, restated so that a correct trace consists of true statements
            Inequality("B violates: T_k(B) |A|^2k q^2k < p^2k |B|^2k T_k(A)", v.lhs, "<", v.rhs),
            Inequality(
                "T_k(A\\B) (qm)^2k > T_k(A) (qm - pb)^2k",
                t_rest * (q * m) ** (2 * k),
                ">",
                t_cur * (q * m - p * b) ** (2 * k),
            ),
        ]
        z_before, z_after = _zeta_or_none(t_cur, m, k), _zeta_or_none(t_rest, len(rest), k)
        zeta_cmp = None
        if z_before is not None and z_after is not None:
            zeta_cmp = z_after.compare(z_before)
            if zeta_cmp < 0:
                monotone = False
                if C <= Fraction(1, 2):
                    raise ArithmeticError("zeta decreased during extraction with C <= 1/2")
        for c in checks[1:]:
            if not c.holds:
                raise ArithmeticError(f"energy step inequality failed: {c}")
        trace.add(
            "remove",
            checks,
            removed=B.to_json()["elements"],
            size_before=m,
            size_after=len(rest),
            T_before=t_cur,
            T_removed=T(B, k),
            T_after=t_rest,
            zeta_cmp=zeta_cmp,
        )
        cur, t_cur = rest, t_rest
    final = _zeta_or_none(t_cur, len(cur), k)
    if final is not None and final.compare(initial) < 0:
        monotone = False
    steps = sum(1 for s in trace if s.action == "remove")
    bounds = _theorem_bounds(len(A), initial.energy, len(cur), steps, params)
    return ExtractionResult(cur, trace, certified, params, initial, final, monotone, bounds)


# -- almost basis --------------------------------------------------------------


ALMOST_BASIS_CONSTANT = Fraction(2**13)


@dataclass
class AlmostBasisResult:
    lam: GroupSet | None
    coverage: int | None
    trace: ExtractionTrace
    l_bound: int
    certificate: dict | None = None

    @property
    def success(self) -> bool:
        return self.lam is not None

    def to_json(self):
        return {
            "success": self.success,
            "lambda": None if self.lam is None else self.lam.to_json()["elements"],
            "covered_count": self.coverage,
            "l_floor": self.l_bound,
            "certificate": self.certificate,
            "trace": self.trace.to_json(),
        }


def almost_basis_l_floor(m: int, ta: int, k: int, C: Fraction, constant: Fraction = ALMOST_BASIS_CONSTANT) -> int:
    """``floor(constant C^-2 k m^2 / T_k(A)^(1/k))``, computed without roots."""
    X = constant * k * m * m / (C * C)
    return iroot_floor(X**k / ta, k)


def extract_almost_basis(
    A: GroupSet,
    params: ConnectivityParams,
    seed: int | None = None,
    constant: Rational = ALMOST_BASIS_CONSTANT,
) -> AlmostBasisResult:
    """Peel dissociated slices until a maximal dissociated subset is small enough.

    Returns ``Lambda`` with ``|Span Lambda & A| >= (1 - beta1)|A|`` or, when
    the remaining set drops below ``(1 - beta1)|A|``, a certificate holding
    the exact numbers for the hypotheses that must have failed.
    """
    m = len(A)
    if m == 0:
        raise DomainError("need a nonempty set")
    k, C, b1, b2 = params.k, params.C, params.beta1, params.beta2
    if b2 * m < b1 * m + 1:
        raise DomainError("almost-basis extraction needs beta2 >= beta1 + 1/|A|")
    constant = as_fraction(constant)
    ta = T(A, k)
    l_floor = almost_basis_l_floor(m, ta, k, C, constant)
    slice_size = max(l_floor, 1)
    trace = ExtractionTrace()
    cur = A
    slices: list[GroupSet] = []
    keep_floor = (1 - b1) * m
    for it in range(m + 1):
        lam = maximal_dissociated_subset(cur, seed=None if seed is None else seed + it).base
        if len(lam) <= l_floor:
            index = SpanIndex(lam) if len(lam) else None
            coverage = index.count(A) if index else sum(1 for a in A if a == A.spec.zero)
            cov_check = Inequality(
                "|Span L & A| >= (1-beta1)|A|", coverage * b1.denominator, ">=", (b1.denominator - b1.numerator) * m
            )
            trace.add("accept", [cov_check], lam=lam.to_json()["elements"], size=len(lam), covered=coverage)
            return AlmostBasisResult(lam, coverage, trace, l_floor)
        piece = lam.subset(range(slice_size))
        slices.append(piece)
        cur = cur.difference(piece)
        trace.add("peel", slice=piece.to_json()["elements"], lam_size=len(lam), remaining=len(cur))
        if len(cur) < keep_floor:
            return AlmostBasisResult(None, None, trace, l_floor, _almost_basis_certificate(A, slices, params, ta, constant))
    raise GuardTripError("almost-basis peeling did not terminate")


def _almost_basis_certificate(A, slices, params, ta, constant) -> dict:
    k, C, b1, b2 = params.k, params.C, params.beta1, params.beta2
    m = len(A)
    target = (b1 * m).__floor__() + 1
    pooled = [x for s in slices for x in s.elems]
    B = A.with_elems(pooled[:target])
    tb = T(B, k)
    p, q = C.numerator, C.denominator
    checks = [
        # connectedness at |B| ~ beta1 |A|: T_k(B) >= C^2k beta1^2k T_k(A)
        Inequality(
            "T_k(B) >= C^2k beta1^2k T_k(A)",
            tb * (q * b1.denominator) ** (2 * k),
            ">=",
            (p * b1.numerator) ** (2 * k) * ta,
        ),
        Inequality(
            "T_k(A) >= (2 constant)^k C^-2k k^k |A|^k",
            ta * p ** (2 * k) * constant.denominator**k,
            ">=",
            (2 * constant.numerator) ** k * q ** (2 * k) * k**k * m**k,
        ),
        Inequality("|B| >= beta1 |A|", len(B) * b1.denominator, ">=", b1.numerator * m),
        Inequality("|B| <= beta2 |A|", len(B) * b2.denominator, "<=", b2.numerator * m),
    ]
    return {
        "B": B.to_json()["elements"],
        "T_k(B)": tb,
        "T_k(A)": ta,
        "slices": len(slices),
        "constant": frac_json(constant),
        "checks": [c.to_json() for c in checks],
        "failed": [c.name for c in checks if not c.holds],
    }
