"""End-to-end basis extraction for sets with large energy, plus report rechecking.

The run: pick parameters from ``|A|`` and ``eps``, extract a connected
subset ``A'``, extract an almost-basis ``Lambda`` of ``A'`` and measure how
much of ``A`` lies in ``Span Lambda``.  The theorem's hypotheses are far
out of reach for sets that fit in memory, so each hypothesis is recorded
as an exact inequality and the conclusions are only asserted when all of
them hold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .connectivity import (
    ALMOST_BASIS_CONSTANT,
    SUBSET_CAP,
    ConnectivityParams,
    extract_almost_basis,
    extract_connected_subset,
)
from .dissociation import SpanIndex, maximal_dissociated_subset
from .energy import T, doubling_energy_bound
from .errors import AddEnergyError, DomainError
from .exact import Inequality, Rational, as_fraction, ceil_fraction, floor_log2_ln, frac_json, log2_bounds
from .groups import GroupSet, canonical_json, sumset

MAX_ORDER = 8
BETA_GRID = 1024


@dataclass(frozen=True)
class PipelineParams:
    m: int
    epsilon: Fraction
    beta1: Fraction
    beta2: Fraction
    C: Fraction
    k: int
    p: int
    k_unclamped: int
    K: Fraction

    def to_json(self):
        return {
            "m": self.m,
            "epsilon": frac_json(self.epsilon),
            "beta1": frac_json(self.beta1),
            "beta2": frac_json(self.beta2),
            "C": frac_json(self.C),
            "k": self.k,
            "p": self.p,
            "k_unclamped": self.k_unclamped,
            "K": frac_json(self.K),
        }


def derive_params(m: int, epsilon: Fraction, K: Fraction, max_order: int = MAX_ORDER) -> tuple[PipelineParams, list]:
    """Parameter schedule; returns the params and notes about clamps."""
    notes = []
    beta1 = Fraction(1, 2)
    lo, _ = log2_bounds(m)
    # 1/log m rounded up on a fixed grid so beta2 never undershoots
    inv = Fraction(ceil_fraction(BETA_GRID / lo), BETA_GRID)
    beta2 = beta1 + inv
    if beta2 > 1:
        notes.append(f"beta2 = {frac_json(beta2)} clamped to 1")
        beta2 = Fraction(1)
    p = floor_log2_ln(m) + 1
    k_raw = 2**p if p >= 0 else 1
    k = min(max(k_raw, 2), max_order)
    if k != k_raw:
        notes.append(f"k = {k_raw} clamped to {k}")
    return PipelineParams(m, epsilon, beta1, beta2, epsilon / 128, k, p, k_raw, K), notes


def _frac_ineq(name: str, lhs: Fraction, rel: str, rhs: Fraction) -> Inequality:
    return Inequality(name, lhs.numerator * rhs.denominator, rel, rhs.numerator * lhs.denominator)


def hypotheses(A: GroupSet, params: PipelineParams, t2: int) -> list[Inequality]:
    m, eps, K = params.m, params.epsilon, params.K
    a, b = eps.numerator, eps.denominator
    c, d = K.numerator, K.denominator
    _, log_hi = log2_bounds(m)
    # K^(3/2+eps) <= 2^-58 eps^-4 m / log m, with log m bounded above
    X = Fraction(m) / (Fraction(2**58) * eps**4 * log_hi)
    return [
        Inequality("0 < eps <= 1/2", 2 * a, "<=", b),
        Inequality("|A|^eps >= 2^32 (as |A|^num >= 2^(32 den))", m**a, ">=", 2 ** (32 * b)),
        Inequality("K >= 1", c, ">=", d),
        Inequality("K <= |A|^eps", c**b, "<=", m**a * d**b),
        _frac_ineq("K^(3/2+eps) <= 2^-58 eps^-4 |A|/log|A|", K ** (3 * b + 2 * a), "<=", X ** (2 * b)),
        Inequality("T_2(A) >= |A|^3/K", t2 * c, ">=", m**3 * d),
    ]


def conclusions(params: PipelineParams, lam_size: int, coverage: int) -> list[Inequality]:
    m, eps, K = params.m, params.epsilon, params.K
    a, b = eps.numerator, eps.denominator
    c, d = K.numerator, K.denominator
    log_lo, _ = log2_bounds(m) if m > 1 else (Fraction(0), Fraction(0))
    return [
        Inequality(
            "|Span L & A| >= |A| / (2 K^(1/2+eps))",
            (2 * coverage) ** (2 * b) * c ** (b + 2 * a),
            ">=",
            m ** (2 * b) * d ** (b + 2 * a),
        ),
        _frac_ineq("|L| <= 2^30 eps^-2 K log|A|", Fraction(lam_size), "<=", 2**30 * K * log_lo / (eps * eps)),
    ]


@dataclass
class PipelineReport:
    data: dict = field(default_factory=dict)

    def dumps(self) -> str:
        return canonical_json(self.data)

    @property
    def ok(self) -> bool:
        return self.data["verdicts"]["ok"]


def run_main_pipeline(
    A: GroupSet,
    epsilon: Rational = Fraction(1, 2),
    mode: str = "exact",
    seed: int = 0,
    K: Rational | None = None,
    max_order: int = MAX_ORDER,
    cap: int = SUBSET_CAP,
) -> PipelineReport:
    if not len(A):
        raise DomainError("need a nonempty set")
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise DomainError("epsilon must be positive")
    m = len(A)
    header = {
        "tool": f"addenergy {__version__}",
        "input_digest": A.digest(),
        "input": A.to_json(),
        "mode": mode,
        "seed": seed,
    }
    if m < 2:
        lam = maximal_dissociated_subset(A).base
        cov = SpanIndex(lam).count(A) if len(lam) else sum(1 for x in A if x == A.spec.zero)
        data = {
            **header,
            "degenerate": True,
            "params": {"m": m, "epsilon": frac_json(eps)},
            "lambda": lam.to_json()["elements"],
            "covered_count": cov,
            "hypotheses": [],
            "conclusions": [],
            "stages": {},
            "certified": True,
            "verdicts": {"ok": True, "asserted": False, "hypotheses_hold": False},
            "ledger": ["|A| < 2: no parameter schedule; Lambda is a maximal dissociated subset"],
        }
        return PipelineReport(data)

    doubling = doubling_energy_bound(A)
    K_val = as_fraction(K) if K is not None else doubling.doubling
    params, ledger = derive_params(m, eps, K_val, max_order)
    stages: dict = {}
    try:
        cparams = ConnectivityParams(k=params.k, C=params.C, beta1=params.beta1, beta2=params.beta2)
        ex = extract_connected_subset(A, cparams, mode=mode, seed=seed, cap=cap)
    except AddEnergyError as exc:
        exc.args = (f"[extract] {exc.args[0] if exc.args else exc}",)
        raise
    stages["extract"] = ex.to_json()
    A1 = ex.subset
    k, C = params.k, params.C
    m1 = len(A1)
    try:
        if params.beta1 + Fraction(1, m1) <= 1:
            b2 = max(params.beta2, params.beta1 + Fraction(1, m1))
            if b2 != params.beta2:
                ledger.append(f"almost-basis beta2 raised to {frac_json(b2)} so that beta2 >= beta1 + 1/|A'|")
            ab = extract_almost_basis(
                A1, ConnectivityParams(k=k, C=C, beta1=params.beta1, beta2=b2), seed=seed
            )
            stages["almost_basis"] = ab.to_json()
            lam = ab.lam
        else:
            ledger.append("|A'| = 1: Lambda taken as a maximal dissociated subset of A'")
            lam = maximal_dissociated_subset(A1).base
            ab = None
    except AddEnergyError as exc:
        exc.args = (f"[almost-basis] {exc.args[0] if exc.args else exc}",)
        raise
    if lam is None:
        lam_json, lam_size, coverage = None, None, None
    else:
        lam_json = lam.to_json()["elements"]
        lam_size = len(lam)
        coverage = SpanIndex(lam).count(A) if len(lam) else sum(1 for x in A if x == A.spec.zero)

    t2 = doubling.energy
    hyps = hypotheses(A, params, t2)
    hyp_ok = all(h.holds for h in hyps)
    concl = conclusions(params, lam_size, coverage) if lam is not None else []
    observations = [
        doubling.inequality,
        Inequality(
            "T_k(A') >= 2^14k C^-2k k^k |A'|^k",
            T(A1, k) * C.numerator ** (2 * k),
            ">=",
            2 ** (14 * k) * C.denominator ** (2 * k) * k**k * m1**k,
        ),
    ]
    trace_ok = ex.trace.all_hold() and (ab is None or ab.trace.all_hold())
    asserted_ok = (not hyp_ok) or (lam is not None and all(c.holds for c in concl))
    data = {
        **header,
        "degenerate": False,
        "params": params.to_json(),
        "sumset_size": doubling.sumset_size,
        "T_2(A)": t2,
        "A_prime": A1.to_json()["elements"],
        "lambda": lam_json,
        "covered_count": coverage,
        "hypotheses": [h.to_json() for h in hyps],
        "conclusions": [{**c.to_json(), "status": "asserted" if hyp_ok else "observed"} for c in concl],
        "observations": [o.to_json() for o in observations],
        "stages": stages,
        "certified": bool(ex.certified and lam is not None),
        "verdicts": {
            "ok": bool(trace_ok and asserted_ok),
            "asserted": hyp_ok,
            "hypotheses_hold": hyp_ok,
            "extraction_certified": ex.certified,
            "zeta_monotone": ex.zeta_monotone,
            "almost_basis_success": lam is not None,
        },
        "ledger": ledger,
    }
    return PipelineReport(data)


# -- recheck -------------------------------------------------------------------

_INEQ_KEYS = {"name", "lhs", "relation", "rhs", "holds"}


@dataclass
class RecheckResult:
    checked: int
    mismatches: list
    asserted_failures: list

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.asserted_failures

    def to_json(self):
        return {
            "ok": self.ok,
            "checked": self.checked,
            "mismatches": self.mismatches,
            "asserted_failures": self.asserted_failures,
        }


def _walk(obj, path="$"):
    if isinstance(obj, dict):
        if _INEQ_KEYS <= obj.keys():
            yield path, obj
        for key in sorted(obj):
            yield from _walk(obj[key], f"{path}.{key}")
    elif isinstance(obj, list):
        for i, item in enumerate(obj):
            yield from _walk(item, f"{path}[{i}]")


def recheck(report) -> RecheckResult:
    """Re-evaluate every embedded inequality from its integer sides.

    Accepts a report dict, a JSON string or a :class:`PipelineReport`.
    A stored verdict that disagrees with the fresh one is a mismatch; an
    asserted inequality that fails is an asserted failure.
    """
    if isinstance(report, PipelineReport):
        report = report.data
    elif isinstance(report, (str, bytes)):
        report = json.loads(report)
    checked = 0
    mismatches, failures = [], []
    for path, obj in _walk(report):
        checked += 1
        ineq = Inequality.from_json(obj)
        if ineq.holds != bool(obj["holds"]):
            mismatches.append(path)
        if obj.get("status") == "asserted" and not ineq.holds:
            failures.append(path)
    return RecheckResult(checked, mismatches, failures)
