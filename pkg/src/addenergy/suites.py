"""Named verification suites run by ``addenergy verify``.

Each suite is a seeded sweep of theorem-as-test checks; a single exact
failure fails the suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .connectivity import ConnectivityParams, check_strong_implies_weak, konyagin_containment
from .dissociation import check_rudin
from .energy import IntFn, T, brute_energy, check_holder
from .errors import UsageError
from .generators import make
from .groups import GroupSet, GroupSpec
from .partition import partition_min_sigma
from .pipeline import recheck, run_main_pipeline


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, what):
        self.failures.append(what)

    def to_json(self):
        return {"suite": self.name, "ok": self.ok, "cases": self.cases, "failures": self.failures[:20]}


def _oracle_equivalence(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("oracle-equivalence")
    groups = [GroupSpec.cyclic(16), GroupSpec.vector(2, 3), GroupSpec.integers()]
    for _ in range(n):
        G = rng.choice(groups)
        A = make("random", G, seed=rng.randrange(2**32), size=rng.randint(1, 8))
        for k in (2, 3, 4):
            res.cases += 1
            if T(A, k) != brute_energy(A, k):
                res.fail({"set": A.to_json(), "k": k})
    return res


def _hoelder(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("hoelder")
    for _ in range(n):
        G = GroupSpec.cyclic(rng.randint(2, 32))
        k1, k2 = rng.choice((2, 4)), rng.choice((2, 4))

        def rand_fn():
            vals = {x: 1 for x in range(G.n) if rng.random() < 0.4}
            return IntFn(G, vals or {0: 1})

        v = check_holder([rand_fn() for _ in range(k1)], [rand_fn() for _ in range(k2)], k1, k2)
        res.cases += 1
        if not v.holds:
            res.fail(v.to_json())
    return res


def _rudin(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("rudin")
    groups = [GroupSpec.cyclic(10**6), GroupSpec.vector(3, 8), GroupSpec.integers()]
    for _ in range(n):
        L = make("dissociated", rng.choice(groups), seed=rng.randrange(2**32), size=rng.randint(2, 6))
        for k in (2, 4):
            res.cases += 1
            ineq = check_rudin(L, k)
            if not ineq.holds:
                res.fail(ineq.to_json())
    return res


def _subspace_connectivity(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("subspace-connectivity")
    for dim in (1, 2, 3):
        P = make("subspace", GroupSpec.vector(2, 4), seed=rng.randrange(2**32), dim=dim)
        for k in (2, 4):
            tp = T(P, k)
            m = len(P)
            res.cases += 1
            if tp != m ** (2 * k - 1):
                res.fail({"subspace": P.to_json(), "k": k, "T": tp})
            for s in range(1, m + 1):
                for B in combinations(P.elems, s):
                    res.cases += 1
                    if T(GroupSet(P.spec, B), k) * m ** (2 * k) < s ** (2 * k) * tp:
                        res.fail({"subspace": P.to_json(), "B": list(B), "k": k})
    return res


def _strong_implies_weak(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("strong-implies-weak")
    G = GroupSpec.cyclic(12)
    for _ in range(n):
        A = make("random", G, seed=rng.randrange(2**32), size=rng.randint(2, 8))
        for C in (Fraction(1, 2), Fraction(1)):
            res.cases += 1
            rep = check_strong_implies_weak(A, ConnectivityParams(k=2, C=C))
            if not rep.holds:
                res.fail({"set": A.to_json(), "C": str(C)})
    return res


def _partition_properties(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("partition-properties")
    G = GroupSpec.cyclic(64)
    for i in range(n):
        A = make("random", G, seed=rng.randrange(2**32), size=rng.randint(1, 14))
        eps1 = rng.choice((Fraction(1, 4), Fraction(1, 2), Fraction(1)))
        st = partition_min_sigma(A, 2, eps1, seed=i)
        res.cases += 1
        bad = [name for name, c in st.checks.items() if not c.holds]
        if bad:
            res.fail({"set": A.to_json(), "epsilon1": str(eps1), "failed": bad})
    return res


def _konyagin(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("konyagin")
    G = GroupSpec.cyclic(12)
    for _ in range(n):
        A = make("random", G, seed=rng.randrange(2**32), size=rng.randint(1, 8))
        C = rng.choice((Fraction(1, 2), Fraction(1)))
        rep = konyagin_containment(A, 2, C)
        res.cases += 1
        if not rep.consistent:
            res.fail({"set": A.to_json(), "C": str(C)})
    return res


def _pipeline_smoke(rng: random.Random, n: int) -> SuiteResult:
    res = SuiteResult("pipeline-smoke")
    for _ in range(max(1, n // 10)):
        seed = rng.randrange(2**32)
        A = make("random", GroupSpec.cyclic(64), seed=seed, size=rng.randint(2, 10))
        r1 = run_main_pipeline(A, Fraction(1, 4), seed=seed)
        r2 = run_main_pipeline(A, Fraction(1, 4), seed=seed)
        res.cases += 1
        if r1.dumps() != r2.dumps() or not recheck(r1).ok or not r1.ok:
            res.fail({"set": A.to_json()})
    return res


SUITES = {
    "oracle-equivalence": _oracle_equivalence,
    "hoelder": _hoelder,
    "rudin": _rudin,
    "subspace-connectivity": _subspace_connectivity,
    "strong-implies-weak": _strong_implies_weak,
    "partition-properties": _partition_properties,
    "konyagin": _konyagin,
    "pipeline-smoke": _pipeline_smoke,
}


def verify_suite(scope=None, seed: int = 0, cases: int = 100) -> list[SuiteResult]:
    """Run the named suites (all of them when ``scope`` is empty)."""
    names = list(scope) if scope else list(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    return [SUITES[name](random.Random(f"{name}:{seed}"), cases) for name in names]
