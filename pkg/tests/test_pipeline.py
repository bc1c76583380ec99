import json
from fractions import Fraction

import pytest

from addenergy.errors import DomainError
from addenergy.generators import make
from addenergy.groups import GroupSet, GroupSpec
from addenergy.pipeline import derive_params, recheck, run_main_pipeline

F = Fraction


def test_subspace_run():
    S = make("subspace", GroupSpec.vector(2, 3), seed=0, dim=3)
    r = run_main_pipeline(S, F(1, 2))
    d = r.data
    assert r.ok and not d["degenerate"]
    assert len(d["lambda"]) == 3 and d["covered_count"] == 8
    assert d["A_prime"] == S.to_json()["elements"]
    names = [h["name"] for h in d["hypotheses"]]
    assert "T_2(A) >= |A|^3/K" in names
    # sets this small never meet the size hypothesis, so conclusions are observations only
    assert not d["verdicts"]["asserted"]
    assert all(c["status"] == "observed" for c in d["conclusions"])


def test_degenerate_singleton():
    r = run_main_pipeline(GroupSet(GroupSpec.cyclic(9), (0,)))
    assert r.ok and r.data["degenerate"] and r.data["lambda"] == [] and r.data["covered_count"] == 1


def test_determinism_and_recheck():
    A = make("random", GroupSpec.cyclic(64), seed=3, size=9)
    a, b = run_main_pipeline(A, F(1, 4), seed=5), run_main_pipeline(A, F(1, 4), seed=5)
    assert a.dumps() == b.dumps()
    rc = recheck(a.dumps())
    assert rc.ok and rc.checked > 0
    bad = json.loads(a.dumps())
    bad["hypotheses"][1]["lhs"] = bad["hypotheses"][1]["rhs"] + 1
    assert not recheck(bad).ok


def test_recheck_flags_asserted_failures():
    rep = {"x": {"name": "n", "lhs": 1, "relation": ">=", "rhs": 2, "holds": False, "status": "asserted"}}
    res = recheck(rep)
    assert not res.mismatches and res.asserted_failures == ["$.x"] and not res.ok


def test_derive_params():
    p, notes = derive_params(1024, F(1, 2), F(2))
    assert p.beta1 == F(1, 2) and p.beta2 > F(1, 2) and p.C == F(1, 256)
    # floor(log2 ln 1024) + 1 = 3, so k = 8 exactly
    assert p.k == p.k_unclamped == 8 and not notes
    q, notes = derive_params(2**20, F(1, 2), F(2))
    assert q.k_unclamped == 16 and q.k == 8 and any("clamped" in n for n in notes)


def test_bad_inputs():
    with pytest.raises(DomainError):
        run_main_pipeline(GroupSet(GroupSpec.cyclic(9), ()))
    with pytest.raises(DomainError):
        run_main_pipeline(GroupSet(GroupSpec.cyclic(9), (1, 2)), F(0))
