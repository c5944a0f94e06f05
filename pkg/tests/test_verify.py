from fractions import Fraction

import pytest

from hermden import density as D
from hermden import verify as V
from hermden.hermlattice import a_max, lattice_from_gram
from hermden.localfield import FieldData


def ctx(case, n=2):
    return D.DenContext(FieldData.make(case, 3), n)


def lat(c, gram):
    return lattice_from_gram(c.fd, gram)


def test_induction_examples():
    c = ctx("inert")
    L = lat(c, [[3]])
    rep = V.verify_induction(c, L, range(2, 9))
    assert rep.status == "pass" and rep.observed_threshold - 1 <= a_max(L) + 1
    s = ctx("split")
    assert V.verify_induction(s, lat(s, [[3]]), range(0, 6)).status == "pass"
    assert V.verify_induction(c, lat(c, [[Fraction(1, 3)]]), range(0, 4)).status == "pass"


def test_weak_induction_examples():
    r = ctx("ramified")
    assert V.verify_weak_induction(r, lat(r, [[1]]), range(0, 5)).status == "pass"
    c = ctx("inert")
    assert V.verify_weak_induction(c, lat(c, [[1]]), range(0, 4)).status == "pass"
    s = ctx("split")
    assert V.verify_weak_induction(s, lat(s, [[1]]), range(0, 4)).status == "pass"


def test_fe_examples():
    c1 = ctx("inert", 1)
    assert V.verify_fe(c1, lat(c1, [[27]])).status == "pass"
    s1 = ctx("split", 1)
    assert V.verify_fe(s1, lat(s1, [[9]])).status == "pass"
    c2 = ctx("inert")
    rep = V.verify_fe(c2, lat(c2, [[1, 0], [0, 9]]))
    assert rep.status == "skipped"


def test_limit_examples():
    s = ctx("split")
    reps = V.verify_limits(s, lat(s, [[3]]), range(0, 6))
    assert reps and all(r.status == "pass" for r in reps)
    c = ctx("inert")
    reps = V.verify_limits(c, lat(c, [[3]]), range(0, 6))
    assert all(r.status == "pass" for r in reps)
    reps = V.verify_limits(c, lat(c, [[Fraction(1, 3)]]), range(0, 4))
    assert all(r.status == "pass" for r in reps)


def test_thresholds_respected_on_smoke_grid():
    res = V.run_suite(None, "theorem-smoke", {"cases": ["inert", "split"], "extra": 2})
    for r in res.reports:
        assert r.status != "fail", r.record()
        if r.observed_threshold is not None and r.stated_threshold is not None:
            assert r.observed_threshold - 1 <= r.stated_threshold


def test_suite_plumbing():
    assert V.run_suite(None, "theorem-smoke", {"grid": []}).reports == []
    with pytest.raises(ValueError):
        V.run_suite(None, "no-such-suite")
    tiny = D.DenContext(FieldData.make("inert", 3), 2, cap=1)
    res = V.run_suite(tiny, "theorem-smoke", {"cases": ["inert"], "grid": [[[9]]]})
    skipped = [r for r in res.reports if r.status == "skipped"]
    assert skipped and all("resource cap" in r.reason for r in skipped)


def test_lattice_lemmas_small_run():
    for case in ("inert", "ramified", "split"):
        reps = V.verify_lattice_lemmas(ctx(case), V.FuzzConfig(instances=30, seed=1))
        assert all(r.status != "fail" for r in reps), [r.record() for r in reps]


def test_stabilization_small_run():
    for case in ("inert", "split"):
        reps = V.verify_stabilization(ctx(case), V.FuzzConfig(instances=5, seed=2, max_val=1))
        assert all(r.status != "fail" for r in reps), [r.record() for r in reps]


def test_reports_are_deterministic():
    a = [r.record() for r in V.verify_lattice_lemmas(ctx("split"), V.FuzzConfig(instances=20, seed=7))]
    b = [r.record() for r in V.verify_lattice_lemmas(ctx("split"), V.FuzzConfig(instances=20, seed=7))]
    assert a == b


def test_arbitration_selects_defaults():
    reps = V.arbitrate_ramified(3, seed=0, instances=20)
    assert {r.identity_id: r.status for r in reps} == {
        "arbitration-convention": "pass",
        "arbitration-eta": "pass",
        "arbitration-val2": "pass",
    }
