import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pointsets, random_set
from ffembed.audit import (
    TheoremId,
    TheoremReport,
    Verdict,
    audit,
    audit_corpus,
    default_cases,
    eta,
    ip_threshold,
    regime_summary,
    tree_theorem_bound,
)
from ffembed.count import count_all
from ffembed.errors import BadParams, Disconnected, MissingParam, NotATree
from ffembed.graphdef import DistanceGraph, chain, simplex, single_edge, star
from ffembed.space import PointSet, Space, isotropic_line
from ffembed.gf import field_new

F32 = PointSet.full(Space.of(3, 2))
KEY_ORDER = ["id", "sub_id", "params", "instance", "hypothesis_met", "relation", "lhs", "rhs", "rhs_approx",
             "verdict", "claims", "witness", "notes"]


def frac_pair(report):
    lo, hi = (Fraction(s) for s in report.to_json()["rhs"])
    return lo, hi


@pytest.mark.parametrize("m,ell,expected", [(2, 2, 13), (2, 3, 44), (2, 1, -4), (3, 1, -5), (4, 2, 9 * 5 - 12)])
def test_eta(m, ell, expected):
    assert eta(m, ell) == expected


def test_ir_pair_count_f3():
    r = audit(TheoremId.IR_PAIR_COUNT, F32, {"t": 1})
    assert r.verdict is Verdict.HOLDS and r.hypothesis_met
    assert r.lhs == 9
    lo, hi = frac_pair(r)
    assert Fraction(3117, 100) < lo <= hi < Fraction(3118, 100)
    assert lo * lo <= 4 * 81 * 3 <= hi * hi


def test_report_schema():
    r = audit("IR_PAIR_COUNT", F32)
    doc = json.loads(r.to_line())
    assert list(doc) == KEY_ORDER
    assert isinstance(r, TheoremReport)
    assert doc["instance"]["q"] == 3 and doc["instance"]["size"] == 9


@pytest.mark.parametrize("tid", list(TheoremId))
def test_verdict_vacuous_iff_hypothesis_fails(tid):
    cases = [p for t, p in default_cases(3, 2) if t is tid]
    for params in cases:
        r = audit(tid, F32, params)
        assert (r.verdict is Verdict.VACUOUS) == (not r.hypothesis_met)
        assert r.verdict is not Verdict.VIOLATED


def test_every_theorem_has_a_default_case():
    assert {t for t, _ in default_cases(5, 2)} == set(TheoremId)


def test_schain_total_vacuous_at_q3():
    r = audit(TheoremId.SCHAIN_TOTAL, F32, {"k": 2, "m": 2})
    assert r.verdict is Verdict.VACUOUS
    assert "threshold_exceeds_space" in r.notes
    thr = [Fraction(s) for s in r.params["threshold"]]
    assert thr[0] > 9  # 48 * 9 * 3^(5/2)
    assert thr[0] <= 432 * 3**2 * Fraction(1732051, 10**6) <= thr[1] + 1


def test_tree_theorem_bound():
    E = PointSet.full(Space.of(7, 2))
    r = tree_theorem_bound(star(2), E, Fraction(1, 10))
    assert r.hypothesis_met and r.verdict is Verdict.HOLDS
    assert r.lhs == count_all(star(2), E).total
    vac = tree_theorem_bound(star(2), E, 2)
    assert vac.verdict is Verdict.VACUOUS
    edge = tree_theorem_bound(single_edge(), E, Fraction(1, 10))
    assert edge.lhs == 49 * 8
    with pytest.raises(NotATree):
        tree_theorem_bound(simplex(2), E, Fraction(1, 10))


def test_ip_threshold():
    assert ip_threshold(star(6), 9, 3).rational == 12 * 49 * 9**7
    assert ip_threshold(chain(3), 9, 3).rational == 12 * 16 * 9**3
    assert ip_threshold(simplex(3), 5, 3).rational == 12 * 16 * 5**4
    with pytest.raises(Disconnected):
        ip_threshold(DistanceGraph(4, ((0, 1, 1), (2, 3, 1)), allow_disconnected=True), 5, 2)


def test_regime_summary():
    r = regime_summary(4, 10, 2, 101)
    assert r.regime == "k<(d+1)/2" and r.exponent == Fraction(11, 2)
    r = regime_summary(5, 6, 2, 101)
    assert r.regime == "k>=d-1"
    r = regime_summary(4, 7, 2, 101)
    assert r.regime == "(d+1)/2<=k<=d-2" and r.exponent == 4
    assert regime_summary(4, 2, 3, 101).exceptional
    assert regime_summary(3, 5, 2, 101).exceptional
    assert not regime_summary(6, 2, 3, 101).exceptional
    with pytest.raises(BadParams):
        regime_summary(2, 2, 2, 101)


def test_missing_param():
    with pytest.raises(MissingParam):
        audit(TheoremId.HOLDER_LEMMA, F32, {"S": [1], "k": 2})


def test_holder_lemma_variants():
    r = audit(TheoremId.HOLDER_LEMMA, F32, {"base": "chain:2", "S": [1], "k": 2})
    assert r.verdict is Verdict.HOLDS
    assert r.lhs == 324
    assert Fraction(r.to_json()["rhs"][0]) == 256
    names = {c.name for c in r.claims}
    assert {"proof_exponent", "printed_exponent"} <= names


def test_isotropic_line_reports():
    L = isotropic_line(field_new(13))
    r = audit(TheoremId.IR_PAIR_COUNT, L, {"t": 1})
    assert r.verdict is Verdict.HOLDS and r.lhs == Fraction(169, 13)


def test_witness_is_first_embedding():
    # 8 q^(-2 eps / 2) < 1 needs q^eps > 8, so q = 101 with eps just under 1/2
    E = PointSet.full(Space.of(101, 2))
    r = audit(TheoremId.TREE_EMBED, E, {"graph": "edge", "epsilon": Fraction(49, 100)})
    assert r.verdict is Verdict.HOLDS
    assert r.witness == [["0", "0"], ["0", "1"]]
    small = audit(TheoremId.TREE_EMBED, PointSet.full(Space.of(13, 2)), {"graph": "edge", "epsilon": Fraction(1, 10)})
    assert small.verdict is Verdict.HOLDS and small.witness is None


def test_corpus_has_no_violations_at_q3():
    reports = audit_corpus([("full", F32), ("half", random_set(F32.space, random.Random(0), 0.5))])
    assert len(reports) == 2 * len(default_cases(3, 2))
    assert not any(r.verdict is Verdict.VIOLATED for r in reports)
    assert any(r.verdict is Verdict.VACUOUS and "threshold_exceeds_space" in r.notes for r in reports)


def test_audit_is_deterministic():
    E = random_set(Space.of(5, 2), random.Random(3))
    a = [audit(t, E, p).to_line() for t, p in default_cases(5, 2)]
    b = [audit(t, E, p).to_line() for t, p in default_cases(5, 2)]
    assert a == b


@settings(max_examples=40, deadline=None)
@given(pointsets(qs=(3, 5, 7, 9), ds=(2, 3)), st.data())
def test_unconditional_audits_hold(E, data):
    t = data.draw(st.integers(1, E.space.q - 1))
    assert audit(TheoremId.IR_PAIR_COUNT, E, {"t": t}).verdict is Verdict.HOLDS
    if E.space.q <= 5 and E.space.d == 2:
        k = data.draw(st.integers(1, 3))
        base = data.draw(st.sampled_from(["chain:2", "star:2", "simplex:2"]))
        r = audit(TheoremId.HOLDER_LEMMA, E, {"base": base, "S": [1], "k": k, "t": t})
        assert r.verdict is Verdict.HOLDS
        r = audit(TheoremId.HOLDER_COR, E, {"base": base, "S": [1], "k": k, "t": t})
        assert r.verdict is Verdict.HOLDS
