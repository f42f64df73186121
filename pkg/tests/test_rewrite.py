from collections import defaultdict

import pytest
from hypothesis import given, settings, strategies as st

from conftest import NAMES, fixture
from oracles import all_paths, brute_class, raw
from strategies import walks
from dimerlab.dimer import Path
from dimerlab.impression import Impression
from dimerlab.rewrite import (PathSpace, Rewriter, cancellativity_check, default_budget, equivalent,
                              noncancellative_pairs, rewrite_rules)


def P(*arrows):
    return Path(tuple(arrows))


def test_rules_are_face_complements(conifold):
    rules = {r.arrow: r for r in rewrite_rules(conifold.dimer)}
    assert rules["a1"].plus == ("b1", "a2", "b2")
    assert rules["a1"].minus == ("b2", "a2", "b1")
    for r in rules.values():
        faces = {tuple(f.arrows) for f in conifold.dimer.faces}
        rotations = {f[k:] + f[:k] for f in faces for k in range(len(f))}
        assert (r.arrow,) + r.plus in rotations
        assert (r.arrow,) + r.minus in rotations


def test_conifold_example_pair(conifold):
    res = equivalent(conifold.dimer, P("b1", "a1", "b2"), P("b2", "a1", "b1"), 6)
    assert res.equivalent
    # the two sides are the complements of a2 in the two faces
    assert [s.rule for s in res.certificate] == ["a2"]
    rw = Rewriter(conifold.dimer)
    assert rw.apply(("b1", "a1", "b2"), res.certificate) == ("b2", "a1", "b1")
    # the brute-force closure agrees
    assert ("b2", "a1", "b1") in brute_class(raw("conifold"), ("b1", "a1", "b2"), 6)


def test_path_equivalent_to_itself(ab_b):
    res = Rewriter(ab_b.dimer).equivalent(P("a", "b"), P("a", "b"), 4)
    assert res.equivalent and res.certificate == []


def test_definite_mismatches(conifold):
    rw = Rewriter(conifold.dimer)
    assert rw.equivalent(P("a1"), P("b1")).status == "endpoint_mismatch"
    assert rw.equivalent(P("a1", "b1"), P("a1", "b2")).status == "homology_mismatch"
    assert rw.equivalent(P("a1", "b1"), P("a1", "b1", "a2", "b2", "a1", "b1")).status in (
        "homology_mismatch", "length_mismatch")
    assert not rw.equivalent(P("a1"), P("b1")).bounded


def test_ab_a_complements_inequivalent_but_equal_after_a(ab_a):
    rw = Rewriter(ab_a.dimer)
    res = rw.equivalent(P("y", "z"), P("z", "y"), 12)
    assert res.status == "inequivalent" and res.bounded
    assert rw.equivalent(P("y", "z", "a"), P("z", "y", "a"), 12).equivalent
    # brute force: no route inside length 12
    assert ("z", "y") not in brute_class(raw("fig_ab_a"), ("y", "z"), 12)


def test_ab_c_pair(ab_c):
    rw = Rewriter(ab_c.dimer)
    p, q = P("c", "b", "b", "a", "g"), P("f", "b", "b", "d", "g")
    assert rw.equivalent(p, q, 12).status == "inequivalent"
    assert rw.equivalent(p + P("c"), q + P("c"), 12).equivalent
    assert ("f", "b", "b", "d", "g") not in brute_class(raw("fig_ab_c"), p.arrows, 12)


def test_cancellativity_verdicts(conifold, ab_a, ab_c):
    assert cancellativity_check(conifold.dimer, 8).cancellative
    rep = cancellativity_check(ab_a.dimer, 8)
    assert not rep.cancellative
    ce = rep.counterexample
    # the counterexample is certified: p.a and q.a are equivalent
    rw = Rewriter(ab_a.dimer)
    ext = (lambda x: x + P(ce.arrow)) if ce.side == "post" else (lambda x: P(ce.arrow) + x)
    assert rw.apply(ext(ce.p).arrows, ce.certificate) == ext(ce.q).arrows
    assert not rw.equivalent(ce.p, ce.q, 12).equivalent
    pairs = noncancellative_pairs(ab_c.dimer, 8)
    assert any({x.p.arrows, x.q.arrows} == {("c", "b", "b", "a", "g"), ("f", "b", "b", "d", "g")}
               for x in pairs)


def test_counterexamples_touch_contracted_region(ab_a):
    ce = cancellativity_check(ab_a.dimer, 8).counterexample
    amap = ab_a.dimer.arrow_map
    assert ce.arrow in ("a", "b") or "2" in {amap[x].tail for x in ce.p.arrows + ce.q.arrows}


def test_conifold_eta_injective_on_paths(conifold):
    """Cancellative: equal endpoints and equal image force equivalence."""
    imp = Impression.from_dimer(conifold.dimer)
    rw = Rewriter(conifold.dimer)
    groups = defaultdict(list)
    for p, t, h in all_paths(raw("conifold"), 6):
        groups[(t, h, imp.eta(Path(p)))].append(p)
    checked = 0
    for members in groups.values():
        closure = rw.closure(members[0], 6)
        for p in members:
            assert p in closure
            checked += 1
    assert checked > 100


@pytest.mark.parametrize("name", ["conifold", "fig_ab_a", "fig_ab_c"])
def test_closure_matches_brute_force(name):
    r = raw(name)
    rw = Rewriter(fixture(name).dimer)
    for p, _, _ in all_paths(r, 5):
        assert rw.closure(p, 7) == brute_class(r, p, 7)


def test_path_space_classes(conifold):
    space = PathSpace(conifold.dimer, 4)
    assert space.class_of(P("b1", "a1", "b2")) == space.class_of(P("b2", "a1", "b1"))
    assert space.class_of(P("a1")) != space.class_of(P("a2"))


def test_default_budget_env(conifold, monkeypatch):
    assert default_budget(conifold.dimer) == 12
    monkeypatch.setenv("DIMERLAB_BUDGET", "7")
    assert default_budget(conifold.dimer) == 7


@given(st.data())
def test_rewriting_preserves_ends_class_and_image(data):
    fx = fixture(data.draw(st.sampled_from(NAMES)))
    d, imp = fx.dimer, fx.imp
    rw = fx.rewriter
    p = data.draw(walks(d, min_len=1, max_len=8))
    for q, step in rw.neighbours(p.arrows):
        q = Path(q)
        assert d.path_ends(q) == d.path_ends(p)
        assert rw.hom.hom(q) == rw.hom.hom(p)
        assert imp.eta(q) == imp.eta(p)
        assert rw.apply(p.arrows, [step]) == q.arrows


@settings(max_examples=60)
@given(st.data())
def test_equivalence_symmetric_and_transitive(data):
    fx = fixture(data.draw(st.sampled_from(["conifold", "fig_ab_a", "fig_ab_c"])))
    rw = fx.rewriter
    p = data.draw(walks(fx.dimer, min_len=1, max_len=5))
    members = sorted(rw.closure(p.arrows, 6))
    q = Path(data.draw(st.sampled_from(members)))
    r = Path(data.draw(st.sampled_from(members)))
    L = 6
    pq, qp = rw.equivalent(p, q, L), rw.equivalent(q, p, L)
    assert pq.equivalent and qp.equivalent
    if rw.equivalent(q, r, L).equivalent:
        assert rw.equivalent(p, r, 2 * L).equivalent
