from fractions import Fraction

import pytest

from conftest import NAMES, fixture
from oracles import bounded_R, brute_eta, cycles_at, path_eta, raw
from dimerlab.dimer import Path, homology_labels
from dimerlab.impression import Impression, mono_mul
from dimerlab.rings import (CycleOracle, SaturationNotReached, cycle_families, cycle_monomials_at,
                            generators_R, generators_S, in_monoid, in_U, irreducibles, monoid_elements)


def test_conifold_S_is_generated_by_two_cycles(conifold):
    imp = Impression.from_dimer(conifold.dimer)
    gs = generators_S(imp, 12)
    assert gs.saturated
    two_cycles = {imp.eta(Path((a, b))) for a in ("a1", "a2") for b in ("b1", "b2")}
    assert set(gs.generators) == two_cycles
    # sigma together with the two-cycles generates the same monoid
    assert in_monoid(imp.sigma(), gs.generators)
    assert set(irreducibles(list(two_cycles) + [imp.sigma()])) == two_cycles


def test_conifold_R_equals_S_and_oracle(conifold):
    imp = Impression.from_dimer(conifold.dimer)
    gs = generators_S(imp, 12)
    gr = generators_R(imp, 12, s_gens=gs)
    assert gr.generators == gs.generators
    zero = (0,) * imp.nvars
    want = bounded_R(raw("conifold"), brute_eta(raw("conifold")), 6) - {zero}
    got = {m for m in monoid_elements(gr.generators, 6) if any(m)}
    assert got == want


@pytest.mark.parametrize("name", NAMES)
def test_sigma_in_R_and_R_inside_S(name):
    fx = fixture(name)
    oracle = CycleOracle(fx.imp)
    assert oracle.in_R(fx.imp.sigma())
    gs = generators_S(fx.imp, 10)
    gr = generators_R(fx.imp, 10, s_gens=gs, oracle=oracle)
    for g in gr.generators:
        assert in_monoid(g, gs.generators)


@pytest.mark.parametrize("name", ["conifold", "fig_ab_a", "fig_ab_c"])
def test_cycle_monomials_match_enumeration(name):
    fx = fixture(name)
    r = raw(name)
    eta = {a: fx.imp.arrow_monomial[a] for a in fx.dimer.arrow_ids}
    for v in fx.dimer.vertices:
        want = {path_eta(eta, c) for c in cycles_at(r, v, 6)} | {(0,) * fx.imp.nvars}
        assert cycle_monomials_at(fx.imp, v, 6) == want


@pytest.mark.parametrize("name", ["conifold", "fig_ab_a", "fig_ab_b"])
def test_oracle_membership_matches_bounded_enumeration(name):
    fx = fixture(name)
    r = raw(name)
    eta = {a: fx.imp.arrow_monomial[a] for a in fx.dimer.arrow_ids}
    oracle = CycleOracle(fx.imp)
    per = {v: {path_eta(eta, c) for c in cycles_at(r, v, 7)} for v in fx.dimer.vertices}
    for v, ms in per.items():
        for m in ms:
            w = oracle.witness(v, m)
            assert w is not None and fx.dimer.path_ends(w) == (v, v) and fx.imp.eta(w) == m


def target_eta(fx):
    t = fx.contraction.target.to_dict()
    eta = brute_eta(t)
    eta.update({a: (0,) * fx.imp.nvars for a in fx.contraction.contracted})
    return eta


def test_fig_q_ring_membership(figq):
    imp = figq.imp
    gs = generators_S(imp, 16)
    s, p, q = (imp.eta(figq.path(x)) for x in "spq")
    assert s in gs.generators and p in gs.generators and q in gs.generators
    assert p == q
    oracle = CycleOracle(imp)
    assert not oracle.in_R(s)
    assert oracle.missing_vertices(s) == ["bullet"]
    for name in ("p", "q", "qs"):
        assert oracle.in_R(imp.eta(figq.path(name)))
    # brute force: no cycle of length <= 16 at the bullet has the image of s
    eta = target_eta(figq)
    assert s not in {path_eta(eta, c) for c in cycles_at(raw("fig_q"), "bullet", 16)}


def test_fig_q_generators_outside_R(figq):
    imp = figq.imp
    gs = generators_S(imp, 16)
    oracle = CycleOracle(imp)
    outside = [imp.fmt(m) for m in gs.generators if not oracle.in_R(m)]
    assert outside == ["x1^4*x2^4", "x1^2*x2^4*x3^2", "x2^4*x3^4"]


def test_in_U_cases(conifold, figq):
    imp = Impression.from_dimer(conifold.dimer)
    origin = {v: Fraction(0) for v in imp.variables}
    res = in_U(imp, origin, 12)
    assert res.status == "InU" and res.certificates == []

    b = figq.point("example")
    res = in_U(figq.imp, b, 16)
    assert res.status == "InU"
    s, p = figq.imp.eta(figq.path("s")), figq.imp.eta(figq.path("p"))
    cert = {c["generator"]: c for c in res.certificates}[figq.imp.fmt(s)]
    assert cert["multiplier"] == figq.imp.fmt(p)
    assert figq.imp.parse(cert["product"]) == mono_mul(s, p) == figq.imp.eta(figq.path("qs"))

    zero = {v: Fraction(0) for v in figq.imp.variables}
    assert in_U(figq.imp, zero, 16).status == "NotInU"
    generic = {v: Fraction(k + 2) for k, v in enumerate(figq.imp.variables)}
    assert in_U(figq.imp, generic, 16).status == "InU"


def test_certificates_are_exact(figq):
    oracle = CycleOracle(figq.imp)
    res = in_U(figq.imp, figq.point("example"), 16, oracle=oracle)
    for c in res.certificates:
        g, f, prod = (figq.imp.parse(c[k]) for k in ("generator", "multiplier", "product"))
        assert mono_mul(g, f) == prod
        assert oracle.in_R(f) and oracle.in_R(prod) and not oracle.in_R(g)


def test_R_not_finitely_generated_is_reported(ab_a):
    imp = ab_a.imp
    gr = generators_R(imp, 8)
    assert not gr.saturated
    with pytest.raises(SaturationNotReached):
        generators_R(imp, 8, strict=True)


def test_cycle_families_conifold(conifold):
    fams = cycle_families(conifold.dimer, 6)
    classes = {f.hom for f in fams}
    assert (0, 0) not in classes
    hl = homology_labels(conifold.dimer)
    for a in ("a1", "a2"):
        for b in ("b1", "b2"):
            u = hl.hom(Path((a, b)))
            fam = next(f for f in fams if f.hom == u)
            assert Path((a, b)) in fam.cycles["1"]


def test_cycle_families_fig_q(figq):
    d = figq.dimer
    hl = homology_labels(d)
    fams = {f.hom: f for f in cycle_families(d, 10, window=1, rewriter=figq.rewriter)}
    for name in "pqs":
        cyc = figq.path(name)
        u = hl.hom(cyc)
        assert u != (0, 0)
        base = d.path_ends(cyc)[0]
        assert cyc in fams[u].cycles[base]
