"""Structural statements about cycle families, checked exactly.

The statements need a consistent dimer, so they are asserted on the conifold
and on Q; the three non-cancellative "ab" examples are shown to break them.
"""

import pytest

from conftest import fixture
from oracles import cycles_at, raw
from dimerlab.dimer import Path, homology_labels
from dimerlab.impression import Impression, divides
from dimerlab.matchings import dagger_arrows
from dimerlab.rewrite import cancellativity_check
from dimerlab.rings import CycleOracle, cycle_families, generators_R, is_family_cycle

CONSISTENT = {"conifold": (6, 12), "fig_q": (10, 16)}


def own(name):
    fx = fixture(name)
    return fx, Impression.from_dimer(fx.dimer, fx.catalog)


def covering_families(name):
    fx = fixture(name)
    fams = cycle_families(fx.dimer, CONSISTENT.get(name, (6,))[0], rewriter=fx.rewriter)
    return [f for f in fams if f.covers(fx.dimer.vertices)]


@pytest.mark.parametrize("name", CONSISTENT)
def test_covering_family_avoided_by_a_simple_matching(name):
    fx, _ = own(name)
    fams = covering_families(name)
    assert len(fams) >= 4
    simple = fx.catalog.simple_matchings
    for f in fams:
        assert any(not (D.arrows & f.arrows) for D in simple), f.hom
        # every arrow outside the family lies in some simple matching
        for a in set(fx.dimer.arrow_ids) - f.arrows:
            assert any(a in D.arrows for D in simple), (f.hom, a)


@pytest.mark.parametrize("name", CONSISTENT)
def test_covering_family_has_one_image(name):
    _, imp = own(name)
    for f in covering_families(name):
        assert len({imp.eta(c) for c in f.all_cycles()}) == 1, f.hom


@pytest.mark.parametrize("name", CONSISTENT)
def test_sigma_never_divides_family_images(name):
    _, imp = own(name)
    sigma = imp.sigma()
    for f in covering_families(name):
        for c in f.all_cycles():
            assert not divides(sigma, imp.eta(c)), (f.hom, c.arrows)


@pytest.mark.parametrize("name", CONSISTENT)
def test_generators_of_R_come_from_one_family(name):
    """Each generator of R not divisible by sigma is the image of a family
    cycle at every vertex, all in one class."""
    fx, imp = own(name)
    oracle = CycleOracle(imp)
    hl = homology_labels(fx.dimer)
    gens = generators_R(imp, CONSISTENT[name][1], oracle=oracle).generators
    checked = 0
    for g in gens:
        if divides(imp.sigma(), g):
            continue
        ws = [oracle.witness(v, g) for v in fx.dimer.vertices]
        assert all(w is not None and imp.eta(w) == g for w in ws)
        assert len({hl.hom(w) for w in ws}) == 1
        assert all(is_family_cycle(fx.dimer, w, fx.rewriter) for w in ws)
        checked += 1
    assert checked >= 4


def test_family_membership_matches_enumeration(conifold):
    fams = cycle_families(conifold.dimer, 6, rewriter=conifold.rewriter)
    listed = {c.arrows for f in fams for c in f.all_cycles()}
    hl = homology_labels(conifold.dimer)
    for v in conifold.dimer.vertices:
        for p in cycles_at(raw("conifold"), v, 6):
            if max(map(abs, hl.hom(Path(p)))) > 1:
                continue
            assert is_family_cycle(conifold.dimer, Path(p), conifold.rewriter) == (p in listed)


@pytest.mark.parametrize("name", ["fig_ab_a", "fig_ab_b", "fig_ab_c", "fig_q"])
def test_contracted_arrows_lie_in_dagger(name):
    fx = fixture(name)
    assert set(fx.contraction.contracted) <= dagger_arrows(fx.dimer, fx.catalog)


@pytest.mark.parametrize("name", ["fig_ab_a", "fig_ab_b", "fig_ab_c"])
def test_non_cancellative_examples_break_the_family_statements(name):
    fx, imp = own(name)
    assert not cancellativity_check(fx.dimer, 6).cancellative
    fams = covering_families(name)
    bad = [f for f in fams
           if len({imp.eta(c) for c in f.all_cycles()}) > 1
           and not any(not (D.arrows & f.arrows) for D in fx.catalog.simple_matchings)]
    assert bad
