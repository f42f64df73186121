"""Bundled example dimers with expected-result manifests.

Each manifest lists checks; every check carries a ``basis`` saying where its
expected value comes from: ``worked-example`` (a published worked example),
``derived`` (computed independently by hand or by a separate oracle) or
``trivial`` (immediate from a definition).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from typing import Callable

from .contraction import Contraction, check_relations_preserved, check_S_equals_Sprime, contract
from .dimer import DimerQuiver, Path, homology_labels, validate
from .impression import Impression, parse_point
from .matchings import MatchingCatalog, dagger_arrows, enumerate_matchings
from .pi_check import FreenessWitness, find_witness, inout_hypothesis, verify_freeness
from .reps import azumaya_A, cycle_rep, is_simple, transfer_back, transfer_forward, isomorphic
from .rewrite import Rewriter, cancellativity_check, noncancellative_pairs
from .rings import CycleOracle, generators_R, generators_S, in_U

PACKAGE = "dimerlab.data"


def _read(name: str) -> str:
    return resources.files(PACKAGE).joinpath(name).read_text()


def fixture_names() -> list[str]:
    names = [p.name[:-len(".manifest.json")] for p in resources.files(PACKAGE).iterdir()
             if p.name.endswith(".manifest.json")]
    return sorted(names)


def fixture_path(filename: str):
    return resources.files(PACKAGE).joinpath(filename)


@dataclass
class Fixture:
    name: str
    manifest: dict

    @classmethod
    def load(cls, name: str) -> "Fixture":
        if name not in fixture_names():
            raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
        return cls(name, json.loads(_read(f"{name}.manifest.json")))

    @cached_property
    def dimer(self) -> DimerQuiver:
        return validate(json.loads(_read(self.manifest["dimer"])))

    @cached_property
    def catalog(self) -> MatchingCatalog:
        return enumerate_matchings(self.dimer)

    @cached_property
    def contraction(self) -> Contraction:
        return contract(self.dimer, self.manifest.get("stars", []))

    @cached_property
    def target_imp(self) -> Impression:
        return Impression.from_dimer(self.contraction.target)

    @cached_property
    def imp(self) -> Impression:
        """Impression of the source through the contraction (its own one if none)."""
        return self.contraction.impression(self.target_imp)

    @cached_property
    def rewriter(self) -> Rewriter:
        return Rewriter(self.dimer)

    @cached_property
    def oracle(self) -> CycleOracle:
        return CycleOracle(self.imp)

    def path(self, spec) -> Path:
        if isinstance(spec, str):
            return Path(tuple(self.manifest["paths"][spec]))
        return Path(tuple(spec))

    def point(self, spec) -> dict[str, Fraction]:
        if isinstance(spec, str):
            spec = self.manifest["points"][spec]
        if isinstance(spec, dict) and "zero_unless_divides" in spec:
            m = self.imp.eta(self.path(spec["zero_unless_divides"]))
            return {v: Fraction(1 if e else 0) for v, e in zip(self.imp.variables, m)}
        return parse_point(spec, self.imp.variables)


@dataclass
class CheckResult:
    check: str
    basis: str
    passed: bool
    detail: str
    seconds: float = 0.0


CHECKS: dict[str, Callable[[Fixture, dict], tuple[bool, str]]] = {}


def check(name: str):
    def deco(fn):
        CHECKS[name] = fn
        return fn
    return deco


@check("valid")
def _valid(fx, c):
    return bool(fx.dimer.vertices), f"{len(fx.dimer.vertices)} vertices, {len(fx.dimer.arrows)} arrows"


@check("matchings")
def _matchings(fx, c):
    total, simple = len(fx.catalog.matchings), len(fx.catalog.simple_matchings)
    ok = total == c["total"] and simple == c["simple"]
    return ok, f"{total} perfect, {simple} simple"


@check("dagger")
def _dagger(fx, c):
    got = sorted(dagger_arrows(fx.dimer, fx.catalog))
    if "equals" in c:
        return got == sorted(c["equals"]), f"dagger arrows {got}"
    return set(c["contains"]) <= set(got), f"dagger arrows {got}"


@check("faces_map_to_sigma")
def _faces_sigma(fx, c):
    imp = Impression.from_dimer(fx.dimer, fx.catalog)
    sigma = imp.sigma()
    return sigma == (1,) * imp.nvars, f"unit cycle image {imp.fmt(sigma)}"


@check("face_homology_zero")
def _face_hom(fx, c):
    hl = homology_labels(fx.dimer)
    return all(hl.hom(Path(f.arrows)) == (0, 0) for f in fx.dimer.faces), "faces have class (0,0)"


@check("cancellative")
def _canc(fx, c):
    rep = cancellativity_check(fx.dimer, c["budget"])
    detail = "no counterexample" if rep.cancellative else f"counterexample {rep.counterexample.to_dict()}"
    return rep.cancellative == c["expect"], detail


@check("noncancellative_pair")
def _pair(fx, c):
    p, q = fx.path(c["p"]), fx.path(c["q"])
    pairs = noncancellative_pairs(fx.dimer, c["budget"], rewriter=fx.rewriter)
    hit = [x for x in pairs if {x.p.arrows, x.q.arrows} == {p.arrows, q.arrows}]
    return bool(hit), (f"found with arrow {hit[0].arrow} ({hit[0].side})" if hit
                       else f"{len(pairs)} pairs, target pair absent")


@check("inequivalent")
def _ineq(fx, c):
    res = fx.rewriter.equivalent(fx.path(c["p"]), fx.path(c["q"]), c["budget"])
    return res.status != "equivalent", res.status


@check("R_equals_S")
def _r_eq_s(fx, c):
    imp = Impression.from_dimer(fx.dimer, fx.catalog)
    gs = generators_S(imp, c["budget"])
    gr = generators_R(imp, c["budget"], s_gens=gs)
    return gs.generators == gr.generators, f"S {[imp.fmt(m) for m in gs.generators]}"


@check("S_equals_Sprime")
def _s_eq(fx, c):
    res = check_S_equals_Sprime(fx.contraction, c["budget"], fx.target_imp)
    return res.status == c.get("expect", "EqualUpTo"), res.status


@check("relations_preserved")
def _rel(fx, c):
    bad = check_relations_preserved(fx.contraction, c["budget"])
    return not bad, "all relations map to equivalences" if not bad else f"failing arrows {bad}"


@check("target_cancellative")
def _tcanc(fx, c):
    rep = cancellativity_check(fx.contraction.target, c["budget"])
    return rep.cancellative, "target cancellative up to budget" if rep.cancellative else "target not cancellative"


@check("contracted_in_dagger")
def _star_dagger(fx, c):
    dag = dagger_arrows(fx.dimer, fx.catalog)
    return set(fx.contraction.contracted) <= dag, f"contracted {list(fx.contraction.contracted)}"


@check("S_generator")
def _s_gen(fx, c):
    gs = generators_S(fx.imp, c["budget"])
    m = fx.imp.eta(fx.path(c["path"]))
    return (m in gs.generators) == c.get("expect", True), f"{fx.imp.fmt(m)} generator: {m in gs.generators}"


@check("in_R")
def _in_r(fx, c):
    m = fx.imp.eta(fx.path(c["path"]))
    got = fx.oracle.in_R(m)
    return got == c["expect"], f"{fx.imp.fmt(m)} in R: {got}"


@check("in_U")
def _in_u(fx, c):
    b = fx.point(c["point"])
    res = in_U(fx.imp, b, c["budget"], oracle=fx.oracle)
    ok = res.status == c["expect"]
    if ok and "certificate" in c:
        cert = c["certificate"]
        s = fx.imp.eta(fx.path(cert["generator"]))
        f = fx.imp.eta(fx.path(cert["multiplier"]))
        prod = fx.imp.eta(fx.path(cert["product"]))
        listed = {(x["generator"], x["multiplier"]) for x in res.certificates}
        ok = (fx.imp.fmt(s), fx.imp.fmt(f)) in listed and tuple(a + b for a, b in zip(s, f)) == prod
    return ok, res.status


@check("azumaya")
def _azumaya(fx, c):
    b = fx.point(c["point"])
    v = azumaya_A(fx.imp, fx.target_imp, b, c["budget"])
    ok = v.status == c["expect"] and ("in_Aprime" not in c or v.in_Aprime == c["in_Aprime"])
    ok = ok and ("in_U" not in c or v.locus.status == c["in_U"])
    return ok, f"{v.status} (in A': {v.in_Aprime}, U: {v.locus.status})"


@check("cycle_modules")
def _cycle_modules(fx, c):
    p = fx.path(c["path"])
    rho = cycle_rep(fx.dimer, p)
    rho_t = cycle_rep(fx.contraction.target, fx.contraction.psi(p))
    back = transfer_back(fx.contraction, rho_t)
    ok = is_simple(rho) and is_simple(rho_t) and isomorphic(back, rho)
    ok = ok and isomorphic(transfer_forward(fx.contraction, rho), rho_t)
    full = all(rho_t.dims.values())
    return ok and full == c.get("target_full_support", full), \
        f"simple {is_simple(rho)}/{is_simple(rho_t)}, target support full: {full}"


@check("inout")
def _inout(fx, c):
    got = inout_hypothesis(fx.contraction)
    return got == c["expect"], str(got)


@check("witness")
def _witness(fx, c):
    ws = find_witness(fx.contraction, c["budget"], c.get("word_length", 2), imp=fx.imp, rewriter=fx.rewriter)
    if c.get("expect") is None:
        return not ws.found, "none found" if not ws.found else f"found {ws.witness.to_json()}"
    if not ws.found:
        return False, "none found"
    got = {ws.witness.w1.arrows, ws.witness.w2.arrows}
    want = {tuple(fx.path(x).arrows) for x in c["expect"]}
    return got == want, f"witness {[list(x) for x in sorted(got)]}"


@check("freeness")
def _freeness(fx, c):
    w1, w2 = fx.path(c["w1"]), fx.path(c["w2"])
    base = fx.dimer.path_ends(w1)[0]
    wit = FreenessWitness(w1, w2, w1, w2, Path((), base), base, "given")
    res = verify_freeness(fx.dimer, wit, c["word_length"], fx.rewriter)
    return res.status == c["expect"], res.status


def run_fixture(name: str) -> list[CheckResult]:
    fx = Fixture.load(name)
    out = []
    for c in fx.manifest["checks"]:
        t = time.perf_counter()
        try:
            ok, detail = CHECKS[c["check"]](fx, c)
        except Exception as exc:  # report, never abort the run
            ok, detail = False, f"error: {type(exc).__name__}: {exc}"
        out.append(CheckResult(c["check"], c.get("basis", "derived"), ok, detail, time.perf_counter() - t))
    return out
