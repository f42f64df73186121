"""``dimerlab`` command line.

Exit codes: 0 on success, 1 when the mathematics answers no (or cannot
decide), 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .contraction import ContractionError, check_relations_preserved, check_S_equals_Sprime, contract
from .dimer import DimerError, homology_labels, validate
from .fixtures import Fixture, fixture_names, run_fixture
from .impression import Impression, parse_point
from .matchings import dagger_arrows, enumerate_matchings
from .pi_check import find_witness, inout_hypothesis, verify_freeness
from .render import load_styles, render
from .reps import azumaya_A, is_simple, rep_from_point
from .rewrite import Rewriter, cancellativity_check, default_budget
from .rings import CycleOracle, generators_R, generators_S, in_U


class InputError(Exception):
    pass


class Context:
    """The dimer, contraction and point selected by the common flags."""

    def __init__(self, args):
        self.args = args
        self.fixture = None
        src = args.dimer_opt or args.dimer
        if src is None:
            raise InputError("no dimer given (positional argument or --dimer)")
        self.dimer = self._load(src, primary=True)
        stars = getattr(args, "stars", None)
        if stars is None:
            stars = self.fixture.manifest.get("stars", []) if self.fixture else []
        else:
            stars = [s for s in stars.split(",") if s]
        big = getattr(args, "contract_from", None)
        if big:
            # the positional dimer is the target; the contraction starts from ``big``
            target = self.dimer
            self.dimer = self._load(big)
            self.contraction = contract(self.dimer, stars)
            if not _same_quiver(self.contraction.target, target):
                raise InputError(f"contracting {','.join(stars) or 'nothing'} in {big} does not give {src}")
        else:
            self.contraction = contract(self.dimer, stars)
        self.target_imp = Impression.from_dimer(self.contraction.target)
        self.imp = self.contraction.impression(self.target_imp)

    def _load(self, src: str, primary: bool = False):
        if os.path.exists(src):
            try:
                with open(src) as fh:
                    raw = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot read {src}: {exc}") from None
            return validate(raw)
        if src in fixture_names():
            fx = Fixture.load(src)
            if primary:
                self.fixture = fx
            return fx.dimer
        raise InputError(f"{src}: no such file or bundled fixture")

    def budget(self, d=None) -> int:
        if self.args.budget is not None:
            return self.args.budget
        return default_budget(d or self.dimer)

    def point(self) -> dict[str, Fraction]:
        spec = self.args.point
        if spec is None:
            raise InputError("--point is required")
        names = self.imp.variables
        if self.fixture and spec in self.fixture.manifest.get("points", {}):
            return self.fixture.point(spec)
        try:
            if os.path.exists(spec):
                with open(spec) as fh:
                    raw = json.load(fh)
            else:
                raw = json.loads(spec)
            if isinstance(raw, list):
                raw = dict(zip(names, raw))
            return parse_point(raw, names)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"bad point {spec!r}: {exc}") from None


def _same_quiver(d1, d2) -> bool:
    def key(d):
        arrows = {(a.id, a.tail, a.head) for a in d.arrows}
        faces = set()
        for f in d.faces:
            k = min(range(len(f.arrows)), key=lambda i: f.arrows[i:] + f.arrows[:i])
            faces.add((f.arrows[k:] + f.arrows[:k], f.sign))
        return set(d.vertices), arrows, faces
    return key(d1) == key(d2)


# -- commands -----------------------------------------------------------------

def cmd_validate(ctx: Context):
    d = ctx.dimer
    hl = homology_labels(d)
    rep = {"valid": True, "vertices": len(d.vertices), "arrows": len(d.arrows), "faces": len(d.faces),
           "warnings": list(d.warnings), "homology": {k: list(v) for k, v in hl.labels.items()}}
    code = 0
    if ctx.args.cancellative:
        cr = cancellativity_check(d, ctx.budget())
        rep["cancellative"] = {"status": "CancellativeUpTo" if cr.cancellative else "Counterexample",
                               "budget": cr.budget}
        if not cr.cancellative:
            rep["cancellative"]["counterexample"] = cr.counterexample.to_dict()
            code = 1
    text = [f"valid dimer: {rep['vertices']} vertices, {rep['arrows']} arrows, {rep['faces']} faces"]
    text += [f"warning: {w}" for w in d.warnings]
    if "cancellative" in rep:
        text.append(f"cancellativity: {rep['cancellative']['status']} (L={rep['cancellative']['budget']})")
    return code, rep, text


def cmd_matchings(ctx: Context):
    d = ctx.dimer
    cat = enumerate_matchings(d)
    imp = Impression.from_dimer(d, cat)
    rep = {"matchings": cat.to_json(), "total": len(cat.matchings), "simple": len(cat.simple_matchings),
           "variables": cat.variables, "dagger": sorted(dagger_arrows(d, cat)),
           "arrow_monomials": {a: imp.fmt(m) for a, m in sorted(imp.arrow_monomial.items())}}
    text = [f"{rep['total']} perfect matchings, {rep['simple']} simple"]
    text += [f"  {m.get('var', '--'):>4} {' '.join(m['arrows'])}" for m in rep["matchings"]]
    text.append(f"arrows in no simple-module annihilator: {' '.join(rep['dagger'])}")
    return 0, rep, text


def cmd_rings(ctx: Context):
    imp = ctx.imp
    budget = ctx.budget(ctx.contraction.target)
    gs = generators_S(imp, budget)
    oracle = CycleOracle(imp)
    gr = generators_R(imp, budget, s_gens=gs, oracle=oracle)
    outside = []
    for m in gs.generators:
        if oracle.in_R(m):
            continue
        cycles = {}
        for v in imp.dimer.vertices:
            w = oracle.witness(v, m)
            if w is not None:
                cycles[v] = list(w.arrows)
        outside.append({"monomial": imp.fmt(m), "missing_at": oracle.missing_vertices(m), "cycles": cycles})
    rep = {"variables": imp.variables, "sigma": imp.fmt(imp.sigma()), "S": gs.to_json(imp),
           "R": gr.to_json(imp), "S_not_in_R": outside}
    text = [f"sigma = {rep['sigma']}",
            f"S generators (L={budget}, saturated={gs.saturated}): {', '.join(rep['S']['generators'])}",
            f"R generators (degree {budget}, saturated={gr.saturated}): {', '.join(rep['R']['generators'])}"]
    for o in outside:
        text.append(f"not in R: {o['monomial']} (no cycle at {', '.join(o['missing_at'])})")
    return 0, rep, text


def cmd_contract(ctx: Context):
    c = ctx.contraction
    budget = ctx.budget(c.target)
    bad = check_relations_preserved(c, budget)
    cmp = check_S_equals_Sprime(c, budget, ctx.target_imp)
    rep = {"contracted": list(c.contracted), "vertex_map": dict(sorted(c.vertex_map.items())),
           "target": c.target.to_dict(), "relations_failing": bad, "S_comparison": cmp.to_json(ctx.target_imp)}
    if ctx.args.out:
        with open(ctx.args.out, "w") as fh:
            fh.write(c.target.to_json())
    text = [f"contracted {', '.join(c.contracted) or 'nothing'}: "
            f"{len(c.target.vertices)} vertices, {len(c.target.arrows)} arrows",
            "relations preserved" if not bad else f"relations not preserved for {', '.join(bad)}",
            f"S vs S': {cmp.status} (L={budget})"]
    if cmp.witness is not None:
        text.append(f"  witness {ctx.target_imp.fmt(cmp.witness)} only in {cmp.witness_side}")
    return (0 if cmp.equal and not bad else 1), rep, text


def cmd_locus(ctx: Context):
    b = ctx.point()
    verdict = azumaya_A(ctx.imp, ctx.target_imp, b, ctx.budget(ctx.contraction.target))
    res = verdict.locus
    rep = {"point": {k: str(v) for k, v in b.items()}, **res.to_json(),
           "azumaya": {"status": verdict.status, "in_Aprime": verdict.in_Aprime}}
    text = [f"locus U: {res.status}", f"Azumaya locus: {verdict.status} (target: {verdict.in_Aprime})"]
    text += [f"  {c['generator']} * {c['multiplier']} = {c['product']} in R" for c in res.certificates]
    if res.reason:
        text.append(f"  {res.reason}")
    return (0 if res.status == "InU" else 1), rep, text


def cmd_simples(ctx: Context):
    b = ctx.point()
    rho = rep_from_point(ctx.imp, b)
    verdict = azumaya_A(ctx.imp, ctx.target_imp, b, ctx.budget(ctx.contraction.target))
    rep = {"point": {k: str(v) for k, v in b.items()}, "representation": rho.to_json(),
           "simple": is_simple(rho), "azumaya": verdict.to_json()}
    text = [f"representation at point: {'simple' if rep['simple'] else 'not simple'}",
            f"target Azumaya locus: {'yes' if verdict.in_Aprime else 'no'}",
            f"locus U: {verdict.locus.status}",
            f"Azumaya locus: {verdict.status}"]
    return (0 if verdict.status == "yes" else 1), rep, text


def cmd_pi_check(ctx: Context):
    c = ctx.contraction
    budget = ctx.budget(c.source)
    n = ctx.args.word_length
    rw = Rewriter(c.source)
    search = find_witness(c, budget, n, imp=ctx.imp, rewriter=rw)
    rep = {"inout": inout_hypothesis(c), "budget": budget, "word_length": n,
           "rejected": search.rejected}
    if search.found:
        fr = verify_freeness(c.source, search.witness, n, rw)
        rep["witness"] = search.witness.to_json()
        rep["freeness"] = fr.to_json()
        rep["verdict"] = "NotPI" if fr.free else "NoneFound"
    else:
        rep["verdict"] = "NoneFound"
    text = [f"degree-one hypothesis: {rep['inout']}"]
    if search.found:
        text.append(f"witness: {' '.join(search.witness.w1.arrows)} / {' '.join(search.witness.w2.arrows)} "
                    f"({search.witness.method})")
        text.append(f"free up to word length {n}: no polynomial identity")
    else:
        text.append(f"no witness found ({len(search.rejected)} candidates rejected); no claim made")
    return (0 if rep["verdict"] == "NotPI" else 1), rep, text


def cmd_render(ctx: Context):
    styles = None
    if ctx.args.styles:
        try:
            styles = load_styles(ctx.args.styles)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read styles: {exc}") from None
    elif ctx.fixture:
        styles = ctx.fixture.manifest.get("styles")
    svg = render(ctx.dimer, styles)
    if ctx.args.out:
        with open(ctx.args.out, "w") as fh:
            fh.write(svg)
        return 0, {"out": ctx.args.out}, [f"wrote {ctx.args.out}"]
    return 0, None, [svg.rstrip("\n")]


def cmd_fixtures(args):
    if args.action == "list":
        names = fixture_names()
        rep = {n: Fixture.load(n).manifest.get("description", "") for n in names}
        return 0, rep, [f"{n}: {d}" for n, d in rep.items()]
    names = fixture_names() if args.name in (None, "all") else [args.name]
    if any(n not in fixture_names() for n in names):
        raise InputError(f"unknown fixture {args.name!r}")
    rep, text, ok = {}, [], True
    for n in names:
        res = run_fixture(n)
        rep[n] = [{"check": r.check, "basis": r.basis, "passed": r.passed, "detail": r.detail} for r in res]
        for r in res:
            text.append(f"{'PASS' if r.passed else 'FAIL'} {n} {r.check} [{r.basis}]: {r.detail}")
        ok = ok and all(r.passed for r in res)
    return (0 if ok else 1), rep, text


COMMANDS = {
    "validate": cmd_validate, "matchings": cmd_matchings, "rings": cmd_rings, "contract": cmd_contract,
    "locus": cmd_locus, "simples": cmd_simples, "pi-check": cmd_pi_check, "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dimerlab", description="Dimer algebras and their contractions.")
    parser.add_argument("--version", action="version", version=f"dimerlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, stars=True, point=False):
        p.add_argument("dimer", nargs="?", help="dimer JSON file or bundled fixture name")
        p.add_argument("--dimer", dest="dimer_opt", help="same as the positional argument")
        p.add_argument("--budget", type=int, help="path length or degree budget")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", help="write the main artefact to this file")
        if stars:
            p.add_argument("--stars", help="comma-separated arrows to contract")
        if point:
            p.add_argument("--point", help="JSON file, inline JSON object or list, or fixture point name")
        return p

    common(sub.add_parser("validate", help="check the dimer invariants")).add_argument(
        "--cancellative", action="store_true", help="also run the bounded cancellativity check")
    common(sub.add_parser("matchings", help="perfect and simple matchings"), stars=False)
    common(sub.add_parser("rings", help="generators of the cycle monoids S and R")).add_argument(
        "--contract-from", help="larger dimer whose contraction by --stars is the given one")
    common(sub.add_parser("contract", help="contract arrows and compare cycle monoids"))
    common(sub.add_parser("locus", help="membership of a point in the locus U"), point=True)
    common(sub.add_parser("simples", help="simplicity and Azumaya verdict at a point"), point=True)
    common(sub.add_parser("pi-check", help="search for a free subalgebra on two generators")).add_argument(
        "--word-length", type=int, default=4, help="check freeness up to this word length")
    common(sub.add_parser("render", help="SVG of the fundamental domain"), stars=False).add_argument(
        "--styles", help="JSON file mapping arrows to solid, dotted, dashed or double")
    fx = sub.add_parser("fixtures", help="bundled examples")
    fx.add_argument("action", choices=("list", "run"))
    fx.add_argument("name", nargs="?", help="fixture to run (default: all)")
    fx.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def emit(fmt: str, rep, text: list[str]) -> None:
    if fmt == "json" and rep is not None:
        sys.stdout.write(json.dumps(rep, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(text) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.command == "fixtures":
            code, rep, text = cmd_fixtures(args)
        else:
            ctx = Context(args)
            code, rep, text = COMMANDS[args.command](ctx)
    except DimerError as exc:
        report = {"valid": False, "errors": [{"code": c, "message": m} for c, m in exc.problems]}
        emit(args.format, report, [f"{c}: {m}" for c, m in exc.problems])
        return 2
    except (ContractionError, InputError) as exc:
        msg = str(exc)
        code_name = getattr(exc, "code", "InputError")
        emit(args.format, {"error": code_name, "message": msg}, [f"error: {msg}"])
        return 2
    emit(args.format, rep, text)
    return code


if __name__ == "__main__":
    sys.exit(main())
