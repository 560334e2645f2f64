"""Command-line interface.

Every command prints a text report on stdout: a command echo, digests of
the inputs, the body, and a final verdict line.  Reports are byte-identical
across runs; elapsed time goes to stderr.  Exit status is 0 when all
verdicts pass, 1 when a check fails and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from dataclasses import dataclass, field

from .errors import ParseError, StratkitError, UsageError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# -- targets --------------------------------------------------------------------------

@dataclass
class Target:
    name: str
    strats: dict = field(default_factory=dict)
    coarsenings: dict = field(default_factory=dict)
    perversities: dict = field(default_factory=dict)   # name -> {stratum id: value}
    meta: dict = field(default_factory=dict)
    symbolic: str = ""
    part: str | None = None

    def strat(self):
        if not self.strats:
            raise UsageError(f"{self.name} has no triangulated stratification")
        if self.part in self.strats:
            return self.part, self.strats[self.part]
        if self.part and self.part not in self.coarsenings:
            raise UsageError(f"{self.name} has no stratification {self.part!r}")
        key = next(iter(self.strats))
        return key, self.strats[key]

    def coarsening(self):
        from .coarsen import build_coarsening, identity_coarsening
        if not self.coarsenings:
            if not self.strats:
                raise UsageError(f"{self.name} has no coarsening")
            key, S = self.strat()
            return f"{key}=id", identity_coarsening(S)
        key = self.part if self.part in self.coarsenings else next(iter(self.coarsenings))
        fine, coarse = self.coarsenings[key]
        return key, build_coarsening(self.strats[fine], self.strats[coarse], f"{self.name}:{key}")


def fixture_dir():
    env = os.environ.get("STRATUM_CORPUS_DIR")
    if env:
        return env
    from importlib.resources import files
    return str(files("stratkit").joinpath("data"))


def _from_file(path, name):
    from .stratfile import parse_strat
    with open(path, encoding="utf-8") as fh:
        sf = parse_strat(fh.read())
    strat = sf.stratification()
    return Target(name, {"S": strat}, {}, dict(sf.perversities))


def load_target(spec) -> Target:
    """``path.strat``, ``name`` or ``name:part`` (a stratification or a
    coarsening of a corpus entry).  Files in STRATUM_CORPUS_DIR shadow the
    built-in corpus."""
    from .corpus import entry, names
    if spec.endswith(".strat"):
        if not os.path.exists(spec):
            raise UsageError(f"no such file: {spec}")
        return _from_file(spec, os.path.basename(spec)[:-6])
    name, _, part = spec.partition(":")
    env = os.environ.get("STRATUM_CORPUS_DIR")
    if env and os.path.exists(os.path.join(env, name + ".strat")):
        t = _from_file(os.path.join(env, name + ".strat"), name)
        t.part = part or None
        return t
    if name in names():
        e = entry(name)
        perv = {}
        for (sname, pname), vals in e.perversities.items():
            perv[f"{sname}.{pname}"] = vals
        return Target(name, dict(e.strats), dict(e.coarsenings), perv, dict(e.meta),
                      e.symbolic, part or None)
    path = os.path.join(fixture_dir(), name + ".strat")
    if os.path.exists(path):
        t = _from_file(path, name)
        t.part = part or None
        return t
    raise UsageError(f"unknown target {spec!r} (try corpus-list)")


def digest(strat):
    from .stratfile import emit_strat
    return hashlib.sha256(emit_strat(strat).encode()).hexdigest()[:16]


# -- perversities and rings ------------------------------------------------------------

def parse_perversity(spec, poset, named=None):
    """zero, top, codim:f1,f2,..., const:k, id=value pairs, or a name from
    the input file."""
    from .perv import (CodimPerversityFn, Perversity, constant_perversity, ext,
                       from_codim_fn, top_perversity, zero_perversity)
    named = named or {}
    spec = spec or "zero"
    try:
        if spec in ("zero", "0"):
            return zero_perversity(poset)
        if spec in ("top", "t"):
            return top_perversity(poset)
        if spec.startswith("codim:"):
            vals = [ext(x) for x in spec[6:].split(",") if x]
            return from_codim_fn(poset, CodimPerversityFn(tuple([ext(0)] + vals)))
        if spec.startswith("const:"):
            return constant_perversity(poset, ext(spec[6:]))
        if "=" in spec:
            vals = {}
            for item in spec.split(","):
                k, v = item.split("=")
                vals[int(k)] = ext(v)
            return Perversity(poset, vals, spec)
        for key in (spec, *[k for k in named if k.endswith("." + spec)]):
            if key in named:
                return Perversity(poset, {int(k): ext(v) for k, v in named[key].items()}, spec)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad perversity {spec!r}: {exc}") from exc
    raise UsageError(f"unknown perversity {spec!r}")


def parse_ring_arg(text):
    from .chains import parse_ring
    try:
        return parse_ring(text)
    except (ValueError, StratkitError) as exc:
        raise UsageError(f"bad ring {text!r}") from exc


# -- report -----------------------------------------------------------------------------

class Report:
    def __init__(self, argv):
        self.lines = ["# command: stratkit " + " ".join(argv)]
        self.ok = True

    def input(self, label, strat):
        self.lines.append(f"# input: {label} sha256={digest(strat)}")

    def add(self, *lines):
        self.lines.extend(lines)

    def verdict(self, ok, what):
        self.ok = self.ok and ok
        self.lines.append(f"check {what}: {'pass' if ok else 'FAIL'}")

    def text(self):
        return "\n".join(self.lines + [f"# verdict: {'pass' if self.ok else 'fail'}"]) + "\n"


def _fmt_values(p):
    return [f"stratum={k} value={v}" for k, v in p.singular_items()]


# -- commands --------------------------------------------------------------------------

def cmd_strata(args, rep):
    t = load_target(args.target)
    key, S = t.strat()
    rep.input(f"{t.name}:{key}", S)
    rep.add(f"n={S.n} strata={len(S.strata)} depth={S.depth} full={'yes' if S.is_full else 'no'}")
    for s in S.strata:
        lead = " ".join(map(str, s.carrier_simplices[0]))
        rep.add(f"stratum={s.id} dim={s.formal_dim} codim={s.codim} "
                f"{'regular' if s.regular else 'singular'} simplices={len(s.carrier_simplices)} "
                f"lexmin=({lead})")


def _symbolic(t):
    from .symcalc import default_calculator, parse_space
    calc = default_calculator(_atoms_text())
    return calc, parse_space(t.symbolic)


def cmd_classify(args, rep):
    from .coarsen import is_simple
    t = load_target(args.target)
    if not t.strats and t.symbolic:
        calc, space = _symbolic(t)
        c = calc.coarsening(space)
        rep.add(f"symbolic: {space}")
        for sid in sorted(c.classification):
            s = c.source.stratum(sid)
            rep.add(f"stratum={sid} label={s.label} dim={s.formal_dim} codim={s.codim} "
                    f"class={c.classification[sid]}")
    else:
        key, c = t.coarsening()
        rep.input(f"{t.name}:{key}", c.source)
        rep.add(*c.lines())
    rep.add("exceptional=[" + ",".join(map(str, c.exceptional())) + "]")
    rep.add(f"simple={'yes' if is_simple(c) else 'no'}")
    if not c.exceptional() and not c.fountains():
        rep.add("note: no exceptional or fountain strata; simple under the depth <= 1 reading")


def cmd_perv_check(args, rep):
    from .coarsen import theorem_hypothesis_report
    t = load_target(args.target)
    if not t.strats and t.symbolic:
        calc, space = _symbolic(t)
        c = calc.coarsening(space)
        p = calc.perversity(space.base, args.perversity or "zero")
        rep.add(f"symbolic: {space}")
        rep.add(*[f"stratum={k} label={c.source.stratum(k).label} value={v}"
                  for k, v in p.singular_items()])

        def link_fact(sid):
            f = calc.link_cone_fact(space.base, p, c.source.stratum(sid).label)
            status = "Unknown" if not f.group.known else "Trivial" if f.group.trivial else "Nontrivial"
            return status, " <- ".join(f"{r}[{x}]" if x else r for r, x in f.chain)
    else:
        from .symcalc import default_calculator
        key, c = t.coarsening()
        rep.input(f"{t.name}:{key}", c.source)
        p = parse_perversity(args.perversity, c.source, t.perversities)
        rep.add(*_fmt_values(p))
        link_fact = default_calculator(_atoms_text()).link_fact_for(c.source, p)
    r = theorem_hypothesis_report(c, p, link_fact, t.meta)
    rep.add(*r.lines())
    rep.verdict(r.k_perversity, "K-perversity")
    rep.verdict(r.below_top, "p<=t")


def cmd_push(args, rep):
    from .perv import pushforward
    t = load_target(args.target)
    key, c = t.coarsening()
    rep.input(f"{t.name}:{key}", c.source)
    p = parse_perversity(args.perversity, c.source, t.perversities)
    q = pushforward(c, p)
    rep.add(*_fmt_values(q))
    rep.add(*getattr(q, "notes", []))


def cmd_pull(args, rep):
    from .perv import pullback
    t = load_target(args.target)
    key, c = t.coarsening()
    rep.input(f"{t.name}:{key}", c.source)
    q = parse_perversity(args.perversity, c.target, t.perversities)
    rep.add(*_fmt_values(pullback(c, q)))


def cmd_ih(args, rep):
    from .ihom import dense_ih_ranks_q, intersection_homology
    t = load_target(args.target)
    key, S = t.strat()
    rep.input(f"{t.name}:{key}", S)
    p = parse_perversity(args.perversity, S, t.perversities)
    ring = parse_ring_arg(args.ring)
    h = intersection_homology(S, p, ring)
    rep.add(*h.lines())
    if args.oracle:
        dense = tuple(dense_ih_ranks_q(S, p))
        rep.add("dense_ranks_Q=" + " ".join(map(str, dense)))
        if ring.name == "Q":
            rep.verdict(dense == tuple(h.ranks), "dense oracle")
    if args.figures:
        from .figures import homology_bars
        homology_bars(h, args.figures, f"ih_{t.name}.png", f"IH {t.name} {args.perversity}")


def cmd_pi0(args, rep):
    from .ihom import pi0_p
    t = load_target(args.target)
    key, S = t.strat()
    rep.input(f"{t.name}:{key}", S)
    p = parse_perversity(args.perversity, S, t.perversities)
    r = pi0_p(S, p)
    rep.add(f"components={r.count}")
    for i, comp in enumerate(r.components):
        rep.add(f"component={i} strata=[{','.join(map(str, comp))}]")


def cmd_pi1(args, rep):
    from .ihom import pi1_regular
    t = load_target(args.target)
    key, S = t.strat()
    rep.input(f"{t.name}:{key}", S)
    g = pi1_regular(S)
    rep.add(*g.lines())
    rep.verdict(g.h1_agrees, "abelianization vs H_1")


def cmd_cone_probe(args, rep):
    from .ihom import calibrate_cone_offset, cone_threshold_probe
    t = load_target(args.target)
    key, L = t.strat()
    rep.input(f"{t.name}:{key}", L)
    p = parse_perversity(args.perversity, L, t.perversities)
    offsets = calibrate_cone_offset()
    if not offsets:
        rep.verdict(False, "calibration")
        return
    rep.add(f"calibrated_offset={offsets[0]}")
    apexes = [int(x) for x in args.apex.split(",")] if args.apex else range(-1, L.n + 1)
    for a in apexes:
        r = cone_threshold_probe(L, p, a, offset=offsets[0])
        rep.add(f"apex_value={a}", *["  " + x for x in r.lines()])
        rep.verdict(r.j0 == r.predicted, f"threshold apex={a}")
        if args.figures:
            from .figures import agreement_strip
            agreement_strip(r.iso, r.predicted, args.figures, f"cone_{t.name}_{a}.png",
                            f"cone on {t.name}, apex value {a}")


def cmd_two_cone(args, rep):
    from .ihom import calibrate_two_cone_offset, two_cone_cases, two_cone_probe
    t = load_target(args.target)
    if "two_cone_b" not in t.meta:
        raise UsageError(f"{t.name} is not a two-cone fixture")
    b, link = t.meta["two_cone_b"], t.meta["two_cone_link"]
    fine, coarse, cases = two_cone_cases(b, link)
    rep.input(f"{t.name}:S", fine)
    offsets = calibrate_two_cone_offset()
    if not offsets:
        rep.verdict(False, "calibration")
        return
    rep.add(f"b={b} calibrated_offset={offsets[0]}")
    if args.perversity:
        cases = [parse_perversity(args.perversity, fine, t.perversities)]
    for i, p in enumerate(cases):
        r = two_cone_probe(b, link, p, coarse, parse_ring_arg(args.ring), offset=offsets[0])
        rep.add("p=(" + ",".join(f"{k}:{v}" for k, v in p.singular_items()) + ")")
        rep.add(*["  " + x for x in r.lines()])
        if r.bounds_ok:
            rep.verdict(bool(r.matches), f"two-cone bound case={i}")
            if args.figures:
                from .figures import agreement_strip
                bound = r.predicted if r.predicted.finite else None
                agreement_strip(r.agree, int(bound) if bound is not None else None,
                                args.figures, f"twocone_{t.name}_{i}.png", f"{t.name} case {i}")
        else:
            rep.verdict(False, f"sandwich case={i}")


def cmd_mv(args, rep):
    from .ihom import mv_exactness_check
    t = load_target(args.target)
    key, S = t.strat()
    rep.input(f"{t.name}:{key}", S)
    p = parse_perversity(args.perversity, S, t.perversities)
    if args.u and args.v:
        U, V = _vertex_list(args.u, S), _vertex_list(args.v, S)
    else:
        pts = [s.carrier_simplices[0] for s in S.singular_strata() if s.formal_dim == 0]
        if len(pts) < 2:
            raise UsageError("give --u and --v (fewer than two point strata)")
        U, V = [pts[0]], [pts[1]]
    rep.add("U=X-" + ";".join(" ".join(map(str, s)) for s in U),
            "V=X-" + ";".join(" ".join(map(str, s)) for s in V))
    r = mv_exactness_check(S, p, U, V)
    rep.add(*r.lines())
    rep.verdict(r.exact, "Mayer-Vietoris exactness")


def _vertex_list(text, S):
    out = []
    for tok in text.split(","):
        v = int(tok) if tok.isdigit() else tok
        if (v,) not in S.carrier:
            raise UsageError(f"{tok!r} is not a vertex")
        out.append((v,))
    return out


def _atoms_text():
    path = os.environ.get("STRATKIT_ATOMS")
    if path:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    return None


def cmd_calc(args, rep):
    from .symcalc import Coarsen, consistency_check, default_calculator, parse_space
    text = _atoms_text()
    if args.atoms:
        with open(args.atoms, encoding="utf-8") as fh:
            text = fh.read()
    calc = default_calculator(text)
    space = parse_space(args.expr)
    rep.add(f"space={space}")
    spec = args.perversity or "zero"
    for ell in args.degree:
        if args.fine:
            if not isinstance(space, Coarsen):
                raise UsageError("--fine needs a Coarsen(...) expression")
            f = calc.rule_coarsen(space, calc.perversity(space.base, spec), ell)
        else:
            f = calc.derive(space, spec, ell)
        rep.add(f.line())
    if args.facts:
        rep.add("facts:", *["  " + x for x in calc.facts.dump()])
    cr = consistency_check(calc.facts)
    rep.add(*cr.lines())
    rep.verdict(cr.consistent, "fact base consistency")


def cmd_verify(args, rep):
    from .verify import run_all, run_suite, suite_names
    if args.suite == "all":
        results = run_all(args.seed)
    elif args.suite in suite_names():
        results = [run_suite(args.suite, args.seed)]
    else:
        raise UsageError(f"unknown suite {args.suite!r}; one of: all, " + ", ".join(suite_names()))
    for r in results:
        rep.add(*r.lines)
        rep.verdict(r.ok, f"{r.name} (criterion {r.criterion})")
        print(f"# time: {r.name} {r.seconds:.2f}s (budget {r.budget:g}s)", file=sys.stderr)
    if args.figures:
        from .figures import suite_timings
        suite_timings(results, args.figures)


def cmd_corpus_list(args, rep):
    from .corpus import corpus
    for e in corpus():
        parts = [f"name={e.name}"]
        if e.strats:
            parts.append("strats=" + ",".join(e.strats))
        if e.coarsenings:
            parts.append("coarsenings=" + ",".join(e.coarsenings))
        if e.symbolic:
            parts.append(f"symbolic={e.symbolic}")
        parts.append("tags=" + ",".join(sorted(e.tags)))
        rep.add(" ".join(parts))


def cmd_emit(args, rep):
    from .stratfile import emit_strat
    t = load_target(args.target)
    key, S = t.strat()
    named = {k.split(".", 1)[-1]: v for k, v in t.perversities.items()
             if "." not in k or k.startswith(key + ".")}
    sys.stdout.write(emit_strat(S, named))
    rep.raw = True


COMMANDS = {
    "strata": cmd_strata,
    "classify": cmd_classify,
    "perv-check": cmd_perv_check,
    "push": cmd_push,
    "pull": cmd_pull,
    "ih": cmd_ih,
    "pi0": cmd_pi0,
    "pi1-regular": cmd_pi1,
    "cone-probe": cmd_cone_probe,
    "two-cone-probe": cmd_two_cone,
    "mv-check": cmd_mv,
    "calc": cmd_calc,
    "verify": cmd_verify,
    "corpus-list": cmd_corpus_list,
    "emit": cmd_emit,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--perversity", default=None, help="default: zero")
    common.add_argument("--ring", default="Z")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["text"], default="text")
    common.add_argument("--figures", metavar="DIR", default=None,
                        help="also write PNG figures to DIR")
    ap = _Parser(prog="stratkit", description="stratified complexes, perversities and coarsenings")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("strata", "classify", "perv-check", "push", "pull", "pi0", "pi1-regular", "emit"):
        sub.add_parser(name, parents=[common]).add_argument("target")
    p = sub.add_parser("ih", parents=[common])
    p.add_argument("target")
    p.add_argument("--oracle", action="store_true", help="cross-check ranks by dense elimination")
    p = sub.add_parser("cone-probe", parents=[common])
    p.add_argument("target")
    p.add_argument("--apex", help="comma-separated apex perversity values")
    p = sub.add_parser("two-cone-probe", parents=[common])
    p.add_argument("target")
    p = sub.add_parser("mv-check", parents=[common])
    p.add_argument("target")
    p.add_argument("--u", help="vertices whose closed stars are removed for U")
    p.add_argument("--v", help="vertices removed for V")
    p = sub.add_parser("calc", parents=[common])
    p.add_argument("expr")
    p.add_argument("--degree", type=int, action="append", default=None)
    p.add_argument("--facts", action="store_true")
    p.add_argument("--atoms", help="atom declaration file")
    p.add_argument("--fine", action="store_true",
                   help="read the perversity on the base of a Coarsen(...) expression")
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("suite")
    sub.add_parser("corpus-list", parents=[common])
    return ap


def run_command(argv):
    """Run one command; returns (report text, exit code)."""
    try:
        args = build_parser().parse_args(argv)
        if args.command == "calc" and args.degree is None:
            args.degree = [1]
        rep = Report(argv)
        t0 = time.perf_counter()
        COMMANDS[args.command](args, rep)
        print(f"# time: total {time.perf_counter() - t0:.2f}s", file=sys.stderr)
        if getattr(rep, "raw", False):
            return "", EXIT_OK
        return rep.text(), EXIT_OK if rep.ok else EXIT_FAIL
    except (UsageError, ParseError) as exc:
        return f"error: {exc}\n", EXIT_USAGE
    except StratkitError as exc:
        return f"error: {type(exc).__name__}: {exc}\n", EXIT_FAIL


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    text, code = run_command(argv)
    (sys.stderr if code == EXIT_USAGE else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
