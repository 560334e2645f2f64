"""Verification suites.

Each suite recomputes a family of facts from scratch and returns a
:class:`SuiteResult` whose ``lines`` are deterministic for a given seed;
wall-clock time is kept separately in ``seconds``.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from .chains import simplicial_homology
from .coarsen import (
    EXCEPTIONAL,
    FOUNTAIN,
    ONE_EXCEPTIONAL,
    REGULAR_SOURCE,
    SOURCE,
    build_Se,
    compose,
    is_simple,
    simple_chain,
    theorem_hypothesis_report,
)
from .corpus import corpus, entry
from .ihom import (
    calibrate_cone_offset,
    calibrate_two_cone_offset,
    cone_threshold_probe,
    dense_ih_ranks_q,
    intersection_homology,
    pi0_p,
    pi1_regular,
    predicted_threshold,
    two_cone_cases,
    two_cone_probe,
)
from .perv import (
    INF,
    NEG_INF,
    ExtInt,
    Perversity,
    dual,
    is_K_perversity,
    pullback,
    pushforward,
    random_K_perversity,
    random_perversity,
    top_perversity,
    zero_perversity,
)
from .simplex import SimplicialComplex, link_of_simplex, simplex, sphere
from .strat import (
    build_stratification,
    cs_diagnostics,
    regular_components_bruteforce,
    stratum_link,
    trivial_stratification,
)


@dataclass
class SuiteResult:
    name: str
    criterion: int
    ok: bool
    lines: list = field(default_factory=list)
    seconds: float = 0.0
    budget: float = 0.0

    @property
    def within_budget(self):
        return self.seconds < self.budget

    def summary(self):
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name} (criterion {self.criterion})"


class _Log:
    def __init__(self):
        self.lines = []
        self.failures = 0

    def __call__(self, line):
        self.lines.append(line)

    def check(self, cond, line):
        if not cond:
            self.failures += 1
            self.lines.append("VIOLATION " + line)
        return cond


SUITES = {}


def _suite(name, criterion, budget):
    def deco(fn):
        SUITES[name] = (fn, criterion, budget)
        return fn
    return deco


def suite_names():
    return list(SUITES)


def run_suite(name, seed=0) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    fn, crit, budget = SUITES[name]
    log = _Log()
    log(f"suite={name} seed={seed}")
    t0 = time.perf_counter()
    fn(log, seed)
    dt = time.perf_counter() - t0
    ok = log.failures == 0
    log(f"violations={log.failures}")
    return SuiteResult(name, crit, ok, log.lines, dt, budget)


def run_all(seed=0):
    """Corpus oracles first; the remaining suites only run if they pass."""
    first = run_suite("corpus-oracles", seed)
    out = [first]
    for name in SUITES:
        if name == "corpus-oracles":
            continue
        if not first.ok:
            out.append(SuiteResult(name, SUITES[name][1], False, ["skipped: corpus oracles failed"]))
        else:
            out.append(run_suite(name, seed))
    return out


# -- shared helpers ---------------------------------------------------------------

def law_coarsenings():
    """(label, coarsening) for every corpus coarsening."""
    out = []
    for e in corpus():
        for cname in e.coarsenings:
            out.append((f"{e.name}:{cname}", e.coarsening(cname)))
    return out


def _k_samples(c, seed, count, bounded=True, allow_inf=False):
    """Distinct K-perversities from seeded draws."""
    seen, out = set(), []
    for i in range(count * 4):
        p = random_K_perversity(c, seed * 1000 + i, bounded=bounded, allow_inf=allow_inf)
        if p is None:
            return out
        key = tuple(p.singular_items())
        if key not in seen:
            seen.add(key)
            out.append(p)
        if len(out) >= count:
            break
    return out


def _fmt_p(p):
    return "(" + ",".join(f"{k}:{v}" for k, v in p.singular_items()) + ")"


def _ih_agree(log, label, c, p, ring="Z"):
    q = pushforward(c, p)
    a = intersection_homology(c.source, p, ring)
    b = intersection_homology(c.target, q, ring)
    ok = a.same_groups(b)
    log.check(ok, f"{label} p={_fmt_p(p)} IH_S={a.ranks}/{a.torsion} IH_T={b.ranks}/{b.torsion}")
    return ok


# -- criterion 11 -----------------------------------------------------------------

def _classify_independent(c):
    out = {}
    for s in c.source.strata:
        t = c.target.stratum(c.iota[s.id])
        if s.regular:
            out[s.id] = REGULAR_SOURCE
        elif t.regular:
            out[s.id] = ONE_EXCEPTIONAL if s.codim == 1 else EXCEPTIONAL
        elif s.formal_dim == t.formal_dim:
            out[s.id] = SOURCE
        else:
            out[s.id] = FOUNTAIN
    return out


def _coface_link(X, sigma):
    s = set(sigma)
    simps = set()
    for t in X.all_simplices:
        if s.issubset(t) and len(t) > len(s):
            simps.add(simplex([v for v in t if v not in s]))
    return simps


def _closure(K):
    return set(K.all_simplices)


def _ih_dense(strat, p):
    return tuple(dense_ih_ranks_q(strat, p))


def _named_perversity(strat, name):
    if name == "zero":
        return zero_perversity(strat)
    if name == "top":
        return top_perversity(strat)
    raise KeyError(name)


def _betti(K):
    return tuple(simplicial_homology(K).ranks)


@_suite("corpus-oracles", 11, 60)
def suite_corpus_oracles(log, seed):
    checked = 0
    for e in corpus():
        for ex in e.expected:
            if ex.tag != "DERIVED":
                continue
            parts = ex.key.split(":")
            kind = parts[0]
            if kind == "homology":
                h = simplicial_homology(e.complex)
                dense = _ih_dense(trivial_stratification(e.complex),
                                  zero_perversity(trivial_stratification(e.complex)))
                got = (tuple(h.ranks), tuple(h.torsion))
                ok = got == ex.value and dense == ex.value[0]
            elif kind == "ih":
                strat = e.strat(parts[1])
                p = _named_perversity(strat, parts[2])
                h = intersection_homology(strat, p, parts[3])
                got = (tuple(h.ranks), tuple(h.torsion))
                dense = _ih_dense(strat, p)
                ok = got == ex.value and dense == ex.value[0]
            elif kind == "pi0":
                strat = e.strat(parts[1])
                got = pi0_p(strat, _named_perversity(strat, parts[2])).count
                ok = got == ex.value == regular_components_bruteforce(strat)
            elif kind == "link":
                strat = e.strat(parts[1])
                sigma = simplex([parts[2]])
                L = link_of_simplex(strat.complex, sigma)
                enum = _coface_link(strat.complex, sigma)
                b = _betti(L)
                got = (len(L.connected_components()), b[:2])
                ok = _closure(L) == enum and got == ex.value
            elif kind == "classify":
                c = e.coarsening(parts[1])
                cls = c.classification
                ok = cls == _classify_independent(c)
                if len(parts) == 3:
                    sid = c.source.stratum_of[(c.source.meta.get("apex", "v"),)]
                    got = cls[sid]
                else:
                    got = tuple(cls[s] for s in sorted(cls))
                ok = ok and got == ex.value
            elif kind == "simple":
                c = e.coarsening(parts[1])
                got = is_simple(c)
                V = [s for s, k in _classify_independent(c).items()
                     if k in (EXCEPTIONAL, ONE_EXCEPTIONAL, FOUNTAIN)]
                chain = any(c.source.lt(a, b) for a in V for b in V)
                ok = got == ex.value == (not chain)
            else:
                log.check(False, f"{e.name} {ex.key}: no oracle for key kind {kind!r}")
                continue
            checked += 1
            log.check(ok, f"{e.name} {ex.key}: expected {ex.value} got {got}")
            if ok:
                log(f"{e.name} {ex.key} ok ({ex.oracle})")
    log(f"derived_values_checked={checked}")


# -- criterion 1 ------------------------------------------------------------------

def _chains():
    """Triples S -> R -> T for the composite-coarsening lemma."""
    out = []
    for name in ("susp_chain", "susp_chain_x3"):
        e = entry(name)
        from .coarsen import build_coarsening
        S, R, T = e.strat("S"), e.strat("R"), e.strat("T")
        out.append((f"{name}:S>R>T", build_coarsening(S, R), build_coarsening(R, T)))
    for label, c in law_coarsenings():
        if c.exceptional() and not c.one_exceptional():
            try:
                d = build_Se(c)
            except Exception:
                continue
            out.append((f"{label}:Se", d.to_Se, d.from_Se))
        steps = simple_chain(c) if not c.is_identity() else []
        if len(steps) >= 2:
            first = steps[0]
            rest = steps[1]
            for s in steps[2:]:
                rest = compose(rest, s)
            out.append((f"{label}:chain", first, rest))
    return out


def _source_strata(c):
    return [s for s, k in c.classification.items() if k in (SOURCE, REGULAR_SOURCE)]


@_suite("perversity-laws", 1, 10)
def suite_perversity_laws(log, seed):
    rng = random.Random(seed)
    coarsenings = [(l, c) for l, c in law_coarsenings()]
    n_random = 0
    n_k = 0
    for label, c in coarsenings:
        S, T = c.source, c.target
        tS, tT = top_perversity(S), top_perversity(T)
        for i in range(12):
            q = random_perversity(T, rng.randrange(10 ** 9))
            p = random_perversity(S, rng.randrange(10 ** 9))
            n_random += 2
            log.check(pushforward(c, pullback(c, q)) == q, f"{label} push(pull q) != q for {_fmt_p(q)}")
            # off exceptional strata for any p; exceptional strata read the
            # regular value 0 back, so there the law needs p >= 0
            back = pullback(c, pushforward(c, p))
            exc_ids = set(c.exceptional())
            log.check(all(back[s.id] <= p[s.id] for s in S.singular_strata() if s.id not in exc_ids),
                      f"{label} pull(push p) > p for {_fmt_p(p)}")
            # pullbacks are K-perversities when nothing is 1-exceptional
            if not c.one_exceptional():
                pq = pullback(c, q)
                log.check(bool(is_K_perversity(c, pq)), f"{label} pullback not K for {_fmt_p(q)}")
                if q <= tT:
                    log.check(pq <= tS, f"{label} pullback exceeds t for {_fmt_p(q)}")
            # duality: p and Dp are K together
            log.check(bool(is_K_perversity(c, p)) == bool(is_K_perversity(c, dual(p))),
                      f"{label} K(p) != K(Dp) for {_fmt_p(p)}")
        ks = _k_samples(c, rng.randrange(10 ** 6), 10, bounded=False, allow_inf=True)
        ks += _k_samples(c, rng.randrange(10 ** 6), 6, bounded=True)
        if not ks:
            log(f"{label}: no K-perversity (1-exceptional={c.one_exceptional()})")
            continue
        n_k += len(ks)
        exc = c.exceptional()
        for p in ks:
            pp = pushforward(c, p)
            Dp = dual(p)
            for s in _source_strata(c):
                t = c.iota[s]
                if not T.stratum(t).regular:
                    log.check(pp[t] == p[s], f"{label} source value at {s} for {_fmt_p(p)}")
            log.check(pullback(c, pp) <= p, f"{label} pull(push p) > p for K-perversity {_fmt_p(p)}")
            log.check(pullback(c, dual(pp)) <= Dp, f"{label} pull D push p > Dp for {_fmt_p(p)}")
            log.check(pushforward(c, Dp) == dual(pp), f"{label} push Dp != D push p for {_fmt_p(p)}")
            if p <= tS:
                log.check(pp <= tT, f"{label} push p exceeds t for {_fmt_p(p)}")
            log.check(bool(is_K_perversity(c, Dp)), f"{label} Dp not K for {_fmt_p(p)}")
            for e in exc:
                log.check(ExtInt(0) <= p[e] <= tS[e], f"{label} exceptional value out of [0,t] at {e}")
        log(f"{label}: random={24} k_samples={len(ks)} exceptional={len(exc)}")
    n_chain = 0
    for label, c1, c2 in _chains():
        c = compose(c1, c2)
        for p in _k_samples(c, seed + 7, 8, bounded=False, allow_inf=True):
            n_chain += 1
            log.check(bool(is_K_perversity(c1, p)), f"{label} p not K on first step {_fmt_p(p)}")
            log.check(bool(is_K_perversity(c2, pushforward(c1, p))),
                      f"{label} push p not K on second step {_fmt_p(p)}")
        log(f"{label}: chain samples checked")
    log(f"coarsenings={len(coarsenings)} random_perversities={n_random} "
        f"k_perversities={n_k} chain_samples={n_chain}")
    log.check(len(coarsenings) >= 6 and n_random + n_k >= 200, "sample size below the floor")


# -- criterion 2 ------------------------------------------------------------------

@_suite("one-exceptional", 2, 1)
def suite_one_exceptional(log, seed):
    c = entry("line_point").coarsening()
    log(f"one_exceptional={c.one_exceptional()}")
    values = [ExtInt(v) for v in range(-3, 4)] + [INF, NEG_INF]
    sing = c.source.singular_strata()
    n = 0
    for combo in itertools.product(values, repeat=len(sing)):
        p = Perversity(c.source, {s.id: v for s, v in zip(sing, combo)})
        n += 1
        log.check(not is_K_perversity(c, p), f"accepted {_fmt_p(p)}")
    log(f"perversities_swept={n} accepted=0" if log.failures == 0 else f"perversities_swept={n}")
    log.check(random_K_perversity(c, seed) is None, "sampler produced a K-perversity")


# -- criterion 3 ------------------------------------------------------------------

@_suite("pi0-invariance", 3, 30)
def suite_pi0(log, seed):
    total = 0
    for label, c in law_coarsenings():
        ks = _k_samples(c, seed + 11, 5, bounded=True)
        if not ks:
            log(f"{label}: no K-perversity")
            continue
        for p in ks:
            a = pi0_p(c.source, p).count
            b = pi0_p(c.target, pushforward(c, p)).count
            total += 1
            log.check(a == b, f"{label} pi0 {a} vs {b} for {_fmt_p(p)}")
        log(f"{label}: samples={len(ks)} pi0={a}")
    log(f"comparisons={total}")


# -- criterion 4 ------------------------------------------------------------------

@_suite("pinched-torus", 4, 5)
def suite_pinched_torus(log, seed):
    from .symcalc import Atom, Cone, default_calculator
    e = entry("pinched_torus")
    S = e.strat("S")
    g = pi1_regular(S)
    log(f"pi1_regular abelianization rank={g.abel_rank} torsion={list(g.abel_torsion)}")
    log.check(g.abel_rank == 1 and g.abel_torsion == () and g.h1_agrees, "abelianization is not Z")
    z = zero_perversity(S)
    h = intersection_homology(S, z, "Z")
    dense = _ih_dense(S, z)
    for line in h.lines():
        log(line)
    log.check(h.ranks == (1, 0, 1) and not any(h.torsion), f"IH over Z is {h.ranks}/{h.torsion}")
    log.check(dense == (1, 0, 1), f"dense oracle gives {dense}")
    calc = default_calculator()
    cone = Cone(Atom("T"))
    key = calc.perv_key(cone, "zero")
    rec = [f for f in calc.facts.lookup(cone, key, 1) if f.provenance == "literature"]
    log.check(bool(rec) and rec[0].group.trivial, "no literature record of pi_1 of the cone on T")
    if rec:
        log("recorded: " + rec[0].line())
    # Dp(apex) = 0: cone dimension 3, t(apex) = 1
    for ell in range(1, 6):
        f = calc.rule_cone(cone, calc.perversity(cone, "apex=1,c(x)=0"), ell)
        log.check(f.group.trivial, f"rule_cone l={ell} gives {f.group}")
        log(f"rule_cone l={ell}: {f.group} via {f.chain[0][1]}")


# -- criterion 5 ------------------------------------------------------------------

def _rp2():
    return SimplicialComplex([[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2],
                              [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]])


def probe_links():
    """Links for the cone probe beyond the calibration set."""
    wedge = SimplicialComplex([["o", "a"], ["a", "b"], ["b", "o"], ["o", "c"], ["c", "d"], ["d", "o"]])
    out = [
        ("T2", trivial_stratification(entry("torus7").complex)),
        ("S2", trivial_stratification(sphere(2))),
        ("S3", trivial_stratification(sphere(3))),
        ("RP2", trivial_stratification(_rp2())),
        ("wedge", trivial_stratification(wedge)),
        ("pinched", entry("pinched_torus").strat("S")),
        ("susp_T2", entry("susp_torus").strat("S")),
    ]
    return out


@_suite("cone-threshold", 5, 60)
def suite_cone_threshold(log, seed):
    offsets = calibrate_cone_offset()
    log(f"calibrated offsets={offsets}")
    if not log.check(bool(offsets), "calibration found no offset"):
        return
    off = offsets[0]
    n_links = 0
    for name, L in probe_links():
        pl = zero_perversity(L)
        t_apex = L.n - 1
        apex_values = sorted({-1, 0, t_apex, t_apex + 1})
        for a in apex_values:
            r = cone_threshold_probe(L, pl, a, offset=off)
            ok = log.check(r.j0 == r.predicted,
                           f"{name} apex={a}: j0={r.j0} predicted={r.predicted}")
            if ok:
                log(f"{name} apex={a} Dp(v)={r.dual_apex} j0={r.j0} predicted={r.predicted}")
        n_links += 1
    log(f"links={n_links}")


# -- criterion 6 ------------------------------------------------------------------

INVARIANCE_FIXTURES = [
    ("twocone_b1_S1", "fountain"),
    ("twocone_b2_S1", "fountain"),
    ("twocone_b2_S0", "fountain"),
    ("susp_chain_x3", "SR"),
]


@_suite("coarsening-invariance", 6, 120)
def suite_coarsening_invariance(log, seed):
    for name, cname in INVARIANCE_FIXTURES:
        c = entry(name).coarsening(cname)
        log.check(not c.exceptional(), f"{name}:{cname} has exceptional strata")
        ks = _k_samples(c, seed + 23, 8, bounded=True)
        log.check(bool(ks), f"{name}:{cname} has no K-perversity")
        good = sum(_ih_agree(log, f"{name}:{cname}", c, p) for p in ks)
        log(f"{name}:{cname} classes={sorted(set(c.classification.values()))} "
            f"samples={len(ks)} agree={good}")


# -- criterion 7 ------------------------------------------------------------------

EXCEPTIONAL_FIXTURES = ["sphere2", "sphere3", "sphere4"]


@_suite("exceptional-invariance", 7, 60)
def suite_exceptional_invariance(log, seed):
    from .symcalc import default_calculator
    calc = default_calculator()
    for name in EXCEPTIONAL_FIXTURES:
        e = entry(name)
        c = e.coarsening("refine")
        ks = _k_samples(c, seed + 31, 8, bounded=True)
        log.check(bool(ks), f"{name} has no K-perversity")
        good = sum(_ih_agree(log, f"{name}:refine", c, p) for p in ks)
        for p in ks:
            rep = theorem_hypothesis_report(c, p, calc.link_fact_for(c.source, p), e.meta)
            ok, why = rep.applies["B"]
            log.check(ok, f"{name} p={_fmt_p(p)} theorem B: {why}")
            for sid, (status, via) in rep.link_facts.items():
                log.check(status == "Trivial" and "cone[" in via,
                          f"{name} link fact at {sid}: {status} {via}")
        log(f"{name}: exceptional={c.exceptional()} samples={len(ks)} agree={good} theorem_B=applies")


# -- criterion 8 ------------------------------------------------------------------

@_suite("poincare-bookkeeping", 8, 1)
def suite_dsusp_poincare(log, seed):
    from .symcalc import consistency_check, default_calculator, parse_space
    calc = default_calculator()
    space = parse_space(entry("dsusp_poincare").symbolic)
    c = calc.coarsening(space)
    exc = c.exceptional()
    dims = tuple(sorted(c.source.stratum(s).formal_dim for s in exc))
    log(f"exceptional={[c.source.stratum(s).label for s in exc]} dims={dims}")
    log.check(dims == (0, 0, 1, 1), f"exceptional dims {dims}")
    p = calc.perversity(space.base, "dual:1")
    Dp = dual(p)
    log.check(all(v == 1 for _, v in Dp.singular_items()), "Dp is not constant 1")
    kc = is_K_perversity(c, p)
    log(f"K-perversity={'yes' if kc else 'no'}")
    log.check(bool(kc), f"K check failed: {kc.detail}")
    below = p <= top_perversity(c.source)
    log(f"p<=t={'yes' if below else 'no'}")
    log.check(below, "p is not <= t")
    pushed = pushforward(c, p)
    log.check(pushed == zero_perversity(c.target), "pushforward is not zero")
    log("pushforward=0")
    f = calc.rule_coarsen(space, p, 1)
    log("rule_coarsen: " + f.line())
    log.check(not f.group.known and "exceptional link" in str(f.group.arg),
              "rule_coarsen did not report the link hypothesis")
    rep = consistency_check(calc.facts)
    for line in rep.lines():
        log(line)
    log.check(rep.consistent, "fact base inconsistent")
    kept = [g for g in calc.facts if g.space == space.base and g.provenance == "literature"
            and g.ell == 1 and not g.group.trivial]
    log.check(bool(kept), "recorded nontrivial pi_1 missing")
    for g in kept:
        log("retained: " + g.line())


# -- criterion 9 ------------------------------------------------------------------

@_suite("link-certificate", 9, 10)
def suite_susp_chain(log, seed):
    for name in ("susp_chain", "susp_chain_x3"):
        e = entry(name)
        for sname in ("S", "R", "T"):
            strat = e.strat(sname)
            d = cs_diagnostics(strat)
            log(f"{name}:{sname} links_consistent={'yes' if d.links_consistent else 'no'}")
            if sname == "R":
                hit = [r for r in d.link_inconsistencies
                       if strat.stratum(r["sid"]).formal_dim == 1 and {r["sa"], r["sb"]} == {"(0,0,1)", "(0,2,1)"}]
                log.check(bool(hit), f"{name}:R no T2 vs S2 inconsistency along X1")
                for r in hit[:1]:
                    log("  stratum={sid} level={j} {a}:{sa} vs {b}:{sb}".format(**r))
            else:
                log.check(d.links_consistent, f"{name}:{sname} reports a link inconsistency")


# -- criterion 10 -----------------------------------------------------------------

@_suite("two-cone", 10, 60)
def suite_two_cone(log, seed):
    offsets = calibrate_two_cone_offset()
    log(f"calibrated offsets={offsets}")
    if not log.check(bool(offsets), "calibration found no offset"):
        return
    off = offsets[0]
    for name in ("twocone_b2_S1", "twocone_b2_S0", "twocone_b1_S1"):
        b = int(name.split("_")[1][1:])
        link = _two_cone_link(name)
        fine, coarse, ps = two_cone_cases(b, link)
        n = 0
        for p in ps:
            r = two_cone_probe(b, link, p, coarse, "Z", offset=off)
            log.check(r.bounds_ok, f"{name} p={_fmt_p(p)} violates the sandwich: {r.certificate}")
            log.check(bool(r.matches), f"{name} p={_fmt_p(p)} agree={r.agree} bound={r.predicted}")
            n += 1
        log(f"{name}: k_perversities={n} all_match={'yes' if log.failures == 0 else 'no'}")
    # an input outside the sandwich is refused without computing anything
    link = _two_cone_link("twocone_b2_S1")
    fine, coarse, _ = two_cone_cases(2, link)
    w = fine.stratum_of[(fine.meta.get("apex", "v"),)]
    vals = {s.id: 0 for s in fine.singular_strata()}
    vals[w] = -3
    r = two_cone_probe(2, link, Perversity(fine, vals), coarse, offset=off)
    log.check(not r.bounds_ok, "out-of-range input accepted")
    log(r.lines()[0])


def _two_cone_link(name):
    if name.endswith("S0"):
        return trivial_stratification(SimplicialComplex([["a"], ["b"]]), 0)
    return trivial_stratification(sphere(1, ["a", "b", "c"]))
