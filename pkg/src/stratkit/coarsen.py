"""Coarsenings: classification of fine strata, the S_e factorisation and
decomposition into simple steps."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ChainFailure, NotACoarsening, SkeletonNotClosed
from .perv import Perversity, is_K_perversity, pullback, top_perversity
from .simplex import faces
from .strat import StrataPoset, Stratification, Stratum, is_stratified_coarsening

EXCEPTIONAL = "Exceptional"
ONE_EXCEPTIONAL = "OneExceptional"
SOURCE = "Source"
FOUNTAIN = "Fountain"
REGULAR_SOURCE = "RegularSource"


@dataclass
class Coarsening:
    source: StrataPoset
    target: StrataPoset
    iota: dict
    classification: dict = field(default_factory=dict)
    name: str = ""

    @property
    def complex(self):
        return getattr(self.source, "complex", None)

    def cls(self, sid):
        return self.classification[sid]

    def exceptional(self):
        return [s for s, c in sorted(self.classification.items())
                if c in (EXCEPTIONAL, ONE_EXCEPTIONAL)]

    def one_exceptional(self):
        return [s for s, c in sorted(self.classification.items()) if c == ONE_EXCEPTIONAL]

    def fountains(self):
        return [s for s, c in sorted(self.classification.items()) if c == FOUNTAIN]

    def sources_of(self, tid):
        return [s for s, t in sorted(self.iota.items())
                if t == tid and self.classification[s] in (SOURCE, REGULAR_SOURCE)]

    def is_identity(self):
        return all(c in (SOURCE, REGULAR_SOURCE) for c in self.classification.values()) and \
            len(set(self.iota.values())) == len(self.iota)

    def lines(self):
        out = []
        for sid in sorted(self.classification):
            s = self.source.stratum(sid)
            out.append(f"stratum={sid} dim={s.formal_dim} codim={s.codim} "
                       f"image={self.iota[sid]} class={self.classification[sid]}")
        return out


def classify(source, target, iota):
    out = {}
    for s in source.strata:
        t = target.stratum(iota[s.id])
        if s.regular:
            out[s.id] = REGULAR_SOURCE
        elif t.regular:
            out[s.id] = ONE_EXCEPTIONAL if s.codim == 1 else EXCEPTIONAL
        elif s.formal_dim == t.formal_dim:
            out[s.id] = SOURCE
        else:
            out[s.id] = FOUNTAIN
    return out


def coarsening_from_map(source, target, iota, name=""):
    """Build from abstract strata data and an explicit stratum map."""
    if source.n != target.n:
        raise NotACoarsening("formal dimensions differ")
    for s in source.strata:
        if s.id not in iota:
            raise NotACoarsening(f"stratum {s.id} has no image")
        t = target.stratum(iota[s.id])
        if t.codim > s.codim:
            raise NotACoarsening(f"stratum {s.id} -> {t.id} raises codimension")
        if s.regular and not t.regular:
            raise NotACoarsening(f"regular stratum {s.id} -> singular {t.id}")
    # the map must respect the closure order
    for a in source.ids:
        for b in source.ids:
            if source.leq(a, b) and not target.leq(iota[a], iota[b]):
                raise NotACoarsening(f"order {a} <= {b} not preserved")
    cl = classify(source, target, iota)
    c = Coarsening(source, target, dict(iota), cl, name)
    for t in target.strata:
        if not c.sources_of(t.id):
            raise NotACoarsening(f"target stratum {t.id} has no source stratum")
    return c


def build_coarsening(S: Stratification, T: Stratification, name=""):
    ok, res = is_stratified_coarsening(S, T)
    if not ok:
        raise NotACoarsening(res)
    return coarsening_from_map(S, T, res, name)


def identity_coarsening(S):
    return coarsening_from_map(S, S, {s: s for s in S.ids}, "id")


def is_simple(c: Coarsening) -> bool:
    V = [s for s, k in c.classification.items() if k in (EXCEPTIONAL, ONE_EXCEPTIONAL, FOUNTAIN)]
    return c.source.depth_of(V) <= 1


def compose(c1: Coarsening, c2: Coarsening) -> Coarsening:
    iota = {s: c2.iota[t] for s, t in c1.iota.items()}
    return coarsening_from_map(c1.source, c2.target, iota)


# -- S_e ---------------------------------------------------------------------

@dataclass
class SeDecomposition:
    Se: StrataPoset
    to_Se: Coarsening
    from_Se: Coarsening


def build_Se(c: Coarsening) -> SeDecomposition:
    exc = set(c.exceptional())
    src = c.source
    # exceptional closure purity
    for e in exc:
        for s in src.strata:
            if s.singular and src.leq(s.id, e) and s.id not in exc:
                raise SkeletonNotClosed(f"singular stratum {s.id} lies below exceptional {e}")
    if isinstance(src, Stratification):
        carrier = dict(src.carrier)
        for e in exc:
            for simp in src.stratum(e).carrier_simplices:
                carrier[simp] = src.n
        for simp, i in carrier.items():
            if i < src.n:
                for f in faces(simp, include_self=False):
                    if carrier[f] > i:
                        raise SkeletonNotClosed(f"{f!r} absorbed but coface {simp!r} is singular")
        Se = Stratification(src.complex, src.n, carrier, src.meta)
        to_Se = build_coarsening(src, Se)
        from_Se = build_coarsening(Se, c.target)
    else:
        Se, to_map, from_map = _abstract_Se(c, exc)
        to_Se = coarsening_from_map(src, Se, to_map)
        from_Se = coarsening_from_map(Se, c.target, from_map)
    for s in src.singular_strata():
        if s.id not in exc:
            img = Se.stratum(to_Se.iota[s.id])
            if img.formal_dim != s.formal_dim or to_Se.classification[s.id] != SOURCE:
                raise ChainFailure(f"stratum {s.id} is not a source stratum in S_e")
    if from_Se.exceptional():
        raise ChainFailure("S_e -> T still has exceptional strata")
    return SeDecomposition(Se, to_Se, from_Se)


def _abstract_Se(c, exc):
    src, tgt = c.source, c.target
    kept = [s for s in src.singular_strata() if s.id not in exc]
    regs = tgt.regular_strata()
    new, to_map, from_map = [], {}, {}
    order = sorted(kept, key=lambda s: (s.formal_dim, s.id))
    k = 0
    for s in order:
        new.append(Stratum(k, s.formal_dim, s.codim, False, s.carrier_simplices, s.label))
        to_map[s.id] = k
        from_map[k] = c.iota[s.id]
        k += 1
    for t in regs:
        new.append(Stratum(k, t.formal_dim, 0, True, (), t.label))
        from_map[k] = t.id
        for s in src.strata:
            if (s.regular or s.id in exc) and c.iota[s.id] == t.id:
                to_map[s.id] = k
        k += 1
    below = {}
    for a in new:
        below[a.id] = set()
    for s in src.strata:
        for q in src.strata:
            if src.leq(s.id, q.id):
                below[to_map[q.id]].add(to_map[s.id])
    return StrataPoset(src.n, new, below), to_map, from_map


# -- simple chains -------------------------------------------------------------

def _heights(poset, ids):
    ids = list(ids)
    h = {}
    for q in sorted(ids, key=lambda i: poset.stratum(i).formal_dim):
        h[q] = max((h[s] + 1 for s in ids if s in h and poset.lt(s, q)), default=0)
    return h


def simple_chain(c: Coarsening):
    """Factor c into simple coarsenings S = R_0 -> ... -> R_k = T.

    The strata of height >= 1 in the exceptional/fountain subposet are moved
    up to the skeleton index of their image; the remaining bottom layer is an
    antichain, so the second step is simple, and the first step is split
    again recursively.
    """
    if c.is_identity():
        return []
    if is_simple(c):
        return [c]
    src = c.source
    if not isinstance(src, Stratification):
        raise ChainFailure("simple_chain needs triangulated stratifications")
    V = [s for s, k in c.classification.items() if k in (EXCEPTIONAL, ONE_EXCEPTIONAL, FOUNTAIN)]
    h = _heights(src, V)
    lifted = {s for s in V if h[s] >= 1}
    carrier = dict(src.carrier)
    for s in lifted:
        idx = c.target.stratum(c.iota[s]).formal_dim
        for simp in src.stratum(s).carrier_simplices:
            carrier[simp] = idx
    try:
        R = Stratification(src.complex, src.n, carrier, src.meta)
        first = build_coarsening(src, R)
        second = build_coarsening(R, c.target)
    except Exception as exc:  # surfaced with context
        raise ChainFailure(f"merge step failed: {exc}") from exc
    if not is_simple(second):
        raise ChainFailure("upper step is not simple")
    return simple_chain(first) + [second]


def chain_composes(chain, c) -> bool:
    if not chain:
        return c.is_identity()
    acc = chain[0]
    for step in chain[1:]:
        acc = compose(acc, step)
    return acc.iota == c.iota


# -- hypothesis report -------------------------------------------------------

@dataclass
class HypothesisReport:
    k_perversity: bool
    k_certificate: str
    below_top: bool
    exceptional: list
    one_exceptional: list
    link_facts: dict
    normal: bool
    connected: bool
    pre_thom_mather: bool
    applies: dict

    def lines(self):
        out = [
            f"K-perversity={'yes' if self.k_perversity else 'no'}"
            + (f" ({self.k_certificate})" if self.k_certificate else ""),
            f"p<=t={'yes' if self.below_top else 'no'}",
            "exceptional=[" + ",".join(map(str, self.exceptional)) + "]",
            "one_exceptional=[" + ",".join(map(str, self.one_exceptional)) + "]",
        ]
        for sid, (status, why) in sorted(self.link_facts.items()):
            out.append(f"link_pi1[{sid}]={status} via {why}")
        out.append(f"normal={'yes' if self.normal else 'no'} connected={'yes' if self.connected else 'no'} "
                   f"pre_thom_mather={'yes' if self.pre_thom_mather else 'no'}")
        for thm in ("A", "B", "A-pullback", "B-pullback"):
            ok, why = self.applies[thm]
            out.append(f"theorem {thm}: {'applies' if ok else 'does not apply'} ({why})")
        return out


def theorem_hypothesis_report(c: Coarsening, p: Perversity, link_fact=None, meta=None,
                              q: Perversity | None = None):
    """Which invariance theorems apply to (c, p).

    ``link_fact(sid)`` returns (status, reason) for the cone on the link of
    an exceptional stratum, status in Trivial/Nontrivial/Unknown.  ``meta``
    supplies the declared normal/connected/pre_thom_mather flags; triangulated
    inputs fall back to computed normality and connectivity.  ``q``, when
    given, is the target perversity whose pullback p is.
    """
    meta = dict(getattr(c.source, "meta", {}) or {}) | dict(meta or {})
    kc = is_K_perversity(c, p)
    below = p <= top_perversity(c.source)
    exc = c.exceptional()
    one = c.one_exceptional()
    facts = {}
    for e in exc:
        facts[e] = link_fact(e) if link_fact else ("Unknown", "no link fact supplied")
    normal = meta.get("normal")
    connected = meta.get("connected")
    if isinstance(c.source, Stratification):
        if normal is None:
            from .strat import cs_diagnostics
            normal = cs_diagnostics(c.source).normal
        if connected is None:
            connected = len(c.source.complex.connected_components()) == 1
    normal, connected = bool(normal), bool(connected)
    ptm = bool(meta.get("pre_thom_mather", False))
    applies = {}
    base_ok = kc.ok and below
    if not kc.ok:
        base_why = f"not a K-perversity: {kc.rule} at {kc.pair}"
    elif not below:
        base_why = "p is not <= t"
    else:
        base_why = ""
    if exc:
        applies["A"] = (False, "exceptional strata present")
    else:
        applies["A"] = (base_ok, base_why or "K-perversity, p <= t, no exceptional strata")

    def theorem_b():
        if not base_ok:
            return False, base_why
        if not (normal and connected and ptm):
            missing = [n for n, v in (("normal", normal), ("connected", connected),
                                      ("pre-Thom-Mather", ptm)) if not v]
            return False, "missing " + ", ".join(missing)
        bad = [e for e in exc if facts[e][0] != "Trivial"]
        if bad:
            return False, "exceptional link pi1 not trivial at " + ",".join(map(str, bad))
        return True, "normal connected pre-Thom-Mather, exceptional link cones simply connected"

    applies["B"] = theorem_b()
    if q is None:
        applies["A-pullback"] = (False, "no target perversity given")
        applies["B-pullback"] = (False, "no target perversity given")
    else:
        q_ok = q <= top_perversity(c.target)
        pulled = p == pullback(c, q)
        if not (q_ok and pulled):
            why = "q is not <= t" if not q_ok else "p is not the pullback of q"
            applies["A-pullback"] = (False, why)
            applies["B-pullback"] = (False, why)
        else:
            applies["A-pullback"] = (not exc, "no exceptional strata" if not exc else "exceptional strata present")
            if one:
                applies["B-pullback"] = (False, "1-exceptional strata present")
            else:
                applies["B-pullback"] = theorem_b()
    return HypothesisReport(kc.ok, "" if kc.ok else kc.detail, below, exc, one, facts,
                            normal, connected, ptm, applies)

