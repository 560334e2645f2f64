"""Perversities on strata: extended integers, duals, transfers and checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import total_ordering

from .errors import IndeterminateInfinity, StratumMismatch
from .simplex import simplex


@total_ordering
class ExtInt:
    """An integer or one of -inf, +inf."""

    __slots__ = ("_v", "_inf")

    def __init__(self, value=0):
        if isinstance(value, ExtInt):
            self._v, self._inf = value._v, value._inf
            return
        if isinstance(value, str):
            t = value.strip().lower()
            if t in ("inf", "+inf", "oo", "∞"):
                self._v, self._inf = 0, 1
                return
            if t in ("-inf", "-oo", "-∞"):
                self._v, self._inf = 0, -1
                return
            value = int(t)
        if isinstance(value, float):
            if value == float("inf"):
                self._v, self._inf = 0, 1
                return
            if value == float("-inf"):
                self._v, self._inf = 0, -1
                return
            if value != int(value):
                raise ValueError(f"{value} is not an integer")
            value = int(value)
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot make an extended integer from {value!r}")
        self._v, self._inf = value, 0

    @property
    def finite(self):
        return self._inf == 0

    @property
    def is_pos_inf(self):
        return self._inf == 1

    @property
    def is_neg_inf(self):
        return self._inf == -1

    def __int__(self):
        if not self.finite:
            raise OverflowError("infinite value")
        return self._v

    def _key(self):
        return (self._inf, self._v)

    def __eq__(self, other):
        try:
            other = ExtInt(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        other = ExtInt(other)
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key()) if not self.finite else hash(self._v)

    def __add__(self, other):
        other = ExtInt(other)
        if self._inf and other._inf and self._inf != other._inf:
            raise IndeterminateInfinity("inf + (-inf)")
        if self._inf or other._inf:
            return self if self._inf else other
        return ExtInt(self._v + other._v)

    __radd__ = __add__

    def __neg__(self):
        out = ExtInt(-self._v)
        out._inf = -self._inf
        return out

    def __sub__(self, other):
        return self + (-ExtInt(other))

    def __rsub__(self, other):
        return ExtInt(other) + (-self)

    def __str__(self):
        if self._inf == 1:
            return "inf"
        if self._inf == -1:
            return "-inf"
        return str(self._v)

    def __repr__(self):
        return f"ExtInt({self})"


INF = ExtInt("inf")
NEG_INF = ExtInt("-inf")


def ext(v) -> ExtInt:
    return v if isinstance(v, ExtInt) else ExtInt(v)


def ext_min(values):
    """Order-theoretic infimum in the extended integers; inf of nothing is inf."""
    out = INF
    for v in values:
        if ext(v) < out:
            out = ext(v)
    return out


class Perversity:
    """A map from stratum ids to extended integers, zero on regular strata."""

    def __init__(self, poset, values, name=""):
        self.poset = poset
        self.name = name
        vals = {}
        for s in poset.strata:
            if s.regular:
                v = values.get(s.id, 0)
                if ext(v) != 0:
                    raise ValueError(f"regular stratum {s.id} must have value 0")
                vals[s.id] = ExtInt(0)
            else:
                if s.id not in values:
                    raise ValueError(f"no value for singular stratum {s.id}")
                vals[s.id] = ext(values[s.id])
        self.values = vals
        self.notes = []

    def __getitem__(self, sid):
        return self.values[sid]

    def items(self):
        return sorted(self.values.items())

    def singular_items(self):
        return [(k, v) for k, v in self.items() if not self.poset.stratum(k).regular]

    def __le__(self, other):
        return all(self[k] <= other[k] for k in self.values)

    def __eq__(self, other):
        if not isinstance(other, Perversity):
            return NotImplemented
        return self.values == other.values

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        body = ", ".join(f"{k}:{v}" for k, v in self.singular_items())
        return f"Perversity({self.name or '?'}; {body})"

    def map(self, fn, name=""):
        return Perversity(self.poset, {k: fn(k, v) for k, v in self.values.items()
                                       if not self.poset.stratum(k).regular}, name)

    def is_finite(self):
        return all(v.finite for v in self.values.values())


# -- families ----------------------------------------------------------------

def top_value(poset, sid) -> ExtInt:
    s = poset.stratum(sid)
    return ExtInt(0) if s.regular else ExtInt(s.codim - 2)


def top_perversity(poset) -> Perversity:
    return Perversity(poset, {s.id: s.codim - 2 for s in poset.singular_strata()}, "t")


def constant_perversity(poset, k) -> Perversity:
    return Perversity(poset, {s.id: k for s in poset.singular_strata()}, f"{k}")


def zero_perversity(poset) -> Perversity:
    return constant_perversity(poset, 0)


def dual(p: Perversity) -> Perversity:
    t = top_perversity(p.poset)
    return Perversity(p.poset, {k: t[k] - v for k, v in p.singular_items()},
                      f"D{p.name}" if p.name else "")


@dataclass(frozen=True)
class CodimPerversityFn:
    """A function on codimensions given by its values f(0), f(1), ..., f(m).

    Codimensions past the listed range repeat the last value unless a
    callable is supplied.
    """

    values: tuple
    rule: object = None

    def __post_init__(self):
        if self.rule is None and (not self.values or self.values[0] != 0):
            raise ValueError("f(0) must be 0")
        if self.rule is not None and self.rule(0) != 0:
            raise ValueError("f(0) must be 0")

    def __call__(self, k):
        if self.rule is not None:
            return self.rule(k)
        return self.values[k] if k < len(self.values) else self.values[-1]

    @classmethod
    def of(cls, fn):
        return cls((), fn)

    @classmethod
    def constant(cls, k):
        return cls.of(lambda c: 0 if c == 0 else k)

    @classmethod
    def top(cls):
        return cls.of(lambda c: 0 if c == 0 else c - 2)


def from_codim_fn(poset, f) -> Perversity:
    if not isinstance(f, CodimPerversityFn):
        f = CodimPerversityFn.of(f) if callable(f) else CodimPerversityFn(tuple(f))
    return Perversity(poset, {s.id: f(s.codim) for s in poset.singular_strata()})


def growing_check(f, n) -> bool:
    if not callable(f):
        f = CodimPerversityFn(tuple(f))
    for k in range(1, n):
        a, b = ext(f(k)), ext(f(k + 1))
        if not (a <= b <= a + 1):
            return False
    return True


def is_GM(f, n) -> bool:
    if not callable(f):
        f = CodimPerversityFn(tuple(f))
    return all(ext(f(k)) == 0 for k in range(3)) and growing_check(f, n)


# -- transfers along a coarsening ------------------------------------------
# A coarsening here is anything with .source, .target (posets) and .iota
# (dict source id -> target id).

def pullback(coarsening, q: Perversity) -> Perversity:
    src = coarsening.source
    return Perversity(src, {s.id: q[coarsening.iota[s.id]] for s in src.singular_strata()},
                      f"i*{q.name}" if q.name else "")


def pushforward(coarsening, p: Perversity) -> Perversity:
    tgt = coarsening.target
    pre = {}
    for sid, tid in coarsening.iota.items():
        pre.setdefault(tid, []).append(p[sid])
    values, notes = {}, []
    for t in tgt.singular_strata():
        vals = pre.get(t.id, [])
        values[t.id] = ext_min(vals)
        if not vals:
            notes.append(f"stratum {t.id}: empty preimage, value inf")
        elif any(not v.finite for v in vals) and any(v.finite for v in vals):
            notes.append(f"stratum {t.id}: infimum over a mix of finite and infinite values")
    out = Perversity(tgt, values, f"i_*{p.name}" if p.name else "")
    out.notes = notes
    return out


@dataclass
class KCheck:
    ok: bool
    rule: str = ""
    pair: tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.ok


def is_K_perversity(coarsening, p: Perversity) -> KCheck:
    src = coarsening.source
    iota = coarsening.iota
    ids = src.ids
    for s in ids:
        for q in ids:
            if iota[s] != iota[q]:
                continue
            if src.leq(s, q):
                ts, tq = top_value(src, s), top_value(src, q)
                lo, hi = p[q], p[q] + (ts - tq)
                if not (lo <= p[s] <= hi):
                    return KCheck(False, "K1", (s, q),
                                  f"need {lo} <= p(S{s})={p[s]} <= {hi}")
            if src.stratum(s).formal_dim == src.stratum(q).formal_dim and p[s] != p[q]:
                return KCheck(False, "K2", (s, q), f"p(S{s})={p[s]} != p(S{q})={p[q]}")
    return KCheck(True)


def link_induced_perversity(p: Perversity, strat, sigma, link) -> Perversity:
    """Carry p to the link of sigma: each link stratum takes the value of the
    ambient stratum containing its join with sigma.  The apex value is kept
    on the result as ``apex_value``."""
    s = simplex(sigma)
    values = {}
    for L in link.strata:
        targets = {strat.stratum_of[simplex(t + s)] for t in L.carrier_simplices}
        vals = {p[t] for t in targets}
        if len(vals) != 1:
            raise StratumMismatch(f"link stratum {L.id} meets ambient strata {sorted(targets)}")
        v = vals.pop()
        if L.regular:
            if not all(strat.stratum(t).regular for t in targets):
                raise StratumMismatch(f"regular link stratum {L.id} over a singular stratum")
            continue
        values[L.id] = v
    out = Perversity(link, values, f"{p.name}|link" if p.name else "")
    out.apex_value = p[strat.stratum_of[s]]
    return out


# -- random generators -------------------------------------------------------

def random_perversity(poset, seed, allow_inf=True) -> Perversity:
    rng = random.Random(seed)
    vals = {}
    for s in poset.singular_strata():
        t = s.codim - 2
        if allow_inf and rng.random() < 0.1:
            vals[s.id] = rng.choice([INF, NEG_INF])
        else:
            vals[s.id] = rng.randint(-3, t + 3)
    return Perversity(poset, vals, f"rand{seed}")


def random_K_perversity(coarsening, seed, bounded=False, allow_inf=False, tries=50):
    """Sample a K-perversity by filling windows in decreasing dimension.

    With ``bounded`` the result also satisfies p <= t.  Returns None when no
    sample passes the check (for instance with 1-exceptional strata).
    """
    rng = random.Random(seed)
    src = coarsening.source
    iota = coarsening.iota
    order = sorted(src.strata, key=lambda s: (-s.formal_dim, s.id))
    for _ in range(tries):
        vals = {}
        for s in order:
            if s.regular:
                vals[s.id] = ExtInt(0)
                continue
            t = ExtInt(s.codim - 2)
            same = [q for q in vals if iota[q] == iota[s.id]]
            twin = [q for q in same if src.stratum(q).formal_dim == s.formal_dim]
            if twin:
                vals[s.id] = vals[twin[0]]
                continue
            lo, hi = NEG_INF, INF
            for q in same:
                if src.leq(s.id, q):
                    lo = max(lo, vals[q])
                    hi = min(hi, vals[q] + (t - top_value(src, q)))
            if bounded:
                hi = min(hi, t)
            if lo > hi:
                break
            a = lo if lo.finite else min(ExtInt(-3), hi) if hi.finite else ExtInt(-3)
            b = hi if hi.finite else max(t + 3, a)
            if allow_inf and lo == NEG_INF and rng.random() < 0.1:
                vals[s.id] = NEG_INF
            elif allow_inf and hi == INF and not bounded and rng.random() < 0.1:
                vals[s.id] = INF
            elif not lo.finite and lo == INF:
                vals[s.id] = INF
            else:
                vals[s.id] = ExtInt(rng.randint(int(a), int(b)))
        else:
            p = Perversity(src, {k: v for k, v in vals.items()
                                 if not src.stratum(k).regular}, f"K{seed}")
            if is_K_perversity(coarsening, p):
                return p
    return None
