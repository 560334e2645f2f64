"""Filtrations of simplicial complexes by closed subcomplexes.

A stratification stores, for every simplex, its carrier index (the least i
with the simplex inside X_i).  Strata are the components of the simplices of
one carrier index under the face relation; because open simplices of one
index can only touch through common faces, these are exactly the connected
components of X_i minus X_{i-1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .chains import betti_signature
from .errors import (
    AlreadyAPointStratum,
    DifferentComplex,
    EmptyIntersectionWithRegularPart,
    NotASimplex,
    NotNested,
    RegularSimplex,
    SingularEqualsTotal,
    SkeletonNotSubcomplex,
)
from .simplex import (
    SimplicialComplex,
    barycentric_subdivision,
    cone_complex,
    faces,
    join_complex,
    lexkey,
    link_of_simplex,
    simplex,
    skey,
    sphere,
    vkey,
)


@dataclass(frozen=True)
class Stratum:
    id: int
    formal_dim: int
    codim: int
    regular: bool
    carrier_simplices: tuple = ()
    label: str = ""

    @property
    def dim(self):
        return self.formal_dim

    @property
    def singular(self):
        return not self.regular


class StrataPoset:
    """Strata with formal dimensions and the closure order.

    This is the part of a stratification that perversities and coarsenings
    need; symbolic spaces build it directly.
    """

    def __init__(self, n, strata, below):
        self.n = n
        self.strata = tuple(strata)
        self._by_id = {s.id: s for s in self.strata}
        # below[q] = ids s with s <= q (reflexive)
        self._below = {k: frozenset(v) | {k} for k, v in below.items()}
        for s in self.strata:
            self._below.setdefault(s.id, frozenset({s.id}))

    @property
    def ids(self):
        return [s.id for s in self.strata]

    def stratum(self, sid) -> Stratum:
        return self._by_id[sid]

    def leq(self, a, b) -> bool:
        return a in self._below[b]

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def singular_strata(self):
        return [s for s in self.strata if not s.regular]

    def regular_strata(self):
        return [s for s in self.strata if s.regular]

    def depth_of(self, ids=None) -> int:
        """Longest strict chain length inside the given subset of strata."""
        ids = list(self.ids if ids is None else ids)
        order = sorted(ids, key=lambda i: (self.stratum(i).formal_dim, i))
        height = {}
        for q in order:
            h = 0
            for s in ids:
                if s in height and self.lt(s, q):
                    h = max(h, height[s] + 1)
            height[q] = h
        # dimension order may not be a linear extension when anomalies exist
        changed = True
        while changed:
            changed = False
            for q in ids:
                for s in ids:
                    if self.lt(s, q) and height[s] + 1 > height[q]:
                        height[q] = height[s] + 1
                        changed = True
                        if height[q] > len(ids):
                            raise ValueError("cycle in strata order")
        return max(height.values(), default=0)

    @property
    def depth(self):
        return self.depth_of()

    def frontier_anomalies(self):
        out = []
        for q in self.strata:
            for s in self.strata:
                if self.lt(s.id, q.id) and s.formal_dim >= q.formal_dim:
                    out.append((s.id, q.id))
        return out

    def describe(self, sid):
        s = self.stratum(sid)
        return s.label or f"S{sid}"


class Stratification(StrataPoset):
    """A filtration X_0 <= ... <= X_n = X of a finite complex."""

    def __init__(self, complex: SimplicialComplex, n: int, carrier: dict, meta=None):
        self.complex = complex
        self.carrier = dict(carrier)
        self.meta = dict(meta or {})
        strata, of = _components(complex, self.carrier, n)
        self.stratum_of = of
        below = _closure_order(strata, of)
        super().__init__(n, strata, below)

    # skeleta -------------------------------------------------------------
    def skeleton(self, i) -> frozenset:
        return frozenset(s for s, c in self.carrier.items() if c <= i)

    def skeleton_facets(self, i):
        return SimplicialComplex(self.skeleton(i)).facets if self.skeleton(i) else ()

    @cached_property
    def singular_set(self) -> frozenset:
        return self.skeleton(self.n - 1)

    def carrier_index(self, sigma) -> int:
        s = simplex(sigma)
        if s not in self.carrier:
            raise NotASimplex(f"{s!r} not in the complex")
        return self.carrier[s]

    def same_filtration(self, other) -> bool:
        return self.n == other.n and self.carrier == other.carrier

    def stratum_key(self, sid):
        s = self.stratum(sid)
        return (s.formal_dim, lexkey(s.carrier_simplices[0]))

    @cached_property
    def is_full(self) -> bool:
        """Every skeleton is a full subcomplex: a simplex whose vertices
        all lie in X_i lies in X_i."""
        c = self.carrier
        return all(c[s] == max(c[(v,)] for v in s) for s in c)

    def __repr__(self):
        dims = [s.formal_dim for s in self.strata]
        return f"Stratification(n={self.n}, strata dims={dims})"


def subdivided(strat: Stratification):
    """The filtration carried to the barycentric subdivision.

    Returns the new stratification and the map from old stratum ids to new
    ones.  A chain of simplices sits in the open star of its top simplex, so
    it inherits that simplex's carrier index.  All skeleta of the result are
    full subcomplexes.
    """
    sd, top = barycentric_subdivision(strat.complex)
    carrier = {s: strat.carrier[top[s]] for s in sd.all_simplices}
    R = Stratification(sd, strat.n, carrier, dict(strat.meta, subdivided=True))
    idmap = {strat.stratum_of[top[s]]: R.stratum_of[s] for s in sd.all_simplices if len(s) == 1}
    return R, idmap


def _components(K, carrier, n):
    by_index = {}
    for s in K.all_simplices:
        by_index.setdefault(carrier[s], []).append(s)
    comps = []
    for i, simps in by_index.items():
        members = set(simps)
        parent = {s: s for s in simps}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s in simps:
            if len(s) > 1:
                for j in range(len(s)):
                    f = s[:j] + s[j + 1:]
                    if f in members:
                        a, b = find(f), find(s)
                        if a != b:
                            parent[a] = b
        groups = {}
        for s in simps:
            groups.setdefault(find(s), []).append(s)
        for g in groups.values():
            g.sort(key=lexkey)
            comps.append((i, tuple(g)))
    # there may be components whose members are only linked through a face of
    # codimension > 1 with an intermediate face of another index; merge them
    comps = _merge_skipped(comps, carrier)
    comps.sort(key=lambda c: (c[0], lexkey(c[1][0])))
    strata, of = [], {}
    for k, (i, g) in enumerate(comps):
        strata.append(Stratum(k, i, n - i, i == n, g))
        for s in g:
            of[s] = k
    return strata, of


def _merge_skipped(comps, carrier):
    """Join components of one index related by a face relation of any codimension."""
    owner = {}
    for k, (_, g) in enumerate(comps):
        for s in g:
            owner[s] = k
    parent = list(range(len(comps)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, (i, g) in enumerate(comps):
        for s in g:
            for f in faces(s, include_self=False):
                if carrier[f] == i and owner[f] != k:
                    a, b = find(owner[f]), find(k)
                    if a != b:
                        parent[a] = b
    merged = {}
    for k, (i, g) in enumerate(comps):
        merged.setdefault(find(k), (i, []))[1].extend(g)
    return [(i, tuple(sorted(g, key=lexkey))) for i, g in merged.values()]


def _closure_order(strata, of):
    closure_strata = {}
    closures = {}
    for q in strata:
        cl = set()
        for s in q.carrier_simplices:
            cl.update(faces(s))
        closures[q.id] = cl
        closure_strata[q.id] = {of[f] for f in cl}
    below = {}
    for q in strata:
        cl = closures[q.id]
        below[q.id] = {
            s for s in closure_strata[q.id]
            if all(c in cl for c in strata[s].carrier_simplices)
        }
    return below


# -- construction ---------------------------------------------------------

def _closed(simps):
    out = set()
    for s in simps:
        out.update(faces(simplex(s)))
    return out


def build_stratification(X: SimplicialComplex, n: int, skeleta, meta=None, strict=True):
    """Build from a dict {i: facet list} (or a sequence indexed from 0).

    Skeleta not listed are filled in from the nearest listed lower index;
    X_n is always the whole complex.
    """
    if not isinstance(skeleta, dict):
        skeleta = {i: f for i, f in enumerate(skeleta)}
    if n < X.dim:
        raise ValueError(f"formal dimension {n} below simplicial dimension {X.dim}")
    sk = {}
    for i, fs in skeleta.items():
        if i < 0 or i > n:
            raise NotNested(f"skeleton index {i} outside 0..{n}")
        cl = _closed(fs) if fs else set()
        for s in cl:
            if s not in X:
                raise SkeletonNotSubcomplex(f"skeleton {i}: {s!r} is not a simplex of X")
        sk[i] = cl
    full = set(X.all_simplices)
    if n in sk and sk[n] != full:
        raise NotNested("X_n must be the whole complex")
    prev = set()
    levels = []
    for i in range(n + 1):
        cur = sk.get(i, prev) if i < n else full
        if not prev <= cur:
            raise NotNested(f"X_{i - 1} is not contained in X_{i}")
        levels.append(cur)
        prev = cur
    if strict and not X.is_empty() and levels[n - 1] == full:
        raise SingularEqualsTotal("X_{n-1} equals X_n")
    carrier = {}
    for i in range(n, -1, -1):
        for s in levels[i]:
            carrier[s] = i
    return Stratification(X, n, carrier, meta)


def from_carrier(X, n, carrier, meta=None, strict=True):
    if strict and not X.is_empty() and all(c < n for c in carrier.values()):
        raise SingularEqualsTotal("no regular simplex")
    for s, c in carrier.items():
        for f in faces(s, include_self=False):
            if carrier[f] > c:
                raise NotNested(f"{f!r} has index {carrier[f]} above its coface {s!r}")
    return Stratification(X, n, carrier, meta)


def trivial_stratification(X: SimplicialComplex, n=None):
    n = X.dim if n is None else n
    return Stratification(X, n, {s: n for s in X.all_simplices})


def carrier_index(strat: Stratification, sigma) -> int:
    return strat.carrier_index(sigma)


def is_stratified_coarsening(S: Stratification, T: Stratification):
    """Return (ok, stratum map or reason)."""
    if S.complex != T.complex:
        raise DifferentComplex("stratifications live on different complexes")
    if S.n != T.n:
        return False, "formal dimensions differ"
    image = {}
    for s in S.strata:
        targets = {T.stratum_of[c] for c in s.carrier_simplices}
        if len(targets) != 1:
            return False, f"stratum {s.id} meets T-strata {sorted(targets)}"
        t = targets.pop()
        if T.stratum(t).codim > s.codim:
            return False, f"codim of stratum {s.id} increases under the map"
        image[s.id] = t
    return True, image


def induced_stratification(strat: Stratification, U, open_complement=False):
    """Restrict to a subcomplex U, or to the complement of U when
    ``open_complement`` is set (modelled by its spine in Sd X)."""
    if not open_complement:
        Usimp = _closed(U.all_simplices if isinstance(U, SimplicialComplex) else U)
        Uc = SimplicialComplex(Usimp)
        carrier = {s: strat.carrier[s] for s in Uc.all_simplices}
        if not any(c == strat.n for c in carrier.values()):
            raise EmptyIntersectionWithRegularPart("U misses the regular part")
        return Stratification(Uc, strat.n, carrier, strat.meta)
    removed = _closed(U.all_simplices if isinstance(U, SimplicialComplex) else U)
    keep = [s for s in strat.complex.all_simplices if s not in removed]
    if not any(strat.carrier[s] == strat.n for s in keep):
        raise EmptyIntersectionWithRegularPart("complement misses the regular part")
    sd_complex = _chain_complex(keep, strat.complex.cofaces, None)
    carrier = {ch: strat.carrier[max(ch, key=len)] for ch in sd_complex.all_simplices}
    return Stratification(sd_complex, strat.n, carrier, strat.meta)


def _chain_complex(vertices, cofaces, max_len):
    """Full subcomplex of Sd on the given simplices: all chains among them."""
    vset = set(vertices)
    chains = []

    def grow(chain):
        top = chain[-1]
        extended = False
        if max_len is None or len(chain) < max_len:
            for c in cofaces[top]:
                if c != top and c in vset:
                    grow(chain + (c,))
                    extended = True
        if not extended:
            chains.append(chain)

    for v in sorted(vset, key=skey):
        grow((v,))
    return SimplicialComplex(chains)


def cone_stratification(strat: Stratification, apex="v"):
    K = cone_complex(strat.complex, apex)
    carrier = {(apex,): 0}
    for s, c in strat.carrier.items():
        carrier[s] = c + 1
        carrier[simplex(s + (apex,))] = c + 1
    # the base is the frontier of the closed cone; diagnostics skip it
    meta = {"apex": apex, "boundary": frozenset(strat.complex.all_simplices)}
    return Stratification(K, strat.n + 1, carrier, meta)


def join_sphere_stratification(m: int, strat: Stratification, labels=None):
    labels = [f"u{k}" for k in range(m + 2)] if labels is None else list(labels)
    Sm = sphere(m, labels)
    K = join_complex(Sm, strat.complex)
    carrier = {}
    for s in Sm.all_simplices:
        carrier[s] = m
    for s, c in strat.carrier.items():
        idx = m + 1 + c
        carrier[s] = idx
        for t in Sm.all_simplices:
            carrier[simplex(s + t)] = idx
    return Stratification(K, m + 1 + strat.n, carrier, {"sphere": tuple(labels)})


def point_refinement(strat: Stratification, x):
    v = simplex([x])
    if v not in strat.carrier:
        raise NotASimplex(f"{x!r} is not a vertex")
    sid = strat.stratum_of[v]
    if len(strat.stratum(sid).carrier_simplices) == 1:
        raise AlreadyAPointStratum(f"{{{x!r}}} is already a stratum")
    carrier = dict(strat.carrier)
    carrier[v] = 0
    return Stratification(strat.complex, strat.n, carrier, strat.meta)


def stratum_link(strat: Stratification, sigma, allow_regular=False):
    """Link of a simplex with the shifted induced filtration.

    A link simplex tau is placed at level j when tau*sigma lies in
    X_{j + dim sigma + 1}; levels that would be negative are folded into 0.
    """
    s = strat.complex.check(sigma)
    c = strat.carrier[s]
    if c == strat.n and not allow_regular:
        raise RegularSimplex(f"{s!r} lies in a regular stratum")
    L = link_of_simplex(strat.complex, s)
    shift = len(s)  # dim sigma + 1
    nL = strat.n - shift
    carrier = {}
    for t in L.all_simplices:
        j = strat.carrier[simplex(t + s)] - shift
        carrier[t] = max(j, 0)
    if nL < 0:
        nL = 0
    return Stratification(L, max(nL, L.dim if not L.is_empty() else 0), carrier, {"link_of": s})


def link_signature(strat: Stratification, sigma):
    """Reduced integral homology of each skeleton of the stratified link."""
    L = stratum_link(strat, sigma, allow_regular=True)
    sig = []
    prev_set = None
    prev = None
    for j in range(L.n + 1):
        sk = L.skeleton(j)
        if sk == prev_set:
            sig.append(prev)
            continue
        prev = betti_signature(SimplicialComplex(sk)) if sk else None
        prev_set = sk
        sig.append(prev)
    return tuple(sig)


@dataclass
class Diagnostics:
    frontier_anomalies: list = field(default_factory=list)
    frontier_failures: list = field(default_factory=list)
    link_inconsistencies: list = field(default_factory=list)
    non_normal: list = field(default_factory=list)
    codim_one: list = field(default_factory=list)

    @property
    def links_consistent(self):
        return not self.link_inconsistencies

    @property
    def normal(self):
        return not self.non_normal

    @property
    def passed(self):
        return self.links_consistent and not self.frontier_failures and not self.frontier_anomalies

    def lines(self):
        out = [
            f"frontier_anomalies={len(self.frontier_anomalies)}",
            f"frontier_failures={len(self.frontier_failures)}",
            f"link_consistency={'pass' if self.links_consistent else 'FAIL'}",
        ]
        for rec in self.link_inconsistencies:
            out.append(
                "  stratum={sid} dim={d} level={j} {a}:{sa} vs {b}:{sb}".format(**rec)
            )
        out.append(f"normal={'yes' if self.normal else 'no'}")
        for sid, comps in self.non_normal:
            out.append(f"  stratum={sid} link_components={comps}")
        out.append("codim1_strata=[" + ",".join(map(str, self.codim_one)) + "]")
        return out


def _fmt_simplex(s):
    return "(" + " ".join(map(str, s)) + ")"


def _fmt_sig(sig):
    if sig is None:
        return "empty"
    parts = []
    for r, t in sig:
        parts.append(str(r) if not t else f"{r}+T{'x'.join(map(str, t))}")
    return "(" + ",".join(parts) + ")"


def cs_diagnostics(strat: Stratification) -> Diagnostics:
    d = Diagnostics()
    d.frontier_anomalies = strat.frontier_anomalies()
    # frontier condition: meeting a closure forces containment
    for q in strat.strata:
        cl = set()
        for s in q.carrier_simplices:
            cl.update(faces(s))
        for s in strat.strata:
            if s.id == q.id:
                continue
            hits = [c in cl for c in s.carrier_simplices]
            if any(hits) and not all(hits):
                d.frontier_failures.append((s.id, q.id))
    boundary = strat.meta.get("boundary", frozenset())
    for st in strat.singular_strata():
        seen = {}
        for sim in st.carrier_simplices:
            if sim in boundary:
                continue
            k = len(sim) - 1
            sig = link_signature(strat, sim)
            if k not in seen:
                seen[k] = (sim, sig)
                continue
            ref, rsig = seen[k]
            if sig != rsig:
                j = next(j for j in range(max(len(sig), len(rsig)))
                         if (sig[j] if j < len(sig) else None) != (rsig[j] if j < len(rsig) else None))
                d.link_inconsistencies.append({
                    "sid": st.id, "d": k, "j": j,
                    "a": _fmt_simplex(ref), "sa": _fmt_sig(rsig[j] if j < len(rsig) else None),
                    "b": _fmt_simplex(sim), "sb": _fmt_sig(sig[j] if j < len(sig) else None),
                })
                seen[k] = (ref, rsig)
                break
        if st.singular:
            top = max(len(s) for s in st.carrier_simplices)
            for sim in st.carrier_simplices:
                if len(sim) == top and sim not in boundary:
                    L = link_of_simplex(strat.complex, sim)
                    comps = len(L.connected_components()) if not L.is_empty() else 0
                    if comps != 1:
                        d.non_normal.append((st.id, comps))
                    break
            if st.codim == 1:
                d.codim_one.append(st.id)
    return d


# -- regular part ---------------------------------------------------------

@dataclass
class Spine:
    complex: SimplicialComplex
    strat: Stratification

    def components(self):
        return self.complex.connected_components()


def regular_spine(strat: Stratification, max_dim=None) -> Spine:
    regular = [s for s, c in strat.carrier.items() if c == strat.n]
    max_len = None if max_dim is None else max_dim + 1
    K = _chain_complex(regular, strat.complex.cofaces, max_len)
    return Spine(K, strat)


def regular_components_bruteforce(strat: Stratification) -> int:
    """Components of X minus Sigma via facets glued along regular faces."""
    facets = [f for f in strat.complex.facets if strat.carrier[f] == strat.n]
    parent = {f: f for f in facets}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # facets in Sigma contribute nothing; regular simplices inside singular
    # facets cannot exist because skeleta are closed
    for i, f in enumerate(facets):
        fs = set(f)
        for g in facets[i + 1:]:
            common = tuple(v for v in g if v in fs)
            if common:
                common = simplex(common)
                if strat.carrier[common] == strat.n:
                    a, b = find(f), find(g)
                    if a != b:
                        parent[a] = b
    return len({find(f) for f in facets})
