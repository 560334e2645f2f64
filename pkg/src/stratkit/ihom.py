"""Intersection chains on a fixed triangulation, and regular-part invariants.

A k-simplex is allowable when, for every singular stratum S, the largest
face of it carried by S has dimension at most k - Dp(S) - 2.  Intersection
chains are combinations of allowable simplices with allowable boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .chains import HomologyResult, Ring, Z, factors_to_torsion, parse_ring, simplicial_homology
from .errors import DisconnectedSpine, NotACover, PerversityTooLarge
from .perv import ExtInt, Perversity, dual, ext, top_perversity
from .simplex import SimplicialComplex, boundary_faces, faces, skey, vkey
from .strat import Stratification, cone_stratification, regular_spine, subdivided


# -- allowability -------------------------------------------------------------

@dataclass
class AllowabilityTable:
    strat: Stratification
    perversity: Perversity
    depth: dict      # simplex -> {singular stratum id: max face dim}
    allowable: dict  # simplex -> bool

    def is_allowable(self, s):
        return self.allowable[s]

    def is_full(self, s):
        return all(self.allowable[f] for f in faces(s))

    def allowable_simplices(self, k):
        return [s for s in self.strat.complex.simplices(k) if self.allowable[s]]


def allowability_table(strat: Stratification, p: Perversity) -> AllowabilityTable:
    Dp = dual(p)
    bound_shift = {s.id: Dp[s.id] for s in strat.singular_strata()}
    depth, allowable = {}, {}
    of = strat.stratum_of
    for sim in strat.complex.all_simplices:
        d = {}
        for f in faces(sim):
            sid = of[f]
            if sid in bound_shift:
                k = len(f) - 1
                if d.get(sid, -1) < k:
                    d[sid] = k
        depth[sim] = d
        dim = len(sim) - 1
        ok = True
        for sid, k in d.items():
            # k <= dim - Dp(S) - 2
            if ExtInt(k) > ExtInt(dim - 2) - bound_shift[sid]:
                ok = False
                break
        allowable[sim] = ok
    return AllowabilityTable(strat, p, depth, allowable)


# -- intersection chain complex -------------------------------------------------

@dataclass
class ICComplex:
    """Intersection chains with generators written in simplex coordinates."""

    table: AllowabilityTable
    ring: Ring
    allowed: dict = field(default_factory=dict)    # k -> list of allowable k-simplices
    index: dict = field(default_factory=dict)      # k -> {simplex: row}
    generators: dict = field(default_factory=dict)  # k -> list of {row: coeff}
    top: int = 0

    @property
    def p(self):
        return self.ring.p

    def boundary_of(self, k, vec):
        """Boundary of a chain on allowable k-simplices, in (k-1)-simplex keys."""
        out = {}
        simps = self.allowed[k]
        for j, c in vec.items():
            for sign, f in boundary_faces(simps[j]):
                nv = out.get(f, 0) + sign * c
                if self.p:
                    nv %= self.p
                if nv:
                    out[f] = nv
                else:
                    out.pop(f, None)
        return out

    def boundary_images(self, k):
        """Columns (rows indexed by allowable (k-1)-simplices) of d(IC_k)."""
        idx = self.index.get(k - 1, {})
        cols = []
        for g in self.generators.get(k, []):
            img = self.boundary_of(k, g)
            cols.append({idx[f]: v for f, v in img.items()})
        return cols

    def cycle_basis(self, k):
        """Lattice (or F_p) basis of cycles on allowable k-simplices."""
        if k == 0:
            return [{i: 1} for i in range(len(self.allowed.get(0, [])))]
        simps = self.allowed.get(k, [])
        idx = self.index.get(k - 1, {})
        full = {}
        cols = []
        for s in simps:
            col = {}
            for sign, f in boundary_faces(s):
                if f not in idx:
                    key = full.setdefault(f, len(idx) + len(full))
                else:
                    key = idx[f]
                col[key] = sign
            cols.append(col)
        nrows = len(idx) + len(full)
        return linalg.integer_kernel(nrows, cols, self.p)

    def check_d2(self):
        for k in range(2, self.top + 1):
            for g in self.generators.get(k, []):
                img = self.boundary_of(k, g)
                idx = self.index[k - 1]
                vec = {idx[f]: v for f, v in img.items()}
                if self.boundary_of(k - 1, vec):
                    raise AssertionError("boundary of boundary is not zero")
        return True


def intersection_chain_complex(strat: Stratification, p: Perversity, ring="Z",
                               table=None) -> ICComplex:
    ring = parse_ring(ring)
    table = table or allowability_table(strat, p)
    K = strat.complex
    cc = ICComplex(table, ring, top=K.dim)
    for k in range(K.dim + 1):
        simps = [s for s in K.simplices(k) if table.allowable[s]]
        cc.allowed[k] = simps
        cc.index[k] = {s: i for i, s in enumerate(simps)}
    for k in range(K.dim + 1):
        simps = cc.allowed[k]
        if k == 0:
            cc.generators[0] = [{i: 1} for i in range(len(simps))]
            continue
        allowed_below = cc.index[k - 1]
        bad_rows = {}
        free, constrained, cols = [], [], []
        for j, s in enumerate(simps):
            col = {}
            for sign, f in boundary_faces(s):
                if f not in allowed_below:
                    col[bad_rows.setdefault(f, len(bad_rows))] = sign
            if col:
                constrained.append(j)
                cols.append(col)
            else:
                free.append(j)
        gens = [{j: 1} for j in free]
        if cols:
            for vec in linalg.integer_kernel(len(bad_rows), cols, ring.p):
                gens.append({constrained[i]: c for i, c in vec.items()})
        cc.generators[k] = gens
    cc.check_d2()
    return cc


def homology(cc: ICComplex) -> HomologyResult:
    ranks, tors = [], []
    for k in range(cc.top + 1):
        nA = len(cc.allowed[k])
        if k == 0:
            zk = nA
        else:
            rows = {}
            cols = [{rows.setdefault(f, len(rows)): sign for sign, f in boundary_faces(x)}
                    for x in cc.allowed[k]]
            zk = nA - (linalg.rank(len(rows), cols, cc.ring.p) if cols else 0)
        B = cc.boundary_images(k + 1) if k + 1 <= cc.top else []
        if cc.ring.p is None:
            factors = linalg.invariant_factors(nA, B) if B else []
            rb = len(factors)
            t = factors_to_torsion(factors) if cc.ring.name == "Z" else ()
        else:
            rb = linalg.rank(nA, B, cc.ring.p) if B else 0
            t = ()
        ranks.append(zk - rb)
        tors.append(tuple(t))
    return HomologyResult(tuple(ranks), tuple(tors), cc.ring)


def on_full_triangulation(strat, p, subdivide=None):
    """Return (strat, p) moved to a triangulation with full skeleta.

    Simplicial IH only computes the intersection homology of the space when
    the skeleta are full subcomplexes; otherwise one barycentric subdivision
    is taken.  ``subdivide`` forces the choice either way.
    """
    if subdivide is None:
        subdivide = not strat.is_full
    if not subdivide:
        return strat, p
    R, idmap = subdivided(strat)
    q = Perversity(R, {idmap[k]: v for k, v in p.singular_items()}, p.name)
    return R, q


def intersection_homology(strat, p, ring="Z", subdivide=None) -> HomologyResult:
    strat, p = on_full_triangulation(strat, p, subdivide)
    return homology(intersection_chain_complex(strat, p, ring))


def dense_ih_ranks_q(strat, p, subdivide=None):
    """Oracle: IH ranks over Q from dense Fraction elimination.

    IC_k is computed as the kernel of the projection of the boundary onto
    non-allowable faces, written out densely.
    """
    strat, p = on_full_triangulation(strat, p, subdivide)
    table = allowability_table(strat, p)
    K = strat.complex
    allowed = {k: [s for s in K.simplices(k) if table.allowable[s]] for k in range(K.dim + 1)}
    faces_idx = {k: {s: i for i, s in enumerate(K.simplices(k))} for k in range(K.dim + 1)}

    def bd(k, simps):
        m = [[0] * len(simps) for _ in range(len(faces_idx[k - 1]))]
        for j, s in enumerate(simps):
            for sign, f in boundary_faces(s):
                m[faces_idx[k - 1][f]][j] = sign
        return m

    def nullspace(M, ncols):
        from fractions import Fraction
        A = [[Fraction(x) for x in row] for row in M]
        pivots, r = [], 0
        for c in range(ncols):
            pr = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
            if pr is None:
                continue
            A[r], A[pr] = A[pr], A[r]
            piv = A[r][c]
            A[r] = [x / piv for x in A[r]]
            for i in range(len(A)):
                if i != r and A[i][c] != 0:
                    f = A[i][c]
                    A[i] = [a - f * b for a, b in zip(A[i], A[r])]
            pivots.append(c)
            r += 1
        basis = []
        for free in range(ncols):
            if free in pivots:
                continue
            v = [Fraction(0)] * ncols
            v[free] = Fraction(1)
            for i, c in enumerate(pivots):
                v[c] = -A[i][free]
            basis.append(v)
        return basis

    ranks = []
    ic = {}
    for k in range(K.dim + 1):
        simps = allowed[k]
        if k == 0:
            ic[0] = [[1 if i == j else 0 for i in range(len(simps))] for j in range(len(simps))]
            continue
        M = bd(k, simps)
        bad = [row for f, row in zip(K.simplices(k - 1), M) if not table.allowable[f]]
        ic[k] = nullspace(bad, len(simps)) if bad else \
            [[1 if i == j else 0 for i in range(len(simps))] for j in range(len(simps))]
    for k in range(K.dim + 1):
        simps = allowed[k]
        if k == 0:
            z = len(simps)
        else:
            z = len(simps) - linalg.dense_rank_q(bd(k, simps)) if simps else 0
        b = 0
        if k + 1 <= K.dim and ic[k + 1]:
            M = bd(k + 1, allowed[k + 1])
            imgs = [[sum(M[r][j] * v[j] for j in range(len(v))) for r in range(len(M))]
                    for v in ic[k + 1]]
            b = linalg.dense_rank_q([list(col) for col in zip(*imgs)]) if imgs else 0
        ranks.append(z - b)
    return tuple(ranks)


# -- maps induced by inclusions -------------------------------------------------

def _cycles_as_keys(cc, k):
    simps = cc.allowed.get(k, [])
    return [{simps[i]: c for i, c in v.items()} for v in cc.cycle_basis(k)]


def _bounds_as_keys(cc, k):
    if k + 1 > cc.top:
        return []
    out = []
    for g in cc.generators.get(k + 1, []):
        out.append(cc.boundary_of(k + 1, g))
    return out


def _rank_keys(vectors):
    rows = {}
    cols = []
    for v in vectors:
        cols.append({rows.setdefault(key, len(rows)): c for key, c in v.items() if c})
    return linalg.rank(len(rows), cols) if cols else 0


def induced_rank(cc_small, cc_big, k, key_map=None):
    """Rank over Q of IH_k(small) -> IH_k(big) for a subcomplex inclusion."""
    key_map = key_map or (lambda s: s)
    Z = [{key_map(s): c for s, c in v.items()} for v in _cycles_as_keys(cc_small, k)]
    B = _bounds_as_keys(cc_big, k)
    return _rank_keys(Z + B) - _rank_keys(B)


# -- regular part ------------------------------------------------------------------

def _check_below_top(strat, p):
    if not p <= top_perversity(strat):
        bad = [sid for sid, v in p.singular_items() if v > ExtInt(strat.stratum(sid).codim - 2)]
        raise PerversityTooLarge(f"p exceeds t on strata {bad}")


@dataclass
class Pi0Result:
    count: int
    components: list  # list of sorted regular stratum ids per component


def pi0_p(strat: Stratification, p: Perversity) -> Pi0Result:
    _check_below_top(strat, p)
    spine = regular_spine(strat, max_dim=1)
    comps = []
    for comp in spine.components():
        comps.append(sorted({strat.stratum_of[v] for v in comp}))
    comps.sort()
    return Pi0Result(len(comps), comps)


@dataclass
class GroupPresentation:
    generators: list
    relators: list
    abel_rank: int
    abel_torsion: tuple
    h1_agrees: bool
    simplified_generators: list = field(default_factory=list)
    simplified_relators: list = field(default_factory=list)

    def is_trivial(self):
        return not self.simplified_generators

    def lines(self):
        t = ",".join(map(str, self.abel_torsion))
        return [f"generators={len(self.generators)} relators={len(self.relators)}",
                f"simplified generators={len(self.simplified_generators)} "
                f"relators={len(self.simplified_relators)}",
                f"abelianization rank={self.abel_rank} torsion=[{t}]",
                f"h1_check={'pass' if self.h1_agrees else 'FAIL'}"]


def _reduce(word):
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    while len(out) > 1 and out[0][0] == out[-1][0] and out[0][1] == -out[-1][1]:
        out = out[1:-1]
    return out


def _inverse(word):
    return [(g, -e) for g, e in reversed(word)]


def tietze(gens, rels, max_len=200):
    """Greedy elimination of generators occurring once in some relator."""
    gens = list(gens)
    rels = [r for r in (_reduce(r) for r in rels) if r]
    changed = True
    while changed:
        changed = False
        for r in sorted(rels, key=len):
            counts = {}
            for g, _ in r:
                counts[g] = counts.get(g, 0) + 1
            single = [g for g in counts if counts[g] == 1]
            if not single:
                continue
            g = single[0]
            i = next(i for i, (h, _) in enumerate(r) if h == g)
            e = r[i][1]
            # r = a g^e b = 1  =>  g^e = a^-1 b^-1, g = (b a)^-e
            rest = r[i + 1:] + r[:i]
            value = _inverse(rest) if e == 1 else rest
            new = []
            for q in rels:
                if q is r:
                    continue
                w = []
                for h, f in q:
                    if h == g:
                        w.extend(value if f == 1 else _inverse(value))
                    else:
                        w.append((h, f))
                w = _reduce(w)
                if len(w) > max_len:
                    break
                if w:
                    new.append(w)
            else:
                rels = new
                gens.remove(g)
                changed = True
                break
    return gens, rels


def pi1_regular(strat: Stratification, basepoint=None) -> GroupPresentation:
    spine = regular_spine(strat, max_dim=2).complex
    comps = spine.connected_components()
    if basepoint is None:
        if len(comps) != 1:
            raise DisconnectedSpine(f"regular spine has {len(comps)} components")
        verts = set(comps[0])
    else:
        bp = tuple(sorted(basepoint, key=vkey)) if isinstance(basepoint, (list, tuple)) else (basepoint,)
        comp = next((c for c in comps if bp in c), None)
        if comp is None:
            raise DisconnectedSpine(f"basepoint {basepoint!r} is not a regular simplex")
        verts = set(comp)
    sub = SimplicialComplex([f for f in spine.facets if f[0] in verts])
    # spanning tree by BFS
    adj = {v: [] for v in sub.vertices}
    for a, b in sub.simplices(1):
        adj[a].append(b)
        adj[b].append(a)
    root = sub.vertices[0]
    tree, seen, queue = set(), {root}, [root]
    while queue:
        v = queue.pop(0)
        for w in sorted(adj[v], key=vkey):
            if w not in seen:
                seen.add(w)
                tree.add(tuple(sorted((v, w), key=vkey)))
                queue.append(w)
    gens = [e for e in sub.simplices(1) if e not in tree]
    gid = {e: i for i, e in enumerate(gens)}

    def letter(a, b):
        e = (a, b)
        if e in gid:
            return [(gid[e], 1)]
        if (b, a) in gid:
            return [(gid[(b, a)], -1)]
        return []

    rels = []
    for a, b, c in sub.simplices(2):
        rels.append(letter(a, b) + letter(b, c) + letter(c, a))
    # abelianization
    cols = []
    for r in rels:
        col = {}
        for g, e in r:
            col[g] = col.get(g, 0) + e
        cols.append({g: v for g, v in col.items() if v})
    factors = linalg.invariant_factors(len(gens), cols)
    rank = len(gens) - len(factors)
    torsion = factors_to_torsion(factors)
    h1 = simplicial_homology(sub, Z, top=1)
    agrees = h1.rank(1) == rank and h1.tors(1) == torsion
    sg, sr = tietze(range(len(gens)), rels)
    return GroupPresentation(gens, rels, rank, torsion, agrees, sg, sr)


# -- cone probe ---------------------------------------------------------------------

def cone_perversity(link: Stratification, cone: Stratification, p_link: Perversity, apex_value):
    vals = {}
    for L in link.strata:
        cid = cone.stratum_of[L.carrier_simplices[0]]
        if not cone.stratum(cid).regular:
            vals[cid] = p_link[L.id]
    apex = cone.stratum_of[(cone.meta["apex"],)]
    vals[apex] = ext(apex_value)
    return Perversity(cone, vals, "cone")


@dataclass
class ConeProbe:
    link_ih: HomologyResult
    cone_ih: HomologyResult
    iso: tuple        # per degree, does the inclusion induce an isomorphism
    j0: int           # largest j with isomorphisms in all degrees <= j (-1 if none)
    dual_apex: ExtInt
    predicted: int = None

    def lines(self):
        out = self.link_ih.lines("IH_L") + self.cone_ih.lines("IH_cL")
        out.append("iso=" + "".join("1" if x else "0" for x in self.iso))
        out.append(f"j0={self.j0} Dp(v)={self.dual_apex}"
                   + (f" predicted={self.predicted}" if self.predicted is not None else ""))
        return out


def predicted_threshold(link_ih: HomologyResult, dual_apex, offset=0, top=None):
    """First degree above Dp(v)+offset where the inclusion must fail, minus one.

    In positive degrees the cone kills everything above the bound, so a
    nonzero link group there breaks the isomorphism.  In degree 0 the cone is
    connected whatever the bound, so only a disconnected link fails.
    """
    top = link_ih.top if top is None else top
    bound = ext(dual_apex) + offset
    for i in range(top + 1):
        if ExtInt(i) <= bound:
            continue
        if i == 0:
            if link_ih.group(0) != (1, ()):
                return -1
        elif not link_ih.is_zero(i):
            return i - 1
    return top


def cone_threshold_probe(link: Stratification, p_link: Perversity, apex_value,
                         apex="v", offset=None) -> ConeProbe:
    cone = cone_stratification(link, apex)
    pc = cone_perversity(link, cone, p_link, apex_value)
    cl = intersection_chain_complex(link, p_link, "Q")
    cc = intersection_chain_complex(cone, pc, "Q")
    hl, hc = homology(cl), homology(cc)
    top = max(link.complex.dim, 0)
    iso = []
    for k in range(top + 1):
        r = induced_rank(cl, cc, k)
        iso.append(r == hl.rank(k) == hc.rank(k))
    j0 = -1
    for k, ok in enumerate(iso):
        if not ok:
            break
        j0 = k
    dv = dual(pc)[cone.stratum_of[(apex,)]]
    pred = predicted_threshold(hl, dv, offset, top) if offset is not None else None
    return ConeProbe(hl, hc, tuple(iso), j0, dv, pred)


def calibrate_cone_offset(candidates=(-1, 0, 1)):
    """Pick the offset for which the threshold formula matches the probe on
    three small links (two points, a circle, two points with one singular)."""
    from .strat import trivial_stratification, build_stratification
    from .perv import Perversity as P
    from .simplex import sphere
    cases = []
    s0 = trivial_stratification(SimplicialComplex([["a"], ["b"]]), 0)
    s1 = trivial_stratification(sphere(1, ["a", "b", "c"]))
    # two points joined by an arc through a marked middle vertex
    arc = SimplicialComplex([["a", "m"], ["m", "b"]])
    two = build_stratification(arc, 1, {0: [["m"]]})
    for link in (s0, s1, two):
        for apex_value in (-1, 0, 1, 2):
            pl = P(link, {s.id: 0 for s in link.singular_strata()})
            cases.append((link, pl, apex_value))
    good = []
    for off in candidates:
        if all(cone_threshold_probe(L, pl, a).j0 ==
               predicted_threshold(intersection_homology(L, pl, "Q"),
                                   dual_value(L, a), off, max(L.complex.dim, 0))
               for L, pl, a in cases):
            good.append(off)
    return good


def dual_value(link, apex_value):
    """Dp(v) for the cone apex over a link of formal dimension n_L."""
    return ExtInt(link.n - 1) - ext(apex_value)


# -- two-cone probe -----------------------------------------------------------------

@dataclass
class TwoConeProbe:
    fine_ih: HomologyResult
    coarse_ih: HomologyResult
    agree: tuple
    j0: int
    dual_point: ExtInt
    bounds_ok: bool
    allowable_transfer: bool
    top_nonzero: int = 0      # largest positive degree with IH != 0 on either side
    predicted: object = None
    certificate: str = ""

    @property
    def matches(self):
        """Agreement through the bound and vanishing past it."""
        if self.predicted is None or not self.bounds_ok:
            return None
        bound = self.predicted
        through = len(self.agree) - 1 if not bound.finite or bound >= len(self.agree) else int(bound)
        agree_ok = all(self.agree[k] for k in range(0, through + 1))
        return agree_ok and ExtInt(self.top_nonzero) <= max(bound, ExtInt(0))

    def lines(self):
        if not self.bounds_ok:
            return [f"rejected: {self.certificate}"]
        out = self.fine_ih.lines("IH_S") + self.coarse_ih.lines("IH_T")
        out.append("agree=" + "".join("1" if x else "0" for x in self.agree))
        out.append(f"j0={self.j0} top_nonzero={self.top_nonzero} Dp(u,v)={self.dual_point} "
                   f"allowable_transfer={'ok' if self.allowable_transfer else 'FAIL'}")
        if self.predicted is not None:
            out.append(f"bound={self.predicted} matches={'yes' if self.matches else 'no'}")
        return out


def two_cone_stratifications(b: int, link: Stratification, apex="v"):
    """Fine and coarse stratifications on the cone over S^{b-1} * L.

    Fine: the cone on the join stratification, whose apex is the refined
    point.  Coarse: the apex absorbed into the cone on the sphere.
    """
    from .strat import join_sphere_stratification
    J = join_sphere_stratification(b - 1, link)
    fine = cone_stratification(J, apex)
    carrier = dict(fine.carrier)
    carrier[(apex,)] = b
    coarse = Stratification(fine.complex, fine.n, carrier, fine.meta)
    return fine, coarse


def two_cone_probe(b: int, link: Stratification, p_fine: Perversity, coarse=None,
                   ring="Z", offset=None) -> TwoConeProbe:
    """Compare IH of the refined and coarse cones on S^{b-1} * L.

    The sandwich on the dual values at the refined point is checked first;
    inputs outside it are rejected with a certificate and no homology is
    computed.
    """
    from .coarsen import build_coarsening
    from .perv import pushforward
    fine = p_fine.poset
    apex = fine.meta.get("apex", "v")
    if coarse is None:
        _, coarse = two_cone_stratifications(b, link, apex)
    c = build_coarsening(fine, coarse)
    w = fine.stratum_of[(apex,)]
    q_id = c.iota[w]
    # the source stratum the apex was cut out of
    Q = next(s for s in c.sources_of(q_id) if s != w)
    Dp = dual(p_fine)
    t_gap = fine.stratum(w).codim - fine.stratum(Q).codim
    bounds_ok = Dp[Q] <= Dp[w] <= Dp[Q] + t_gap
    if not bounds_ok:
        cert = f"need {Dp[Q]} <= Dp(u,v)={Dp[w]} <= {Dp[Q] + t_gap}"
        empty = HomologyResult((), ())
        return TwoConeProbe(empty, empty, (), -1, Dp[w], False, False, 0, None, cert)
    q = pushforward(c, p_fine)
    tf = allowability_table(fine, p_fine)
    tc = allowability_table(coarse, q)
    transfer = all(tc.allowable[s] for s, ok in tf.allowable.items() if ok)
    cf = intersection_chain_complex(fine, p_fine, ring)
    cq = intersection_chain_complex(coarse, q, ring)
    hf, hc = homology(cf), homology(cq)
    agree = []
    for k in range(fine.complex.dim + 1):
        same = hf.group(k) == hc.group(k)
        if transfer:
            same = same and induced_rank(cf, cq, k) == hf.rank(k) == hc.rank(k)
        agree.append(same)
    agree = tuple(agree)
    j0 = -1
    for k, ok in enumerate(agree):
        if not ok:
            break
        j0 = k
    top_nz = max([k for k in range(1, fine.complex.dim + 1)
                  if not (hf.is_zero(k) and hc.is_zero(k))], default=0)
    pred = Dp[w] + offset if offset is not None else None
    return TwoConeProbe(hf, hc, agree, j0, Dp[w], True, transfer, top_nz, pred)


def two_cone_cases(b, link, values=range(-2, 4)):
    """All K-perversities p <= t with entries in ``values`` on the fine side."""
    from itertools import product
    from .coarsen import build_coarsening
    from .perv import is_K_perversity, top_perversity
    fine, coarse = two_cone_stratifications(b, link)
    c = build_coarsening(fine, coarse)
    sing = fine.singular_strata()
    top = top_perversity(fine)
    out = []
    for vals in product(values, repeat=len(sing)):
        p = Perversity(fine, {s.id: v for s, v in zip(sing, vals)})
        if p <= top and is_K_perversity(c, p):
            out.append(p)
    return fine, coarse, out


def calibrate_two_cone_offset(candidates=(-1, 0, 1)):
    """Least offset c such that, on the small calibration links with b = 1,
    IH agrees through Dp(u,v) + c and vanishes in positive degrees above it."""
    from .strat import trivial_stratification, build_stratification
    from .simplex import sphere
    links = [
        trivial_stratification(SimplicialComplex([["a"], ["b"]]), 0),
        trivial_stratification(sphere(1, ["a", "b", "c"])),
        build_stratification(SimplicialComplex([["a", "m"], ["m", "b"]]), 1, {0: [["m"]]}),
    ]
    probes = []
    for L in links:
        fine, coarse, ps = two_cone_cases(1, L)
        probes.extend(two_cone_probe(1, L, p, coarse, "Q") for p in ps)
    good = []
    for off in candidates:
        ok = True
        for r in probes:
            r.predicted = r.dual_point + off
            ok = ok and r.matches
        if ok:
            good.append(off)
    return good[:1]


# -- Mayer-Vietoris ----------------------------------------------------------------

@dataclass
class MVReport:
    exact: bool
    ranks: dict
    failures: list

    def lines(self):
        out = []
        for name in ("UV", "U", "V", "X"):
            out.append(f"{name}: " + " ".join(map(str, self.ranks[name])))
        out.append(f"exact={'yes' if self.exact else 'no'}")
        out.extend(self.failures)
        return out


def mv_exactness_check(strat: Stratification, p: Perversity, U_removed, V_removed) -> MVReport:
    """Rank-level exactness of the Mayer-Vietoris sequence over Q.

    The open sets are the complements of the closed subcomplexes given.  All
    four spaces are modelled inside Sd X: each open set by the full
    subcomplex on barycentres of its simplices, the whole space by the union
    of the two.
    """
    from .simplex import faces as _faces
    from .strat import _chain_complex

    def closure(simps):
        out = set()
        for s in simps:
            out.update(_faces(tuple(sorted(s, key=vkey))))
        return out

    A, B = closure(U_removed), closure(V_removed)
    if A & B:
        raise NotACover("the two open sets do not cover X")
    allsimp = strat.complex.all_simplices
    inter = [s for s in allsimp if s not in A and s not in B]
    if not any(strat.carrier[s] == strat.n for s in inter):
        raise NotACover("the open sets do not meet in the regular part")
    cof = strat.complex.cofaces
    KU = _chain_complex([s for s in allsimp if s not in A], cof, None)
    KV = _chain_complex([s for s in allsimp if s not in B], cof, None)
    KUV = _chain_complex(inter, cof, None)
    KX = SimplicialComplex(list(KU.facets) + list(KV.facets))

    def strat_on(K):
        return Stratification(K, strat.n, {ch: strat.carrier[max(ch, key=len)] for ch in K.all_simplices})

    spaces = {name: strat_on(K) for name, K in (("UV", KUV), ("U", KU), ("V", KV), ("X", KX))}
    pervs = {}
    for name, st in spaces.items():
        vals = {}
        for s in st.singular_strata():
            orig = strat.stratum_of[max(s.carrier_simplices[0], key=len)]
            vals[s.id] = p[orig]
        pervs[name] = Perversity(st, vals)
    cc = {name: intersection_chain_complex(spaces[name], pervs[name], "Q") for name in spaces}
    H = {name: homology(c) for name, c in cc.items()}
    top = strat.complex.dim
    ranks = {name: [H[name].rank(k) for k in range(top + 1)] for name in H}

    def rank_i(k):
        Zs = _cycles_as_keys(cc["UV"], k)
        vecs = [{("U", s): c for s, c in z.items()} | {("V", s): c for s, c in z.items()} for z in Zs]
        Bs = [{("U", s): c for s, c in b.items()} for b in _bounds_as_keys(cc["U"], k)]
        Bs += [{("V", s): c for s, c in b.items()} for b in _bounds_as_keys(cc["V"], k)]
        return _rank_keys(vecs + Bs) - _rank_keys(Bs)

    def rank_j(k):
        Zs = _cycles_as_keys(cc["U"], k) + _cycles_as_keys(cc["V"], k)
        Bs = _bounds_as_keys(cc["X"], k)
        return _rank_keys(Zs + Bs) - _rank_keys(Bs)

    ri = [rank_i(k) for k in range(top + 1)]
    rj = [rank_j(k) for k in range(top + 1)]
    failures = []
    for k in range(top + 2):
        b = ranks["U"][k] + ranks["V"][k] if k <= top else 0
        if k <= top and b != ri[k] + rj[k]:
            failures.append(f"degree {k}: ker j != im i")
        a_prev = ranks["UV"][k - 1] - ri[k - 1] if k >= 1 else 0
        c_rest = (ranks["X"][k] - rj[k]) if k <= top else 0
        if a_prev != c_rest:
            failures.append(f"degree {k}: connecting map mismatch")
    return MVReport(not failures, ranks, failures)
