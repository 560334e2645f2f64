"""Independent reference computations for the test suite.

Nothing here imports the package's linear algebra or chain code.  Complexes
are handled as plain sets of sorted vertex tuples.
"""

from fractions import Fraction
from itertools import combinations

INF = float("inf")


def closure(facets):
    out = set()
    for f in facets:
        f = tuple(sorted(f, key=repr))
        for k in range(1, len(f) + 1):
            out.update(combinations(f, k))
    return out


def by_dim(simplices):
    d = {}
    for s in simplices:
        d.setdefault(len(s) - 1, []).append(s)
    for k in d:
        d[k].sort(key=repr)
    return d


def rank_mod(rows, p=None):
    """Rank of a dense matrix over Q (p=None) or F_p by row reduction."""
    if p is None:
        m = [[Fraction(x) for x in r] for r in rows]
    else:
        m = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = (1 / m[rank][c]) if p is None else pow(m[rank][c], p - 2, p)
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
                if p is not None:
                    m[i] = [a % p for a in m[i]]
        rank += 1
    return rank


def _sign_boundary(s, faces_index):
    col = {}
    for i in range(len(s)):
        f = s[:i] + s[i + 1:]
        col[faces_index[f]] = (-1) ** i
    return col


def boundary_matrix(lower, upper):
    """Dense boundary matrix with rows indexed by ``lower`` and columns by ``upper``."""
    idx = {s: i for i, s in enumerate(lower)}
    m = [[0] * len(upper) for _ in lower]
    for j, s in enumerate(upper):
        for i, v in _sign_boundary(s, idx).items():
            m[i][j] = v
    return m


def betti(facets, p=None):
    """Betti numbers over Q or F_p."""
    simp = by_dim(closure(facets))
    top = max(simp)
    ranks = {}
    for k in range(1, top + 1):
        bm = boundary_matrix(simp[k - 1], simp[k])
        ranks[k] = rank_mod(bm, p)
    return tuple(len(simp[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in range(top + 1))


def euler(facets):
    simp = by_dim(closure(facets))
    return sum((-1) ** k * len(v) for k, v in simp.items())


def link(facets, sigma):
    """Link of sigma by enumerating its cofaces."""
    s = set(sigma)
    out = set()
    for t in closure(facets):
        if s < set(t):
            out.add(tuple(sorted((v for v in t if v not in s), key=repr)))
    return out


def components(simplices):
    verts = {v for s in simplices for v in s}
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for s in simplices:
        for v in s[1:]:
            a, b = find(s[0]), find(v)
            if a != b:
                parent[a] = b
    return len({find(v) for v in verts})


# -- intersection homology over Q by brute force -----------------------------------

def _nullspace(rows, ncols):
    """Basis of {x : rows x = 0} over Q."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [a * inv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def ih_ranks_q(simplices, stratum_of, singular_dual):
    """IH ranks over Q.

    ``stratum_of`` maps every simplex to a stratum id; ``singular_dual`` maps
    singular stratum ids to Dp values (floats, may be +-inf).  A k-simplex is
    allowable when, for every singular stratum S, the largest face of it
    lying in S has dimension <= k - Dp(S) - 2.
    """
    simp = by_dim(simplices)
    top = max(simp)

    def allowable(s):
        k = len(s) - 1
        for sid, dp in singular_dual.items():
            best = -1
            for j in range(1, len(s) + 1):
                for f in combinations(s, j):
                    if stratum_of[f] == sid:
                        best = max(best, j - 1)
            if best >= 0 and best > k - dp - 2:
                return False
        return True

    A = {k: [s for s in simp[k] if allowable(s)] for k in simp}
    # IC_k: combinations of allowable k-simplices whose boundary is allowable
    IC = {}
    for k in range(top + 1):
        if k == 0:
            IC[0] = [[Fraction(int(i == j)) for j in range(len(A[0]))] for i in range(len(A[0]))]
            continue
        bad = [f for f in simp[k - 1] if f not in set(A[k - 1])]
        bm = boundary_matrix(simp[k - 1], A[k]) if A[k] else []
        rows_idx = {f: i for i, f in enumerate(simp[k - 1])}
        rows = [bm[rows_idx[f]] for f in bad] if A[k] else []
        IC[k] = _nullspace(rows, len(A[k])) if A[k] else []

    def image_in(k, vecs):
        """Boundaries of IC_k vectors written in A[k-1] coordinates."""
        if k == 0 or not vecs:
            return []
        bm = boundary_matrix(simp[k - 1], A[k])
        keep = [simp[k - 1].index(f) for f in A[k - 1]]
        out = []
        for v in vecs:
            full = [sum(bm[i][j] * v[j] for j in range(len(v))) for i in range(len(simp[k - 1]))]
            out.append([full[i] for i in keep])
        return out

    ranks = []
    for k in range(top + 1):
        n = len(IC[k])
        bd = image_in(k, IC[k])
        z = n - (rank_mod(bd) if bd and bd[0] else 0)
        up = image_in(k + 1, IC.get(k + 1, []))
        b = rank_mod(up) if up and up[0] else 0
        ranks.append(z - b)
    return tuple(ranks)


def ih_of(strat, values):
    """Wrap :func:`ih_ranks_q` for a package Stratification and a dict of
    perversity values per singular stratum id."""
    dual = {}
    for s in strat.singular_strata():
        v = values.get(s.id, 0)
        dual[s.id] = (s.codim - 2) - (v if abs(v) != INF else v)
    simplices = set(strat.complex.all_simplices)
    return ih_ranks_q(simplices, strat.stratum_of, dual)
