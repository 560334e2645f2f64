"""Exact integer linear algebra on sparse column matrices.

A matrix is given as ``(nrows, cols)`` where ``cols`` is a list of dicts
mapping row index to a nonzero Python int.  Everything stays in Python ints,
so there is no overflow to worry about.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _to_rows(cols, p=None):
    rows = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            if p is not None:
                v %= p
            if v:
                rows.setdefault(i, {})[j] = v
    return rows


def _unit(v, p):
    if p is None:
        return v in (1, -1)
    return v % p != 0


def _inverse(v, p):
    if p is None:
        return v  # v is +-1
    return pow(v, -1, p)


def _sparse_unit_elimination(rows, p=None):
    """Pivot on unit entries until none remain.

    Mutates ``rows``; returns the number of pivots.  Over F_p every nonzero
    entry is a unit, so the remainder is empty.
    """
    colidx = {}
    for r, row in rows.items():
        for c in row:
            colidx.setdefault(c, set()).add(r)
    pivots = 0
    progress = True
    while progress and rows:
        progress = False
        for r in sorted(rows, key=lambda r: len(rows[r])):
            row = rows.get(r)
            if row is None:
                continue
            best = None
            for c, v in row.items():
                if _unit(v, p):
                    load = len(colidx[c])
                    if best is None or load < best[0]:
                        best = (load, c)
            if best is None:
                continue
            c = best[1]
            inv = _inverse(row[c], p)
            for r2 in list(colidx[c]):
                if r2 == r:
                    continue
                row2 = rows[r2]
                f = row2[c] * inv
                for c3, v3 in row.items():
                    nv = row2.get(c3, 0) - f * v3
                    if p is not None:
                        nv %= p
                    if nv:
                        if c3 not in row2:
                            colidx[c3].add(r2)
                        row2[c3] = nv
                    elif c3 in row2:
                        del row2[c3]
                        colidx[c3].discard(r2)
                if not row2:
                    del rows[r2]
            for c3 in row:
                colidx[c3].discard(r)
            del colidx[c]
            del rows[r]
            pivots += 1
            progress = True
    return pivots


def _dense_diagonal(rows):
    """Diagonalise a small dense integer matrix (list of lists) in place."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    A = [list(r) for r in rows]
    diag = []
    t = 0
    while t < min(m, n):
        # pivot = smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // piv
                    if q:
                        Ai, At = A[i], A[t]
                        for j in range(t, n):
                            Ai[j] -= q * At[j]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // piv
                    if q:
                        for i in range(t, m):
                            A[i][j] -= q * A[i][t]
                    if A[t][j]:
                        done = False
            if done:
                break
            # a remainder survived: move the smallest entry of row/col t to the pivot
            best = (abs(piv), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            if i != t:
                A[t], A[i] = A[i], A[t]
            if j != t:
                for row in A:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _normalize_diagonal(diag):
    """Turn a list of positive diagonal entries into invariant factors."""
    d = sorted(x for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                a, b = d[i], d[j]
                if b % a:
                    g = gcd(a, b)
                    d[i], d[j] = g, a * b // g
                    changed = True
        d.sort()
    return d


def invariant_factors(nrows, cols):
    """Nonzero invariant factors of an integer matrix, divisibility-ordered."""
    rows = _to_rows(cols)
    ones = _sparse_unit_elimination(rows)
    if not rows:
        return [1] * ones
    rlist = sorted(rows)
    clist = sorted({c for r in rows.values() for c in r})
    cpos = {c: k for k, c in enumerate(clist)}
    dense = []
    for r in rlist:
        line = [0] * len(clist)
        for c, v in rows[r].items():
            line[cpos[c]] = v
        dense.append(line)
    rest = _dense_diagonal(dense)
    return [1] * ones + _normalize_diagonal(rest)


def rank(nrows, cols, p=None):
    """Rank over Q (p=None) or over F_p."""
    if p is None:
        return len(invariant_factors(nrows, cols))
    rows = _to_rows(cols, p)
    return _sparse_unit_elimination(rows, p)


def integer_kernel(nrows, cols, p=None):
    """Basis of the kernel lattice (or F_p-kernel) as a list of dicts.

    Unimodular column operations on the stacked matrix [A; I]; columns whose
    A-part vanishes at the end carry a basis of the kernel in their I-part.
    """
    work = []
    for j, col in enumerate(cols):
        a = {i: (v % p if p else v) for i, v in col.items()}
        a = {i: v for i, v in a.items() if v}
        work.append([a, {j: 1}])

    def axpy(dst, src, f):
        # dst -= f * src, on both parts
        for part in (0, 1):
            d, s = dst[part], src[part]
            for k, v in s.items():
                nv = d.get(k, 0) - f * v
                if p is not None:
                    nv %= p
                if nv:
                    d[k] = nv
                else:
                    d.pop(k, None)

    active = [w for w in work if w[0]]
    kernel = [w[1] for w in work if not w[0]]
    row_order = sorted({i for w in active for i in w[0]})
    for i in row_order:
        hits = [w for w in active if i in w[0]]
        while len(hits) > 1:
            hits.sort(key=lambda w: abs(w[0][i]))
            piv = hits[0]
            pv = piv[0][i]
            for w in hits[1:]:
                if p is None:
                    f = w[0][i] // pv
                else:
                    f = w[0][i] * pow(pv, -1, p) % p
                axpy(w, piv, f)
            hits = [w for w in hits if i in w[0]]
        if hits:
            piv = hits[0]
            active = [w for w in active if w is not piv]
        for w in list(active):
            if not w[0]:
                kernel.append(w[1])
                active.remove(w)
    kernel.extend(w[1] for w in active if not w[0])
    return kernel


def apply(cols, vec):
    """Multiply the matrix (as columns) by a sparse vector."""
    out = {}
    for j, c in vec.items():
        for i, v in cols[j].items():
            nv = out.get(i, 0) + c * v
            if nv:
                out[i] = nv
            else:
                out.pop(i, None)
    return out


# -- dense oracle ----------------------------------------------------------

def dense_rank_q(matrix):
    """Rank over Q by plain Gaussian elimination on Fractions.

    Deliberately independent of the sparse code path; used as an oracle.
    """
    A = [[Fraction(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pr = A[r]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c] / pr[c]
                row = A[i]
                for k in range(c, n):
                    row[k] -= f * pr[k]
        r += 1
        if r == m:
            break
    return r


def to_dense(nrows, cols):
    out = [[0] * len(cols) for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, v in col.items():
            out[i][j] = v
    return out
