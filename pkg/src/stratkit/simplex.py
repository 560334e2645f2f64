"""Finite abstract simplicial complexes.

Simplices are stored as tuples of vertex labels in canonical order (see
:func:`vkey`).  Labels may be ints, strings or tuples of labels; the latter
appear as vertices of barycentric subdivisions.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations, permutations

from .errors import (
    ApexCollision,
    DuplicateVertexInFace,
    EmptyInput,
    NotASimplex,
    VertexCollision,
)


def vkey(v):
    """Total order on vertex labels: ints, then strings, then tuples."""
    if isinstance(v, bool):
        raise TypeError("bool is not a vertex label")
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vkey(x) for x in v))
    raise TypeError(f"unsupported vertex label {v!r}")


def simplex(vertices) -> tuple:
    """Canonical tuple for a vertex collection; rejects repeats."""
    vs = list(vertices)
    if not vs:
        raise NotASimplex("a simplex needs at least one vertex")
    if len(set(vs)) != len(vs):
        raise DuplicateVertexInFace(f"repeated vertex in {vs!r}")
    return tuple(sorted(vs, key=vkey))


def skey(s: tuple):
    """Sort key for simplices: by dimension, then lexicographically."""
    return (len(s), tuple(vkey(v) for v in s))


def lexkey(s: tuple):
    return tuple(vkey(v) for v in s)


def faces(s: tuple, include_self=True):
    """All nonempty faces of a simplex."""
    n = len(s)
    top = n if include_self else n - 1
    for k in range(1, top + 1):
        yield from combinations(s, k)


def boundary_faces(s: tuple):
    """Codimension-one faces with their incidence signs."""
    if len(s) == 1:
        return []
    return [((-1) ** i, s[:i] + s[i + 1:]) for i in range(len(s))]


class SimplicialComplex:
    """Immutable finite simplicial complex given by its facets."""

    __slots__ = ("facets", "_simplices", "__dict__")

    def __init__(self, facets):
        fs = sorted({simplex(f) for f in facets}, key=skey, reverse=True)
        # largest first; a candidate already seen as a face is dominated
        kept = []
        allsimp = set()
        for f in fs:
            if f in allsimp:
                continue
            kept.append(f)
            allsimp.update(faces(f))
        self.facets = tuple(sorted(kept, key=lexkey))
        self._simplices = frozenset(allsimp)

    @classmethod
    def empty(cls):
        return cls(())

    # -- basic data -------------------------------------------------------
    def __contains__(self, s):
        return tuple(s) in self._simplices

    def __len__(self):
        return len(self._simplices)

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.facets == other.facets

    def __hash__(self):
        return hash(self.facets)

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dim}, f={self.f_vector})"

    def is_empty(self):
        return not self.facets

    @cached_property
    def vertices(self) -> tuple:
        return tuple(sorted({v for f in self.facets for v in f}, key=vkey))

    @cached_property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    @cached_property
    def all_simplices(self) -> tuple:
        return tuple(sorted(self._simplices, key=skey))

    @cached_property
    def _by_dim(self):
        out = {}
        for s in self.all_simplices:
            out.setdefault(len(s) - 1, []).append(s)
        return {k: tuple(v) for k, v in out.items()}

    def simplices(self, k: int) -> tuple:
        return self._by_dim.get(k, ())

    @cached_property
    def f_vector(self) -> tuple:
        return tuple(len(self.simplices(k)) for k in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    @cached_property
    def cofaces(self) -> dict:
        """Map simplex -> tuple of simplices having it as a face (itself included)."""
        out = {s: [] for s in self._simplices}
        for s in self._simplices:
            for f in faces(s):
                out[f].append(s)
        return {k: tuple(sorted(v, key=skey)) for k, v in out.items()}

    def check(self, s) -> tuple:
        t = simplex(s)
        if t not in self._simplices:
            raise NotASimplex(f"{t!r} is not a simplex of the complex")
        return t

    def subcomplex(self, simplices) -> "SimplicialComplex":
        return SimplicialComplex(simplices)

    def relabel(self, mapping) -> "SimplicialComplex":
        return SimplicialComplex([[mapping(v) for v in f] for f in self.facets])

    def connected_components(self) -> list:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.simplices(1):
            a, b = find(e[0]), find(e[1])
            if a != b:
                parent[a] = b
        groups = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return sorted((tuple(g) for g in groups.values()), key=lambda g: vkey(g[0]))


def build_complex(facets) -> SimplicialComplex:
    facets = [list(f) for f in facets]
    if not facets:
        raise EmptyInput("no facets given")
    for f in facets:
        if not f:
            raise EmptyInput("empty facet")
        if len(set(f)) != len(f):
            raise DuplicateVertexInFace(f"repeated vertex in facet {f!r}")
    return SimplicialComplex(facets)


def cone_complex(X: SimplicialComplex, apex) -> SimplicialComplex:
    if apex in set(X.vertices):
        raise ApexCollision(f"apex {apex!r} already a vertex")
    if X.is_empty():
        return SimplicialComplex([[apex]])
    return SimplicialComplex([list(f) + [apex] for f in X.facets])


def join_complex(X: SimplicialComplex, Y: SimplicialComplex) -> SimplicialComplex:
    common = set(X.vertices) & set(Y.vertices)
    if common:
        raise VertexCollision(f"shared vertices {sorted(common, key=vkey)!r}")
    if X.is_empty():
        return Y
    if Y.is_empty():
        return X
    return SimplicialComplex([list(f) + list(g) for f in X.facets for g in Y.facets])


def sphere(dim: int, labels=None) -> SimplicialComplex:
    """Boundary of the (dim+1)-simplex."""
    labels = list(range(dim + 2)) if labels is None else list(labels)
    if len(labels) != dim + 2:
        raise ValueError("need dim+2 labels")
    return SimplicialComplex(list(combinations(labels, dim + 1)))


def suspension(X: SimplicialComplex, north="n", south="s") -> SimplicialComplex:
    return join_complex(SimplicialComplex([[north], [south]]), X)


def disjoint_union(X: SimplicialComplex, Y: SimplicialComplex, tags=("a", "b")):
    """Disjoint union with vertices relabelled as tag_label strings."""
    def tag(t):
        return lambda v: f"{t}_{v}"

    return SimplicialComplex(
        [[tag(tags[0])(v) for v in f] for f in X.facets]
        + [[tag(tags[1])(v) for v in f] for f in Y.facets]
    )


def barycentric_subdivision(X: SimplicialComplex):
    """Return (Sd X, carrier) where carrier maps each Sd-simplex to the
    largest X-simplex in its chain."""
    flags = set()
    for f in X.facets:
        for perm in permutations(f):
            chain = tuple(tuple(sorted(perm[: i + 1], key=vkey)) for i in range(len(perm)))
            flags.add(chain)
    sd = SimplicialComplex(flags)
    carrier = {s: max(s, key=len) for s in sd.all_simplices}
    return sd, carrier


def link_of_simplex(X: SimplicialComplex, sigma) -> SimplicialComplex:
    """Simplicial link; empty when sigma is a facet."""
    s = X.check(sigma)
    ss = set(s)
    pieces = []
    for f in X.facets:
        if ss.issubset(f):
            rest = [v for v in f if v not in ss]
            if rest:
                pieces.append(rest)
    return SimplicialComplex(pieces)
