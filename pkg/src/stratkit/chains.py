"""Rings, homology results and simplicial chain complexes."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import RingUnsupported
from .simplex import SimplicialComplex, boundary_faces

_SMALL_PRIMES = [p for p in range(2, 98) if all(p % d for d in range(2, int(p ** 0.5) + 1))]


@dataclass(frozen=True)
class Ring:
    name: str
    p: int | None = None  # characteristic for F_p

    @property
    def is_field(self):
        return self.name != "Z"

    def __str__(self):
        return self.name if self.p is None else f"Fp:{self.p}"


Z = Ring("Z")
Q = Ring("Q")


def parse_ring(text) -> Ring:
    if isinstance(text, Ring):
        return text
    t = str(text).strip()
    if t in ("Z", "ZZ"):
        return Z
    if t in ("Q", "QQ"):
        return Q
    if t.startswith("Fp:") or t.startswith("F"):
        digits = t[3:] if t.startswith("Fp:") else t[1:]
        try:
            p = int(digits)
        except ValueError:
            raise RingUnsupported(f"bad ring {t!r}") from None
        if p not in _SMALL_PRIMES:
            raise RingUnsupported(f"F_{p}: need a prime p <= 97")
        return Ring(f"F{p}", p)
    raise RingUnsupported(f"unsupported ring {t!r}")


@dataclass(frozen=True)
class HomologyResult:
    ranks: tuple
    torsion: tuple  # per degree, tuple of invariant factors > 1
    ring: Ring = Z

    def __post_init__(self):
        if self.ring.is_field and any(self.torsion):
            raise ValueError("torsion over a field")

    @property
    def top(self):
        return len(self.ranks) - 1

    def rank(self, k):
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def tors(self, k):
        return self.torsion[k] if 0 <= k < len(self.torsion) else ()

    def group(self, k):
        return (self.rank(k), self.tors(k))

    def is_zero(self, k):
        return self.rank(k) == 0 and not self.tors(k)

    def trimmed(self):
        """Drop trailing zero degrees (keeps degree 0)."""
        n = len(self.ranks)
        while n > 1 and self.ranks[n - 1] == 0 and not self.torsion[n - 1]:
            n -= 1
        return HomologyResult(self.ranks[:n], self.torsion[:n], self.ring)

    def same_groups(self, other):
        n = max(len(self.ranks), len(other.ranks))
        return all(self.group(k) == other.group(k) for k in range(n))

    def lines(self, prefix="IH"):
        return [
            f"{prefix}[{k}] rank={r} torsion=[{','.join(map(str, t))}] ring={self.ring}"
            for k, (r, t) in enumerate(zip(self.ranks, self.torsion))
        ]

    def __str__(self):
        return "\n".join(self.lines())


def factors_to_torsion(factors):
    return tuple(d for d in factors if d > 1)


@dataclass
class SimplicialChains:
    """Index bookkeeping for the simplicial chain complex of a complex."""

    complex: SimplicialComplex
    index: dict = field(init=False)

    def __post_init__(self):
        self.index = {}
        for k in range(self.complex.dim + 1):
            self.index[k] = {s: i for i, s in enumerate(self.complex.simplices(k))}

    def basis(self, k):
        return self.complex.simplices(k)

    def boundary_column(self, s):
        k = len(s) - 1
        if k == 0:
            return {}
        idx = self.index[k - 1]
        return {idx[f]: sign for sign, f in boundary_faces(s)}

    def boundary(self, k, simplices=None):
        """Columns of the boundary map C_k -> C_{k-1} (optionally restricted)."""
        simplices = self.basis(k) if simplices is None else simplices
        return [self.boundary_column(s) for s in simplices]


def simplicial_homology(K: SimplicialComplex, ring=Z, reduced=False, top=None) -> HomologyResult:
    ring = parse_ring(ring)
    ch = SimplicialChains(K)
    top = K.dim if top is None else top
    if K.is_empty():
        if reduced:
            # reduced homology of the empty set: Z in degree -1, recorded as nothing
            return HomologyResult((0,) * (top + 1), ((),) * (top + 1), ring)
        return HomologyResult((0,) * (top + 1), ((),) * (top + 1), ring)
    ranks, tors = [], []
    rank_cache = {}
    factor_cache = {}

    def bdry_rank(k):
        if k not in rank_cache:
            if k <= 0 or k > K.dim:
                rank_cache[k] = 0
            elif ring.p is None:
                f = linalg.invariant_factors(len(ch.basis(k - 1)), ch.boundary(k))
                factor_cache[k] = f
                rank_cache[k] = len(f)
            else:
                rank_cache[k] = linalg.rank(len(ch.basis(k - 1)), ch.boundary(k), ring.p)
        return rank_cache[k]

    for k in range(top + 1):
        n = len(ch.basis(k))
        r = n - bdry_rank(k) - bdry_rank(k + 1)
        t = ()
        if ring.name == "Z" and 0 < k + 1 <= K.dim:
            t = factors_to_torsion(factor_cache[k + 1])
        ranks.append(r)
        tors.append(t)
    if reduced:
        ranks[0] -= 1
    return HomologyResult(tuple(ranks), tuple(tors), ring)


def betti_signature(K: SimplicialComplex):
    """Reduced integral homology as a hashable tuple; None for the empty complex."""
    if K.is_empty():
        return None
    h = simplicial_homology(K, Z, reduced=True)
    return tuple(zip(h.ranks, h.torsion))
