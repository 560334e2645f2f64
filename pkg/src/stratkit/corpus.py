"""Named fixtures: complexes, stratifications, coarsenings and expected values.

Every expected value carries a provenance tag.  DERIVED values were
produced once by the named oracle and frozen here; ``verify corpus-oracles``
recomputes them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .simplex import SimplicialComplex, build_complex, sphere, suspension
from .strat import (
    build_stratification,
    cone_stratification,
    join_sphere_stratification,
    point_refinement,
    trivial_stratification,
)


@dataclass(frozen=True)
class Expected:
    key: str            # e.g. "homology:X", "ih:S:zero:Z", "link:S:x"
    value: object
    tag: str            # PAPER, TRIVIAL or DERIVED
    oracle: str = ""    # for DERIVED values
    source: str = ""    # short pointer for PAPER values


@dataclass
class CorpusEntry:
    name: str
    description: str
    complex: SimplicialComplex | None = None
    strats: dict = field(default_factory=dict)
    coarsenings: dict = field(default_factory=dict)    # name -> (fine, coarse)
    meta: dict = field(default_factory=dict)
    expected: list = field(default_factory=list)
    symbolic: str = ""                                 # symcalc expression
    perversities: dict = field(default_factory=dict)   # (strat, name) -> {stratum id: value}
    tags: set = field(default_factory=set)

    def strat(self, name=None):
        if name is None:
            name = next(iter(self.strats))
        return self.strats[name]

    def coarsening(self, name=None):
        from .coarsen import build_coarsening
        if name is None:
            name = next(iter(self.coarsenings))
        fine, coarse = self.coarsenings[name]
        return build_coarsening(self.strats[fine], self.strats[coarse], f"{self.name}:{name}")


# -- building blocks -----------------------------------------------------------

def pinched_torus_complex():
    """Cylinder between two triangles, both boundary circles coned to x."""
    fs = []
    for i in range(3):
        j = (i + 1) % 3
        fs += [("x", f"u{i}", f"u{j}"), ("x", f"w{i}", f"w{j}"),
               (f"u{i}", f"u{j}", f"w{i}"), (f"u{j}", f"w{i}", f"w{j}")]
    return build_complex(fs)


def torus7():
    """Moebius' seven-vertex torus."""
    return SimplicialComplex([(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
                             + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)])


def staircase_s3():
    """Boundary of the staircase triangulation of a product of two
    triangles, with the product of their boundaries as a 3x3 torus."""
    tops = []
    for steps in sorted(set(itertools.permutations("RRUU"))):
        i = j = 0
        chain = [(0, 0)]
        for s in steps:
            i, j = (i + 1, j) if s == "R" else (i, j + 1)
            chain.append((i, j))
        tops.append(chain)
    count = {}
    for t in tops:
        for f in itertools.combinations(t, 4):
            count[f] = count.get(f, 0) + 1
    lab = lambda v: f"g{v[0]}{v[1]}"
    s3 = build_complex([[lab(v) for v in f] for f, c in count.items() if c == 1])
    torus = SimplicialComplex([s for s in s3.all_simplices
                               if len({v[1] for v in s}) < 3 and len({v[2] for v in s}) < 3])
    return s3, torus


def _nonadjacent_pair(K):
    edges = set(K.simplices(1))
    for a, b in itertools.combinations(K.vertices, 2):
        if (a, b) not in edges:
            return a, b
    raise ValueError("complete 1-skeleton")


# -- entries ---------------------------------------------------------------------

def _pinched_torus():
    X = pinched_torus_complex()
    S = build_stratification(X, 2, {0: [["x"]]}, {"pre_thom_mather": True})
    T = trivial_stratification(X)
    return CorpusEntry(
        "pinched_torus",
        "torus with a meridian pinched to the point x; singular stratum {x}",
        X, {"S": S, "T": T}, {"pinch": ("S", "T")},
        {"normal": False, "connected": True, "pre_thom_mather": True},
        [
            Expected("homology:X", ((1, 1, 1), ((), (), ())), "DERIVED", "snf-vs-dense"),
            Expected("link:S:x", (2, (2, 2)), "DERIVED", "coface-enumeration",
                     "components and Betti numbers of the link of x"),
            Expected("ih:S:zero:Z", ((1, 0, 1), ((), (), ())), "DERIVED", "snf-vs-dense"),
            Expected("pi0:S:zero", 1, "DERIVED", "spine-vs-open-star"),
            Expected("pi1ab:S", (1, ()), "PAPER", "", "pinched torus regular part has pi_1 = Z"),
            Expected("classify:pinch", ("Exceptional", "RegularSource"), "DERIVED", "classification"),
        ],
        symbolic="Coarsen(T,trivial)",
        tags={"coarsening", "exceptional"},
    )


def _spheres():
    out = []
    for n in range(1, 5):
        X = sphere(n)
        T = trivial_stratification(X)
        strats = {"T": T}
        coarsenings = {}
        expected = [Expected("homology:X", (tuple([1] + [0] * (n - 1) + [1]), ((),) * (n + 1)),
                             "TRIVIAL")]
        tags = {"sphere"}
        if n >= 2:
            v = X.vertices[0]
            Sx = point_refinement(T, v)
            strats = {"S": Sx, "T": T}
            coarsenings = {"refine": ("S", "T")}
            expected.append(Expected("ih:S:zero:Z", expected[0].value, "DERIVED", "snf-vs-dense"))
            tags |= {"coarsening", "exceptional", "sphere-link"}
        out.append(CorpusEntry(
            f"sphere{n}", f"boundary of the {n + 1}-simplex" + (", refined at a vertex" if n >= 2 else ""),
            X, strats, coarsenings, {"normal": True, "connected": True, "pre_thom_mather": True},
            expected, symbolic=f"S{n}" if n <= 4 else "", tags=tags))
    return out


def _torus_family():
    X = torus7()
    T = trivial_stratification(X)
    C = cone_stratification(T, "c")
    J = join_sphere_stratification(0, T, ["n", "s"])
    JJ = join_sphere_stratification(0, J, ["nn", "ss"])
    meta = {"normal": True, "connected": True, "pre_thom_mather": True}
    h_t = ((1, 2, 1), ((), (), ()))
    return [
        CorpusEntry("torus7", "seven-vertex torus", X, {"T": T}, {}, meta,
                    [Expected("homology:X", h_t, "DERIVED", "snf-vs-dense")], tags={"manifold"}),
        CorpusEntry("cone_torus", "closed cone on the torus, apex singular", C.complex, {"S": C}, {},
                    dict(meta, boundary=True),
                    [Expected("ih:S:zero:Z", ((1, 2, 0, 0), ((),) * 4), "DERIVED", "snf-vs-dense")],
                    tags={"cone"}),
        CorpusEntry("susp_torus", "suspension of the torus, poles singular", J.complex, {"S": J}, {}, meta,
                    [Expected("ih:S:zero:Z", ((1, 2, 0, 1), ((),) * 4), "DERIVED", "snf-vs-dense"),
                     Expected("ih:S:top:Z", ((1, 0, 2, 1), ((),) * 4), "DERIVED", "snf-vs-dense"),
                     Expected("pi0:S:zero", 1, "DERIVED", "spine-vs-open-star")],
                    symbolic="JoinSphere(0,T2)", tags={"suspension", "mv"}),
        CorpusEntry("dsusp_torus", "double suspension of the torus", JJ.complex, {"S": JJ}, {}, meta,
                    [Expected("homology:X", ((1, 0, 0, 2, 1), ((),) * 5), "DERIVED", "snf-vs-dense")],
                    tags={"suspension"}),
    ]


def _line_with_point():
    X = build_complex([["a", "z"], ["z", "b"]])
    S = build_stratification(X, 1, {0: [["z"]]})
    T = trivial_stratification(X)
    return CorpusEntry(
        "line_point", "an interval with its midpoint as a singular stratum of codimension 1",
        X, {"S": S, "T": T}, {"forget": ("S", "T")}, {"connected": True},
        [Expected("k-perversity:forget", False, "PAPER", "", "1-exceptional strata admit no K-perversity")],
        tags={"coarsening", "one-exceptional"})


def _two_cone(b, link_name, link):
    from .ihom import two_cone_stratifications
    _, coarse = two_cone_stratifications(b, link)
    fine = point_refinement(coarse, coarse.meta.get("apex", "v"))
    return CorpusEntry(
        f"twocone_b{b}_{link_name}",
        f"cone on S^{b - 1} * {link_name}; the apex is refined in S and absorbed in T",
        fine.complex, {"S": fine, "T": coarse}, {"fountain": ("S", "T")},
        {"normal": True, "connected": True, "pre_thom_mather": True,
         "two_cone_b": b, "two_cone_link": link},
        [Expected("classify:fountain:apex", "Fountain", "DERIVED", "classification")],
        tags={"coarsening", "fountain", "two-cone"})


def _susp_chain():
    s3, torus = staircase_s3()
    P, Q = _nonadjacent_pair(torus)
    # closed model: S^5 as a double suspension of S^4 = suspension of S^3
    s4 = suspension(s3, "a", "b")
    s5 = suspension(s4, "v", "w")
    circle = [["v", P], ["w", P], ["v", Q], ["w", Q]]
    x3 = [[x] + list(f) for x in "vw" for f in torus.facets]
    meta_cs = {"pre_thom_mather": True}
    S = build_stratification(s5, 5, {0: [["v"], ["w"]], 1: circle, 3: x3}, meta_cs)
    R = build_stratification(s5, 5, {1: circle, 3: x3})
    T = trivial_stratification(s5)
    full = CorpusEntry(
        "susp_chain", "S^5 = cone-point model: torus in S^3, cone lines through two torus points",
        s5, {"S": S, "R": R, "T": T}, {"SR": ("S", "R"), "RT": ("R", "T"), "ST": ("S", "T")},
        {"normal": True, "connected": True},
        [Expected("cs:S", True, "PAPER", "", "S is a CS set"),
         Expected("cs:R", False, "PAPER", "", "the link of v in X_1 is T^2, of P is S^2"),
         Expected("cs:T", True, "PAPER", "", "T is a CS set")],
        tags={"coarsening", "cs-negative"})
    # the closed subspace X_3 (suspension of the torus) with induced filtrations
    X3 = SimplicialComplex(x3)
    S3 = build_stratification(X3, 3, {0: [["v"], ["w"]], 1: circle})
    R3 = build_stratification(X3, 3, {1: circle})
    T3 = trivial_stratification(X3)
    sub = CorpusEntry(
        "susp_chain_x3", "the X_3 level of susp_chain: suspended torus with a circle through both poles",
        X3, {"S": S3, "R": R3, "T": T3}, {"SR": ("S", "R")},
        {"normal": True, "connected": True},
        [Expected("cs:R", False, "PAPER", "", "X_1 in X_3 has links T^2 and S^2"),
         Expected("classify:SR", ("Fountain", "Fountain", "Source", "Source", "RegularSource"),
                  "DERIVED", "classification")],
        tags={"coarsening", "fountain", "cs-negative"})
    return [full, sub]


def _depth_two():
    X = SimplicialComplex(list(itertools.combinations(range(6), 5)))
    S = build_stratification(X, 4, {0: [[0]], 1: [[0, 1], [1, 2], [0, 2]],
                                    2: [list(c) for c in itertools.combinations(range(4), 3)]},
                             {"pre_thom_mather": True})
    T = trivial_stratification(X)
    return CorpusEntry(
        "flag_s4", "boundary of the 5-simplex with a point in a circle in a 2-sphere",
        X, {"S": S, "T": T}, {"forget": ("S", "T")},
        {"normal": True, "connected": True, "pre_thom_mather": True},
        [Expected("simple:forget", False, "DERIVED", "depth-of-V")],
        tags={"coarsening", "exceptional", "depth-two"})


def _dsusp_poincare():
    return CorpusEntry(
        "dsusp_poincare", "double suspension of the Poincare sphere, coarsened to S^5 (symbolic)",
        symbolic="Coarsen(JoinSphere(0,JoinSphere(0,P)),trivial)",
        meta={"normal": True, "connected": True, "pre_thom_mather": True},
        expected=[
            Expected("exceptional-dims", (0, 0, 1, 1), "PAPER", "", "four exceptional strata"),
            Expected("pushforward:dual:1", "0", "PAPER", "", "the pushforward is the zero perversity"),
        ],
        tags={"symbolic"})


@lru_cache(maxsize=1)
def _entries():
    from .simplex import sphere as _sphere
    s0 = trivial_stratification(SimplicialComplex([["a"], ["b"]]), 0)
    s1 = trivial_stratification(_sphere(1, ["a", "b", "c"]))
    out = [_pinched_torus()]
    out += _spheres()
    out += _torus_family()
    out.append(_line_with_point())
    out.append(_two_cone(1, "S1", s1))
    out.append(_two_cone(2, "S1", s1))
    out.append(_two_cone(2, "S0", s0))
    out += _susp_chain()
    out.append(_depth_two())
    out.append(_dsusp_poincare())
    return tuple(out)


def corpus():
    return list(_entries())


def entry(name) -> CorpusEntry:
    for e in _entries():
        if e.name == name:
            return e
    raise KeyError(name)


def names():
    return [e.name for e in _entries()]
