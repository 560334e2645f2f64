import pytest
from hypothesis import given, settings, strategies as st

import oracles
from stratkit.chains import simplicial_homology
from stratkit.corpus import entry, pinched_torus_complex, torus7
from stratkit.errors import (
    AlreadyAPointStratum,
    DifferentComplex,
    EmptyIntersectionWithRegularPart,
    NotNested,
    RegularSimplex,
    SkeletonNotSubcomplex,
)
from stratkit.simplex import build_complex, cone_complex, sphere
from stratkit.strat import (
    build_stratification,
    carrier_index,
    cone_stratification,
    cs_diagnostics,
    induced_stratification,
    is_stratified_coarsening,
    join_sphere_stratification,
    point_refinement,
    regular_components_bruteforce,
    regular_spine,
    stratum_link,
    subdivided,
    trivial_stratification,
)


@pytest.fixture(scope="module")
def pinched():
    return entry("pinched_torus").strat("S")


def test_trivial_torus():
    T = trivial_stratification(torus7())
    assert len(T.strata) == 1 and T.depth == 0


def test_pinched_torus_strata(pinched):
    dims = sorted(s.formal_dim for s in pinched.strata)
    assert dims == [0, 2] and pinched.depth == 1
    assert [s.regular for s in pinched.strata] == [False, True]


def test_suspended_torus_strata():
    J = entry("susp_torus").strat("S")
    assert sorted(s.formal_dim for s in J.strata) == [0, 0, 3]


def test_carrier_index(pinched):
    C = cone_stratification(trivial_stratification(sphere(1)), "v")
    assert carrier_index(C, ["v"]) == 0
    assert carrier_index(pinched, pinched.complex.facets[0]) == 2
    edge = next(s for s in pinched.complex.simplices(1) if "x" in s)
    assert carrier_index(pinched, edge) == 2


def test_ids_follow_dimension_then_lexmin():
    J = entry("susp_torus").strat("S")
    keys = [J.stratum_key(s.id) for s in J.strata]
    assert keys == sorted(keys)


def test_builder_errors():
    X = sphere(2)
    v = X.vertices
    with pytest.raises(SkeletonNotSubcomplex):
        build_stratification(X, 2, {1: [[v[0], v[1], "zz"]]})
    with pytest.raises(NotNested):
        build_stratification(X, 2, {0: [[v[0]]], 1: [[v[1], v[2]]]})


def test_coarsening_relation(pinched):
    ok, iota = is_stratified_coarsening(pinched, pinched)
    assert ok and iota == {s: s for s in pinched.ids}
    T = trivial_stratification(pinched.complex)
    ok, iota = is_stratified_coarsening(pinched, T)
    assert ok and set(iota.values()) == {0}
    with pytest.raises(DifferentComplex):
        is_stratified_coarsening(pinched, trivial_stratification(torus7()))
    ok, _ = is_stratified_coarsening(T, pinched)
    assert not ok


def test_susp_chain_pair_is_a_coarsening():
    e = entry("susp_chain")
    ok, iota = is_stratified_coarsening(e.strat("S"), e.strat("R"))
    assert ok
    S = e.strat("S")
    v, w = S.stratum_of[("v",)], S.stratum_of[("w",)]
    assert iota[v] == iota[w] == e.strat("R").stratum_of[("v",)]


def test_induced(pinched):
    T = trivial_stratification(torus7())
    sub = [f for f in torus7().facets if 0 in f]
    assert len(induced_stratification(T, sub).strata) == 1
    star = [f for f in pinched.complex.facets if "x" in f]
    R = induced_stratification(pinched, star)
    assert sum(1 for s in R.strata if s.singular) == 1
    J = entry("susp_torus").strat("S")
    K = induced_stratification(J, [["n"]], open_complement=True)
    assert sum(1 for s in K.strata if s.singular) == 1
    with pytest.raises(EmptyIntersectionWithRegularPart):
        induced_stratification(pinched, [["x"]])


def test_cone_stratification():
    C = cone_stratification(trivial_stratification(sphere(1)), "v")
    assert len(C.strata) == 2 and C.depth == 1
    apex = C.stratum_of[("v",)]
    assert all(C.leq(apex, s) for s in C.ids)
    P = entry("pinched_torus").strat("S")
    CP = cone_stratification(P, "c")
    assert sorted(s.formal_dim for s in CP.strata) == [0, 1, 3]


def test_join_sphere():
    J = join_sphere_stratification(0, trivial_stratification(sphere(1)), ["n", "s"])
    bottoms = [s for s in J.strata if s.formal_dim == 0]
    assert len(bottoms) == 2 and J.depth == 1


def test_point_refinement():
    T = trivial_stratification(sphere(2))
    S = point_refinement(T, T.complex.vertices[0])
    ok, iota = is_stratified_coarsening(S, T)
    assert ok
    with pytest.raises(AlreadyAPointStratum):
        point_refinement(S, T.complex.vertices[0])


def test_susp_chain_S_is_point_refinement_of_R():
    e = entry("susp_chain_x3")
    S, R = e.strat("S"), e.strat("R")
    assert point_refinement(point_refinement(R, "v"), "w").same_filtration(S)


def test_links(pinched):
    L = stratum_link(pinched, ["x"])
    assert len(L.complex.connected_components()) == 2
    assert oracles.betti(L.complex.facets) == (2, 2)
    with pytest.raises(RegularSimplex):
        stratum_link(pinched, pinched.complex.facets[0])
    C = cone_stratification(trivial_stratification(torus7()), "v")
    assert stratum_link(C, ["v"]).complex == torus7()


def test_diagnostics(pinched):
    assert cs_diagnostics(trivial_stratification(torus7())).passed
    J = entry("susp_torus").strat("S")
    d = cs_diagnostics(J)
    assert d.passed and d.normal
    d = cs_diagnostics(pinched)
    assert not d.normal
    d = cs_diagnostics(entry("susp_chain_x3").strat("R"))
    assert not d.links_consistent
    rec = d.link_inconsistencies[0]
    assert {rec["sa"], rec["sb"]} == {"(0,0,1)", "(0,2,1)"}


def test_spines(pinched):
    sp = regular_spine(pinched)
    assert len(sp.components()) == 1
    assert simplicial_homology(sp.complex).ranks[1] == 1
    T = trivial_stratification(sphere(2))
    assert simplicial_homology(regular_spine(T).complex).ranks == (1, 0, 1)
    J = entry("susp_torus").strat("S")
    assert simplicial_homology(regular_spine(J).complex).ranks[:3] == (1, 2, 1)


def test_fullness_and_subdivision():
    S = entry("susp_chain").strat("S")
    assert not S.is_full
    P = entry("pinched_torus").strat("S")
    R, idmap = subdivided(P)
    assert R.is_full and len(R.strata) == len(P.strata)
    assert sorted(idmap) == sorted(P.ids)


@given(st.integers(1, 3), st.integers(0, 3))
@settings(max_examples=20, deadline=None)
def test_refine_any_vertex_of_a_sphere(n, i):
    T = trivial_stratification(sphere(n))
    v = T.complex.vertices[i % len(T.complex.vertices)]
    S = point_refinement(T, v)
    assert is_stratified_coarsening(S, T)[0]
    assert regular_components_bruteforce(S) == (2 if n == 0 else 1)
    assert len(regular_spine(S).components()) == regular_components_bruteforce(S)
