import pytest
from hypothesis import given, settings, strategies as st

import oracles
from stratkit.chains import simplicial_homology
from stratkit.corpus import entry
from stratkit.errors import NotACover, PerversityTooLarge
from stratkit.ihom import (
    allowability_table,
    calibrate_cone_offset,
    calibrate_two_cone_offset,
    cone_threshold_probe,
    dense_ih_ranks_q,
    intersection_chain_complex,
    intersection_homology,
    mv_exactness_check,
    on_full_triangulation,
    pi0_p,
    pi1_regular,
    two_cone_cases,
    two_cone_probe,
)
from stratkit.perv import (
    Perversity,
    constant_perversity,
    random_perversity,
    top_perversity,
    zero_perversity,
)
from stratkit.simplex import SimplicialComplex, sphere
from stratkit.strat import build_stratification, trivial_stratification


def _expected(name, key):
    return next(x.value for x in entry(name).expected if x.key == key)


def test_allowability_pinched_torus():
    S = entry("pinched_torus").strat("S")
    table = allowability_table(S, zero_perversity(S))
    assert not table.is_allowable(("x",))
    edges = [s for s in S.complex.simplices(1) if "x" in s]
    assert edges and not any(table.is_allowable(e) for e in edges)
    tri = [s for s in S.complex.simplices(2) if "x" in s]
    assert all(table.is_allowable(t) for t in tri)


def test_regular_case_is_ordinary_homology():
    T = trivial_stratification(sphere(2))
    h = intersection_homology(T, zero_perversity(T))
    assert h.ranks == simplicial_homology(T.complex).ranks


@pytest.mark.parametrize("name,key", [("pinched_torus", "ih:S:zero:Z"), ("sphere3", "ih:S:zero:Z"),
                                      ("cone_torus", "ih:S:zero:Z"), ("susp_torus", "ih:S:zero:Z"),
                                      ("susp_torus", "ih:S:top:Z")])
def test_frozen_values(name, key):
    S = entry(name).strat("S")
    p = top_perversity(S) if ":top:" in key else zero_perversity(S)
    h = intersection_homology(S, p)
    assert (h.ranks, h.torsion) == _expected(name, key)


CASES = [("pinched_torus", "S"), ("susp_torus", "S"), ("cone_torus", "S"),
         ("susp_chain_x3", "S"), ("susp_chain_x3", "R"), ("twocone_b1_S1", "S")]


@given(st.sampled_from(CASES), st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_ih_against_oracle(case, seed):
    S = entry(case[0]).strat(case[1])
    p = random_perversity(S, seed)
    R, q = on_full_triangulation(S, p)
    values = {k: (oracles.INF if v.is_pos_inf else -oracles.INF if v.is_neg_inf else int(v))
              for k, v in q.singular_items()}
    expect = oracles.ih_of(R, values)
    assert intersection_homology(S, p, "Q").ranks == expect
    assert dense_ih_ranks_q(S, p) == expect


def test_projective_plane_torsion():
    rp2 = [[1, 2, 4], [2, 3, 4], [1, 3, 5], [3, 4, 5], [1, 4, 6],
           [4, 5, 6], [2, 5, 6], [1, 2, 5], [2, 3, 6], [1, 3, 6]]
    K = SimplicialComplex(rp2)
    S = build_stratification(K, 2, {0: [[1]]})
    z = zero_perversity(S)
    h = intersection_homology(S, z, "Z")
    assert h.ranks == oracles.betti(rp2) and h.torsion[1] == (2,)
    assert intersection_homology(S, z, "Fp:2").ranks == oracles.betti(rp2, 2)


def test_chain_complex_d2():
    S = entry("susp_torus").strat("S")
    for k in (-1, 0, 1, 2):
        intersection_chain_complex(S, constant_perversity(S, k)).check_d2()


def test_pi0():
    S = entry("pinched_torus").strat("S")
    r = pi0_p(S, zero_perversity(S))
    assert r.count == _expected("pinched_torus", "pi0:S:zero")
    L = entry("line_point").strat("S")
    assert pi0_p(L, constant_perversity(L, -1)).count == 2
    with pytest.raises(PerversityTooLarge):
        pi0_p(S, constant_perversity(S, 1))


def test_pi1_pinched_torus():
    g = pi1_regular(entry("pinched_torus").strat("S"))
    assert (g.abel_rank, g.abel_torsion) == _expected("pinched_torus", "pi1ab:S")
    assert g.h1_agrees
    g = pi1_regular(trivial_stratification(sphere(2)))
    assert g.is_trivial()


def test_cone_probe():
    assert calibrate_cone_offset() == [0]
    L = trivial_stratification(sphere(1))
    p = zero_perversity(L)
    r = cone_threshold_probe(L, p, 0, offset=0)
    assert r.j0 == r.predicted
    r = cone_threshold_probe(L, p, 1, offset=0)
    assert r.j0 == r.predicted == 0


def test_two_cone():
    assert calibrate_two_cone_offset() == [0]
    link = trivial_stratification(sphere(1))
    fine, coarse, ps = two_cone_cases(2, link)
    assert ps
    for p in ps[:3]:
        r = two_cone_probe(2, link, p, coarse, offset=0)
        assert r.bounds_ok and r.matches


def test_two_cone_rejects_outside_sandwich():
    link = trivial_stratification(sphere(1))
    e = entry("twocone_b2_S1")
    fine, coarse = e.strat("S"), e.strat("T")
    vals = {s.id: 0 for s in fine.singular_strata()}
    vals[fine.stratum_of[(fine.meta.get("apex", "v"),)]] = 5
    r = two_cone_probe(2, link, Perversity(fine, vals), coarse)
    assert not r.bounds_ok and r.certificate.startswith("need")
    assert r.lines()[0].startswith("rejected")


def test_mayer_vietoris_suspension():
    S = entry("susp_torus").strat("S")
    for p in (zero_perversity(S), top_perversity(S)):
        r = mv_exactness_check(S, p, [["n"]], [["s"]])
        assert r.exact, r.failures


def test_mayer_vietoris_not_a_cover():
    S = entry("susp_torus").strat("S")
    edge = next(s for s in S.complex.simplices(1) if "n" in s)
    with pytest.raises(NotACover):
        mv_exactness_check(S, zero_perversity(S), [edge], [[edge[0]]])
