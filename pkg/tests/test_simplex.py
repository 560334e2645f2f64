import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from stratkit.chains import simplicial_homology
from stratkit.errors import ApexCollision, DuplicateVertexInFace, EmptyInput
from stratkit.simplex import (
    SimplicialComplex,
    barycentric_subdivision,
    build_complex,
    cone_complex,
    join_complex,
    link_of_simplex,
    sphere,
    suspension,
)
from stratkit.corpus import torus7

OCTAHEDRON = [[a, b, c] for a in ("x+", "x-") for b in ("y+", "y-") for c in ("z+", "z-")]


def facet_sets(draw_max=6):
    return st.lists(
        st.lists(st.integers(0, draw_max), min_size=1, max_size=4, unique=True),
        min_size=1, max_size=6)


def test_face_closure():
    K = build_complex([[0, 1], [1, 2]])
    assert set(K.all_simplices) == {(0,), (1,), (2,), (0, 1), (1, 2)}
    assert K.dim == 1


def test_single_vertex():
    K = build_complex([[0]])
    assert K.dim == 0 and K.vertices == (0,)


def test_tetrahedron_boundary_counts():
    K = build_complex(itertools.combinations(range(4), 3))
    assert K.f_vector == (4, 6, 4)
    assert K.euler_characteristic() == 2


def test_errors():
    with pytest.raises(EmptyInput):
        build_complex([])
    with pytest.raises(DuplicateVertexInFace):
        build_complex([[0, 0, 1]])
    with pytest.raises(ApexCollision):
        cone_complex(build_complex([[0, 1]]), 0)


def test_cone_over_two_points_is_path():
    C = cone_complex(build_complex([["a"], ["b"]]), "v")
    assert set(C.facets) == {("a", "v"), ("b", "v")}


def test_cone_over_circle_acyclic():
    C = cone_complex(sphere(1), "v")
    h = simplicial_homology(C, reduced=True)
    assert h.ranks == (0, 0, 0)


def test_cone_over_torus_counts():
    C = cone_complex(torus7(), "v")
    # frozen from the face count of the 7-vertex torus
    assert len(C.vertices) == 8 and len(C.facets) == 14


def test_join_of_two_zero_spheres_is_square():
    K = join_complex(build_complex([["a"], ["b"]]), build_complex([["c"], ["d"]]))
    assert K.f_vector == (4, 4)
    assert oracles.betti(K.facets) == (1, 1)


def test_suspension_of_circle():
    K = suspension(sphere(1))
    assert simplicial_homology(K).ranks == oracles.betti(K.facets) == (1, 0, 1)


def test_join_with_point_is_cone():
    X = sphere(1)
    assert join_complex(X, build_complex([["v"]])) == cone_complex(X, "v")


def test_subdivision_edge_and_triangle():
    sd, top = barycentric_subdivision(build_complex([[0, 1]]))
    assert sd.f_vector == (3, 2)
    sd, top = barycentric_subdivision(build_complex([[0, 1, 2]]))
    assert sd.f_vector == (7, 12, 6)


def test_subdivision_preserves_homology():
    K = sphere(2)
    sd, _ = barycentric_subdivision(K)
    assert simplicial_homology(sd).ranks == simplicial_homology(K).ranks == (1, 0, 1)


def test_links():
    tri = sphere(1, ["a", "b", "c"])
    assert set(link_of_simplex(tri, ["a"]).facets) == {("b",), ("c",)}
    tet = sphere(2)
    L = link_of_simplex(tet, [tet.vertices[0]])
    assert oracles.betti(L.facets) == (1, 1)
    octa = build_complex(OCTAHEDRON)
    L = link_of_simplex(octa, ["x+", "y+"])
    assert len(L.facets) == 2 and L.dim == 0


@given(facet_sets())
@settings(max_examples=60, deadline=None)
def test_closure_matches_oracle(facets):
    K = build_complex(facets)
    assert set(K.all_simplices) == {tuple(sorted(s)) for s in oracles.closure(facets)}
    assert K.euler_characteristic() == oracles.euler(facets)


@given(facet_sets(), st.data())
@settings(max_examples=60, deadline=None)
def test_link_matches_coface_enumeration(facets, data):
    K = build_complex(facets)
    sigma = data.draw(st.sampled_from(sorted(K.all_simplices)))
    L = link_of_simplex(K, sigma)
    assert set(L.all_simplices) == oracles.link(facets, sigma)


@given(facet_sets(5))
@settings(max_examples=40, deadline=None)
def test_subdivision_homology_invariant(facets):
    K = build_complex(facets)
    sd, top = barycentric_subdivision(K)
    assert simplicial_homology(sd).ranks == simplicial_homology(K).ranks
    assert all(len(top[s]) >= len(s) for s in sd.all_simplices)
