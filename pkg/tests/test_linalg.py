from hypothesis import given, settings, strategies as st

import oracles
from stratkit import linalg
from stratkit.chains import parse_ring, simplicial_homology
from stratkit.corpus import torus7
from stratkit.simplex import build_complex, sphere

RP2 = [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2],
       [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]]

matrices = st.integers(1, 6).flatmap(
    lambda r: st.lists(st.lists(st.integers(-4, 4), min_size=r, max_size=r), min_size=1, max_size=6))


def _cols(rows_as_cols):
    return [{i: v for i, v in enumerate(col) if v} for col in rows_as_cols]


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_rank_matches_fraction_oracle(cols):
    nrows = len(cols[0])
    dense = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
    assert linalg.rank(nrows, _cols(cols)) == oracles.rank_mod(dense)
    assert linalg.rank(nrows, _cols(cols), 5) == oracles.rank_mod(dense, 5)
    assert len(linalg.invariant_factors(nrows, _cols(cols))) == oracles.rank_mod(dense)


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_invariant_factors_divide(cols):
    f = linalg.invariant_factors(len(cols[0]), _cols(cols))
    assert all(x > 0 for x in f)
    assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_kernel_vectors_are_in_kernel(cols):
    nrows = len(cols[0])
    C = _cols(cols)
    ker = linalg.integer_kernel(nrows, C)
    for v in ker:
        assert not any(linalg.apply(C, v).values())
    assert len(ker) == len(cols) - oracles.rank_mod(
        [[cols[j][i] for j in range(len(cols))] for i in range(nrows)])


def test_dense_rank():
    assert linalg.dense_rank_q([[1, 2], [2, 4]]) == 1
    assert linalg.dense_rank_q([[1, 0], [0, 1]]) == 2


def test_homology_examples():
    assert simplicial_homology(sphere(2)).ranks == (1, 0, 1)
    h = simplicial_homology(build_complex(RP2))
    assert h.ranks == (1, 0, 0) and h.torsion == ((), (2,), ())
    assert oracles.betti(RP2, 2) == (1, 1, 1)
    assert simplicial_homology(torus7()).ranks == oracles.betti(torus7().facets) == (1, 2, 1)


def test_rings():
    assert str(parse_ring("Z")) == "Z"
    h = simplicial_homology(build_complex(RP2), parse_ring("Fp:2"))
    assert h.ranks == (1, 1, 1)
    h = simplicial_homology(build_complex(RP2), parse_ring("Q"))
    assert h.ranks == (1, 0, 0)
