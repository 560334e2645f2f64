import pytest
from hypothesis import given, settings, strategies as st

from stratkit.corpus import entry
from stratkit.perv import (
    INF,
    NEG_INF,
    CodimPerversityFn,
    ExtInt,
    Perversity,
    constant_perversity,
    dual,
    ext,
    from_codim_fn,
    growing_check,
    is_GM,
    is_K_perversity,
    pullback,
    pushforward,
    random_K_perversity,
    random_perversity,
    top_perversity,
    zero_perversity,
)
from stratkit.verify import law_coarsenings


def test_extended_arithmetic():
    assert ExtInt(INF) + 3 == ExtInt(INF)
    assert -ExtInt(INF) == ExtInt(NEG_INF)
    assert ExtInt(NEG_INF) < ExtInt(-10**9) < ExtInt(0) < ExtInt(INF)
    assert str(ext(INF)) == "inf" and str(ext(NEG_INF)) == "-inf"


def test_top_and_dual():
    S = entry("susp_torus").strat("S")
    t = top_perversity(S)
    assert {v for _, v in t.singular_items()} == {ext(1)}
    assert dual(zero_perversity(S)) == t
    assert dual(t) == zero_perversity(S)


def test_regular_values_pinned():
    S = entry("pinched_torus").strat("S")
    reg = next(s.id for s in S.strata if s.regular)
    sing = next(s.id for s in S.strata if s.singular)
    with pytest.raises(ValueError):
        Perversity(S, {sing: 0, reg: 1})
    with pytest.raises(ValueError):
        Perversity(S, {})


def test_codim_functions():
    S = entry("cone_torus").strat("S")
    p = from_codim_fn(S, [0, 0, 0, 1])
    assert [v for _, v in p.singular_items()] == [ext(1)]
    assert from_codim_fn(S, CodimPerversityFn.top()) == top_perversity(S)
    with pytest.raises(ValueError):
        CodimPerversityFn((1, 0))


def test_growing_and_gm():
    assert growing_check([0, 0, 0, 1, 2], 4)
    assert not growing_check([0, 0, 0, 0, 2], 4)
    assert is_GM([0, 0, 0, 1], 3)
    assert not is_GM([0, 0, 1, 1], 3)
    assert growing_check(CodimPerversityFn.top(), 8)
    assert not is_GM(CodimPerversityFn.top(), 8)


def test_k_perversity_line_with_point():
    c = entry("line_point").coarsening("forget")
    for k in range(-3, 4):
        assert not is_K_perversity(c, constant_perversity(c.source, k))


def test_k_perversity_certificates():
    c = entry("susp_chain").coarsening("SR")
    S = c.source
    vals = {s.id: 0 for s in S.singular_strata()}
    assert is_K_perversity(c, Perversity(S, vals))
    fountains = c.fountains()
    vals[fountains[0]] = 1
    bad = is_K_perversity(c, Perversity(S, vals))
    assert not bad and bad.rule in ("K1", "K2")


def test_pushforward_takes_infimum():
    c = entry("susp_chain").coarsening("SR")
    S = c.source
    vals = {s.id: s.codim - 2 for s in S.singular_strata()}
    q = pushforward(c, Perversity(S, vals))
    for t in c.target.singular_strata():
        pre = [vals[s] for s, u in c.iota.items() if u == t.id and s in vals]
        assert q[t.id] == ext(min(pre))


COARSENINGS = [c for _, c in law_coarsenings()]


@given(st.integers(0, len(COARSENINGS) - 1), st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_push_pull_adjunction(i, seed):
    c = COARSENINGS[i]
    q = random_perversity(c.target, seed)
    assert pushforward(c, pullback(c, q)) <= q or any(
        not c.sources_of(t.id) for t in c.target.strata)
    p = random_perversity(c.source, seed + 1)
    back = pullback(c, pushforward(c, p))
    exc = set(c.exceptional())
    assert all(back[s] <= p[s] for s in c.source.ids if s not in exc)


@given(st.integers(0, len(COARSENINGS) - 1), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_k_samples_satisfy_check(i, seed):
    c = COARSENINGS[i]
    p = random_K_perversity(c, seed, bounded=True)
    if p is None:
        return
    assert is_K_perversity(c, p)
    assert p <= top_perversity(c.source)
    assert pullback(c, pushforward(c, p)) <= p


@given(st.integers(-4, 6))
def test_dual_involution(k):
    S = entry("susp_chain").strat("S")
    p = constant_perversity(S, k)
    assert dual(dual(p)) == p
