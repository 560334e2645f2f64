import pytest

from stratkit.coarsen import (
    EXCEPTIONAL,
    FOUNTAIN,
    ONE_EXCEPTIONAL,
    REGULAR_SOURCE,
    SOURCE,
    build_coarsening,
    build_Se,
    chain_composes,
    coarsening_from_map,
    identity_coarsening,
    is_simple,
    simple_chain,
    theorem_hypothesis_report,
)
from stratkit.corpus import entry
from stratkit.errors import NotACoarsening
from stratkit.perv import Perversity, pullback, top_perversity, zero_perversity


def _expected(e, key):
    return next(x.value for x in e.expected if x.key == key)


@pytest.mark.parametrize("name,part", [("pinched_torus", "pinch"), ("susp_chain_x3", "SR")])
def test_classification_matches_corpus(name, part):
    e = entry(name)
    c = e.coarsening(part)
    assert tuple(c.cls(s) for s in sorted(c.classification)) == _expected(e, f"classify:{part}")


def test_kinds():
    assert entry("line_point").coarsening().one_exceptional() == [0]
    for name in ("twocone_b1_S1", "twocone_b2_S1", "twocone_b2_S0"):
        c = entry(name).coarsening()
        assert c.fountains() == [0]
    c = entry("sphere3").coarsening()
    assert c.classification == {0: EXCEPTIONAL, 1: REGULAR_SOURCE}


def test_identity():
    S = entry("susp_torus").strat("S")
    c = identity_coarsening(S)
    assert c.is_identity() and simple_chain(c) == []
    assert set(c.classification.values()) <= {SOURCE, REGULAR_SOURCE}


def test_map_validation():
    e = entry("pinched_torus")
    S, T = e.strat("S"), e.strat("T")
    with pytest.raises(NotACoarsening):
        coarsening_from_map(T, S, {0: 1})
    with pytest.raises(NotACoarsening):
        build_coarsening(T, S)


def test_simplicity():
    assert is_simple(entry("susp_chain").coarsening("SR"))
    assert not is_simple(entry("susp_chain").coarsening("ST"))
    assert not is_simple(entry("flag_s4").coarsening())


@pytest.mark.parametrize("name,part,length", [("flag_s4", "forget", 2), ("susp_chain", "ST", 2),
                                              ("susp_chain", "SR", 1)])
def test_simple_chains(name, part, length):
    c = entry(name).coarsening(part)
    chain = simple_chain(c)
    assert len(chain) == length
    assert all(is_simple(step) for step in chain)
    assert chain_composes(chain, c)


def test_se_factorisation():
    c = entry("susp_chain").coarsening("ST")
    d = build_Se(c)
    assert not d.from_Se.exceptional()
    assert set(d.to_Se.exceptional()) == set(c.exceptional())
    c = entry("susp_chain").coarsening("SR")
    d = build_Se(c)
    assert d.to_Se.is_identity()


def test_report_pinched_torus_not_normal():
    c = entry("pinched_torus").coarsening()
    q = zero_perversity(c.target)
    p = pullback(c, q)
    rep = theorem_hypothesis_report(c, p, lambda e: ("Trivial", "declared"), q=q)
    assert rep.k_perversity and rep.below_top
    assert not rep.normal
    assert rep.applies["A"][0] is False
    ok, why = rep.applies["B"]
    assert not ok and "normal" in why
    assert rep.applies["A-pullback"] == (False, "exceptional strata present")


def test_report_line_point_one_exceptional():
    c = entry("line_point").coarsening()
    q = zero_perversity(c.target)
    p = pullback(c, q)
    rep = theorem_hypothesis_report(c, p, q=q)
    assert rep.one_exceptional == [0]
    assert not rep.applies["B-pullback"][0]


def test_report_without_exceptional():
    c = entry("twocone_b2_S1").coarsening()
    q = top_perversity(c.target)
    p = pullback(c, q)
    rep = theorem_hypothesis_report(c, p, q=q)
    assert rep.applies["A-pullback"][0]
    lines = rep.lines()
    assert lines[0].startswith("K-perversity=")
    assert any(line.startswith("theorem A:") for line in lines)


def test_report_flags_non_k():
    c = entry("susp_chain").coarsening("SR")
    S = c.source
    vals = {s.id: 0 for s in S.singular_strata()}
    vals[c.fountains()[0]] = 1
    rep = theorem_hypothesis_report(c, Perversity(S, vals))
    assert not rep.k_perversity
    assert "not a K-perversity" in rep.applies["A"][1]
