import pytest

import oracles
from stratkit.chains import simplicial_homology
from stratkit.coarsen import is_simple
from stratkit.corpus import corpus, entry, names
from stratkit.perv import is_K_perversity, pullback, zero_perversity
from stratkit.strat import cs_diagnostics, stratum_link

ENTRIES = corpus()


def _items(prefix):
    return [(e.name, x) for e in ENTRIES for x in e.expected if x.key.startswith(prefix)]


def test_names_unique_and_tagged():
    assert len(names()) == len(set(names()))
    for e in ENTRIES:
        for x in e.expected:
            assert x.tag in ("PAPER", "TRIVIAL", "DERIVED")
            if x.tag == "DERIVED":
                assert x.oracle


@pytest.mark.parametrize("name,item", _items("homology:"), ids=lambda v: getattr(v, "key", v))
def test_homology_against_oracle(name, item):
    K = entry(name).complex
    ranks, torsion = item.value
    assert oracles.betti(K.facets) == ranks
    h = simplicial_homology(K)
    assert (h.ranks, h.torsion) == item.value
    assert oracles.euler(K.facets) == sum((-1) ** k * r for k, r in enumerate(ranks))


@pytest.mark.parametrize("name,item", _items("link:"), ids=lambda v: getattr(v, "key", v))
def test_links_against_oracle(name, item):
    _, key, vertex = item.key.split(":")
    S = entry(name).strat(key)
    link = oracles.link(S.complex.facets, [vertex])
    facets = [s for s in link if not any(set(s) < set(t) for t in link)]
    assert (oracles.components(link), oracles.betti(facets)) == item.value
    L = stratum_link(S, [vertex])
    assert len(L.complex.connected_components()) == item.value[0]


@pytest.mark.parametrize("name,item", _items("cs:"), ids=lambda v: getattr(v, "key", v))
def test_cs_flags(name, item):
    S = entry(name).strat(item.key.split(":")[1])
    assert cs_diagnostics(S).links_consistent == item.value


def test_recorded_facts():
    c = entry("line_point").coarsening("forget")
    q = zero_perversity(c.target)
    assert not is_K_perversity(c, pullback(c, q))
    assert not is_simple(entry("flag_s4").coarsening())


def test_all_coarsenings_build():
    for e in ENTRIES:
        for part in e.coarsenings:
            c = e.coarsening(part)
            assert set(c.iota) == set(c.source.ids)
