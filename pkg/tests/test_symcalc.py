import pytest

from stratkit.corpus import entry
from stratkit.errors import InconsistentDeclaration, ParseError
from stratkit.symcalc import (
    TRIVIAL,
    Atom,
    Calculator,
    Coarsen,
    Cone,
    JoinSphere,
    ProdEuclid,
    compatible,
    consistency_check,
    default_calculator,
    direct_product,
    free_abelian,
    parse_atoms,
    parse_group,
    parse_space,
)
from stratkit.symcalc import components as comp_group


@pytest.fixture
def calc():
    return default_calculator()


def test_parse_space_round_trip():
    text = "Coarsen(JoinSphere(0,JoinSphere(0,P)),trivial)"
    sp = parse_space(text)
    assert sp == Coarsen(JoinSphere(0, JoinSphere(0, Atom("P"))))
    assert str(sp) == text
    assert parse_space("Cone(ProdEuclid(2,S3))") == Cone(ProdEuclid(2, Atom("S3")))
    for bad in ("Cone(S2", "Cone(S2))", "JoinSphere(x,S1)", "S2 $", "Cone(", "", "(S2)"):
        with pytest.raises(ParseError):
            parse_space(bad)


def test_groups():
    assert parse_group("1") == TRIVIAL and parse_group("Z^3") == free_abelian(3)
    assert str(parse_group("Z")) == "Z"
    assert parse_group("2pts") == comp_group(2)
    assert direct_product([TRIVIAL, free_abelian(1), TRIVIAL]) == free_abelian(1)
    assert not compatible(TRIVIAL, free_abelian(1))
    assert compatible(parse_group("nontrivial"), parse_group("binary-icosahedral"))


def test_atom_facts(calc):
    f = calc.derive(Atom("S1"), "zero", 1)
    assert f.group == free_abelian(1) and f.provenance == "axiom"
    f = calc.derive(Atom("S2"), "zero", 1)
    assert f.group.trivial


def test_cone_rule(calc):
    above = calc.derive(Cone(Atom("S2")), "apex=1", 1)
    assert above.group.trivial and above.chain[0][0] == "cone"
    through = calc.derive(Cone(Atom("S1")), "apex=-1", 1)
    assert through.group == free_abelian(1)
    assert "manifold" in [r for r, _ in through.chain]


def test_cone_degree_zero_left_open(calc):
    f = calc.rule_cone(Cone(Atom("S1")), calc.perversity(Cone(Atom("S1")), "apex=2"), 0)
    assert not f.group.known


def test_product_rule(calc):
    f = calc.derive(ProdEuclid(2, Atom("S1")), "zero", 1)
    assert f.group == free_abelian(1) and f.chain[0][0] == "product"


def test_pi0_rule(calc):
    f = calc.derive(Atom("S0"), "zero", 0)
    assert f.group == comp_group(2)


def test_pinched_torus_coarsening_blocked(calc):
    f = calc.derive(Coarsen(Atom("T")), "zero", 1)
    assert not f.group.known and "normal" in f.group.arg


def test_dsusp_poincare_link_hypothesis_unknown(calc):
    sp = parse_space(entry("dsusp_poincare").symbolic)
    c = calc.coarsening(sp)
    dims = tuple(sorted(c.source.stratum(e).formal_dim for e in c.exceptional()))
    assert dims == next(x.value for x in entry("dsusp_poincare").expected if x.key == "exceptional-dims")
    f = calc.rule_coarsen(sp, calc.perversity(sp.base, "dual:1"), 1)
    assert not f.group.known and "link hypothesis" in f.group.arg


def test_recorded_facts_consistent(calc):
    for text in ("T", "Cone(T)", "Cone(S2)"):
        calc.derive(parse_space(text), "zero", 1)
    assert consistency_check(calc.facts).consistent


def test_contradiction_detected():
    from importlib.resources import files
    text = files("stratkit").joinpath("data", "atoms.decl").read_text()
    text += "\nrecord P zero 1 1 corrupted entry\n"
    calc = Calculator.from_text(text)
    rep = consistency_check(calc.facts)
    assert not rep.consistent
    assert any("corrupted" in line for line in rep.lines())


def test_inconsistent_declaration():
    with pytest.raises(InconsistentDeclaration):
        parse_atoms("atom Q\n  dim 3\n  pi 1 Z\n  homology 1 0 0 1\n")
    with pytest.raises(ParseError):
        parse_atoms("dim 3\n")
    with pytest.raises(ParseError):
        parse_atoms("atom Q\n  bogus 1\n")
