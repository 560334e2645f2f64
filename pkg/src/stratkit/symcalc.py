"""Symbolic bookkeeping of intersection homotopy groups.

Spaces are expressions over declared atoms.  Facts about pi_l^p are derived
by a handful of rewrite rules (cone formula, Euclidean products, pi_0 of the
regular part, transfer along coarsenings) and every fact keeps the chain of
rules and hypothesis certificates that produced it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from .coarsen import coarsening_from_map
from .errors import InconsistentDeclaration, MissingBaseFact, ParseError, PerversityTooLarge
from .perv import ExtInt, Perversity, ext, is_K_perversity, pullback, pushforward, top_perversity
from .strat import StrataPoset, Stratum


# -- groups --------------------------------------------------------------------

@dataclass(frozen=True)
class SymGroup:
    kind: str                 # Trivial, FreeAbelian, NamedAtom, DirectProduct, Unknown, Components
    arg: object = None

    def __str__(self):
        if self.kind == "Trivial":
            return "1"
        if self.kind == "FreeAbelian":
            return "Z" if self.arg == 1 else f"Z^{self.arg}"
        if self.kind == "NamedAtom":
            return self.arg
        if self.kind == "DirectProduct":
            return " x ".join(map(str, self.arg))
        if self.kind == "Components":
            return f"{self.arg} components"
        return f"?({self.arg})"

    @property
    def known(self):
        return self.kind != "Unknown"

    @property
    def trivial(self):
        return self.kind == "Trivial"


TRIVIAL = SymGroup("Trivial")
NONTRIVIAL = SymGroup("NamedAtom", "nontrivial")


def free_abelian(n):
    return TRIVIAL if n == 0 else SymGroup("FreeAbelian", n)


def named(label):
    return SymGroup("NamedAtom", label)


def unknown(reason):
    return SymGroup("Unknown", reason)


def components(k):
    return TRIVIAL if k == 1 else SymGroup("Components", k)


def direct_product(groups):
    flat = []
    for g in groups:
        if g.kind == "DirectProduct":
            flat.extend(g.arg)
        elif g.kind != "Trivial":
            flat.append(g)
    if not flat:
        return TRIVIAL
    if len(flat) == 1:
        return flat[0]
    return SymGroup("DirectProduct", tuple(flat))


def parse_group(text) -> SymGroup:
    t = text.strip()
    if t in ("1", "Trivial", "0"):
        return TRIVIAL
    if t == "Z":
        return free_abelian(1)
    m = re.fullmatch(r"Z\^(\d+)", t)
    if m:
        return free_abelian(int(m.group(1)))
    if t in ("nontrivial", "!=1"):
        return NONTRIVIAL
    m = re.fullmatch(r"(\d+)pts", t)
    if m:
        return components(int(m.group(1)))
    return named(t)


def compatible(a: SymGroup, b: SymGroup) -> bool:
    """Whether two known values can describe the same group."""
    if not a.known or not b.known:
        return True
    if a == b:
        return True
    if a.trivial or b.trivial:
        return False
    if NONTRIVIAL in (a, b):
        return True
    return False


# -- spaces ----------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Cone:
    base: object

    def __str__(self):
        return f"Cone({self.base})"


@dataclass(frozen=True)
class ProdEuclid:
    a: int
    base: object

    def __str__(self):
        return f"ProdEuclid({self.a},{self.base})"


@dataclass(frozen=True)
class JoinSphere:
    m: int
    base: object

    def __str__(self):
        return f"JoinSphere({self.m},{self.base})"


@dataclass(frozen=True)
class Coarsen:
    base: object
    spec: str = "trivial"

    def __str__(self):
        return f"Coarsen({self.base},{self.spec})"


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_+\-]*|\d+|[(),])")


def parse_space(text):
    toks, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"bad space expression near {text[pos:]!r}", 1, pos + 1)
        toks.append(m.group(1))
        pos = m.end()
    i = 0

    def expect(t):
        nonlocal i
        if i >= len(toks) or toks[i] != t:
            raise ParseError(f"expected {t!r} in {text!r}", 1, i + 1)
        i += 1

    def take():
        nonlocal i
        if i >= len(toks):
            raise ParseError(f"unexpected end of {text!r}", 1, len(text) + 1)
        i += 1
        return toks[i - 1]

    def integer():
        t = take()
        if not t.isdigit():
            raise ParseError(f"expected an integer, got {t!r} in {text!r}", 1, i)
        return int(t)

    def expr():
        nonlocal i
        name = take()
        if name == "Cone":
            expect("(")
            b = expr()
            expect(")")
            return Cone(b)
        if name in ("ProdEuclid", "JoinSphere"):
            expect("(")
            k = integer()
            expect(",")
            b = expr()
            expect(")")
            return ProdEuclid(k, b) if name == "ProdEuclid" else JoinSphere(k, b)
        if name == "Coarsen":
            expect("(")
            b = expr()
            spec = "trivial"
            if i < len(toks) and toks[i] == ",":
                i += 1
                spec = take()
            expect(")")
            return Coarsen(b, spec)
        if not (name[0].isalpha() or name[0] == "_"):
            raise ParseError(f"expected a space name, got {name!r} in {text!r}", 1, i)
        return Atom(name)

    out = expr()
    if i != len(toks):
        raise ParseError(f"trailing input in {text!r}", 1, i + 1)
    return out


# -- atoms -------------------------------------------------------------------------

@dataclass
class AtomDecl:
    name: str
    dim: int
    singular: list = field(default_factory=list)   # (label, dim, link atom name)
    pi: dict = field(default_factory=dict)          # l -> (SymGroup, provenance)
    abel: object = None                             # declared H_1 (rank, torsion) of pi_1
    homology: tuple = ()
    pi_regular: dict = field(default_factory=dict)  # l -> (SymGroup, provenance)
    flags: set = field(default_factory=set)
    regular_components: int = 1

    def check(self):
        if 1 in self.pi and self.homology:
            g = self.pi[1][0]
            h1 = self.homology[1] if len(self.homology) > 1 else 0
            if g.trivial and h1 != 0:
                raise InconsistentDeclaration(f"{self.name}: trivial pi_1 but H_1 rank {h1}")
            if g.kind == "FreeAbelian" and g.arg != h1:
                raise InconsistentDeclaration(f"{self.name}: pi_1 = {g} but H_1 rank {h1}")
            if g.kind == "NamedAtom" and self.abel is not None and self.abel != h1:
                raise InconsistentDeclaration(f"{self.name}: abelianization rank {self.abel} vs H_1 {h1}")


@dataclass
class Record:
    space: object
    perv: str
    ell: int
    group: SymGroup
    note: str


def parse_atoms(text):
    """Read an atoms.decl file: returns (atoms by name, recorded facts)."""
    atoms, records = {}, []
    cur = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head == "atom":
                cur = AtomDecl(parts[1], 0)
                atoms[cur.name] = cur
            elif head == "record":
                # record <space> <perversity> <l> <group> <provenance words...>
                cur = None
                space = parse_space(parts[1])
                records.append(Record(space, parts[2], int(parts[3]), parse_group(parts[4]),
                                      " ".join(parts[5:]) or "literature"))
            elif cur is None:
                raise ParseError(f"{head!r} outside an atom block", ln, 1)
            elif head == "dim":
                cur.dim = int(parts[1])
            elif head == "singular":
                cur.singular.append((parts[1], int(parts[2]), parts[4] if len(parts) > 4 else None))
            elif head == "pi":
                cur.pi[int(parts[1])] = (parse_group(parts[2]), parts[3] if len(parts) > 3 else "axiom")
            elif head == "abel":
                cur.abel = int(parts[1])
            elif head == "pi_regular":
                cur.pi_regular[int(parts[1])] = (parse_group(parts[2]),
                                                 parts[3] if len(parts) > 3 else "axiom")
            elif head == "homology":
                cur.homology = tuple(int(x) for x in parts[1:])
            elif head == "flags":
                cur.flags = set(parts[1:])
            elif head == "components":
                cur.regular_components = int(parts[1])
            else:
                raise ParseError(f"unknown keyword {head!r}", ln, 1)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed line: {raw.strip()!r}", ln, 1) from None
    for a in atoms.values():
        a.check()
    return atoms, records


# -- symbolic strata --------------------------------------------------------------

@dataclass(frozen=True)
class SymStratum:
    label: str
    dim: int
    regular: bool
    link: object = None          # SymSpace
    link_map: tuple = ()         # pairs (link stratum label, ambient label)


@dataclass
class SymStrata:
    n: int
    strata: list
    below: dict                  # label -> set of labels <= it
    flags: set
    regular_components: int

    def by_label(self, label):
        return next(s for s in self.strata if s.label == label)

    def poset(self) -> StrataPoset:
        order = sorted(self.strata, key=lambda s: (s.dim, s.label))
        ids = {s.label: i for i, s in enumerate(order)}
        objs = [Stratum(ids[s.label], s.dim, self.n - s.dim, s.regular, (), s.label) for s in order]
        below = {ids[k]: {ids[x] for x in v} for k, v in self.below.items()}
        P = StrataPoset(self.n, objs, below)
        P.label_ids = ids
        return P


class Calculator:
    """Atoms, a fact base, and the rules."""

    def __init__(self, atoms=None, records=()):
        self.atoms = dict(atoms or {})
        self.facts = FactBase()
        for a in self.atoms.values():
            for ell, (g, prov) in sorted(a.pi.items()):
                self.facts.add(Fact(Atom(a.name), "*", ell, g,
                                    (("declare", f"atom {a.name}"),), prov))
        for r in records:
            key = self.perv_key(r.space, r.perv)
            self.facts.add(Fact(r.space, key, r.ell, r.group, (("record", r.note),), "literature"))

    @classmethod
    def from_text(cls, text):
        atoms, records = parse_atoms(text)
        return cls(atoms, records)

    # strata ----------------------------------------------------------------
    def strata(self, space) -> SymStrata:
        return _strata(self, space)

    def coarsening(self, space: Coarsen):
        fine = self.strata(space.base)
        coarse = self.strata(space)
        Pf, Pc = fine.poset(), coarse.poset()
        iota = {}
        for s in fine.strata:
            iota[Pf.label_ids[s.label]] = Pc.label_ids[_image_label(space, s, coarse)]
        return coarsening_from_map(Pf, Pc, iota, str(space))

    # perversities -----------------------------------------------------------
    def perversity(self, space, spec) -> Perversity:
        """Resolve a perversity spec: zero, top, const:k, dual:k, or
        label=value pairs separated by commas."""
        if isinstance(spec, Perversity):
            return spec
        st = self.strata(space)
        P = st.poset()
        vals = {}
        for s in st.strata:
            if s.regular:
                continue
            t = st.n - s.dim - 2
            sid = P.label_ids[s.label]
            if spec in ("zero", "0"):
                vals[sid] = 0
            elif spec in ("top", "t"):
                vals[sid] = t
            elif spec.startswith("const:"):
                vals[sid] = ext(spec[6:])
            elif spec.startswith("dual:"):
                vals[sid] = ExtInt(t) - ext(spec[5:])
            else:
                pairs = dict(x.split("=") for x in spec.split(",") if x)
                if s.label not in pairs:
                    raise ValueError(f"no value for stratum {s.label}")
                vals[sid] = ext(pairs[s.label])
        return Perversity(P, vals, spec)

    def perv_key(self, space, spec) -> str:
        p = self.perversity(space, spec)
        return _key_of(p)

    # derivation --------------------------------------------------------------
    def derive(self, space, spec, ell) -> "Fact":
        p = self.perversity(space, spec)
        key = _key_of(p)
        known = [f for f in self.facts.lookup(space, key, ell) if f.group.known]
        derived = self._derive_rule(space, p, ell)
        if derived is not None:
            self.facts.add(derived)
            if derived.group.known:
                return derived
        if known:
            return known[0]
        return derived or Fact(space, key, ell, unknown("no rule applies"), (("none", ""),), "derived")

    def _derive_rule(self, space, p, ell):
        if ell == 0:
            try:
                return self.rule_pi0(space, p)
            except PerversityTooLarge:
                pass
        if isinstance(space, Cone):
            return self.rule_cone(space, p, ell)
        if isinstance(space, ProdEuclid):
            return self.rule_product(space, p, ell)
        if isinstance(space, Coarsen):
            return self.rule_coarsen(space, p, ell)
        if isinstance(space, Atom):
            a = self.atoms.get(space.name)
            if a and ell in a.pi and not a.singular:
                g, prov = a.pi[ell]
                return Fact(space, _key_of(p), ell, g, (("manifold", f"atom {a.name} has no singular strata"),), prov)
        return None

    def _restrict(self, space, p, base_space, mapping):
        """Perversity on a base whose strata correspond to ambient strata."""
        P = p.poset
        st = self.strata(base_space)
        Pb = st.poset()
        vals = {}
        for s in st.strata:
            if s.regular:
                continue
            vals[Pb.label_ids[s.label]] = p[P.label_ids[mapping[s.label]]]
        return Perversity(Pb, vals)

    def rule_cone(self, space: Cone, p, ell):
        P = p.poset
        n = P.n
        apex = P.label_ids["apex"]
        dv = ExtInt(n - 2) - p[apex]
        key = _key_of(p)
        cert = f"Dp(apex)={dv}"
        if ell == 0 and dv < 0:
            return Fact(space, key, 0, unknown("degree 0 with Dp(apex) < 0"),
                        (("cone", cert + ", degree-0 case left open"),), "derived")
        if ExtInt(ell) > dv:
            return Fact(space, key, ell, TRIVIAL, (("cone", f"{cert} < l={ell}"),), "derived")
        base = space.base
        mapping = {s.label: f"c({s.label})" for s in self.strata(base).strata}
        pb = self._restrict(space, p, base, mapping)
        bf = self.derive(base, pb, ell)
        if not bf.group.known:
            return Fact(space, key, ell, unknown(f"missing base fact for {base}"),
                        (("cone", f"{cert} >= l={ell}"),) + bf.chain, "derived")
        return Fact(space, key, ell, bf.group, (("cone", f"{cert} >= l={ell}"),) + bf.chain, "derived")

    def rule_product(self, space: ProdEuclid, p, ell):
        base = space.base
        mapping = {s.label: f"r{space.a}({s.label})" for s in self.strata(base).strata}
        pb = self._restrict(space, p, base, mapping)
        bf = self.derive(base, pb, ell)
        chain = (("product", f"R^{space.a} factor"),) + bf.chain
        if not bf.group.known:
            return Fact(space, _key_of(p), ell, unknown(f"missing base fact for {base}"), chain, "derived")
        return Fact(space, _key_of(p), ell, bf.group, chain, "derived")

    def rule_pi0(self, space, p):
        if not p <= top_perversity(p.poset):
            raise PerversityTooLarge("pi_0 rule needs p <= t")
        st = self.strata(space)
        k = st.regular_components
        return Fact(space, _key_of(p), 0, components(k),
                    (("pi0", f"regular part has {k} component(s), p <= t"),), "derived")

    def regular_pi1(self, space):
        """pi_1 of the regular part, with a reason string."""
        if isinstance(space, Atom):
            a = self.atoms[space.name]
            if 1 in a.pi_regular:
                return a.pi_regular[1][0], f"declared for {a.name}"
            if not a.singular and 1 in a.pi:
                return a.pi[1][0], f"{a.name} is a manifold"
            return unknown(f"no regular-part pi_1 for {a.name}"), ""
        if isinstance(space, (Cone, ProdEuclid)):
            g, why = self.regular_pi1(space.base)
            return g, why + "; product with an interval or R^a"
        if isinstance(space, JoinSphere):
            g, why = self.regular_pi1(space.base)
            return g, why + f"; join with S^{space.m} adds a contractible factor"
        return unknown("coarsened regular part"), ""

    def link_cone_fact(self, space, p, label):
        """pi_1 of the cone on the link of a stratum, with the induced perversity."""
        st = self.strata(space)
        s = st.by_label(label)
        L = s.link
        P = p.poset
        mapping = dict(s.link_map)
        cone = Cone(L)
        Lst = self.strata(L)
        vals = {"apex": p[P.label_ids[label]]}
        for ls in Lst.strata:
            if not ls.regular:
                vals[f"c({ls.label})"] = p[P.label_ids[mapping[ls.label]]]
        spec = ",".join(f"{k}={v}" for k, v in sorted(vals.items()))
        pc = self.perversity(cone, spec)
        f = self.derive(cone, pc, 1)
        if f.group.known:
            return f
        # regular part surjects onto pi_1^p of the cone
        g, why = self.regular_pi1(L)
        if g.trivial:
            out = Fact(cone, _key_of(pc), 1, TRIVIAL,
                       (("regular-surjection", f"pi_1 of the link regular part is trivial ({why})"),),
                       "derived")
            self.facts.add(out)
            return out
        return f

    def rule_coarsen(self, space: Coarsen, p_fine, ell, q=None):
        """Transfer pi_l^p(fine) to the coarse space along the identity.

        p_fine is a perversity on the fine space (space.base); if it lives on
        the coarse side it is pulled back first (refinement theorems).
        """
        c = self.coarsening(space)
        fine = space.base
        labels = [s.label for s in p_fine.poset.strata]
        from_target = (labels != [s.label for s in c.source.strata]
                       and labels == [s.label for s in c.target.strata])
        if from_target:
            q = Perversity(c.target, {k: v for k, v in p_fine.singular_items()})
            p = pullback(c, q)
        else:
            p = Perversity(c.source, {k: v for k, v in p_fine.singular_items()})
        pushed = pushforward(c, p)
        key_c = _key_of(pushed)
        st = self.strata(fine)
        certs = []
        kc = is_K_perversity(c, p)
        below = p <= top_perversity(c.source)
        exc = c.exceptional()
        if not kc:
            return Fact(space, key_c, ell, unknown(f"not a K-perversity ({kc.rule} at {kc.pair})"),
                        (("coarsen", "K-perversity check failed"),), "derived")
        if not below:
            return Fact(space, key_c, ell, unknown("p is not <= t"), (("coarsen", "p <= t failed"),), "derived")
        certs.append("K-perversity")
        certs.append("p <= t")
        if not exc:
            thm = "A-pullback" if q is not None else "A"
            certs.append("no exceptional strata")
        else:
            if c.one_exceptional():
                return Fact(space, key_c, ell, unknown("1-exceptional strata present"),
                            (("coarsen", "1-exceptional"),), "derived")
            missing = [f for f in ("normal", "connected", "pre_thom_mather") if f not in st.flags]
            if missing:
                return Fact(space, key_c, ell, unknown("missing " + ", ".join(missing)),
                            (("coarsen", "Theorem B hypotheses"),), "derived")
            bad = []
            for e in exc:
                label = c.source.stratum(e).label
                f = self.link_cone_fact(fine, p, label)
                if not f.group.trivial:
                    bad.append(f"{label}: pi_1 of the link cone is {f.group}")
            if bad:
                return Fact(space, key_c, ell,
                            unknown("exceptional link hypothesis fails: " + "; ".join(bad)),
                            (("coarsen", "Theorem B link condition not derivable"),), "derived")
            thm = "B-pullback" if q is not None else "B"
            certs.append("exceptional link cones simply connected")
        bf = self.derive(fine, p, ell)
        chain = ((f"theorem {thm}", ", ".join(certs)),) + bf.chain
        if not bf.group.known:
            return Fact(space, key_c, ell, unknown(f"missing fine-side fact for {fine}"), chain, "derived")
        out = Fact(space, key_c, ell, bf.group, chain, "derived")
        # the same theorem read backwards gives the fine-side value
        coarse_known = [f for f in self.facts.lookup(space, key_c, ell)
                        if f.group.known and f.provenance != "derived"]
        for f in coarse_known:
            self.facts.add(Fact(fine, _key_of(p), ell, f.group,
                                ((f"theorem {thm} (reverse)", ", ".join(certs)),) + f.chain, "derived"))
        return out

    def link_fact_for(self, strat, p):
        """A ``link_fact`` callable for a triangulated coarsening source.

        The cone on the link of an exceptional stratum is handed to the cone
        rule when the link is the boundary of a simplex with only regular
        strata; anything else is reported as Unknown.
        """
        from .strat import stratum_link

        def fact(sid):
            sigma = strat.stratum(sid).carrier_simplices[0]
            L = stratum_link(strat, sigma)
            k = L.complex.dim
            if L.singular_set or not _is_simplex_boundary(L.complex):
                return "Unknown", "link is not a simplex-boundary sphere"
            name = f"S{k}"
            if name not in self.atoms:
                return "Unknown", f"no atom {name}"
            cone = Cone(Atom(name))
            f = self.derive(cone, f"apex={p[sid]}", 1)
            if not f.group.known:
                return "Unknown", f.group.arg
            status = "Trivial" if f.group.trivial else "Nontrivial"
            return status, " <- ".join(f"{r}[{c}]" for r, c in f.chain)

        return fact


def _is_simplex_boundary(K):
    k = K.dim
    return len(K.vertices) == k + 2 and len(K.simplices(k)) == k + 2


def default_calculator(text=None):
    """Calculator over the bundled atom declarations."""
    if text is None:
        from importlib.resources import files
        text = files("stratkit").joinpath("data").joinpath("atoms.decl").read_text()
    return Calculator.from_text(text)


def _key_of(p: Perversity) -> str:
    items = []
    for sid, v in p.singular_items():
        items.append(f"{p.poset.stratum(sid).label or sid}={v}")
    return ",".join(items)


def _image_label(space: Coarsen, s: SymStratum, coarse: SymStrata):
    if space.spec == "trivial":
        return coarse.strata[0].label
    raise ValueError(f"unknown coarsening spec {space.spec!r}")


def _strata(calc, space) -> SymStrata:
    if isinstance(space, Atom):
        a = calc.atoms.get(space.name)
        if a is None:
            raise MissingBaseFact(f"atom {space.name} not declared")
        strata = [SymStratum("reg", a.dim, True)]
        below = {"reg": {"reg"}}
        for label, d, link in a.singular:
            L = Atom(link) if link else None
            lmap = (("reg", "reg"),) if link else ()
            strata.append(SymStratum(label, d, False, L, lmap))
            below[label] = {label}
            below["reg"].add(label)
        return SymStrata(a.dim, strata, below, set(a.flags), a.regular_components)
    if isinstance(space, (Cone, ProdEuclid, JoinSphere)):
        b = _strata(calc, space.base)
        if isinstance(space, Cone):
            wrap, shift, n = (lambda l: f"c({l})"), 1, b.n + 1
        elif isinstance(space, ProdEuclid):
            wrap, shift, n = (lambda l, a=space.a: f"r{a}({l})"), space.a, b.n + space.a
        else:
            wrap, shift, n = (lambda l: f"j({l})"), space.m + 1, b.n + space.m + 1
        strata, below = [], {}
        for s in b.strata:
            lmap = tuple((x, wrap(y)) for x, y in s.link_map)
            strata.append(SymStratum(wrap(s.label), s.dim + shift, s.regular, s.link, lmap))
            below[wrap(s.label)] = {wrap(x) for x in b.below[s.label]}
        bottom = []
        if isinstance(space, Cone):
            bottom = [("apex", 0)]
        elif isinstance(space, JoinSphere):
            bottom = [("pole+", 0), ("pole-", 0)] if space.m == 0 else [(f"S{space.m}", space.m)]
        for label, d in bottom:
            lmap = tuple((x.label, wrap(x.label)) for x in b.strata)
            strata.append(SymStratum(label, d, False, space.base, lmap))
            below[label] = {label}
            for s in b.strata:
                below[wrap(s.label)].add(label)
        flags = set(b.flags)
        return SymStrata(n, strata, below, flags, b.regular_components)
    if isinstance(space, Coarsen):
        b = _strata(calc, space.base)
        if space.spec != "trivial":
            raise ValueError(f"unknown coarsening spec {space.spec!r}")
        return SymStrata(b.n, [SymStratum("reg", b.n, True)], {"reg": {"reg"}},
                         set(b.flags), 1)
    raise TypeError(f"not a symbolic space: {space!r}")


# -- facts -------------------------------------------------------------------------

@dataclass(frozen=True)
class Fact:
    space: object
    perv: str
    ell: int
    group: SymGroup
    chain: tuple
    provenance: str = "derived"   # axiom, literature or derived

    def line(self):
        via = " <- ".join(f"{r}[{c}]" if c else r for r, c in self.chain)
        return f"pi[{self.ell}]^{{{self.perv}}}({self.space}) = {self.group}  via {via}  ({self.provenance})"


class FactBase:
    """Append-only list of facts with lookup by (space, perversity key, degree)."""

    def __init__(self):
        self._facts = []
        self._seen = set()

    def add(self, fact):
        sig = (fact.space, fact.perv, fact.ell, fact.group, fact.chain)
        if sig not in self._seen:
            self._seen.add(sig)
            self._facts.append(fact)
        return fact

    def lookup(self, space, perv, ell):
        return [f for f in self._facts
                if f.space == space and f.ell == ell and (f.perv == perv or f.perv == "*")]

    def __iter__(self):
        return iter(self._facts)

    def __len__(self):
        return len(self._facts)

    def dump(self):
        return [f.line() for f in self._facts]


@dataclass
class ConsistencyReport:
    consistent: bool
    contradictions: list

    def lines(self):
        out = [f"consistent={'yes' if self.consistent else 'no'}"]
        for a, b in self.contradictions:
            out.append("  " + a.line())
            out.append("  vs " + b.line())
        return out


def consistency_check(facts: FactBase) -> ConsistencyReport:
    groups = {}
    for f in facts:
        groups.setdefault((f.space, f.perv, f.ell), []).append(f)
    bad = []
    wildcard = {}
    for (space, perv, ell), fs in groups.items():
        if perv == "*":
            wildcard.setdefault((space, ell), []).extend(fs)
    for (space, perv, ell), fs in groups.items():
        pool = fs + (wildcard.get((space, ell), []) if perv != "*" else [])
        known = [f for f in pool if f.group.known]
        for i, a in enumerate(known):
            for b in known[i + 1:]:
                if not compatible(a.group, b.group):
                    bad.append((a, b))
    return ConsistencyReport(not bad, bad)
