"""The line-oriented ``.strat`` format.

::

    # comment
    dim 2
    facets
    x u0 u1
    u0 u1 w0
    skeleton 0:
    x
    perversity zero:
    0 0

Tokens match ``[A-Za-z0-9_]+``; all-digit vertex tokens are read as
integers.  Perversity values may carry a leading minus sign or be
``inf``/``-inf``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError
from .simplex import SimplicialComplex, lexkey
from .strat import Stratification, build_stratification

_TOKEN = re.compile(r"[A-Za-z0-9_]+")
_VALUE = re.compile(r"-?[0-9]+|-?inf")


@dataclass
class StratFile:
    n: int
    facets: list
    skeleta: dict = field(default_factory=dict)        # index -> list of facets
    perversities: dict = field(default_factory=dict)   # name -> {stratum id: value string}

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.facets)

    def stratification(self, meta=None) -> Stratification:
        return build_stratification(self.complex(), self.n, self.skeleta, meta)


def _vertex(tok):
    return int(tok) if tok.isdigit() else tok


def _check_tokens(parts, ln, line):
    for tok in parts:
        if not _TOKEN.fullmatch(tok):
            raise ParseError(f"bad token {tok!r}", ln, line.index(tok) + 1)


def parse_strat(text) -> StratFile:
    n = None
    facets, skeleta, pervs = [], {}, {}
    block, target = None, None
    for ln, raw in enumerate(text.split("\n"), 1):
        line = raw.split("#", 1)[0].rstrip("\r").rstrip()
        if not line.strip():
            continue
        parts = line.split()
        head = parts[0]
        if head == "dim":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected 'dim <n>'", ln, 1)
            n = int(parts[1])
            block = None
        elif head == "facets" and len(parts) == 1:
            block, target = "facets", facets
        elif head == "skeleton":
            m = re.fullmatch(r"skeleton\s+([0-9]+):", line.strip())
            if not m:
                raise ParseError("expected 'skeleton <i>:'", ln, len("skeleton") + 2)
            i = int(m.group(1))
            if n is not None and i >= n:
                raise ParseError(f"skeleton index {i} must be below dim {n}", ln, len("skeleton") + 2)
            block, target = "skeleton", skeleta.setdefault(i, [])
        elif head == "perversity":
            m = re.fullmatch(r"perversity\s+([A-Za-z0-9_]+):", line.strip())
            if not m:
                raise ParseError("expected 'perversity <name>:'", ln, len("perversity") + 2)
            block, target = "perversity", pervs.setdefault(m.group(1), {})
        elif block in ("facets", "skeleton"):
            _check_tokens(parts, ln, raw)
            target.append(tuple(_vertex(t) for t in parts))
        elif block == "perversity":
            if len(parts) != 2 or not parts[0].isdigit() or not _VALUE.fullmatch(parts[1]):
                raise ParseError("expected '<stratum-id> <value>'", ln, 1)
            target[int(parts[0])] = parts[1]
        else:
            raise ParseError(f"unexpected line {line.strip()!r}", ln, 1)
    if n is None:
        raise ParseError("missing 'dim' line", 1, 1)
    if not facets:
        raise ParseError("no facets", 1, 1)
    return StratFile(n, facets, skeleta, pervs)


def _fmt(s):
    return " ".join(str(v) for v in s)


def emit_strat(strat: Stratification, perversities=None) -> str:
    """Canonical text for a stratification and optional named perversities
    (name -> Perversity or {stratum id: value})."""
    out = [f"dim {strat.n}", "facets"]
    out += [_fmt(f) for f in strat.complex.facets]
    for i in range(strat.n):
        sk = strat.skeleton(i)
        if not sk or sk == strat.skeleton(i - 1) and i > 0:
            continue
        out.append(f"skeleton {i}:")
        out += [_fmt(f) for f in sorted(SimplicialComplex(sk).facets, key=lexkey)]
    for name, p in sorted((perversities or {}).items()):
        out.append(f"perversity {name}:")
        items = p.singular_items() if hasattr(p, "singular_items") else sorted(p.items())
        out += [f"{k} {v}" for k, v in items]
    return "\n".join(out) + "\n"


def canonical(text) -> str:
    sf = parse_strat(text)
    strat = sf.stratification()
    return emit_strat(strat, {k: dict(v) for k, v in sf.perversities.items()})
