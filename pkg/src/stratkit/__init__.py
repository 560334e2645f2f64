"""Stratified simplicial complexes, perversities, coarsenings and intersection invariants."""

from .coarsen import (
    Coarsening,
    build_coarsening,
    build_Se,
    classify,
    compose,
    is_simple,
    simple_chain,
    theorem_hypothesis_report,
)
from .ihom import (
    cone_threshold_probe,
    intersection_homology,
    mv_exactness_check,
    pi0_p,
    pi1_regular,
    two_cone_probe,
)
from .perv import (
    ExtInt,
    Perversity,
    dual,
    is_K_perversity,
    pullback,
    pushforward,
    top_perversity,
    zero_perversity,
)
from .simplex import SimplicialComplex, barycentric_subdivision, build_complex
from .strat import (
    Stratification,
    build_stratification,
    cs_diagnostics,
    point_refinement,
    subdivided,
    trivial_stratification,
)
from .stratfile import emit_strat, parse_strat

__version__ = "0.1.0"

__all__ = [
    "Coarsening", "ExtInt", "Perversity", "SimplicialComplex", "Stratification",
    "barycentric_subdivision", "build_Se", "build_coarsening", "build_complex",
    "build_stratification", "classify", "compose", "cone_threshold_probe", "cs_diagnostics",
    "dual", "emit_strat", "intersection_homology", "is_K_perversity", "is_simple",
    "mv_exactness_check", "parse_strat", "pi0_p", "pi1_regular", "point_refinement",
    "pullback", "pushforward", "simple_chain", "subdivided", "theorem_hypothesis_report",
    "top_perversity", "trivial_stratification", "two_cone_probe", "zero_perversity",
]
