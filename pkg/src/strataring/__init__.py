"""Exact intersection theory on moduli of stable curves.

The package represents tautological classes as rational combinations of
decorated stable graphs, multiplies them with the excess-intersection
formula, integrates them through psi/kappa/lambda evaluations, and
computes exact ranks of the intersection pairings.
"""

from .algebra import (
    DecoratedGraph,
    FormalSum,
    graft,
    graft_loop,
    kappa_apply,
    kappa_pullback,
    multiply,
    normalize,
    psi_apply,
    sigma,
)
from .enumeration import all_stable_graphs, decorated_basis, stable_graphs, top_degree
from .graphs import StableGraph, build_graph, canonical_form, validate
from .grammar import load_sum, parse_decorated, parse_sum
from .integrals import (
    FUNDAMENTAL,
    LAMBDA_PAIR,
    LAMBDA_TOP,
    bernoulli,
    hodge_psi,
    integrate_graph,
    integrate_sum,
    kappa_reduce,
    wk_tau,
)
from .pairing import GramMatrix, gram, kernel_basis, rank, rank_table, verify_relation
from .structures import enumerate_g_structures, enumerate_generic_pairs

__all__ = [
    "DecoratedGraph",
    "FormalSum",
    "FUNDAMENTAL",
    "GramMatrix",
    "LAMBDA_PAIR",
    "LAMBDA_TOP",
    "StableGraph",
    "all_stable_graphs",
    "bernoulli",
    "build_graph",
    "canonical_form",
    "decorated_basis",
    "enumerate_g_structures",
    "enumerate_generic_pairs",
    "graft",
    "graft_loop",
    "gram",
    "hodge_psi",
    "integrate_graph",
    "integrate_sum",
    "kappa_apply",
    "kappa_pullback",
    "kappa_reduce",
    "kernel_basis",
    "load_sum",
    "multiply",
    "normalize",
    "parse_decorated",
    "parse_sum",
    "psi_apply",
    "rank",
    "rank_table",
    "sigma",
    "stable_graphs",
    "top_degree",
    "validate",
    "wk_tau",
]

__version__ = "0.1.0"
