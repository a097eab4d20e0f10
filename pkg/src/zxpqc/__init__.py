"""ZX-calculus with exact scalars and linear combinations of diagrams.

Symbolic expectation values of parameterized quantum circuits: diagrams are
rewritten with scalar-exact rules, parameterized spiders are split into sums
of Clifford diagrams, and each term is contracted exactly.
"""
from .contract import exact_contract
from .diagram import IN, OUT, X, Z, Diagram, adjoint, compose, tensor
from .errors import *  # noqa: F401,F403
from .evaluator import Strategy, edge_expectation, evaluate_expectation
from .hweff import hweff_core_weight, hweff_parity_identity, hweff_zz_expectation
from .lincomb import (LinComb, canonicalize, collapse_closed, decompose_phase_gadget,
                      decompose_x_rotation, decompose_z_rotation, product, substitute)
from .oracle import brute_force_maxcut, contract_numeric, soundness_check, statevector_expectation
from .pqc import (ObservableTerm, build_state, expectation_diagram, exclusive_neighborhoods,
                  lightcone_reduce, maxcut_hamiltonian, qaoa1_closed_form)
from .problem import QAOA, HwEffSU2, ProblemGraph, RyProduct, load_graph, parse_graph
from .rewrite import Match, Rule, apply, find_matches, simplify_fixpoint
from .scalar import LinearPhase, ScalarExpr, equiv_numeric, trig_normal_form

__version__ = "0.1.0"
