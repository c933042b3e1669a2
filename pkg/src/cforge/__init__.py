"""cforge: an interactive conjecturing and proof-sketching engine.

Stores mathematical objects and concepts as name-function pairs, enumerates
candidate predicates by complexity, filters them against all stored examples,
chains necessary conditions into human-readable proof sketches, and grows
its knowledge from human verdicts.
"""

__version__ = "0.1.0"

from .dalmatian import (
    Budget,
    Conjecture,
    ConjectureStore,
    generate_bound_conjectures,
    generate_condition_conjectures,
    recheck_conjecture,
    render_conjecture,
    verify_conjecture,
)
from .domains import graph_object, integer_object, make_catalog_kb, make_integer_kb
from .enumeration import Signature, default_graph_signature, enumerate_expressions
from .exprs import canonicalize, evaluate_expression, parse_expression, render_expression
from .graphs import Graph, emit_graph6, parse_graph6
from .kb import ConceptEntry, KnowledgeBase, MathObject, TheoremRecord
from .sketch import ProofSketch, SketchConfig, augment_hypothesis, generate_sketch, render_sketch
from .values import UNDEFINED

__all__ = [
    "Budget",
    "ConceptEntry",
    "Conjecture",
    "ConjectureStore",
    "Graph",
    "KnowledgeBase",
    "MathObject",
    "ProofSketch",
    "Signature",
    "SketchConfig",
    "TheoremRecord",
    "UNDEFINED",
    "augment_hypothesis",
    "canonicalize",
    "default_graph_signature",
    "emit_graph6",
    "enumerate_expressions",
    "evaluate_expression",
    "generate_bound_conjectures",
    "generate_condition_conjectures",
    "generate_sketch",
    "graph_object",
    "integer_object",
    "make_catalog_kb",
    "make_integer_kb",
    "parse_expression",
    "parse_graph6",
    "recheck_conjecture",
    "render_conjecture",
    "render_expression",
    "render_sketch",
    "verify_conjecture",
]
