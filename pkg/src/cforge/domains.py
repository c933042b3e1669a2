"""Glue between concrete domains and the knowledge-base layer.

Binds builtin concept names to evaluators, validates and encodes payloads,
and builds the shipped knowledge bases.
"""

from __future__ import annotations

from typing import Optional

from . import graphs, integers
from .catalog import catalog
from .errors import MalformedPayload, UnknownConcept
from .kb import ConceptEntry, KnowledgeBase, MathObject


def _graph_entry(name: str) -> ConceptEntry:
    if name in graphs.GRAPH_INVARIANTS:
        return ConceptEntry(name, "invariant", evaluator=graphs.GRAPH_INVARIANTS[name])
    return ConceptEntry(name, "property", evaluator=graphs.GRAPH_PROPERTIES[name])


def _integer_entry(name: str) -> ConceptEntry:
    k = integers.INTEGER_CONCEPTS[name]
    kind = "invariant" if name in integers.INTEGER_INVARIANTS else "property"
    return ConceptEntry(name, kind, evaluator=k)


def builtin_concepts(domain: str) -> dict[str, ConceptEntry]:
    if domain == "graph":
        return {name: _graph_entry(name) for name in graphs.GRAPH_CONCEPTS}
    if domain == "integer":
        return {name: _integer_entry(name) for name in integers.INTEGER_CONCEPTS}
    raise MalformedPayload(f"unknown domain {domain!r}")


def bind_concept(domain: str, name: str) -> ConceptEntry:
    """Resolve a serialized concept name: builtin by name, else an
    expression text promoted from a proved conjecture."""
    table = builtin_concepts(domain)
    if name in table:
        return table[name]
    from .exprs import expr_result_type, parse_expression

    try:
        expr = parse_expression(name)
    except Exception:
        raise UnknownConcept(name)
    kind = "property" if expr_result_type(expr) == "bool" else "invariant"
    return ConceptEntry(name, kind, expr_text=name, provenance="promoted-theorem")


def graph_object(g: graphs.Graph, label: Optional[str] = None,
                 origin: str = "user") -> MathObject:
    return MathObject(
        domain="graph",
        payload=g,
        certificate=graphs.canonical_certificate(g),
        label=label,
        origin=origin,
    )


def integer_object(k: int, label: Optional[str] = None,
                   origin: str = "user") -> MathObject:
    integers.validate_integer(k)
    return MathObject(
        domain="integer", payload=k, certificate=str(k), label=label, origin=origin
    )


def make_object(domain: str, encoding: str, label: Optional[str] = None,
                origin: str = "user") -> MathObject:
    """Build an object from its wire encoding (graph6 or decimal text)."""
    if domain == "graph":
        return graph_object(graphs.parse_graph6(encoding), label=label, origin=origin)
    if domain == "integer":
        try:
            k = int(encoding)
        except ValueError:
            raise MalformedPayload(f"integer encoding must be decimal text, got {encoding!r}")
        return integer_object(k, label=label, origin=origin)
    raise MalformedPayload(f"unknown domain {domain!r}")


def encode_object_payload(obj: MathObject) -> str:
    if obj.domain == "graph":
        return graphs.emit_graph6(obj.payload)
    return str(obj.payload)


def make_catalog_kb() -> KnowledgeBase:
    """Graph KB seeded with the shipped catalog and all builtin concepts.

    Isomorphic duplicates in the catalog (e.g. C3 and K3) collapse to the
    first listed label.
    """
    kb = KnowledgeBase(domain="graph", concepts=builtin_concepts("graph"))
    for label, g in catalog():
        kb, _dup = kb.with_object(graph_object(g, label=label, origin="seed-catalog"))
    return kb


def make_integer_kb(values: tuple[int, ...] = tuple(range(1, 31))) -> KnowledgeBase:
    kb = KnowledgeBase(domain="integer", concepts=builtin_concepts("integer"))
    for k in values:
        kb, _dup = kb.with_object(integer_object(k, label=str(k), origin="seed-catalog"))
    return kb
