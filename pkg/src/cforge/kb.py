"""Knowledge base: objects, concepts (name-function pairs), theorems.

A knowledge base is the semantic ground truth every conjecture is checked
against.  Snapshots are immutable: mutation helpers return a new snapshot
sharing the (idempotent) value cache, so a long generation job can keep the
snapshot it started with while the session moves on.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .errors import DomainMismatch, MalformedKB, RefutedByStoredObject, UnknownConcept
from .values import Value, is_true


@dataclass(frozen=True)
class ConceptEntry:
    """A named concept: invariant (object -> number) or property (object -> bool)."""

    name: str
    kind: str  # 'invariant' | 'property'
    evaluator: Optional[Callable] = None  # builtin concepts evaluate the raw payload
    expr_text: Optional[str] = None       # promoted concepts evaluate an expression
    provenance: str = "builtin"           # 'builtin' | 'user' | 'promoted-theorem'

    def __post_init__(self):
        if self.kind not in ("invariant", "property"):
            raise ValueError(f"bad concept kind {self.kind!r}")
        if (self.evaluator is None) == (self.expr_text is None):
            raise ValueError("exactly one of evaluator/expr_text must be set")


@dataclass(frozen=True)
class MathObject:
    """A stored example: payload plus its canonical dedup certificate."""

    domain: str
    payload: object
    certificate: str
    label: Optional[str] = None
    origin: str = "seed-catalog"  # 'seed-catalog' | 'user' | 'counterexample'

    def display(self) -> str:
        return self.label if self.label else self.certificate


@dataclass(frozen=True)
class TheoremRecord:
    """Conjunction of hypothesis concepts implying a conclusion concept."""

    hypothesis: tuple[str, ...]
    conclusion: str
    source: str = "user-proved"  # 'user-proved' | 'imported'


@dataclass(frozen=True)
class KnowledgeBase:
    domain: str
    objects: tuple[MathObject, ...] = ()
    concepts: dict[str, ConceptEntry] = field(default_factory=dict)
    theorems: tuple[TheoremRecord, ...] = ()
    # (concept name, object certificate) -> value; shared across snapshots,
    # writes are idempotent so concurrent population is safe
    value_cache: dict = field(default_factory=dict, compare=False, repr=False)

    # ── evaluation ──

    def concept(self, name: str) -> ConceptEntry:
        entry = self.concepts.get(name)
        if entry is None:
            raise UnknownConcept(name)
        return entry

    def evaluate(self, concept_name: str, obj: MathObject) -> Value:
        """Evaluate a registered concept on an object, with caching."""
        entry = self.concept(concept_name)
        if obj.domain != self.domain:
            raise DomainMismatch(
                f"object domain {obj.domain!r} does not match KB domain {self.domain!r}"
            )
        key = (concept_name, obj.certificate)
        cached = self.value_cache.get(key)
        if cached is not None:
            return cached[0]
        if entry.evaluator is not None:
            value = entry.evaluator(obj.payload)
        else:
            from .exprs import evaluate_expression, parse_expression

            value = evaluate_expression(parse_expression(entry.expr_text), obj, self)
        self.value_cache[key] = (value,)
        return value

    def vector(self, concept_name: str) -> list[Value]:
        return [self.evaluate(concept_name, o) for o in self.objects]

    def sat_mask(self, concept_name: str) -> int:
        """Bitmask of stored objects where the property is literally true."""
        mask = 0
        for i, o in enumerate(self.objects):
            if is_true(self.evaluate(concept_name, o)):
                mask |= 1 << i
        return mask

    # ── mutation (returns new snapshots) ──

    def with_object(self, obj: MathObject) -> tuple["KnowledgeBase", Optional[MathObject]]:
        """Add an object; duplicates are reported, not fatal.

        Returns (new kb, existing duplicate or None).  On duplicate the
        knowledge base is returned unchanged.
        """
        if obj.domain != self.domain:
            raise DomainMismatch(
                f"object domain {obj.domain!r} does not match KB domain {self.domain!r}"
            )
        for existing in self.objects:
            if existing.certificate == obj.certificate:
                return self, existing
        return replace(self, objects=self.objects + (obj,)), None

    def with_concept(self, entry: ConceptEntry) -> "KnowledgeBase":
        if entry.name in self.concepts:
            raise ValueError(f"concept {entry.name!r} already registered")
        concepts = dict(self.concepts)
        concepts[entry.name] = entry
        return replace(self, concepts=concepts)

    def with_theorem(self, thm: TheoremRecord) -> "KnowledgeBase":
        """Add a theorem after checking it against every stored object."""
        for name in (*thm.hypothesis, thm.conclusion):
            if name not in self.concepts:
                raise UnknownConcept(name)
        witness = self.theorem_violation(thm)
        if witness is not None:
            raise RefutedByStoredObject(
                witness.display(),
                f"satisfies {' & '.join(thm.hypothesis) or 'trivially'} "
                f"but not {thm.conclusion}",
            )
        return replace(self, theorems=self.theorems + (thm,))

    def theorem_violation(self, thm: TheoremRecord) -> Optional[MathObject]:
        """First stored object satisfying the hypothesis but not the conclusion."""
        for obj in self.objects:
            if all(is_true(self.evaluate(h, obj)) for h in thm.hypothesis):
                if not is_true(self.evaluate(thm.conclusion, obj)):
                    return obj
        return None

    # ── serialization ──

    def to_json(self) -> dict:
        return {
            "domain": self.domain,
            "objects": [
                {"label": o.label, "encoding": encode_payload(o), "origin": o.origin}
                for o in self.objects
            ],
            "theorems": [
                {"hypothesis": list(t.hypothesis), "conclusion": t.conclusion, "source": t.source}
                for t in self.theorems
            ],
            "concepts": sorted(self.concepts),
        }

    @staticmethod
    def from_json(doc: dict) -> "KnowledgeBase":
        from .domains import bind_concept, make_object

        if not isinstance(doc, dict):
            raise MalformedKB("KB document must be a JSON object")
        domain = doc.get("domain")
        if domain not in ("graph", "integer"):
            raise MalformedKB(f"unknown domain {domain!r}")
        kb = KnowledgeBase(domain=domain)
        for name in doc.get("concepts", []):
            kb = kb.with_concept(bind_concept(domain, name))
        for i, spec in enumerate(doc.get("objects", [])):
            try:
                obj = make_object(
                    domain,
                    encoding=spec["encoding"],
                    label=spec.get("label"),
                    origin=spec.get("origin", "user"),
                )
            except Exception as exc:
                raise MalformedKB(f"object {i} ({spec.get('label')!r}): {exc}") from exc
            kb, _dup = kb.with_object(obj)
        for t in doc.get("theorems", []):
            kb = kb.with_theorem(
                TheoremRecord(
                    hypothesis=tuple(t["hypothesis"]),
                    conclusion=t["conclusion"],
                    source=t.get("source", "imported"),
                )
            )
        return kb


def encode_payload(obj: MathObject) -> str:
    from .domains import encode_object_payload

    return encode_object_payload(obj)
