"""Chains necessary conditions into a proof sketch for forall x [P(x) -> Q(x)].

Each round runs necessary-condition generation against the current
antecedent conjunction and appends the top-ranked genuinely new condition
as a proof line.  The chain stops with reason

- ``q-reached`` once the discovered consequents, by themselves, force the
  conclusion on every stored object (their conjunction's satisfied set sits
  inside the conclusion's),
- ``timeout`` when a line's time budget expires, or
- ``no-progress`` when no candidate qualifies or the line budget is spent;

the final line always concludes the target implication.  Known theorems
whose hypotheses cover the hypothesis property augment it up front.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .dalmatian import Budget, _condition_candidates, _property_masks
from .enumeration import Signature
from .errors import InvalidRequest, RefutedTarget, VacuousHypothesis
from .exprs import Expr, render_expression
from .kb import KnowledgeBase


@dataclass
class SketchConfig:
    timeout: float = 5.0       # seconds per line
    max_lines: int = 8
    max_complexity: int = 1    # atomic chain steps unless asked otherwise


@dataclass
class ProofLine:
    antecedents: tuple[str, ...]
    consequent: str
    evidence: int


@dataclass
class ProofSketch:
    hypothesis: str
    conclusion: str
    lines: list[ProofLine] = field(default_factory=list)
    termination_reason: str = "no-progress"
    augmented_with: tuple[str, ...] = ()


def augment_hypothesis(kb: KnowledgeBase, p: str) -> list[str]:
    """P plus the conclusions of stored theorems whose hypothesis sets
    cover P's satisfied objects; deterministic theorem order."""
    sat_p = kb.sat_mask(p)
    out = [p]
    for thm in kb.theorems:
        hyp_mask = (1 << len(kb.objects)) - 1
        for h in thm.hypothesis:
            hyp_mask &= kb.sat_mask(h)
        if sat_p & ~hyp_mask:
            continue  # some P-object misses the theorem's hypothesis
        if thm.conclusion != p and thm.conclusion not in out:
            out.append(thm.conclusion)
    return out


def _predicate_name(body: Expr) -> str:
    return body.name if body.kind == "atom" else render_expression(body)


def generate_sketch(
    kb: KnowledgeBase,
    p: str,
    q: str,
    sig: Optional[Signature] = None,
    config: Optional[SketchConfig] = None,
) -> ProofSketch:
    started = time.monotonic()
    config = config or SketchConfig()
    for name in (p, q):
        entry = kb.concept(name)
        if entry.kind != "property":
            raise InvalidRequest(f"{name!r} must be a property concept")
    if p == q:
        raise InvalidRequest("hypothesis and conclusion must differ")

    nobj = len(kb.objects)
    full = (1 << nobj) - 1
    sat_p, undef_p = _property_masks(kb, p)
    sat_q, undef_q = _property_masks(kb, q)
    if sat_p == 0:
        raise VacuousHypothesis(f"no stored object satisfies {p!r}")
    refuting = sat_p & ~sat_q & ~undef_q
    if refuting:
        witness = kb.objects[(refuting & -refuting).bit_length() - 1]
        raise RefutedTarget(witness.display())

    if sig is None:
        from .dalmatian import default_signature_for

        sig = default_signature_for(kb, p, "necessary")

    h_names = augment_hypothesis(kb, p)
    augmented = tuple(h_names[1:])
    h_true, h_undef = _conjunction_masks(kb, h_names)
    used_sets = {kb.sat_mask(name) for name in h_names}
    conseq_sat = full  # empty conjunction of discovered consequents
    lines: list[ProofLine] = []
    reason = "no-progress"

    if conseq_sat & ~sat_q == 0:
        reason = "q-reached"  # the conclusion already holds everywhere
    else:
        while len(lines) < config.max_lines - 1:
            deadline = (started if not lines else time.monotonic()) + config.timeout
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                reason = "timeout"
                break
            round_sig = _without_atoms(sig, h_names)
            if round_sig is None:
                reason = "no-progress"
                break
            ranked = _condition_candidates(
                kb, h_true, h_undef, "necessary", round_sig,
                Budget(max_complexity=config.max_complexity, timeout=remaining),
                store_bound=max(nobj, 1),
            )
            chosen = None
            for cand in ranked.winners:
                if cand.sat_mask in used_sets:
                    continue
                if cand.sat_mask == sat_q:
                    continue  # the conclusion is barred from intermediate lines
                if cand.sat_mask == h_true:
                    continue  # circular: identical to the antecedents on the KB
                if conseq_sat & ~cand.sat_mask == 0:
                    continue  # already implied by the discovered consequents
                chosen = cand
                break
            if chosen is None:
                reason = "timeout" if ranked.timed_out else "no-progress"
                break
            name = _predicate_name(chosen.body)
            lines.append(ProofLine(
                antecedents=tuple(h_names),
                consequent=name,
                evidence=bin(h_true & chosen.sat_mask).count("1"),
            ))
            h_names.append(name)
            used_sets.add(chosen.sat_mask)
            h_true &= chosen.sat_mask
            h_undef |= chosen.undef_mask
            h_true &= ~h_undef
            conseq_sat &= chosen.sat_mask
            if conseq_sat & ~sat_q == 0:
                reason = "q-reached"
                break

    lines.append(ProofLine(
        antecedents=tuple(h_names),
        consequent=q,
        evidence=bin(h_true & sat_q).count("1"),
    ))
    return ProofSketch(
        hypothesis=p,
        conclusion=q,
        lines=lines,
        termination_reason=reason,
        augmented_with=augmented,
    )


def _conjunction_masks(kb: KnowledgeBase, names: list[str]) -> tuple[int, int]:
    """Literal truth and undefinedness of a conjunction of concepts."""
    full = (1 << len(kb.objects)) - 1
    true_mask, undef_mask = full, 0
    for name in names:
        t, u = _property_masks(kb, name)
        true_mask &= t
        undef_mask |= u
    return true_mask & ~undef_mask, undef_mask


def _without_atoms(sig: Signature, names: list[str]) -> Optional[Signature]:
    atoms = tuple(a for a in sig.atoms if a[0] not in names)
    if not atoms:
        return None
    return Signature(atoms, sig.unary_ops, sig.binary_ops,
                     sig.comparators, sig.constants)


# ── rendering and serialization ──

def _sentence_predicates(names: tuple[str, ...]) -> str:
    parts = [f"{n}(x)" for n in names]
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2:
        return f"{parts[0]} and {parts[1]}"
    return ", ".join(parts[:-1]) + f", and {parts[-1]}"


def render_sketch(s: ProofSketch, domain: str = "graph") -> str:
    out = [
        f"Proof sketch: for every {domain} x, "
        f"if {s.hypothesis}(x) then {s.conclusion}(x)."
    ]
    if s.augmented_with:
        out.append(
            "Using known theorem(s) for: " + ", ".join(s.augmented_with) + "."
        )
    for i, line in enumerate(s.lines, start=1):
        out.append(
            f"({i}) For every {domain} x, "
            f"if {_sentence_predicates(line.antecedents)}, "
            f"then {line.consequent}(x).  [evidence: {line.evidence}]"
        )
    out.append(
        f"({len(s.lines) + 1}) Therefore, for every {domain} x, "
        f"if {s.hypothesis}(x), then {s.conclusion}(x)."
    )
    out.append(f"[termination: {s.termination_reason}]")
    return "\n".join(out)


def sketch_to_json(s: ProofSketch) -> dict:
    return {
        "hypothesis": s.hypothesis,
        "conclusion": s.conclusion,
        "lines": [
            {
                "antecedents": list(l.antecedents),
                "consequent": l.consequent,
                "evidence": l.evidence,
            }
            for l in s.lines
        ],
        "termination_reason": s.termination_reason,
        "augmented_with": list(s.augmented_with),
    }


def sketch_from_json(doc: dict) -> ProofSketch:
    return ProofSketch(
        hypothesis=doc["hypothesis"],
        conclusion=doc["conclusion"],
        lines=[
            ProofLine(tuple(l["antecedents"]), l["consequent"], l["evidence"])
            for l in doc["lines"]
        ],
        termination_reason=doc["termination_reason"],
        augmented_with=tuple(doc.get("augmented_with", ())),
    )
