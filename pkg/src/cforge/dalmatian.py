"""Semantic conjecture generation with the Dalmatian significance filter.

Candidates stream out of the enumerator; a candidate survives only when

- truth: its claim holds on every stored object where it is defined, and
- significance: it strictly improves the stored aggregate somewhere
  (bound modes) or covers a satisfied-set no stored conjecture has
  (condition modes, ranked by slack).

Stored conjectures that stop contributing are pruned, so the store never
holds more conjectures than there are objects in scope.  Objects where any
involved concept is Undefined are excluded from truth and significance
counts; every conjecture reports how many were excluded.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .enumeration import Arena, LevelBatch, Signature, enumerate_expressions
from .errors import InvalidRequest, NoEligibleObjects, VacuousHypothesis
from .exprs import Expr, _apply_op, evaluate_expression, render_expression
from .kb import KnowledgeBase, MathObject
from .values import UNDEFINED

BOUND_MODES = ("upper-bound", "lower-bound")
CONDITION_MODES = ("necessary", "sufficient")
MODES = BOUND_MODES + CONDITION_MODES


@dataclass
class Budget:
    max_complexity: int = 5
    timeout: Optional[float] = 5.0  # seconds of wall clock, None = unbounded


@dataclass
class Conjecture:
    """A universally quantified claim over one domain's objects."""

    mode: str
    target: str
    body: Expr
    domain: str
    status: str = "open"  # 'open' | 'proved' | 'refuted'
    refuting_certificate: Optional[str] = None
    evidence: int = 0   # stored objects where the claim is literally true
    total: int = 0      # stored objects in scope when generated
    excluded: int = 0   # objects skipped because a value was Undefined
    slack: Optional[int] = None    # condition modes
    touches: Optional[int] = None  # bound modes: objects met with equality

    @property
    def body_text(self) -> str:
        return render_expression(self.body)

    @property
    def complexity(self) -> int:
        return self.body.complexity

    def canonical_key(self) -> tuple[str, str, str]:
        return (self.mode, self.target, self.body_text)

    def claim_value(self, kb: KnowledgeBase, obj: MathObject):
        """Literal truth of the claim on one object; Undefined is strict."""
        t = kb.evaluate(self.target, obj)
        b = evaluate_expression(self.body, obj, kb)
        if t is UNDEFINED or b is UNDEFINED:
            return UNDEFINED
        if self.mode == "upper-bound":
            return t <= b
        if self.mode == "lower-bound":
            return t >= b
        if self.mode == "necessary":
            return (not t) or b
        if self.mode == "sufficient":
            return (not b) or t
        raise InvalidRequest(f"unknown mode {self.mode!r}")


@dataclass
class ConjectureStore:
    conjectures: list[Conjecture] = field(default_factory=list)
    touch_table: dict[str, list[int]] = field(default_factory=dict)
    candidates_seen: int = 0
    timed_out: bool = False


@dataclass
class RecheckResult:
    status: str
    witness: Optional[MathObject]
    evidence: int
    zero_evidence: bool


@dataclass
class VerifyResult:
    ok: bool
    witnesses: list[MathObject]
    evidence: int
    excluded: int


# ── claim rendering ──

def _body_display(body: Expr) -> str:
    if body.kind == "atom":
        return f"{body.name}(x)"
    return render_expression(body)


def render_conjecture(c: Conjecture) -> str:
    if c.mode == "upper-bound":
        claim = f"{c.target}(x) <= {_body_display(c.body)}"
    elif c.mode == "lower-bound":
        claim = f"{c.target}(x) >= {_body_display(c.body)}"
    elif c.mode == "necessary":
        claim = f"{c.target}(x) → {_body_display(c.body)}"
    else:
        claim = f"{_body_display(c.body)} → {c.target}(x)"
    stats = [f"evidence: {c.evidence}/{c.total}"]
    if c.slack is not None:
        stats.append(f"slack: {c.slack}")
    if c.touches is not None:
        stats.append(f"touches: {c.touches}")
    stats.append(f"complexity: {c.complexity}")
    if c.excluded:
        stats.append(f"excluded: {c.excluded}")
    line = f"∀ {c.domain}s x: {claim}  [{', '.join(stats)}]"
    if c.status != "open":
        line += f"  ({c.status})"
    return line


def conjecture_to_json(c: Conjecture) -> dict:
    return {
        "mode": c.mode,
        "target": c.target,
        "body": c.body_text,
        "domain": c.domain,
        "status": c.status,
        "refuting_certificate": c.refuting_certificate,
        "evidence": c.evidence,
        "total": c.total,
        "excluded": c.excluded,
        "slack": c.slack,
        "touches": c.touches,
        "complexity": c.complexity,
        "rendered": render_conjecture(c),
    }


def conjecture_from_json(doc: dict, atom_kinds: Optional[dict[str, str]] = None) -> Conjecture:
    from .exprs import parse_expression

    return Conjecture(
        mode=doc["mode"],
        target=doc["target"],
        body=parse_expression(doc["body"], atom_kinds),
        domain=doc["domain"],
        status=doc.get("status", "open"),
        refuting_certificate=doc.get("refuting_certificate"),
        evidence=doc.get("evidence", 0),
        total=doc.get("total", 0),
        excluded=doc.get("excluded", 0),
        slack=doc.get("slack"),
        touches=doc.get("touches"),
    )


# ── vectorized evaluation over the arena ──

class VectorEval:
    """Per-run value vectors: every arena node evaluated once across all
    stored objects.  Rational nodes hold per-object value tuples; boolean
    nodes hold (true_mask, undef_mask) bit pairs."""

    def __init__(self, arena: Optional[Arena], kb: KnowledgeBase):
        self.arena = arena  # bound lazily by the sink on the first batch
        self.kb = kb
        self.objects = kb.objects
        self.nobj = len(kb.objects)
        self.full = (1 << self.nobj) - 1
        self.rat_vals: list[tuple] = []
        self.bool_vals: list[tuple[int, int]] = []

    def ensure_rat(self, end: int):
        nodes = self.arena.rat_nodes
        vals = self.rat_vals
        kb, objects = self.kb, self.objects
        from .enumeration import _OPC_NAME, _RAT_ATOM, _RAT_CONST

        while len(vals) < end:
            i = len(vals)
            opc, a, b = nodes[i]
            if opc == _RAT_ATOM:
                name = self.arena.rat_atom_names[a]
                vals.append(tuple(kb.evaluate(name, o) for o in objects))
                continue
            if opc == _RAT_CONST:
                c = self.arena.const_values[a]
                vals.append((c,) * self.nobj)
                continue
            op = _OPC_NAME[opc]
            av = vals[a]
            if b == -1:
                vals.append(tuple(
                    UNDEFINED if x is UNDEFINED else _apply_op(op, [x])
                    for x in av
                ))
            else:
                bv = vals[b]
                vals.append(tuple(
                    UNDEFINED if (x is UNDEFINED or y is UNDEFINED)
                    else _apply_op(op, [x, y])
                    for x, y in zip(av, bv)
                ))

    def ensure_bool(self, end: int):
        nodes = self.arena.bool_nodes
        vals = self.bool_vals
        full = self.full
        from .enumeration import _BOOL_ATOM, _OPC, _OPC_NAME

        not_c, and_c, or_c, xor_c, imp_c = (
            _OPC["not"], _OPC["and"], _OPC["or"], _OPC["xor"], _OPC["implies"])
        while len(vals) < end:
            i = len(vals)
            opc, a, b = nodes[i]
            if opc == _BOOL_ATOM:
                name = self.arena.bool_atom_names[a]
                t = u = 0
                for k, o in enumerate(self.kb.objects):
                    v = self.kb.evaluate(name, o)
                    if v is UNDEFINED:
                        u |= 1 << k
                    elif v:
                        t |= 1 << k
                vals.append((t, u))
            elif opc == not_c:
                at, au = vals[a]
                vals.append((full & ~at & ~au, au))
            elif opc in (and_c, or_c, xor_c, imp_c):
                at, au = vals[a]
                bt, bu = vals[b]
                u = au | bu
                if opc == and_c:
                    t = at & bt
                elif opc == or_c:
                    t = at | bt
                elif opc == xor_c:
                    t = at ^ bt
                else:
                    t = full & (~at | bt)
                vals.append((t & ~u, u))
            else:
                # comparator over rational children
                op = _OPC_NAME[opc]
                self.ensure_rat(max(a, b) + 1)
                av = self.rat_vals[a]
                bv = self.rat_vals[b]
                t = u = 0
                for k in range(self.nobj):
                    x, y = av[k], bv[k]
                    if x is UNDEFINED or y is UNDEFINED:
                        u |= 1 << k
                    elif _apply_op(op, [x, y]):
                        t |= 1 << k
                vals.append((t, u))


# ── signature defaults per run ──

def default_signature_for(kb: KnowledgeBase, target: str, mode: str) -> Signature:
    """Target-appropriate default: bound modes search rational bodies over
    the registered invariants, condition modes search boolean bodies over
    everything registered.  The target atom never appears in its own body."""
    if mode in BOUND_MODES:
        atoms = tuple(
            (n, "invariant") for n, e in sorted(kb.concepts.items())
            if e.kind == "invariant" and n != target
        )
        return Signature(atoms=atoms, unary_ops=("floor", "neg"),
                         binary_ops=("plus", "minus", "times", "min", "max"))
    atoms = tuple(
        (n, e.kind) for n, e in sorted(kb.concepts.items()) if n != target
    )
    return Signature(atoms=atoms, unary_ops=("not",),
                     binary_ops=("and", "or"), comparators=("le",))


def _strip_target(sig: Signature, target: str) -> Signature:
    from .errors import EmptySignature

    atoms = tuple(a for a in sig.atoms if a[0] != target)
    if not atoms:
        raise EmptySignature("signature contains no atoms besides the target")
    return Signature(atoms, sig.unary_ops, sig.binary_ops, sig.comparators, sig.constants)


# ── bound-mode generation ──

def generate_bound_conjectures(
    kb: KnowledgeBase,
    target: str,
    mode: str,
    sig: Signature,
    budget: Optional[Budget] = None,
) -> ConjectureStore:
    budget = budget or Budget()
    if mode not in BOUND_MODES:
        raise InvalidRequest(f"bound mode must be one of {BOUND_MODES}, got {mode!r}")
    entry = kb.concept(target)
    if entry.kind != "invariant":
        raise InvalidRequest(f"bound target {target!r} must be an invariant")
    tvec = kb.vector(target)
    t_defined = [v is not UNDEFINED for v in tvec]
    if sum(t_defined) < 2:
        raise NoEligibleObjects(
            f"target {target!r} is defined on fewer than 2 stored objects"
        )
    sig = _strip_target(sig, target)
    sig.validate()
    nobj = len(kb.objects)
    upper = mode == "upper-bound"
    store = ConjectureStore()
    deadline = None if budget.timeout is None else time.monotonic() + budget.timeout

    # aggregate bound per object (None where no accepted conjecture applies)
    agg: list = [None] * nobj
    accepted_vecs: list[tuple] = []

    def check(values: tuple) -> Optional[list[int]]:
        """Truth plus significance; returns the eligible indices on success."""
        eligible = [i for i in range(nobj)
                    if t_defined[i] and values[i] is not UNDEFINED]
        if not eligible:
            return None
        if upper:
            if any(tvec[i] > values[i] for i in eligible):
                return None
            improves = any(agg[i] is None or values[i] < agg[i] for i in eligible)
        else:
            if any(tvec[i] < values[i] for i in eligible):
                return None
            improves = any(agg[i] is None or values[i] > agg[i] for i in eligible)
        return eligible if improves else None

    def accept(body: Expr, values: tuple, eligible: list[int]):
        conj = Conjecture(
            mode=mode, target=target, body=body, domain=kb.domain,
            evidence=len(eligible), total=nobj, excluded=nobj - len(eligible),
            touches=sum(1 for i in eligible if values[i] == tvec[i]),
        )
        store.conjectures.append(conj)
        accepted_vecs.append(values)
        _recompute_aggregate()
        _prune()

    def _recompute_aggregate():
        for i in range(nobj):
            vals = [v[i] for v in accepted_vecs if v[i] is not UNDEFINED]
            if not vals or not t_defined[i]:
                agg[i] = None
            else:
                agg[i] = min(vals) if upper else max(vals)

    def _prune():
        # drop stored conjectures that no longer touch the aggregate anywhere
        changed = True
        while changed:
            changed = False
            for k in range(len(accepted_vecs)):
                others = accepted_vecs[:k] + accepted_vecs[k + 1:]
                same = True
                for i in range(nobj):
                    if not t_defined[i]:
                        continue
                    vals = [v[i] for v in others if v[i] is not UNDEFINED]
                    wo = (min(vals) if upper else max(vals)) if vals else None
                    if wo != agg[i]:
                        same = False
                        break
                if same:
                    del accepted_vecs[k]
                    del store.conjectures[k]
                    changed = True
                    break
        _recompute_aggregate()

    evaluator = VectorEval(None, kb)  # re-bound in the sink per arena

    def sink(batch: LevelBatch):
        if batch.result_type != "rat":
            return
        if evaluator.arena is None:
            evaluator.arena = batch.arena
        evaluator.ensure_rat(batch.end)
        for i in batch.ids():
            store.candidates_seen += 1
            values = evaluator.rat_vals[i]
            eligible = check(values)
            if eligible is not None:
                accept(batch.arena.to_expr("rat", i), values, eligible)

    try:
        enumerate_expressions(sig, budget.max_complexity, sink, deadline=deadline)
    finally:
        if deadline is not None and time.monotonic() > deadline:
            store.timed_out = True

    _fill_touch_table(store, kb, tvec, accepted_vecs, upper)
    return store


def _fill_touch_table(store, kb, tvec, accepted_vecs, upper):
    for i, obj in enumerate(kb.objects):
        hits = []
        for k, v in enumerate(accepted_vecs):
            if tvec[i] is not UNDEFINED and v[i] is not UNDEFINED and v[i] == tvec[i]:
                hits.append(k)
        if hits:
            store.touch_table[obj.display()] = hits


# ── condition-mode generation ──

def generate_condition_conjectures(
    kb: KnowledgeBase,
    target: str,
    mode: str,
    sig: Signature,
    budget: Optional[Budget] = None,
) -> ConjectureStore:
    budget = budget or Budget()
    if mode not in CONDITION_MODES:
        raise InvalidRequest(
            f"condition mode must be one of {CONDITION_MODES}, got {mode!r}"
        )
    entry = kb.concept(target)
    if entry.kind != "property":
        raise InvalidRequest(f"condition target {target!r} must be a property")
    nobj = len(kb.objects)
    tmask, tundef = _property_masks(kb, target)
    if tmask == 0:
        raise VacuousHypothesis(f"no stored object satisfies {target!r}")
    sig = _strip_target(sig, target)
    sig.validate()
    ranked = _condition_candidates(
        kb, tmask, tundef, mode, sig, budget,
        store_bound=nobj,
    )
    store = ConjectureStore(timed_out=ranked.timed_out,
                            candidates_seen=ranked.candidates_seen)
    for cand in ranked.winners:
        conj = Conjecture(
            mode=mode, target=target, body=cand.body, domain=kb.domain,
            evidence=cand.evidence, total=nobj, excluded=cand.excluded,
            slack=cand.slack,
        )
        store.conjectures.append(conj)
    for i, obj in enumerate(kb.objects):
        hits = [k for k, cand in enumerate(ranked.winners) if cand.sat_mask >> i & 1]
        if hits:
            store.touch_table[obj.display()] = hits
    return store


@dataclass
class ConditionCandidate:
    rank: tuple
    body: Expr
    sat_mask: int
    undef_mask: int
    slack: int
    evidence: int
    excluded: int


@dataclass
class RankedConditions:
    winners: list[ConditionCandidate]
    candidates_seen: int = 0
    timed_out: bool = False


def _property_masks(kb: KnowledgeBase, name: str) -> tuple[int, int]:
    t = u = 0
    for i, o in enumerate(kb.objects):
        v = kb.evaluate(name, o)
        if v is UNDEFINED:
            u |= 1 << i
        elif v:
            t |= 1 << i
    return t, u


def _condition_candidates(
    kb: KnowledgeBase,
    tmask: int,
    tundef: int,
    mode: str,
    sig: Signature,
    budget: Budget,
    store_bound: int,
) -> RankedConditions:
    """Stream boolean candidates, keep the best per satisfied-set, bounded.

    Necessary mode: claims target -> body, slack counts objects with the
    body but not the target; sufficient mode mirrors both.
    """
    nobj = len(kb.objects)
    full = (1 << nobj) - 1
    necessary = mode == "necessary"
    deadline = None if budget.timeout is None else time.monotonic() + budget.timeout
    # satisfied-set -> best candidate (semantic dedup is KB-relative)
    board: dict[int, ConditionCandidate] = {}
    seen = [0]
    evaluator = VectorEval(None, kb)

    def consider(body_of, i, bt, bu):
        eligible = full & ~bu & ~tundef
        if necessary:
            if tmask & eligible & ~bt:
                return
            if not (tmask & eligible):
                return  # no positive evidence
            slack_mask = bt & ~tmask & ~tundef
            claim_true = eligible & (~tmask | bt)
        else:
            evidence_mask = bt & ~tundef
            if evidence_mask & ~tmask:
                return
            if not evidence_mask:
                return
            slack_mask = tmask & ~bt & ~bu
            claim_true = eligible & (~bt | tmask)
        slack = bin(slack_mask).count("1")
        body = body_of(i)
        rank = (slack, body.complexity, render_expression(body))
        cand = ConditionCandidate(
            rank=rank, body=body, sat_mask=bt, undef_mask=bu, slack=slack,
            evidence=bin(claim_true).count("1"),
            excluded=nobj - bin(eligible).count("1"),
        )
        held = board.get(bt)
        if held is None or cand.rank < held.rank:
            board[bt] = cand
            if len(board) > store_bound:
                worst = max(board, key=lambda m: board[m].rank)
                del board[worst]

    def sink(batch: LevelBatch):
        if batch.result_type != "bool":
            return
        if evaluator.arena is None:
            evaluator.arena = batch.arena
        evaluator.ensure_bool(batch.end)
        body_of = lambda i: batch.arena.to_expr("bool", i)
        for i in batch.ids():
            seen[0] += 1
            bt, bu = evaluator.bool_vals[i]
            consider(body_of, i, bt, bu)

    timed_out = False
    enumerate_expressions(sig, budget.max_complexity, sink, deadline=deadline)
    if deadline is not None and time.monotonic() > deadline:
        timed_out = True
    winners = sorted(board.values(), key=lambda c: c.rank)
    return RankedConditions(winners=winners, candidates_seen=seen[0],
                            timed_out=timed_out)


# ── rechecking and independent verification ──

def recheck_conjecture(conj: Conjecture, kb: KnowledgeBase) -> RecheckResult:
    """Full scan; refutations are persisted onto the conjecture."""
    evidence = 0
    witness = None
    for obj in kb.objects:
        v = conj.claim_value(kb, obj)
        if v is False:
            witness = obj
            break
        if v is True:
            evidence += 1
    if witness is not None:
        conj.status = "refuted"
        conj.refuting_certificate = witness.certificate
        return RecheckResult("refuted", witness, evidence, False)
    if conj.status == "refuted":
        conj.status = "open"  # the refuting object is no longer stored
        conj.refuting_certificate = None
    return RecheckResult(conj.status, None, evidence, evidence == 0)


def verify_conjecture(kb: KnowledgeBase, conj: Conjecture) -> VerifyResult:
    """Independent full scan: every object, straight claim evaluation."""
    witnesses = []
    evidence = 0
    excluded = 0
    for obj in kb.objects:
        v = conj.claim_value(kb, obj)
        if v is False:
            witnesses.append(obj)
        elif v is True:
            evidence += 1
        else:
            excluded += 1
    return VerifyResult(not witnesses, witnesses, evidence, excluded)
