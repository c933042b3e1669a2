"""Long-lived interactive sessions over HTTP.

Each session holds an immutable knowledge-base snapshot, a queue of pending
conjectures and sketch lines awaiting human verdicts, and an append-only
event log (one JSON document per line).  Verdicts mutate the knowledge base
through new snapshots: proofs become theorems (promoting compound bodies to
named concepts), refutations store their counterexample, justification
requests queue sub-goals for the human to sketch later.

Replaying a session's event log from the initial snapshot reproduces the
final knowledge base exactly; generation requests run on a background
executor against the snapshot they started with and can be polled.
"""

from __future__ import annotations

import json
import threading
import uuid
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .dalmatian import (
    Budget,
    Conjecture,
    conjecture_to_json,
    default_signature_for,
    generate_bound_conjectures,
    generate_condition_conjectures,
    render_conjecture,
    BOUND_MODES,
    CONDITION_MODES,
)
from .domains import bind_concept, make_catalog_kb, make_integer_kb, make_object
from .enumeration import Signature
from .errors import (
    BogusCounterexample,
    CforgeError,
    InvalidRequest,
    JobActive,
    MalformedKB,
    UnknownSubject,
)
from .exprs import evaluate_expression, parse_expression
from .kb import KnowledgeBase, TheoremRecord
from .sketch import ProofLine, SketchConfig, generate_sketch, sketch_to_json
from .values import UNDEFINED


# ── session state ──

@dataclass
class PendingItem:
    id: str
    kind: str  # 'conjecture' | 'sketch-line'
    conjecture: Optional[Conjecture] = None
    line: Optional[ProofLine] = None
    rendered: str = ""
    evidence: int = 0
    total: int = 0


@dataclass
class JobInfo:
    id: str
    kind: str
    status: str = "running"  # 'running' | 'done' | 'failed'
    result: Optional[dict] = None
    error: Optional[dict] = None
    exception: Optional[Exception] = field(default=None, repr=False)
    future: Optional[Future] = field(default=None, repr=False)


@dataclass
class Session:
    id: str
    kb: KnowledgeBase
    log_path: Optional[Path]
    pending: dict[str, PendingItem] = field(default_factory=dict)
    resolved: list[dict] = field(default_factory=list)
    subgoals: list[dict] = field(default_factory=list)
    job: Optional[JobInfo] = None
    jobs: dict[str, JobInfo] = field(default_factory=dict)
    counter: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def next_id(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    def log_event(self, event: dict):
        if self.log_path is None:
            return
        with self.log_path.open("a") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")


# ── request bodies ──

class CreateSessionBody(BaseModel):
    source: Optional[str] = None   # 'catalog' | 'integers'
    kb: Optional[dict] = None      # uploaded KB JSON


class SignatureBody(BaseModel):
    atoms: Optional[list[list[str]]] = None  # [name, kind] pairs
    unary_ops: Optional[list[str]] = None
    binary_ops: Optional[list[str]] = None
    comparators: Optional[list[str]] = None
    constants: Optional[list[str]] = None


class ConjectureRequestBody(BaseModel):
    target: str
    mode: str
    signature: Optional[SignatureBody] = None
    config: Optional[dict] = None  # {max_complexity, timeout}


class SketchRequestBody(BaseModel):
    hypothesis: str
    conclusion: str
    config: Optional[dict] = None  # {timeout, max_lines, max_complexity}


class CounterexampleBody(BaseModel):
    encoding: str
    label: Optional[str] = None


class VerdictBody(BaseModel):
    subject: str
    kind: str  # 'proved' | 'refuted' | 'needs-justification'
    counterexample: Optional[CounterexampleBody] = None
    note: Optional[str] = None


# ── KB effects shared by the live path and log replay ──

def apply_proved_effects(kb: KnowledgeBase, effects: dict) -> KnowledgeBase:
    for name in effects.get("promoted", []):
        if name not in kb.concepts:
            kb = kb.with_concept(bind_concept(kb.domain, name))
    t = effects["theorem"]
    return kb.with_theorem(TheoremRecord(
        hypothesis=tuple(t["hypothesis"]),
        conclusion=t["conclusion"],
        source=t.get("source", "user-proved"),
    ))


def apply_refuted_effects(kb: KnowledgeBase, effects: dict) -> KnowledgeBase:
    o = effects["object"]
    obj = make_object(kb.domain, encoding=o["encoding"], label=o.get("label"),
                      origin=o.get("origin", "counterexample"))
    kb, _dup = kb.with_object(obj)
    return kb


def replay_event_log(path: Path) -> KnowledgeBase:
    """Rebuild the knowledge base by replaying a session's event log."""
    kb: Optional[KnowledgeBase] = None
    with Path(path).open() as fh:
        for line in fh:
            if not line.strip():
                continue
            event = json.loads(line)
            etype = event.get("event")
            if etype == "created":
                kb = KnowledgeBase.from_json(event["kb"])
            elif etype == "verdict":
                if kb is None:
                    raise MalformedKB("verdict event before created event")
                effects = event.get("effects", {})
                if "theorem" in effects:
                    kb = apply_proved_effects(kb, effects)
                if "object" in effects:
                    kb = apply_refuted_effects(kb, effects)
    if kb is None:
        raise MalformedKB("log has no created event")
    return kb


def export_kb_json(kb: KnowledgeBase) -> str:
    """Deterministic serialization used by export and the replay check."""
    return json.dumps(kb.to_json(), sort_keys=True, indent=2) + "\n"


# ── claim helpers ──

def _resolve_predicate(kb: KnowledgeBase, name: str):
    """A predicate reference is a registered concept name or expression text."""
    if name in kb.concepts:
        return lambda obj: kb.evaluate(name, obj)
    expr = parse_expression(name, _atom_kinds(kb))
    return lambda obj: evaluate_expression(expr, obj, kb)


def _atom_kinds(kb: KnowledgeBase) -> dict[str, str]:
    return {n: e.kind for n, e in kb.concepts.items()}


def line_claim_value(kb: KnowledgeBase, line: ProofLine, obj):
    vals = [_resolve_predicate(kb, a)(obj) for a in line.antecedents]
    cv = _resolve_predicate(kb, line.consequent)(obj)
    if any(v is UNDEFINED for v in vals) or cv is UNDEFINED:
        return UNDEFINED
    return (not all(vals)) or cv


def _claim_trace(kb: KnowledgeBase, item: PendingItem, obj) -> dict:
    if item.kind == "conjecture":
        c = item.conjecture
        t = kb.evaluate(c.target, obj)
        b = evaluate_expression(c.body, obj, kb)
        return {
            "claim": render_conjecture(c),
            "target_value": _json_value(t),
            "body_value": _json_value(b),
            "claim_value": _json_value(c.claim_value(kb, obj)),
        }
    line = item.line
    return {
        "claim": item.rendered,
        "antecedent_values": {
            a: _json_value(_resolve_predicate(kb, a)(obj)) for a in line.antecedents
        },
        "consequent_value": _json_value(_resolve_predicate(kb, line.consequent)(obj)),
        "claim_value": _json_value(line_claim_value(kb, line, obj)),
    }


def _json_value(v):
    if v is UNDEFINED:
        return "Undefined"
    if isinstance(v, bool):
        return v
    from .values import rational_to_text

    return rational_to_text(v)


def _render_line(line: ProofLine) -> str:
    ants = " and ".join(f"{a}(x)" for a in line.antecedents)
    return f"∀ x: {ants} → {line.consequent}(x)"


# ── the application ──

def create_app(data_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="cforge session service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    executor = ThreadPoolExecutor(max_workers=4)
    root = Path(data_dir) if data_dir else None
    if root is not None:
        root.mkdir(parents=True, exist_ok=True)

    @app.exception_handler(CforgeError)
    async def on_engine_error(_req: Request, exc: CforgeError):
        status = 400
        if isinstance(exc, (JobActive,)):
            status = 409
        elif isinstance(exc, (UnknownSubject,)):
            status = 404
        elif exc.code in ("unknown-concept",):
            status = 404
        elif exc.code in (
            "bogus-counterexample", "refuted-by-stored-object",
            "vacuous-hypothesis", "no-eligible-objects", "refuted-target",
        ):
            status = 422
        detail = {}
        if isinstance(exc, BogusCounterexample):
            detail = exc.trace
        return JSONResponse(
            status_code=status,
            content={"code": exc.code, "message": str(exc), "detail": detail},
        )

    def get_session(sid: str) -> Session:
        s = sessions.get(sid)
        if s is None:
            raise UnknownSubject(f"no session {sid!r}")
        return s

    def session_doc(s: Session) -> dict:
        return {
            "id": s.id,
            "domain": s.kb.domain,
            "object_count": len(s.kb.objects),
            "objects": [
                {"label": o.label, "encoding": _encoding(o), "origin": o.origin}
                for o in s.kb.objects
            ],
            "concepts": sorted(s.kb.concepts),
            "theorems": [
                {"hypothesis": list(t.hypothesis), "conclusion": t.conclusion,
                 "source": t.source}
                for t in s.kb.theorems
            ],
            "pending": [_item_doc(i) for i in s.pending.values()],
            "resolved": s.resolved,
            "subgoals": s.subgoals,
            "job": _job_doc(s.job) if s.job else None,
        }

    def _encoding(o):
        from .domains import encode_object_payload

        return encode_object_payload(o)

    def _item_doc(item: PendingItem) -> dict:
        doc = {
            "id": item.id,
            "kind": item.kind,
            "rendered": item.rendered,
            "evidence": item.evidence,
            "total": item.total,
        }
        if item.conjecture is not None:
            doc["conjecture"] = conjecture_to_json(item.conjecture)
        if item.line is not None:
            doc["line"] = {
                "antecedents": list(item.line.antecedents),
                "consequent": item.line.consequent,
                "evidence": item.line.evidence,
            }
        return doc

    def _job_doc(job: JobInfo) -> dict:
        return {"id": job.id, "kind": job.kind, "status": job.status,
                "result": job.result, "error": job.error}

    @app.get("/health")
    def health():
        return {"status": "ok", "sessions": len(sessions)}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        if body.kb is not None:
            try:
                kb = KnowledgeBase.from_json(body.kb)
            except CforgeError:
                raise
            except Exception as exc:
                raise MalformedKB(str(exc))
        elif body.source in (None, "catalog", "builtin-catalog"):
            kb = make_catalog_kb()
        elif body.source == "integers":
            kb = make_integer_kb()
        else:
            raise InvalidRequest(f"unknown KB source {body.source!r}")
        sid = uuid.uuid4().hex[:12]
        log_path = (root / f"{sid}.ndjson") if root else None
        s = Session(id=sid, kb=kb, log_path=log_path)
        sessions[sid] = s
        s.log_event({"event": "created", "session": sid, "kb": kb.to_json()})
        return session_doc(s)

    @app.get("/sessions/{sid}")
    def get_session_doc(sid: str):
        return session_doc(get_session(sid))

    @app.get("/sessions/{sid}/export")
    def export_session(sid: str):
        s = get_session(sid)
        return JSONResponse(content=json.loads(export_kb_json(s.kb)))

    @app.get("/sessions/{sid}/jobs/{job_id}")
    def get_job(sid: str, job_id: str):
        s = get_session(sid)
        job = s.jobs.get(job_id)
        if job is None:
            raise UnknownSubject(f"no job {job_id!r}")
        return _job_doc(job)

    def _start_job(s: Session, kind: str, work, wait: bool):
        with s.lock:
            if s.job is not None and s.job.status == "running":
                raise JobActive("a generation job is already active for this session")
            job = JobInfo(id=uuid.uuid4().hex[:8], kind=kind)
            s.job = job
            s.jobs[job.id] = job

        def run():
            try:
                result = work()
                with s.lock:
                    job.result = result
                    job.status = "done"
            except CforgeError as exc:
                with s.lock:
                    job.status = "failed"
                    job.error = {"code": exc.code, "message": str(exc)}
                    job.exception = exc
            except Exception as exc:  # surfaced via the job doc
                with s.lock:
                    job.status = "failed"
                    job.error = {"code": "error", "message": str(exc)}
                    job.exception = exc
            finally:
                with s.lock:
                    if s.job is job:
                        s.job = None

        job.future = executor.submit(run)
        if not wait:
            return JSONResponse(status_code=202, content={"job": _job_doc(job)})
        job.future.result()
        if job.status == "failed":
            raise job.exception
        return job.result

    @app.post("/sessions/{sid}/conjectures")
    def request_conjectures(sid: str, body: ConjectureRequestBody,
                            wait: bool = Query(default=True)):
        s = get_session(sid)
        kb = s.kb  # immutable snapshot for the whole job
        if body.mode not in BOUND_MODES + CONDITION_MODES:
            raise InvalidRequest(f"unknown mode {body.mode!r}")
        sig = _signature_from_body(kb, body.signature, body.target, body.mode)
        budget = _budget_from_config(body.config)

        def work():
            if body.mode in BOUND_MODES:
                store = generate_bound_conjectures(kb, body.target, body.mode, sig, budget)
            else:
                store = generate_condition_conjectures(kb, body.target, body.mode, sig, budget)
            with s.lock:
                items = []
                for conj in store.conjectures:
                    item = PendingItem(
                        id=s.next_id("c"), kind="conjecture", conjecture=conj,
                        rendered=render_conjecture(conj),
                        evidence=conj.evidence, total=conj.total,
                    )
                    s.pending[item.id] = item
                    items.append(_item_doc(item))
            s.log_event({
                "event": "conjectures",
                "request": {"target": body.target, "mode": body.mode,
                            "config": body.config},
                "ids": [i["id"] for i in items],
            })
            return {"conjectures": items, "timed_out": store.timed_out,
                    "candidates_seen": store.candidates_seen}

        return _start_job(s, "conjectures", work, wait)

    @app.post("/sessions/{sid}/sketches")
    def request_sketch(sid: str, body: SketchRequestBody,
                       wait: bool = Query(default=True)):
        s = get_session(sid)
        kb = s.kb
        config = _sketch_config_from(body.config)

        def work():
            sketch = generate_sketch(kb, body.hypothesis, body.conclusion,
                                     config=config)
            with s.lock:
                sketch_id = s.next_id("s")
                line_items = []
                for idx, line in enumerate(sketch.lines, start=1):
                    item = PendingItem(
                        id=f"{sketch_id}.{idx}", kind="sketch-line", line=line,
                        rendered=_render_line(line), evidence=line.evidence,
                        total=len(kb.objects),
                    )
                    s.pending[item.id] = item
                    line_items.append(_item_doc(item))
            doc = sketch_to_json(sketch)
            s.log_event({
                "event": "sketch",
                "request": {"hypothesis": body.hypothesis,
                            "conclusion": body.conclusion, "config": body.config},
                "sketch": doc,
            })
            from .sketch import render_sketch

            return {"id": sketch_id, "sketch": doc,
                    "rendered": render_sketch(sketch, kb.domain),
                    "lines": line_items}

        return _start_job(s, "sketch", work, wait)

    @app.post("/sessions/{sid}/verdicts")
    def submit_verdict(sid: str, body: VerdictBody):
        s = get_session(sid)
        if body.kind not in ("proved", "refuted", "needs-justification"):
            raise InvalidRequest(f"unknown verdict kind {body.kind!r}")
        with s.lock:
            item = s.pending.get(body.subject)
            if item is None:
                raise UnknownSubject(f"no pending item {body.subject!r}")
            effects: dict = {}
            if body.kind == "proved":
                effects = _proved_effects(s.kb, item)
                s.kb = apply_proved_effects(s.kb, effects)
            elif body.kind == "refuted":
                if body.counterexample is None:
                    raise InvalidRequest("refuted verdicts require a counterexample")
                obj = make_object(
                    s.kb.domain, encoding=body.counterexample.encoding,
                    label=body.counterexample.label, origin="counterexample",
                )
                value = (
                    item.conjecture.claim_value(s.kb, obj)
                    if item.kind == "conjecture"
                    else line_claim_value(s.kb, item.line, obj)
                )
                if value is not False:
                    raise BogusCounterexample(_claim_trace(s.kb, item, obj))
                effects = {"object": {
                    "label": body.counterexample.label,
                    "encoding": body.counterexample.encoding,
                    "origin": "counterexample",
                }}
                s.kb = apply_refuted_effects(s.kb, effects)
                if item.conjecture is not None:
                    item.conjecture.status = "refuted"
                    item.conjecture.refuting_certificate = obj.certificate
            else:
                subgoal = _subgoal_doc(item)
                s.subgoals.append(subgoal)
                effects = {"subgoal": subgoal}
            del s.pending[body.subject]
            s.resolved.append({
                "id": item.id, "kind": item.kind, "verdict": body.kind,
                "rendered": item.rendered, "note": body.note,
            })
            s.log_event({
                "event": "verdict",
                "subject": body.subject,
                "kind": body.kind,
                "claim": item.rendered,
                "note": body.note,
                "effects": effects,
            })
        return session_doc(s)

    def _proved_effects(kb: KnowledgeBase, item: PendingItem) -> dict:
        promoted: list[str] = []

        def as_concept(name_or_text: str) -> str:
            if name_or_text not in kb.concepts and name_or_text not in promoted:
                promoted.append(name_or_text)
            return name_or_text

        if item.kind == "conjecture":
            c = item.conjecture
            if c.mode == "necessary":
                hypothesis, conclusion = (c.target,), as_concept(c.body_text)
            elif c.mode == "sufficient":
                hypothesis, conclusion = (as_concept(c.body_text),), c.target
            else:
                # bound claims become universally-true promoted properties
                claim_text = _bound_claim_text(c)
                hypothesis, conclusion = (), as_concept(claim_text)
        else:
            line = item.line
            hypothesis = tuple(as_concept(a) for a in line.antecedents)
            conclusion = as_concept(line.consequent)
        return {
            "theorem": {"hypothesis": list(hypothesis), "conclusion": conclusion,
                        "source": "user-proved"},
            "promoted": promoted,
        }

    def _bound_claim_text(c: Conjecture) -> str:
        from .exprs import atom, op_node, render_expression

        op = "le" if c.mode == "upper-bound" else "ge"
        return render_expression(op_node(op, atom(c.target, "invariant"), c.body))

    def _subgoal_doc(item: PendingItem) -> dict:
        if item.kind == "conjecture":
            c = item.conjecture
            return {"hypothesis": [c.target], "conclusion": c.body_text,
                    "from": item.id}
        return {"hypothesis": list(item.line.antecedents),
                "conclusion": item.line.consequent, "from": item.id}

    app.state.sessions = sessions
    return app


def _signature_from_body(kb, sig_body: Optional[SignatureBody], target: str,
                         mode: str) -> Signature:
    if sig_body is None or sig_body.atoms is None:
        return default_signature_for(kb, target, mode)
    from fractions import Fraction

    constants = tuple(
        Fraction(c) for c in (sig_body.constants or ["1", "2", "1/2"])
    )
    return Signature(
        atoms=tuple((a[0], a[1]) for a in sig_body.atoms),
        unary_ops=tuple(sig_body.unary_ops or ()),
        binary_ops=tuple(sig_body.binary_ops or ()),
        comparators=tuple(sig_body.comparators or ()),
        constants=constants,
    )


def _budget_from_config(config: Optional[dict]) -> Budget:
    config = config or {}
    timeout = config.get("timeout", 5.0)
    return Budget(
        max_complexity=int(config.get("max_complexity", 5)),
        timeout=None if timeout is None else float(timeout),
    )


def _sketch_config_from(config: Optional[dict]) -> SketchConfig:
    config = config or {}
    return SketchConfig(
        timeout=float(config.get("timeout", 5.0)),
        max_lines=int(config.get("max_lines", 8)),
        max_complexity=int(config.get("max_complexity", 1)),
    )
