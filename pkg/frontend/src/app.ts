/**
 * Workbench page: review queue, verdict controls with the counterexample
 * editor, knowledge-base and theorems panels, generation controls.
 *
 * The page never mutates state locally: every action round-trips through
 * the service and re-renders from the returned session document, so a
 * reload always reproduces the same state from GET /sessions/{id}.
 */

import { ApiClient, ApiError, SessionDoc, PendingItem, JobDoc } from "./api.js";
import { GridModel, MAX_GRID_ORDER } from "./grid.js";
import {
  renderClaim,
  reviewQueue,
  sortedKbRows,
  theoremRows,
  validateCounterexample,
} from "./state.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

let client = new ApiClient(defaultBaseUrl());
let session: SessionDoc | null = null;
let selected: PendingItem | null = null;
let grid = new GridModel(4);

function defaultBaseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? "http://127.0.0.1:8091";
}

// ── banner ──

function showBanner(message: string, retry?: () => void) {
  const banner = $("banner");
  banner.textContent = message;
  banner.classList.remove("hidden");
  const button = $("banner-retry");
  button.classList.toggle("hidden", !retry);
  button.onclick = retry ?? null;
}

function hideBanner() {
  $("banner").classList.add("hidden");
  $("banner-retry").classList.add("hidden");
}

async function guarded<T>(work: () => Promise<T>, retry: () => void): Promise<T | null> {
  try {
    const result = await work();
    hideBanner();
    return result;
  } catch (err) {
    if (err instanceof ApiError) {
      showBanner(`${err.body.code}: ${err.body.message}`);
      renderTrace(err.body.detail);
      return null;
    }
    showBanner(`service unreachable: ${err}`, retry);
    return null;
  }
}

function renderTrace(detail: Record<string, unknown>) {
  const trace = $("trace");
  if (detail && Object.keys(detail).length > 0) {
    trace.textContent = JSON.stringify(detail, null, 2);
    trace.classList.remove("hidden");
  } else {
    trace.classList.add("hidden");
  }
}

// ── session lifecycle ──

async function connect() {
  client = new ApiClient(($("api-url") as HTMLInputElement).value.trim());
  const source = ($("kb-source") as HTMLSelectElement).value;
  const doc = await guarded(() => client.createSession(source), connect);
  if (doc) {
    session = doc;
    window.location.hash = doc.id;
    renderAll();
  }
}

async function attach(id: string) {
  const doc = await guarded(() => client.getSession(id), () => attach(id));
  if (doc) {
    session = doc;
    renderAll();
  }
}

async function refresh() {
  if (!session) return;
  await attach(session.id);
}

// ── generation ──

async function generate() {
  if (!session) return;
  const sid = session.id;
  const target = ($("gen-target") as HTMLSelectElement).value;
  const mode = ($("gen-mode") as HTMLSelectElement).value;
  const maxComplexity = Number(($("gen-complexity") as HTMLInputElement).value) || 3;
  setJobStatus("starting...");
  const job = await guarded(async () => {
    let started: JobDoc;
    if (mode === "sketch") {
      const conclusion = ($("gen-conclusion") as HTMLSelectElement).value;
      started = await client.startSketch(sid, {
        hypothesis: target,
        conclusion,
        config: { max_complexity: 1 },
      });
    } else {
      started = await client.startConjectures(sid, {
        target,
        mode,
        config: { max_complexity: maxComplexity, timeout: 30 },
      });
    }
    setJobStatus(`job ${started.id} running...`);
    return client.pollJob(sid, started.id, 2000);
  }, generate);
  if (job) {
    setJobStatus(job.status === "done" ? "job finished" : `job ${job.status}`);
    if (job.status === "failed" && job.error) {
      showBanner(`${job.error.code}: ${job.error.message}`);
    }
    await refresh();
  }
}

function setJobStatus(text: string) {
  $("job-status").textContent = text;
}

// ── verdicts ──

function select(item: PendingItem) {
  selected = item;
  $("verdict-claim").textContent = renderClaim(item);
  $("verdict-panel").classList.remove("hidden");
  renderTrace({});
  renderGrid();
  syncGridText();
}

async function submitVerdict(kind: "proved" | "refuted" | "needs-justification") {
  if (!session || !selected) return;
  const sid = session.id;
  const subject = selected.id;
  let counterexample: { encoding: string; label?: string } | undefined;
  if (kind === "refuted") {
    const domain = session.domain;
    const text =
      domain === "graph"
        ? ($("ce-graph6") as HTMLInputElement).value
        : ($("ce-integer") as HTMLInputElement).value;
    const label = ($("ce-label") as HTMLInputElement).value.trim() || undefined;
    const check = validateCounterexample({ domain, text, label: label ?? "" });
    $("ce-validation").textContent = check.message;
    if (!check.ok) return;
    counterexample = { encoding: text.trim(), label };
  }
  const doc = await guarded(
    () => client.submitVerdict(sid, { subject, kind, counterexample }),
    () => void 0,
  );
  if (doc) {
    session = doc;
    selected = null;
    $("verdict-panel").classList.add("hidden");
    renderAll();
  }
}

// ── adjacency grid ──

function renderGrid() {
  const table = $("grid");
  table.innerHTML = "";
  const n = grid.n;
  const degrees = grid.degrees();
  for (let i = -1; i < n; i++) {
    const row = document.createElement("tr");
    for (let j = -1; j < n; j++) {
      const cell = document.createElement(i < 0 || j < 0 ? "th" : "td");
      if (i < 0 && j < 0) {
        cell.textContent = "";
      } else if (i < 0) {
        cell.textContent = String(j);
      } else if (j < 0) {
        cell.textContent = String(i);
      } else if (i === j) {
        cell.className = "diagonal";
        cell.title = "loops are not allowed in simple graphs";
      } else {
        cell.className = grid.hasEdge(i, j) ? "edge" : "non-edge";
        cell.textContent = grid.hasEdge(i, j) ? "1" : "·";
        const [a, b] = [i, j];
        cell.onclick = () => {
          grid.toggle(a, b);
          renderGrid();
          syncGridText();
        };
      }
      row.appendChild(cell);
    }
    table.appendChild(row);
  }
  $("degrees").textContent =
    `degrees: [${degrees.join(", ")}]  edges: ${grid.edgeCount()}`;
}

function syncGridText() {
  ($("ce-graph6") as HTMLInputElement).value = grid.toGraph6();
  $("ce-validation").textContent = "";
}

function loadGridFromText() {
  const text = ($("ce-graph6") as HTMLInputElement).value;
  const check = validateCounterexample({
    domain: "graph", text, label: "",
  });
  $("ce-validation").textContent = check.message;
  if (check.ok) {
    try {
      grid = GridModel.fromGraph6(text.trim());
      ($("grid-n") as HTMLInputElement).value = String(grid.n);
      renderGrid();
    } catch (err) {
      $("ce-validation").textContent = String(err);
    }
  }
}

// ── rendering ──

function renderAll() {
  if (!session) return;
  $("session-info").textContent =
    `session ${session.id} · ${session.domain} · ` +
    `${session.object_count} objects · ${session.theorems.length} theorems`;
  const isGraph = session.domain === "graph";
  $("ce-graph-tools").classList.toggle("hidden", !isGraph);
  $("ce-integer-tools").classList.toggle("hidden", isGraph);

  const queue = $("queue");
  queue.innerHTML = "";
  for (const card of reviewQueue(session)) {
    const el = document.createElement("div");
    el.className = "card";
    const claim = document.createElement("div");
    claim.className = "claim";
    claim.textContent = card.rendered;
    const meta = document.createElement("div");
    meta.className = "meta";
    meta.textContent = `${card.kind} · ${card.evidenceBadge} · ${card.detail}`;
    el.append(claim, meta);
    const item = session.pending.find((p) => p.id === card.id)!;
    el.onclick = () => select(item);
    queue.appendChild(el);
  }
  $("queue-empty").classList.toggle("hidden", session.pending.length > 0);

  const theorems = $("theorems");
  theorems.innerHTML = "";
  for (const row of theoremRows(session)) {
    const li = document.createElement("li");
    li.textContent = `${row.statement}  (${row.source})`;
    theorems.appendChild(li);
  }

  const kb = $("kb-panel");
  kb.innerHTML = "";
  for (const row of sortedKbRows(session)) {
    const li = document.createElement("li");
    li.textContent = `${row.label}  [${row.encoding}]`;
    if (row.origin === "counterexample") {
      li.className = "counterexample";
      li.textContent += "  (counterexample)";
    }
    kb.appendChild(li);
  }

  const subgoals = $("subgoals");
  subgoals.innerHTML = "";
  for (const goal of session.subgoals) {
    const li = document.createElement("li");
    li.textContent = JSON.stringify(goal);
    subgoals.appendChild(li);
  }

  const targets = $("gen-target") as HTMLSelectElement;
  const conclusion = $("gen-conclusion") as HTMLSelectElement;
  if (targets.options.length === 0) {
    for (const concept of session.concepts) {
      targets.add(new Option(concept, concept));
      conclusion.add(new Option(concept, concept));
    }
  }
}

// ── wiring ──

export function start() {
  ($("api-url") as HTMLInputElement).value = client.baseUrl;
  $("connect").onclick = connect;
  $("refresh").onclick = refresh;
  $("generate").onclick = generate;
  $("verdict-prove").onclick = () => submitVerdict("proved");
  $("verdict-refute").onclick = () => submitVerdict("refuted");
  $("verdict-justify").onclick = () => submitVerdict("needs-justification");
  $("grid-n").onchange = () => {
    const n = Math.max(1, Math.min(MAX_GRID_ORDER,
      Number(($("grid-n") as HTMLInputElement).value) || 4));
    ($("grid-n") as HTMLInputElement).value = String(n);
    grid.resize(n);
    renderGrid();
    syncGridText();
  };
  $("grid-clear").onclick = () => {
    grid.clear();
    renderGrid();
    syncGridText();
  };
  $("ce-graph6").onchange = loadGridFromText;
  renderGrid();
  const existing = window.location.hash.slice(1);
  if (existing) void attach(existing);
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  start();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
