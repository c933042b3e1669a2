/**
 * Pure view-state helpers.  The session document from the server is the
 * only source of truth; these functions derive render models from it and
 * validate user input before it is sent anywhere.
 */

import { SessionDoc, PendingItem } from "./api.js";
import { decodeGraph6, Graph6Error } from "./graph6.js";

export interface ReviewCard {
  id: string;
  kind: "conjecture" | "sketch-line";
  rendered: string;
  evidenceBadge: string;
  detail: string;
}

export function reviewQueue(session: SessionDoc): ReviewCard[] {
  return session.pending.map((item) => ({
    id: item.id,
    kind: item.kind,
    rendered: renderClaim(item),
    evidenceBadge: `evidence ${item.evidence}/${item.total}`,
    detail: itemDetail(item),
  }));
}

export function renderClaim(item: PendingItem): string {
  if (item.kind === "sketch-line" && item.line) {
    const ants = item.line.antecedents.map((a) => `${a}(x)`);
    const joined =
      ants.length <= 1
        ? ants.join("")
        : ants.length === 2
          ? ants.join(" and ")
          : ants.slice(0, -1).join(", ") + ", and " + ants[ants.length - 1];
    return `For every x, if ${joined}, then ${item.line.consequent}(x).`;
  }
  return item.rendered;
}

function itemDetail(item: PendingItem): string {
  if (item.conjecture) {
    const c = item.conjecture;
    const parts = [`mode ${c.mode}`, `complexity ${c.complexity}`];
    if (c.slack !== null) parts.push(`slack ${c.slack}`);
    if (c.touches !== null) parts.push(`touches ${c.touches}`);
    if (c.excluded > 0) parts.push(`${c.excluded} excluded`);
    return parts.join(" · ");
  }
  return "proof sketch line";
}

export interface CounterexampleDraft {
  domain: string;
  text: string; // graph6 or decimal integer
  label: string;
}

export interface ValidationResult {
  ok: boolean;
  message: string;
}

/** Client-side shape validation; the server still checks semantics. */
export function validateCounterexample(draft: CounterexampleDraft): ValidationResult {
  const text = draft.text.trim();
  if (!text) return { ok: false, message: "counterexample payload is required" };
  if (draft.domain === "integer") {
    if (!/^[0-9]+$/.test(text)) {
      return { ok: false, message: "integers are decimal digits only" };
    }
    const value = Number(text);
    if (value < 1 || value > 1_000_000_000) {
      return { ok: false, message: "integer must be in 1..10^9" };
    }
    return { ok: true, message: "" };
  }
  try {
    const g = decodeGraph6(text);
    if (g.n < 1) return { ok: false, message: "graphs need at least one vertex" };
    return { ok: true, message: `graph on ${g.n} vertices, ${g.edges.length} edges` };
  } catch (err) {
    if (err instanceof Graph6Error) {
      return { ok: false, message: `malformed graph6 at byte ${err.offset}: ${err.message}` };
    }
    return { ok: false, message: String(err) };
  }
}

export interface TheoremRow {
  statement: string;
  source: string;
}

export function theoremRows(session: SessionDoc): TheoremRow[] {
  return session.theorems.map((t) => ({
    statement:
      t.hypothesis.length === 0
        ? `every x satisfies ${t.conclusion}`
        : `${t.hypothesis.join(" and ")} → ${t.conclusion}`,
    source: t.source,
  }));
}

export interface KbRow {
  label: string;
  encoding: string;
  origin: string;
}

export function kbRows(session: SessionDoc): KbRow[] {
  return session.objects.map((o) => ({
    label: o.label ?? o.encoding,
    encoding: o.encoding,
    origin: o.origin,
  }));
}

/** Counterexamples surface first so refutations are easy to spot. */
export function sortedKbRows(session: SessionDoc): KbRow[] {
  const rows = kbRows(session);
  return [
    ...rows.filter((r) => r.origin === "counterexample"),
    ...rows.filter((r) => r.origin !== "counterexample"),
  ];
}
