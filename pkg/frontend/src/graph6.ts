/**
 * graph6 codec for simple undirected graphs, enough for the workbench's
 * counterexample editor (short header form, n <= 62).
 *
 * Bits run over the upper triangle column by column: (0,1), (0,2), (1,2),
 * (0,3), ... packed six per character with offset 63.
 */

export interface SimpleGraph {
  n: number;
  /** edges as [i, j] with i < j */
  edges: Array<[number, number]>;
}

export class Graph6Error extends Error {
  constructor(message: string, public offset: number) {
    super(message);
  }
}

export function encodeGraph6(g: SimpleGraph): string {
  if (g.n < 1 || g.n > 62) {
    throw new Graph6Error(`order must be in 1..62, got ${g.n}`, 0);
  }
  const adj = new Set(g.edges.map(([i, j]) => key(i, j)));
  const bits: number[] = [];
  for (let j = 1; j < g.n; j++) {
    for (let i = 0; i < j; i++) {
      bits.push(adj.has(key(i, j)) ? 1 : 0);
    }
  }
  let out = String.fromCharCode(63 + g.n);
  for (let k = 0; k < bits.length; k += 6) {
    let value = 0;
    for (let b = 0; b < 6; b++) {
      value = (value << 1) | (bits[k + b] ?? 0);
    }
    out += String.fromCharCode(63 + value);
  }
  return out;
}

export function decodeGraph6(text: string): SimpleGraph {
  let s = text.trim();
  if (s.startsWith(">>graph6<<")) s = s.slice(10);
  if (!s) throw new Graph6Error("empty graph6 input", 0);
  for (let k = 0; k < s.length; k++) {
    const c = s.charCodeAt(k);
    if (c < 63 || c > 126) {
      throw new Graph6Error(`character out of range: ${JSON.stringify(s[k])}`, k);
    }
  }
  if (s[0] === "~") {
    throw new Graph6Error("extended headers (order above 62) are not supported here", 0);
  }
  const n = s.charCodeAt(0) - 63;
  if (n < 1) throw new Graph6Error(`order ${n} out of range`, 0);
  const nbits = (n * (n - 1)) / 2;
  const expected = Math.ceil(nbits / 6);
  if (s.length - 1 !== expected) {
    throw new Graph6Error(
      `expected ${expected} data characters for n=${n}, got ${s.length - 1}`, 1);
  }
  const edges: Array<[number, number]> = [];
  let bit = 0;
  for (let k = 1; k < s.length; k++) {
    const chunk = s.charCodeAt(k) - 63;
    for (let b = 5; b >= 0; b--) {
      if (bit >= nbits) {
        if ((chunk >> b) & 1) {
          throw new Graph6Error("nonzero padding bits", k);
        }
        continue;
      }
      if ((chunk >> b) & 1) {
        edges.push(bitToPair(bit));
      }
      bit++;
    }
  }
  return { n, edges };
}

function key(i: number, j: number): number {
  return i < j ? i * 64 + j : j * 64 + i;
}

function bitToPair(bit: number): [number, number] {
  let j = 1;
  let acc = 0;
  while (acc + j <= bit) {
    acc += j;
    j++;
  }
  return [bit - acc, j];
}
