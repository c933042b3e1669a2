/**
 * Adjacency-matrix editor model: a small simple graph the user toggles
 * edge by edge.  Loops are structurally impossible (the diagonal is not
 * toggleable) and the order is clamped to 1..12.
 */

import { SimpleGraph, encodeGraph6, decodeGraph6 } from "./graph6.js";

export const MIN_GRID_ORDER = 1;
export const MAX_GRID_ORDER = 12;

export class GridModel {
  private adj: boolean[][];

  constructor(public n: number = 4) {
    if (n < MIN_GRID_ORDER || n > MAX_GRID_ORDER) {
      throw new Error(`grid order must be in ${MIN_GRID_ORDER}..${MAX_GRID_ORDER}`);
    }
    this.adj = empty(n);
  }

  /** Toggling the diagonal is a no-op: simple graphs have no loops. */
  toggle(i: number, j: number): boolean {
    if (i === j) return false;
    if (i < 0 || j < 0 || i >= this.n || j >= this.n) return false;
    this.adj[i][j] = this.adj[j][i] = !this.adj[i][j];
    return true;
  }

  hasEdge(i: number, j: number): boolean {
    return i !== j && this.adj[i][j];
  }

  degree(v: number): number {
    return this.adj[v].filter(Boolean).length;
  }

  degrees(): number[] {
    return Array.from({ length: this.n }, (_, v) => this.degree(v));
  }

  edgeCount(): number {
    return this.degrees().reduce((a, b) => a + b, 0) / 2;
  }

  resize(n: number): void {
    if (n < MIN_GRID_ORDER || n > MAX_GRID_ORDER) return;
    const next = empty(n);
    for (let i = 0; i < Math.min(n, this.n); i++) {
      for (let j = 0; j < Math.min(n, this.n); j++) {
        next[i][j] = this.adj[i][j];
      }
    }
    this.n = n;
    this.adj = next;
  }

  clear(): void {
    this.adj = empty(this.n);
  }

  toGraph(): SimpleGraph {
    const edges: Array<[number, number]> = [];
    for (let i = 0; i < this.n; i++) {
      for (let j = i + 1; j < this.n; j++) {
        if (this.adj[i][j]) edges.push([i, j]);
      }
    }
    return { n: this.n, edges };
  }

  toGraph6(): string {
    return encodeGraph6(this.toGraph());
  }

  static fromGraph6(text: string): GridModel {
    const g = decodeGraph6(text);
    if (g.n > MAX_GRID_ORDER) {
      throw new Error(`grid supports up to ${MAX_GRID_ORDER} vertices, got ${g.n}`);
    }
    const model = new GridModel(g.n);
    for (const [i, j] of g.edges) model.toggle(i, j);
    return model;
  }
}

function empty(n: number): boolean[][] {
  return Array.from({ length: n }, () => Array<boolean>(n).fill(false));
}
