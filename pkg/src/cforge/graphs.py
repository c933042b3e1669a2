"""Simple undirected graphs: representation, graph6 codec, invariants.

Graphs are stored as bitset adjacency rows over at most 64 vertices.  All
invariant computations are exact; exponential-cost concepts (hamiltonicity,
longest paths, independence/clique number) refuse graphs with more than
EXPONENTIAL_CAP vertices instead of timing out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import BadHeader, BadLength, CharOutOfRange, MalformedPayload, SizeCapExceeded
from .values import UNDEFINED, Value

MAX_VERTICES = 64
EXPONENTIAL_CAP = 16
CANONICAL_CAP = 10  # brute-force canonical labeling only up to this order


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1, adjacency as bitset rows."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not (1 <= self.n <= MAX_VERTICES):
            raise MalformedPayload(f"vertex count must be in 1..{MAX_VERTICES}, got {self.n}")
        if len(self.rows) != self.n:
            raise MalformedPayload("adjacency row count does not match vertex count")
        full = (1 << self.n) - 1
        for i, r in enumerate(self.rows):
            if r & ~full:
                raise MalformedPayload(f"row {i} has bits beyond vertex range")
            if r >> i & 1:
                raise MalformedPayload(f"loop at vertex {i}")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if (self.rows[i] >> j & 1) != (self.rows[j] >> i & 1):
                    raise MalformedPayload(f"asymmetric adjacency between {i} and {j}")

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def degree(self, v: int) -> int:
        return bin(self.rows[v]).count("1")

    def edges(self) -> Iterator[tuple[int, int]]:
        for i in range(self.n):
            r = self.rows[i] >> (i + 1)
            j = i + 1
            while r:
                if r & 1:
                    yield (i, j)
                r >>= 1
                j += 1

    def edge_count(self) -> int:
        return sum(self.degree(v) for v in range(self.n)) // 2

    def neighbors(self, v: int) -> Iterator[int]:
        r = self.rows[v]
        j = 0
        while r:
            if r & 1:
                yield j
            r >>= 1
            j += 1


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    rows = [0] * n
    for i, j in edges:
        if i == j:
            raise MalformedPayload(f"loop at vertex {i}")
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return Graph(n, tuple(rows))


# ── graph6 codec ──

_G6_MIN, _G6_MAX = 63, 126


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line. Errors carry the offending byte offset."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise BadHeader(0, "empty input")
    for off, ch in enumerate(s):
        if not (_G6_MIN <= ord(ch) <= _G6_MAX):
            raise CharOutOfRange(off, ch)
    if s[0] == "~":
        # 18-bit order in the next three characters
        if len(s) < 4:
            raise BadHeader(0, "truncated extended header")
        if s[1] == "~":
            raise BadHeader(1, "orders beyond 18 bits are not supported")
        n = 0
        for k in range(1, 4):
            n = (n << 6) | (ord(s[k]) - 63)
        data_start = 4
    else:
        n = ord(s[0]) - 63
        data_start = 1
    if n < 1:
        raise BadHeader(0, f"order {n} out of range")
    if n > MAX_VERTICES:
        raise BadHeader(0, f"order {n} exceeds supported maximum {MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    expected = (nbits + 5) // 6
    got = len(s) - data_start
    if got != expected:
        raise BadLength(data_start, f"expected {expected} data characters for n={n}, got {got}")
    rows = [0] * n
    bit = 0
    for k in range(data_start, len(s)):
        chunk = ord(s[k]) - 63
        for b in range(5, -1, -1):
            if bit >= nbits:
                if chunk >> b & 1:
                    raise BadLength(k, "nonzero padding bits")
                continue
            if chunk >> b & 1:
                i, j = _bit_to_pair(bit)
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            bit += 1
    return Graph(n, tuple(rows))


def _bit_to_pair(bit: int) -> tuple[int, int]:
    # invert the column-major position without knowing n up front
    j = 1
    acc = 0
    while acc + j <= bit:
        acc += j
        j += 1
    return (bit - acc, j)


def emit_graph6(g: Graph) -> str:
    """Encode a graph as a graph6 string (short header for n <= 62)."""
    n = g.n
    if n <= 62:
        header = chr(63 + n)
    else:
        header = "~" + "".join(chr(63 + (n >> s & 63)) for s in (12, 6, 0))
    bits = []
    for j in range(1, n):
        col = g.rows[j]
        for i in range(j):
            bits.append(col >> i & 1)
    chars = []
    for k in range(0, len(bits), 6):
        chunk = bits[k:k + 6]
        chunk += [0] * (6 - len(chunk))
        val = 0
        for b in chunk:
            val = (val << 1) | b
        chars.append(chr(63 + val))
    return header + "".join(chars)


# ── canonical certificates ──

def canonical_certificate(g: Graph) -> str:
    """Isomorphism-invariant dedup key.

    Up to CANONICAL_CAP vertices this is the graph6 encoding of the
    minimum adjacency encoding over all vertex orderings (so isomorphic
    graphs collide); beyond that it is the plain encoding, so only
    identically-labelled duplicates collide.
    """
    if g.n > CANONICAL_CAP:
        return emit_graph6(g)
    return emit_graph6(_canonical_form(g))


def _canonical_form(g: Graph) -> Graph:
    n = g.n
    if n == 1:
        return g
    rows = g.rows
    full = (1 << n) - 1

    # seed with the identity ordering so pruning has a baseline
    best_cols = []
    for j in range(n):
        col = 0
        for i in range(j):
            col = (col << 1) | (rows[j] >> i & 1)
        best_cols.append(col)
    best_order = list(range(n))

    def place(order: list[int], cols: list[int], remaining: int):
        nonlocal best_cols, best_order
        j = len(order)
        if j == n:
            if cols < best_cols:
                best_cols = cols[:]
                best_order = order[:]
            return
        # column value of v at position j: bit (j-1-i) set iff adjacent to order[i]
        cands: dict[int, list[int]] = {}
        for v in _iter_bits(remaining):
            col = 0
            rv = rows[v]
            for u in order:
                col = (col << 1) | (rv >> u & 1)
            cands.setdefault(col, []).append(v)
        for col in sorted(cands):
            # best_cols may have improved under us; re-derive the relation
            prefix = best_cols[:j]
            if cols > prefix:
                return
            if cols == prefix and col > best_cols[j]:
                return  # columns are ascending, so every later one is larger
            reps: list[int] = []
            for v in cands[col]:
                dup = False
                masked_v = rows[v] & remaining
                for u in reps:
                    # interchangeable when they agree on everything but each other
                    if masked_v & ~(1 << u) == rows[u] & remaining & ~(1 << v):
                        dup = True
                        break
                if dup:
                    continue
                reps.append(v)
                cols.append(col)
                place(order + [v], cols, remaining & ~(1 << v))
                cols.pop()

    place([], [], full)

    order = best_order
    perm = {v: k for k, v in enumerate(order)}
    new_rows = [0] * n
    for i in range(n):
        for jv in _iter_bits(rows[order[i]]):
            new_rows[i] |= 1 << perm[jv]
    return Graph(n, tuple(new_rows))


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ── structural invariants ──

def _require_cap(name: str, g: Graph):
    if g.n > EXPONENTIAL_CAP:
        raise SizeCapExceeded(name, g.n, EXPONENTIAL_CAP)


def min_degree(g: Graph) -> int:
    return min(g.degree(v) for v in range(g.n))


def max_degree(g: Graph) -> int:
    return max(g.degree(v) for v in range(g.n))


def is_connected(g: Graph) -> bool:
    return _component(g, 0) == (1 << g.n) - 1


def _component(g: Graph, start: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in _iter_bits(frontier):
            nxt |= g.rows[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def is_regular(g: Graph) -> bool:
    degs = {g.degree(v) for v in range(g.n)}
    return len(degs) == 1


def bipartition(g: Graph) -> Optional[tuple[int, int]]:
    """Two colour classes as bitmasks, or None when an odd cycle exists."""
    color = [-1] * g.n
    a = b = 0
    for s in range(g.n):
        if color[s] != -1:
            continue
        color[s] = 0
        a |= 1 << s
        queue = [s]
        while queue:
            v = queue.pop()
            for u in _iter_bits(g.rows[v]):
                if color[u] == -1:
                    color[u] = 1 - color[v]
                    if color[u] == 0:
                        a |= 1 << u
                    else:
                        b |= 1 << u
                    queue.append(u)
                elif color[u] == color[v]:
                    return None
    return a, b


def is_bipartite(g: Graph) -> bool:
    return bipartition(g) is not None


def is_biconnected(g: Graph) -> bool:
    """Connected with no articulation point; single vertices do not count."""
    n = g.n
    if n == 1:
        return False
    if not is_connected(g):
        return False
    if n == 2:
        return True
    disc = [0] * n
    low = [0] * n
    timer = [1]
    found = [False]

    def dfs(v: int, parent: int):
        disc[v] = low[v] = timer[0]
        timer[0] += 1
        children = 0
        for u in _iter_bits(g.rows[v]):
            if disc[u] == 0:
                children += 1
                dfs(u, v)
                low[v] = min(low[v], low[u])
                if parent != -1 and low[u] >= disc[v]:
                    found[0] = True
            elif u != parent:
                low[v] = min(low[v], disc[u])
        if parent == -1 and children > 1:
            found[0] = True

    dfs(0, -1)
    return not found[0]


def _bfs_dist(g: Graph, start: int) -> list[int]:
    dist = [-1] * g.n
    dist[start] = 0
    frontier = 1 << start
    seen = frontier
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in _iter_bits(frontier):
            nxt |= g.rows[v]
        frontier = nxt & ~seen
        seen |= frontier
        for v in _iter_bits(frontier):
            dist[v] = d
    return dist


def diameter(g: Graph) -> Value:
    if not is_connected(g):
        return UNDEFINED
    best = 0
    for v in range(g.n):
        best = max(best, max(_bfs_dist(g, v)))
    return best


def radius(g: Graph) -> Value:
    if not is_connected(g):
        return UNDEFINED
    return min(max(_bfs_dist(g, v)) for v in range(g.n))


def girth(g: Graph) -> Value:
    """Length of a shortest cycle; Undefined on acyclic graphs."""
    best: Optional[int] = None
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = [s]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for u in _iter_bits(g.rows[v]):
                if dist[u] == -1:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif u != parent[v] and v != parent[u]:
                    cyc = dist[v] + dist[u] + 1
                    if best is None or cyc < best:
                        best = cyc
    return UNDEFINED if best is None else best


def independence_number(g: Graph) -> int:
    _require_cap("independence_number", g)
    rows = g.rows
    closed = [rows[v] | (1 << v) for v in range(g.n)]
    memo: dict[int, int] = {0: 0}

    def alpha(mask: int) -> int:
        got = memo.get(mask)
        if got is not None:
            return got
        v = (mask & -mask).bit_length() - 1
        best = alpha(mask & ~(1 << v))  # skip v
        take = 1 + alpha(mask & ~closed[v])
        if take > best:
            best = take
        memo[mask] = best
        return best

    return alpha((1 << g.n) - 1)


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    rows = tuple((~g.rows[v]) & full & ~(1 << v) for v in range(g.n))
    return Graph(g.n, rows)


def clique_number(g: Graph) -> int:
    _require_cap("clique_number", g)
    return independence_number(complement(g))


def is_hamiltonian(g: Graph) -> bool:
    """Spanning-cycle test by backtracking; graphs below order 3 fail."""
    _require_cap("is_hamiltonian", g)
    n = g.n
    if n < 3:
        return False
    if not is_connected(g):
        return False
    if min_degree(g) < 2:
        return False
    parts = bipartition(g)
    if parts is not None:
        a, b = parts
        if bin(a).count("1") != bin(b).count("1"):
            return False
    rows = g.rows
    full = (1 << n) - 1
    start = 0

    def extend(v: int, visited: int) -> bool:
        if visited == full:
            return bool(rows[v] >> start & 1)
        for u in _iter_bits(rows[v] & ~visited):
            if extend(u, visited | (1 << u)):
                return True
        return False

    return extend(start, 1 << start)


def _longest_path_data(g: Graph) -> tuple[int, list[int]]:
    """Maximum path order and the vertex sets of all maximum paths.

    DP over (visited-set, endpoint) pairs; the maximum order is found
    first, then the masks of that size are collected.
    """
    _require_cap("longest_paths", g)
    n = g.n
    rows = g.rows
    # reach[mask] = bitmask of endpoints v: some path visits exactly mask, ends at v
    reach: dict[int, int] = {}
    for v in range(n):
        reach[1 << v] = reach.get(1 << v, 0) | (1 << v)
    frontier = dict(reach)
    best_size = 1
    best_masks = set(frontier)
    while frontier:
        nxt: dict[int, int] = {}
        for mask, ends in frontier.items():
            for v in _iter_bits(ends):
                ext = rows[v] & ~mask
                for u in _iter_bits(ext):
                    m2 = mask | (1 << u)
                    prev = nxt.get(m2, 0)
                    cur = reach.get(m2, 0)
                    if not (prev | cur) >> u & 1:
                        nxt[m2] = prev | (1 << u)
        if not nxt:
            break
        for mask, ends in nxt.items():
            reach[mask] = reach.get(mask, 0) | ends
        best_size += 1
        best_masks = set(nxt)
        frontier = nxt
    return best_size, sorted(best_masks)


def longest_paths_span(g: Graph) -> bool:
    """True when every maximum-order path visits all vertices."""
    size, _ = _longest_path_data(g)
    return size == g.n


def induced_subgraph(g: Graph, mask: int) -> Graph:
    verts = list(_iter_bits(mask))
    index = {v: i for i, v in enumerate(verts)}
    rows = [0] * len(verts)
    for v in verts:
        for u in _iter_bits(g.rows[v] & mask):
            rows[index[v]] |= 1 << index[u]
    return Graph(len(verts), tuple(rows))


def longest_path_induced_hamiltonian(g: Graph) -> bool:
    """True when the vertices of every maximum-order path induce a
    hamiltonian subgraph."""
    _, masks = _longest_path_data(g)
    return all(is_hamiltonian(induced_subgraph(g, m)) for m in masks)


def dirac_condition(g: Graph) -> bool:
    """At least three vertices and minimum degree at least n/2.

    The order requirement matches the classical statement of the theorem;
    without it the two-vertex complete graph is a spurious counterexample.
    """
    return g.n >= 3 and 2 * min_degree(g) >= g.n


# ── concept dispatch ──

GRAPH_INVARIANTS = {
    "order": lambda g: g.n,
    "size": lambda g: g.edge_count(),
    "min_degree": min_degree,
    "max_degree": max_degree,
    "independence_number": independence_number,
    "clique_number": clique_number,
    "diameter": diameter,
    "radius": radius,
    "girth": girth,
}

GRAPH_PROPERTIES = {
    "is_connected": is_connected,
    "is_biconnected": is_biconnected,
    "is_regular": is_regular,
    "is_bipartite": is_bipartite,
    "is_hamiltonian": is_hamiltonian,
    "dirac_condition": dirac_condition,
    "longest_path_induced_hamiltonian": longest_path_induced_hamiltonian,
    "longest_paths_span": longest_paths_span,
}

GRAPH_CONCEPTS = {**GRAPH_INVARIANTS, **GRAPH_PROPERTIES}


def eval_graph_concept(name: str, g: Graph) -> Value:
    from .errors import UnknownConcept

    fn = GRAPH_CONCEPTS.get(name)
    if fn is None:
        raise UnknownConcept(name)
    return fn(g)
