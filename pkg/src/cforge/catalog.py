"""The shipped graph catalog: significant named graphs plus constructors.

The catalog ships as a versioned data file of ``label graph6`` lines and
is loaded from there; :func:`build_catalog` reconstructs the same list from
first principles so tests can cross-check the shipped file.

Beyond the classic families the catalog carries a band of biconnected
non-traceable bipartite graphs and two disconnected unions.  Those keep
necessary-condition ranking honest (no structural property is accidentally
implied by every stored example) and exercise Undefined invariant values.
"""

from __future__ import annotations

from importlib import resources

from .graphs import Graph, graph_from_edges, parse_graph6

CATALOG_VERSION = 1
_DATA_PACKAGE = "cforge.data"
_DATA_FILE = "catalog.g6"


def complete_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(m: int, n: int) -> Graph:
    return graph_from_edges(m + n, [(i, m + j) for i in range(m) for j in range(n)])


def star_graph(k: int) -> Graph:
    """Star with k leaves, k+1 vertices."""
    return complete_bipartite(1, k)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return graph_from_edges(10, outer + spokes + inner)


def k4_minus_edge() -> Graph:
    return graph_from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])


def disjoint_union(a: Graph, b: Graph) -> Graph:
    edges = list(a.edges()) + [(i + a.n, j + a.n) for i, j in b.edges()]
    return graph_from_edges(a.n + b.n, edges)


def build_catalog() -> list[tuple[str, Graph]]:
    """Reconstruct catalog contents from constructors, in shipped order."""
    entries: list[tuple[str, Graph]] = [("Petersen", petersen_graph())]
    for n in range(2, 9):
        entries.append((f"K{n}", complete_graph(n)))
    for n in range(3, 11):
        entries.append((f"C{n}", cycle_graph(n)))
    for n in range(2, 11):
        entries.append((f"P{n}", path_graph(n)))
    for m in range(1, 5):
        for n in range(m, 5):
            entries.append((f"K{m},{n}", complete_bipartite(m, n)))
    for k in range(5, 9):
        entries.append((f"star{k}", star_graph(k)))
    entries.append(("K4-e", k4_minus_edge()))
    entries.append(("2K3", disjoint_union(complete_graph(3), complete_graph(3))))
    entries.append(("2K4", disjoint_union(complete_graph(4), complete_graph(4))))
    for k in range(5, 9):
        entries.append((f"K2,{k}", complete_bipartite(2, k)))
    for k in range(5, 8):
        entries.append((f"K3,{k}", complete_bipartite(3, k)))
    entries.append(("K4,6", complete_bipartite(4, 6)))
    entries.append(("K4,7", complete_bipartite(4, 7)))
    return entries


def catalog() -> list[tuple[str, Graph]]:
    """Load the shipped (label, graph) list from the versioned data file."""
    text = resources.files(_DATA_PACKAGE).joinpath(_DATA_FILE).read_text()
    entries: list[tuple[str, Graph]] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        label, _, g6 = line.partition(" ")
        if not g6:
            raise ValueError(f"catalog.g6 line {lineno}: expected 'label graph6'")
        if label in seen:
            raise ValueError(f"catalog.g6 line {lineno}: duplicate label {label!r}")
        seen.add(label)
        entries.append((label, parse_graph6(g6)))
    return entries


def catalog_lookup(label: str) -> Graph:
    for name, g in catalog():
        if name == label:
            return g
    raise KeyError(label)
