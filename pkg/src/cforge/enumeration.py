"""Complexity-leveled streaming enumeration of canonical expressions.

Expressions are built level by level: level k applies unary operators to
level k-1 and binary operators across (i, k-1-i) splits.  Nodes are interned
in flat per-type arenas as (opcode, left, right) tuples, children referenced
by arena index.  Construction guards mirror the canonicalization rewrites
exactly, so every generated node is already canonical and no post-hoc
dedup pass is needed; each level is sorted into the canonical total order
before the next level builds on it, which keeps arena index order aligned
with the tree order used by standalone canonicalization.

Bare constants are leaves only: they never reach the sink as expressions,
and compounds whose leaves are all constants are never built (folding
would otherwise manufacture constants outside the signature).
"""

from __future__ import annotations

import gc
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .errors import ComplexityOutOfRange, EmptySignature
from .exprs import (
    BINARY_OPS,
    COMPARATORS,
    Expr,
    IDEMPOTENT,
    OP_RANK,
    UNARY_OPS,
    _OP_TABLE,
    atom,
    canonicalize,
    const,
    op_node,
    render_expression,
)

MAX_COMPLEXITY = 12

# leaf opcodes; operator opcodes start at 3 in canonical operator order
_RAT_ATOM, _RAT_CONST, _BOOL_ATOM = 0, 1, 2
_OPC = {name: 3 + rank for name, rank in OP_RANK.items()}
_OPC_NAME = {v: k for k, v in _OPC.items()}


@dataclass(frozen=True)
class Signature:
    """Atoms, operators and constants available to the enumerator."""

    atoms: tuple[tuple[str, str], ...]  # (concept name, 'invariant'|'property')
    unary_ops: tuple[str, ...] = ()
    binary_ops: tuple[str, ...] = ()
    comparators: tuple[str, ...] = ()
    constants: tuple[Fraction, ...] = (Fraction(1), Fraction(2), Fraction(1, 2))

    def validate(self):
        if not self.atoms:
            raise EmptySignature("signature has no atoms")
        for name, kind in self.atoms:
            if kind not in ("invariant", "property"):
                raise EmptySignature(f"atom {name!r} has bad kind {kind!r}")
        for op in self.unary_ops:
            if op not in UNARY_OPS:
                raise EmptySignature(f"{op!r} is not a unary operator")
        for op in self.binary_ops:
            if op not in BINARY_OPS:
                raise EmptySignature(f"{op!r} is not a binary operator")
        for op in self.comparators:
            if op not in COMPARATORS:
                raise EmptySignature(f"{op!r} is not a comparator")

    def rational_atoms(self) -> list[str]:
        return sorted(n for n, k in self.atoms if k == "invariant")

    def property_atoms(self) -> list[str]:
        return sorted(n for n, k in self.atoms if k == "property")


def default_graph_signature() -> Signature:
    """The shipped 10-atom graph signature used by the benchmark."""
    return Signature(
        atoms=(
            ("order", "invariant"),
            ("size", "invariant"),
            ("min_degree", "invariant"),
            ("max_degree", "invariant"),
            ("diameter", "invariant"),
            ("radius", "invariant"),
            ("girth", "invariant"),
            ("is_connected", "property"),
            ("is_regular", "property"),
            ("is_bipartite", "property"),
        ),
        unary_ops=("not", "floor", "neg"),
        binary_ops=("and", "or", "plus", "minus", "min", "max"),
        comparators=("le",),
    )


class Arena:
    """Flat node store for one enumeration run."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.rat_atom_names = sig.rational_atoms()
        self.bool_atom_names = sig.property_atoms()
        from .exprs import sort_key

        self.const_values = sorted(set(sig.constants), key=lambda f: sort_key(const(f)))
        self.rat_nodes: list[tuple] = []
        self.bool_nodes: list[tuple] = []
        self.rat_levels: dict[int, tuple[int, int]] = {}
        self.bool_levels: dict[int, tuple[int, int]] = {}
        # level 1: atoms first (sorted by name), then constants
        for i in range(len(self.rat_atom_names)):
            self.rat_nodes.append((_RAT_ATOM, i, -1))
        self.n_rat_atoms = len(self.rat_nodes)
        for i in range(len(self.const_values)):
            self.rat_nodes.append((_RAT_CONST, i, -1))
        self.rat_levels[1] = (0, len(self.rat_nodes))
        for i in range(len(self.bool_atom_names)):
            self.bool_nodes.append((_BOOL_ATOM, i, -1))
        self.bool_levels[1] = (0, len(self.bool_nodes))

    def to_expr(self, rtype: str, idx: int) -> Expr:
        nodes = self.rat_nodes if rtype == "rat" else self.bool_nodes
        opc, a, b = nodes[idx]
        if opc == _RAT_ATOM:
            return atom(self.rat_atom_names[a], "invariant")
        if opc == _RAT_CONST:
            return const(self.const_values[a])
        if opc == _BOOL_ATOM:
            return atom(self.bool_atom_names[a], "property")
        name = _OPC_NAME[opc]
        arity, in_type, _out, _c, _i = _OP_TABLE[name]
        if arity == 1:
            return op_node(name, self.to_expr(in_type, a))
        return op_node(name, self.to_expr(in_type, a), self.to_expr(in_type, b))


@dataclass
class LevelBatch:
    """One sink delivery: all canonical expressions of one type and size."""

    arena: Arena
    result_type: str  # 'rat' | 'bool'
    complexity: int
    start: int
    end: int

    @property
    def count(self) -> int:
        return self.end - self.start

    def exprs(self) -> Iterator[Expr]:
        for i in range(self.start, self.end):
            yield self.arena.to_expr(self.result_type, i)

    def ids(self) -> range:
        return range(self.start, self.end)


Sink = Callable[[LevelBatch], None]


def enumerate_expressions(
    sig: Signature,
    max_complexity: int,
    sink: Sink,
    deadline: Optional[float] = None,
) -> int:
    """Stream every canonical expression of complexity <= max_complexity.

    Returns the number of canonical expressions emitted.  Levels are
    emitted in ascending size; enumeration stops early (returning the
    partial count) once ``deadline`` (time.monotonic seconds) passes.
    """
    if not (1 <= max_complexity <= MAX_COMPLEXITY):
        raise ComplexityOutOfRange(
            f"max_complexity must be in 1..{MAX_COMPLEXITY}, got {max_complexity}"
        )
    sig.validate()
    arena = Arena(sig)
    emitted = 0

    # level 1: atoms are expressions, bare constants are not
    if arena.n_rat_atoms:
        sink(LevelBatch(arena, "rat", 1, 0, arena.n_rat_atoms))
        emitted += arena.n_rat_atoms
    if arena.bool_nodes:
        sink(LevelBatch(arena, "bool", 1, 0, len(arena.bool_nodes)))
        emitted += len(arena.bool_nodes)

    rat_unary = [op for op in ("floor", "ceil", "neg", "square") if op in sig.unary_ops]
    has_not = "not" in sig.unary_ops
    rat_comm = [op for op in ("plus", "times", "min", "max") if op in sig.binary_ops]
    rat_nc = [op for op in ("minus", "div") if op in sig.binary_ops]
    bool_comm = [op for op in ("and", "or", "xor") if op in sig.binary_ops]
    bool_nc = [op for op in ("implies",) if op in sig.binary_ops]
    cmp_comm = [op for op in ("eq",) if op in sig.comparators]
    cmp_nc = [op for op in ("le", "ge", "lt", "gt") if op in sig.comparators]

    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for k in range(2, max_complexity + 1):
            if deadline is not None and time.monotonic() > deadline:
                break
            new_rat, new_bool = _build_level(
                arena, k, rat_unary, has_not, rat_comm, rat_nc,
                bool_comm, bool_nc, cmp_comm, cmp_nc, deadline,
            )
            # freeze in canonical order so child references stay sorted;
            # the top level is never referenced, skip the sort there
            if k < max_complexity:
                new_rat.sort()
                new_bool.sort()
            s = len(arena.rat_nodes)
            arena.rat_nodes.extend(new_rat)
            arena.rat_levels[k] = (s, len(arena.rat_nodes))
            if new_rat:
                sink(LevelBatch(arena, "rat", k, s, len(arena.rat_nodes)))
            s = len(arena.bool_nodes)
            arena.bool_nodes.extend(new_bool)
            arena.bool_levels[k] = (s, len(arena.bool_nodes))
            if new_bool:
                sink(LevelBatch(arena, "bool", k, s, len(arena.bool_nodes)))
            emitted += len(new_rat) + len(new_bool)
            if deadline is not None and time.monotonic() > deadline:
                break
    finally:
        if gc_was_enabled:
            gc.enable()
    return emitted


def _build_level(arena, k, rat_unary, has_not, rat_comm, rat_nc,
                 bool_comm, bool_nc, cmp_comm, cmp_nc, deadline):
    rat_nodes = arena.rat_nodes
    bool_nodes = arena.bool_nodes
    n_rat_atoms = arena.n_rat_atoms
    new_rat: list[tuple] = []
    new_bool: list[tuple] = []
    rat_append = new_rat.append
    bool_append = new_bool.append
    neg_opc, floor_opc, ceil_opc = _OPC["neg"], _OPC["floor"], _OPC["ceil"]
    not_opc = _OPC["not"]

    # unary layer over size k-1
    lo, hi = arena.rat_levels.get(k - 1, (0, 0))
    for op in rat_unary:
        opc = _OPC[op]
        for i in range(lo, hi):
            tag = rat_nodes[i][0]
            if tag == _RAT_CONST:
                continue  # would fold to a new constant
            if opc == neg_opc and tag == neg_opc:
                continue  # involution
            if opc in (floor_opc, ceil_opc) and tag in (floor_opc, ceil_opc):
                continue  # floor/ceil collapse
            rat_append((opc, i, -1))
    if has_not:
        lo, hi = arena.bool_levels.get(k - 1, (0, 0))
        for i in range(lo, hi):
            if bool_nodes[i][0] == not_opc:
                continue  # double negation
            bool_append((not_opc, i, -1))

    # binary splits (sa <= sb)
    for sa in range(1, k - 1):
        sb = k - 1 - sa
        if sa > sb:
            break
        if deadline is not None and time.monotonic() > deadline:
            break
        same = sa == sb
        alo, ahi = arena.rat_levels.get(sa, (0, 0))
        blo, bhi = arena.rat_levels.get(sb, (0, 0))
        if ahi > alo and bhi > blo:
            # constants only live at size 1; the atom block comes first
            a_atom_hi = n_rat_atoms if sa == 1 else ahi
            b_atom_hi = n_rat_atoms if sb == 1 else bhi
            for op in rat_comm:
                opc = _OPC[op]
                skip_diag = op in IDEMPOTENT
                for i in range(alo, ahi):
                    i_const = i >= a_atom_hi
                    if same:
                        j0 = i + 1 if skip_diag else i
                    else:
                        j0 = blo
                    jhi = b_atom_hi if i_const else bhi
                    for j in range(j0, jhi):
                        rat_append((opc, i, j))
            for op in rat_nc:
                opc = _OPC[op]
                for i in range(alo, ahi):
                    i_const = i >= a_atom_hi
                    jhi = b_atom_hi if i_const else bhi
                    for j in range(blo, jhi):
                        rat_append((opc, i, j))
                        if not same:
                            rat_append((opc, j, i))
            for op in cmp_comm:
                opc = _OPC[op]
                for i in range(alo, ahi):
                    i_const = i >= a_atom_hi
                    j0 = i if same else blo
                    jhi = b_atom_hi if i_const else bhi
                    for j in range(j0, jhi):
                        bool_append((opc, i, j))
            for op in cmp_nc:
                opc = _OPC[op]
                for i in range(alo, ahi):
                    i_const = i >= a_atom_hi
                    jhi = b_atom_hi if i_const else bhi
                    for j in range(blo, jhi):
                        bool_append((opc, i, j))
                        if not same:
                            bool_append((opc, j, i))
        alo, ahi = arena.bool_levels.get(sa, (0, 0))
        blo, bhi = arena.bool_levels.get(sb, (0, 0))
        if ahi > alo and bhi > blo:
            for op in bool_comm:
                opc = _OPC[op]
                skip_diag = op in IDEMPOTENT
                for i in range(alo, ahi):
                    if same:
                        j0 = i + 1 if skip_diag else i
                    else:
                        j0 = blo
                    for j in range(j0, bhi):
                        bool_append((opc, i, j))
            for op in bool_nc:
                opc = _OPC[op]
                for i in range(alo, ahi):
                    for j in range(blo, bhi):
                        bool_append((opc, i, j))
                        if not same:
                            bool_append((opc, j, i))
    return new_rat, new_bool


# ── independent brute-force reference (for completeness checks) ──

def brute_force_raw_trees(sig: Signature, max_complexity: int) -> dict[int, list[Expr]]:
    """Every raw type-correct tree per size, no canonicalization.

    Compounds must contain at least one atom (bare-constant compounds are
    outside the expression language).
    """
    sig.validate()
    levels: dict[int, list[Expr]] = {}
    leaves: list[Expr] = [atom(n, "invariant") for n in sig.rational_atoms()]
    leaves += [const(c) for c in sorted(set(sig.constants))]
    leaves += [atom(n, "property") for n in sig.property_atoms()]
    levels[1] = leaves

    def is_const_leaf(e: Expr) -> bool:
        return e.kind == "const"

    from .exprs import expr_result_type

    for k in range(2, max_complexity + 1):
        out: list[Expr] = []
        for op in sig.unary_ops:
            in_type = _OP_TABLE[op][1]
            for child in levels[k - 1]:
                if is_const_leaf(child):
                    continue
                if expr_result_type(child) == in_type:
                    out.append(op_node(op, child))
        for sa in range(1, k - 1):
            sb = k - 1 - sa
            for op in list(sig.binary_ops) + list(sig.comparators):
                in_type = _OP_TABLE[op][1]
                for a in levels[sa]:
                    if expr_result_type(a) != in_type:
                        continue
                    for b in levels[sb]:
                        if expr_result_type(b) != in_type:
                            continue
                        if is_const_leaf(a) and is_const_leaf(b):
                            continue
                        out.append(op_node(op, a, b))
        levels[k] = out
    return levels


def brute_force_canonical_set(sig: Signature, max_complexity: int) -> set[str]:
    """Canonicalized closure of the raw tree space, as rendered text."""
    from .exprs import contains_atom

    texts: set[str] = set()
    for _size, trees in brute_force_raw_trees(sig, max_complexity).items():
        for t in trees:
            c = canonicalize(t)
            if contains_atom(c):
                texts.add(render_expression(c))
    return texts


def collect_canonical_texts(sig: Signature, max_complexity: int) -> set[str]:
    """Run the streaming enumerator and materialize every emitted text."""
    texts: set[str] = set()

    def sink(batch: LevelBatch):
        for e in batch.exprs():
            texts.add(render_expression(e))

    enumerate_expressions(sig, max_complexity, sink)
    return texts
