"""Expression trees over atomic concepts: build, canonicalize, print, parse,
evaluate.

Complexity is the node count (atoms, constants and operators all cost 1).
The canonical form is reached by a deliberately small rewrite set:

- commutative children sorted by a total order on trees,
- involution collapse (double not, double neg),
- idempotence (x and x -> x, x or x -> x, min/max likewise;
  floor/ceil over floor/ceil collapse),
- constant folding on constant-only subtrees.

There is no boolean minimization: canonicalization has to stay cheap enough
to run millions of times per second inside the enumerator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

from .errors import ParseError
from .values import UNDEFINED, Value, rational_to_text

# ── operator metadata ──

# (arity, input type, output type, commutative, idempotent)
_OP_TABLE = {
    "not": (1, "bool", "bool", False, False),
    "floor": (1, "rat", "rat", False, False),
    "ceil": (1, "rat", "rat", False, False),
    "neg": (1, "rat", "rat", False, False),
    "square": (1, "rat", "rat", False, False),
    "and": (2, "bool", "bool", True, True),
    "or": (2, "bool", "bool", True, True),
    "xor": (2, "bool", "bool", True, False),
    "implies": (2, "bool", "bool", False, False),
    "plus": (2, "rat", "rat", True, False),
    "minus": (2, "rat", "rat", False, False),
    "times": (2, "rat", "rat", True, False),
    "div": (2, "rat", "rat", False, False),
    "min": (2, "rat", "rat", True, True),
    "max": (2, "rat", "rat", True, True),
    "le": (2, "rat", "bool", False, False),
    "ge": (2, "rat", "bool", False, False),
    "eq": (2, "rat", "bool", True, False),
    "lt": (2, "rat", "bool", False, False),
    "gt": (2, "rat", "bool", False, False),
}

OP_ORDER = list(_OP_TABLE)
OP_RANK = {name: i for i, name in enumerate(OP_ORDER)}

UNARY_OPS = {n for n, meta in _OP_TABLE.items() if meta[0] == 1}
BINARY_OPS = {n for n, meta in _OP_TABLE.items() if meta[0] == 2 and meta[2] == meta[1]}
COMPARATORS = {n for n, meta in _OP_TABLE.items() if meta[1] == "rat" and meta[2] == "bool"}
COMMUTATIVE = {n for n, meta in _OP_TABLE.items() if meta[3]}
IDEMPOTENT = {n for n, meta in _OP_TABLE.items() if meta[4]}

OP_SYMBOL = {
    "not": "not", "and": "and", "or": "or", "xor": "xor", "implies": "=>",
    "floor": "floor", "ceil": "ceil", "neg": "neg", "square": "sq",
    "plus": "+", "minus": "-", "times": "*", "div": "/", "min": "min", "max": "max",
    "le": "<=", "ge": ">=", "eq": "=", "lt": "<", "gt": ">",
}
SYMBOL_OP = {v: k for k, v in OP_SYMBOL.items()}


@dataclass(frozen=True)
class Expr:
    """Immutable expression node.

    kind 'atom': name set, op holds the atom's concept kind
    ('invariant' or 'property').
    kind 'const': value is a Fraction or bool.
    kind 'op': op names the operator, args hold the children.
    """

    kind: str
    name: Optional[str] = None
    value: Union[Fraction, bool, None] = None
    op: Optional[str] = None
    args: tuple["Expr", ...] = ()
    complexity: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "complexity", 1 + sum(a.complexity for a in self.args)
        )


def atom(name: str, kind: str = "invariant") -> Expr:
    if kind not in ("invariant", "property"):
        raise ValueError(f"bad atom kind {kind!r}")
    return Expr(kind="atom", name=name, op=kind)


def const(v: Union[int, Fraction, bool]) -> Expr:
    if isinstance(v, bool):
        return Expr(kind="const", value=v)
    return Expr(kind="const", value=Fraction(v))


def op_node(op: str, *args: Expr) -> Expr:
    meta = _OP_TABLE.get(op)
    if meta is None:
        raise ValueError(f"unknown operator {op!r}")
    if len(args) != meta[0]:
        raise ValueError(f"{op} takes {meta[0]} arguments, got {len(args)}")
    for a in args:
        if expr_result_type(a) != meta[1]:
            raise ValueError(f"{op} needs {meta[1]} children, got {render_expression(a)}")
    return Expr(kind="op", op=op, args=tuple(args))


def expr_result_type(e: Expr) -> str:
    if e.kind == "atom":
        return "bool" if e.op == "property" else "rat"
    if e.kind == "const":
        return "bool" if isinstance(e.value, bool) else "rat"
    return _OP_TABLE[e.op][2]


def iter_atoms(e: Expr) -> Iterator[str]:
    if e.kind == "atom":
        yield e.name
    for a in e.args:
        yield from iter_atoms(a)


def contains_atom(e: Expr) -> bool:
    return next(iter_atoms(e), None) is not None


# ── total order on trees ──

def sort_key(e: Expr):
    """Recursive key giving the total order used for commutative sorting.

    Leaves order atoms (by name) before constants (by value); compound
    nodes order by complexity, then operator, then children.
    """
    if e.kind == "atom":
        return (1, 0, e.name)
    if e.kind == "const":
        if isinstance(e.value, bool):
            return (1, 1, 1, int(e.value), 0)
        return (1, 1, 0, e.value.numerator, e.value.denominator)
    return (e.complexity, 2, OP_RANK[e.op]) + tuple(sort_key(a) for a in e.args)


# ── canonicalization ──

def canonicalize(e: Expr) -> Expr:
    """Idempotent rewrite to the unique class representative."""
    if e.kind != "op":
        return e
    args = tuple(canonicalize(a) for a in e.args)
    op = e.op
    # constant folding on constant-only subtrees
    if all(a.kind == "const" for a in args):
        folded = _fold(op, args)
        if folded is not None:
            return folded
    if op == "not" and args[0].kind == "op" and args[0].op == "not":
        return args[0].args[0]
    if op == "neg" and args[0].kind == "op" and args[0].op == "neg":
        return args[0].args[0]
    if op in ("floor", "ceil") and args[0].kind == "op" and args[0].op in ("floor", "ceil"):
        return args[0]
    if op in IDEMPOTENT and len(args) == 2 and args[0] == args[1]:
        return args[0]
    if op in COMMUTATIVE and len(args) == 2 and sort_key(args[0]) > sort_key(args[1]):
        args = (args[1], args[0])
    return Expr(kind="op", op=op, args=args)


def _fold(op: str, args: tuple[Expr, ...]) -> Optional[Expr]:
    vals = [a.value for a in args]
    try:
        out = _apply_op(op, vals)
    except ZeroDivisionError:
        return None
    if out is UNDEFINED:
        return None
    return const(out)


# ── evaluation ──

def evaluate_expression(e: Expr, obj, kb) -> Value:
    """Bottom-up evaluation against a knowledge base; Undefined is strict."""
    if e.kind == "atom":
        return kb.evaluate(e.name, obj)
    if e.kind == "const":
        return e.value
    vals = []
    for a in e.args:
        v = evaluate_expression(a, obj, kb)
        if v is UNDEFINED:
            return UNDEFINED
        vals.append(v)
    return _apply_op(e.op, vals)


def _apply_op(op: str, vals: list) -> Value:
    if op == "not":
        return not vals[0]
    if op == "and":
        return vals[0] and vals[1]
    if op == "or":
        return vals[0] or vals[1]
    if op == "xor":
        return vals[0] != vals[1]
    if op == "implies":
        return (not vals[0]) or vals[1]
    if op == "floor":
        return math.floor(vals[0])
    if op == "ceil":
        return math.ceil(vals[0])
    if op == "neg":
        return -vals[0]
    if op == "square":
        return vals[0] * vals[0]
    if op == "plus":
        return vals[0] + vals[1]
    if op == "minus":
        return vals[0] - vals[1]
    if op == "times":
        return vals[0] * vals[1]
    if op == "div":
        if vals[1] == 0:
            return UNDEFINED
        return Fraction(vals[0]) / Fraction(vals[1])
    if op == "min":
        return min(vals[0], vals[1])
    if op == "max":
        return max(vals[0], vals[1])
    if op == "le":
        return vals[0] <= vals[1]
    if op == "ge":
        return vals[0] >= vals[1]
    if op == "eq":
        return vals[0] == vals[1]
    if op == "lt":
        return vals[0] < vals[1]
    if op == "gt":
        return vals[0] > vals[1]
    raise ValueError(f"unknown operator {op!r}")


# ── text form ──

def render_expression(e: Expr) -> str:
    """Prefix notation, e.g. ``(>= min_degree (* 1/2 order))``."""
    if e.kind == "atom":
        return e.name
    if e.kind == "const":
        if isinstance(e.value, bool):
            return "true" if e.value else "false"
        return rational_to_text(e.value)
    parts = " ".join(render_expression(a) for a in e.args)
    return f"({OP_SYMBOL[e.op]} {parts})"


def parse_expression(text: str, atom_kinds: Optional[dict[str, str]] = None) -> Expr:
    """Parse the prefix text form back into a tree (bit-exact round trip).

    ``atom_kinds`` maps atom names to 'invariant'/'property'.  Without it,
    atom kinds are inferred from operator context, which covers every
    well-typed expression with at least one operator; a bare atom defaults
    to invariant unless the map says otherwise.
    """
    tokens = _tokenize(text)
    pos = [0]

    def parse_node(expected: Optional[str]) -> Expr:
        if pos[0] >= len(tokens):
            raise ParseError("unexpected end of input")
        tok = tokens[pos[0]]
        pos[0] += 1
        if tok == "(":
            if pos[0] >= len(tokens):
                raise ParseError("missing operator after '('")
            sym = tokens[pos[0]]
            pos[0] += 1
            op = SYMBOL_OP.get(sym)
            if op is None:
                raise ParseError(f"unknown operator {sym!r}")
            arity, in_type, _out, _c, _i = _OP_TABLE[op]
            args = tuple(parse_node(in_type) for _ in range(arity))
            if pos[0] >= len(tokens) or tokens[pos[0]] != ")":
                raise ParseError(f"missing ')' after {sym}")
            pos[0] += 1
            return op_node(op, *args)
        if tok == ")":
            raise ParseError("unexpected ')'")
        if tok in ("true", "false"):
            return const(tok == "true")
        if _is_rational(tok):
            return const(Fraction(tok))
        kind = None
        if atom_kinds is not None:
            kind = atom_kinds.get(tok)
        if kind is None:
            kind = "property" if expected == "bool" else "invariant"
        return atom(tok, kind)

    root = parse_node(None)
    if pos[0] != len(tokens):
        raise ParseError(f"trailing input at token {pos[0]}")
    return root


def _tokenize(text: str) -> list[str]:
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            out.append(c)
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            out.append(text[i:j])
            i = j
    if not out:
        raise ParseError("empty expression")
    return out


def _is_rational(tok: str) -> bool:
    body = tok[1:] if tok.startswith("-") else tok
    if "/" in body:
        num, _, den = body.partition("/")
        return num.isdigit() and den.isdigit()
    return body.isdigit()
