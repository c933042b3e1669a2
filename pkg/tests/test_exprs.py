"""Expression trees: canonicalization, text form, evaluation."""

import random
from fractions import Fraction

import pytest

from cforge.catalog import complete_graph, disjoint_union, path_graph, petersen_graph
from cforge.domains import builtin_concepts, graph_object
from cforge.errors import ParseError
from cforge.exprs import (
    atom,
    canonicalize,
    const,
    evaluate_expression,
    op_node,
    parse_expression,
    render_expression,
    sort_key,
)
from cforge.kb import KnowledgeBase
from cforge.values import UNDEFINED


def p():
    return atom("p", "property")


def q():
    return atom("q", "property")


class TestCanonicalize:
    def test_commutativity(self):
        assert canonicalize(op_node("and", p(), q())) == \
               canonicalize(op_node("and", q(), p()))

    def test_double_negation(self):
        e = op_node("not", op_node("not", p()))
        assert canonicalize(e) == p()

    def test_constant_fold(self):
        e = op_node("min", const(1), const(2))
        assert canonicalize(e) == const(1)

    def test_idempotence(self):
        assert canonicalize(op_node("and", p(), p())) == p()
        x = atom("x")
        assert canonicalize(op_node("min", x, x)) == x

    def test_plus_not_idempotent(self):
        x = atom("x")
        e = canonicalize(op_node("plus", x, x))
        assert e.op == "plus"

    def test_neg_involution(self):
        x = atom("x")
        assert canonicalize(op_node("neg", op_node("neg", x))) == x

    def test_floor_collapse(self):
        x = atom("x")
        e = op_node("floor", op_node("ceil", x))
        assert canonicalize(e) == op_node("ceil", x)

    def test_idempotent_operation(self):
        rng = random.Random(0)
        for _ in range(300):
            e = random_expr(rng, depth=4)
            c = canonicalize(e)
            assert canonicalize(c) == c

    def test_div_by_zero_not_folded(self):
        e = op_node("div", const(1), const(0))
        assert canonicalize(e).op == "div"

    def test_nested_commutative_sort_stable(self):
        a, b = atom("a"), atom("b")
        left = op_node("plus", op_node("plus", a, b), a)
        right = op_node("plus", a, op_node("plus", b, a))
        assert render_expression(canonicalize(left)) == \
               render_expression(canonicalize(right))


class TestTextForm:
    def test_spec_shape(self):
        e = op_node("ge", atom("min_degree"),
                    op_node("times", const(Fraction(1, 2)), atom("order")))
        assert render_expression(e) == "(>= min_degree (* 1/2 order))"

    def test_round_trip(self):
        rng = random.Random(1)
        kinds = {"p": "property", "q": "property", "x": "invariant",
                 "y": "invariant"}
        for _ in range(400):
            e = random_expr(rng, depth=4)
            text = render_expression(e)
            back = parse_expression(text, kinds)
            assert render_expression(back) == text
            assert back == e

    def test_parse_errors(self):
        for bad in ["", "(and p", "(bogus p q)", "(and p q r)", ")", "(<= 1)"]:
            with pytest.raises(ParseError):
                parse_expression(bad, {"p": "property", "q": "property"})


class TestEvaluate:
    @pytest.fixture
    def kb(self):
        kb = KnowledgeBase(domain="graph", concepts=builtin_concepts("graph"))
        for label, g in [("K4", complete_graph(4)),
                         ("Petersen", petersen_graph()),
                         ("2K2", disjoint_union(path_graph(2), path_graph(2)))]:
            kb, _ = kb.with_object(graph_object(g, label=label))
        return kb

    def _obj(self, kb, label):
        return next(o for o in kb.objects if o.label == label)

    def test_dirac_expression_on_k4(self, kb):
        e = op_node("ge", atom("min_degree"),
                    op_node("times", const(Fraction(1, 2)), atom("order")))
        assert evaluate_expression(e, self._obj(kb, "K4"), kb) is True

    def test_dirac_expression_on_petersen(self, kb):
        e = op_node("ge", atom("min_degree"),
                    op_node("times", const(Fraction(1, 2)), atom("order")))
        assert evaluate_expression(e, self._obj(kb, "Petersen"), kb) is False

    def test_undefined_propagates(self, kb):
        e = op_node("le", atom("diameter"), const(2))
        assert evaluate_expression(e, self._obj(kb, "2K2"), kb) is UNDEFINED
        e2 = op_node("and", atom("is_connected", "property"), e)
        assert evaluate_expression(e2, self._obj(kb, "2K2"), kb) is UNDEFINED

    def test_division_by_zero(self, kb):
        e = op_node("div", atom("order"), op_node("minus", atom("order"),
                                                  atom("order")))
        assert evaluate_expression(e, self._obj(kb, "K4"), kb) is UNDEFINED

    def test_exact_rationals(self, kb):
        e = op_node("times", const(Fraction(1, 2)), atom("order"))
        assert evaluate_expression(e, self._obj(kb, "Petersen"), kb) == 5


def test_sort_key_total_order():
    rng = random.Random(2)
    exprs = [canonicalize(random_expr(rng, 3)) for _ in range(100)]
    keys = sorted(exprs, key=sort_key)
    # keys are comparable and deterministic
    assert [render_expression(e) for e in keys] == \
           [render_expression(e) for e in sorted(exprs, key=sort_key)]


def random_expr(rng, depth):
    """Random well-typed expression over two properties and two invariants."""
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([
            atom("p", "property"), atom("q", "property"),
            atom("x"), atom("y"),
            const(1), const(2), const(Fraction(1, 2)),
        ])
    choice = rng.random()
    if choice < 0.25:
        op = rng.choice(["not"])
        child = _force_type(rng, depth - 1, "bool")
        return op_node(op, child)
    if choice < 0.4:
        op = rng.choice(["floor", "neg", "ceil", "square"])
        return op_node(op, _force_type(rng, depth - 1, "rat"))
    if choice < 0.6:
        op = rng.choice(["and", "or", "xor", "implies"])
        return op_node(op, _force_type(rng, depth - 1, "bool"),
                       _force_type(rng, depth - 1, "bool"))
    if choice < 0.85:
        op = rng.choice(["plus", "minus", "times", "div", "min", "max"])
        return op_node(op, _force_type(rng, depth - 1, "rat"),
                       _force_type(rng, depth - 1, "rat"))
    op = rng.choice(["le", "ge", "eq", "lt", "gt"])
    return op_node(op, _force_type(rng, depth - 1, "rat"),
                   _force_type(rng, depth - 1, "rat"))


def _force_type(rng, depth, want):
    from cforge.exprs import expr_result_type

    for _ in range(50):
        e = random_expr(rng, depth)
        if expr_result_type(e) == want:
            return e
    return atom("p", "property") if want == "bool" else atom("x")
