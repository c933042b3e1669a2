"""Dalmatian filtering: worked scenarios, store bound, refutation permanence."""

import random
from fractions import Fraction

import pytest

from cforge.catalog import (
    complete_graph,
    cycle_graph,
    k4_minus_edge,
    path_graph,
)
from cforge.dalmatian import (
    Budget,
    generate_bound_conjectures,
    generate_condition_conjectures,
    recheck_conjecture,
    verify_conjecture,
)
from cforge.domains import builtin_concepts, graph_object
from cforge.enumeration import Signature
from cforge.errors import InvalidRequest, NoEligibleObjects, VacuousHypothesis
from cforge.kb import KnowledgeBase

from oracles import brute_independence_number, naive_hamiltonian


def kb_of(*pairs):
    kb = KnowledgeBase(domain="graph", concepts=builtin_concepts("graph"))
    for label, g in pairs:
        kb, _ = kb.with_object(graph_object(g, label=label))
    return kb


MINUS_SIG = Signature(
    atoms=(("order", "invariant"), ("min_degree", "invariant"),
           ("max_degree", "invariant")),
    binary_ops=("minus",),
    constants=(Fraction(1),),
)

NO_TIMEOUT = Budget(max_complexity=3, timeout=None)


class TestBoundScenario:
    """The two-graph independence-number walkthrough, with the expected
    alpha values confirmed by brute force."""

    @pytest.fixture
    def kb(self):
        return kb_of(("K3", complete_graph(3)), ("P3", path_graph(3)))

    def test_oracle_values(self, kb):
        assert brute_independence_number(complete_graph(3)) == 1
        assert brute_independence_number(path_graph(3)) == 2

    def test_final_store(self, kb):
        store = generate_bound_conjectures(
            kb, "independence_number", "upper-bound", MINUS_SIG, NO_TIMEOUT)
        texts = {c.body_text for c in store.conjectures}
        # (order - min_degree) dominates (order - 1) everywhere, so only
        # the former survives pruning
        assert "(- order min_degree)" in texts
        assert "(- order 1)" not in texts
        assert len(store.conjectures) <= len(kb.objects)

    def test_false_candidate_never_stored(self, kb):
        # (order - max_degree) gives 1 on P3 where alpha is 2: fails truth
        store = generate_bound_conjectures(
            kb, "independence_number", "upper-bound", MINUS_SIG, NO_TIMEOUT)
        assert "(- order max_degree)" not in {c.body_text for c in store.conjectures}

    def test_truth_of_everything_stored(self, kb):
        store = generate_bound_conjectures(
            kb, "independence_number", "upper-bound", MINUS_SIG, NO_TIMEOUT)
        for c in store.conjectures:
            assert verify_conjecture(kb, c).ok

    def test_lower_bound_mode(self, kb):
        store = generate_bound_conjectures(
            kb, "independence_number", "lower-bound", MINUS_SIG, NO_TIMEOUT)
        for c in store.conjectures:
            assert verify_conjecture(kb, c).ok
        assert store.conjectures

    def test_needs_two_defined_objects(self):
        kb = kb_of(("K3", complete_graph(3)))
        with pytest.raises(NoEligibleObjects):
            generate_bound_conjectures(
                kb, "independence_number", "upper-bound", MINUS_SIG, NO_TIMEOUT)

    def test_rejects_property_target(self, kb):
        with pytest.raises(InvalidRequest):
            generate_bound_conjectures(
                kb, "is_connected", "upper-bound", MINUS_SIG, NO_TIMEOUT)


PROP_SIG = Signature(
    atoms=(("is_connected", "property"), ("is_biconnected", "property"),
           ("is_regular", "property")),
)


class TestConditionScenario:
    def test_necessary_ranking(self):
        kb = kb_of(("C4", cycle_graph(4)), ("K4", complete_graph(4)),
                   ("P3", path_graph(3)))
        store = generate_condition_conjectures(
            kb, "is_hamiltonian", "necessary", PROP_SIG,
            Budget(max_complexity=1, timeout=None))
        ranked = [(c.body_text, c.slack) for c in store.conjectures]
        assert ranked[0][0] == "is_biconnected" and ranked[0][1] == 0
        assert ("is_connected", 1) in ranked

    def test_regular_fails_truth_with_k4e(self):
        # K4-e is hamiltonian (direct 4-cycle) but not regular
        assert naive_hamiltonian(k4_minus_edge())
        kb = kb_of(("C4", cycle_graph(4)), ("K4", complete_graph(4)),
                   ("K4-e", k4_minus_edge()))
        store = generate_condition_conjectures(
            kb, "is_hamiltonian", "necessary", PROP_SIG,
            Budget(max_complexity=1, timeout=None))
        assert "is_regular" not in {c.body_text for c in store.conjectures}

    def test_vacuous_hypothesis_refused(self):
        kb = kb_of(("P3", path_graph(3)), ("P4", path_graph(4)))
        with pytest.raises(VacuousHypothesis):
            generate_condition_conjectures(
                kb, "is_hamiltonian", "necessary", PROP_SIG,
                Budget(max_complexity=1, timeout=None))

    def test_semantic_dedup_on_kb(self):
        from cforge.exprs import evaluate_expression
        from cforge.values import is_true

        kb = kb_of(("C4", cycle_graph(4)), ("K4", complete_graph(4)),
                   ("P3", path_graph(3)))
        store = generate_condition_conjectures(
            kb, "is_hamiltonian", "necessary", PROP_SIG,
            Budget(max_complexity=3, timeout=None))
        seen = set()
        for c in store.conjectures:
            sat = frozenset(
                i for i, o in enumerate(kb.objects)
                if is_true(evaluate_expression(c.body, o, kb))
            )
            assert sat not in seen  # no two stored share a satisfied set
            seen.add(sat)

    def test_sufficient_mode(self, catalog_kb):
        store = generate_condition_conjectures(
            catalog_kb, "is_hamiltonian", "sufficient",
            Signature(atoms=(("dirac_condition", "property"),
                             ("is_connected", "property"))),
            Budget(max_complexity=1, timeout=None))
        texts = {c.body_text for c in store.conjectures}
        assert "dirac_condition" in texts  # Dirac's theorem on the data
        assert "is_connected" not in texts  # paths are connected, not hamiltonian
        for c in store.conjectures:
            assert verify_conjecture(catalog_kb, c).ok


class TestRecheck:
    def test_refuted_after_new_object(self):
        from cforge.dalmatian import Conjecture
        from cforge.exprs import atom

        kb = kb_of(("C4", cycle_graph(4)), ("K4", complete_graph(4)))
        regular = Conjecture(mode="necessary", target="is_hamiltonian",
                             body=atom("is_regular", "property"), domain="graph")
        assert recheck_conjecture(regular, kb).status == "open"
        kb2, _ = kb.with_object(graph_object(k4_minus_edge(), label="K4-e"))
        result = recheck_conjecture(regular, kb2)
        assert result.status == "refuted"
        assert result.witness.label == "K4-e"
        assert regular.status == "refuted"

    def test_open_on_sound_claim(self, catalog_kb):
        from cforge.dalmatian import Conjecture
        from cforge.exprs import atom

        c = Conjecture(mode="necessary", target="is_hamiltonian",
                       body=atom("is_connected", "property"), domain="graph")
        result = recheck_conjecture(c, catalog_kb)
        assert result.status == "open"
        assert result.evidence > 0

    def test_empty_kb_zero_evidence(self):
        from cforge.dalmatian import Conjecture
        from cforge.exprs import atom

        kb = KnowledgeBase(domain="graph", concepts=builtin_concepts("graph"))
        c = Conjecture(mode="necessary", target="is_hamiltonian",
                       body=atom("is_connected", "property"), domain="graph")
        result = recheck_conjecture(c, kb)
        assert result.status == "open"
        assert result.zero_evidence


class TestRefutationPermanence:
    def test_counterexample_blocks_reemission(self):
        from cforge.catalog import disjoint_union

        kb = kb_of(("C4", cycle_graph(4)), ("K4", complete_graph(4)),
                   ("2K3", disjoint_union(complete_graph(3), complete_graph(3))))
        budget = Budget(max_complexity=1, timeout=None)
        store = generate_condition_conjectures(
            kb, "is_hamiltonian", "necessary", PROP_SIG, budget)
        assert "is_regular" in {c.body_text for c in store.conjectures}
        kb2, _ = kb.with_object(
            graph_object(k4_minus_edge(), label="K4-e", origin="counterexample"))
        again = generate_condition_conjectures(
            kb2, "is_hamiltonian", "necessary", PROP_SIG, budget)
        assert "is_regular" not in {c.body_text for c in again.conjectures}


class TestStoreBoundProperty:
    def test_randomized_runs(self, catalog_kb):
        rng = random.Random(2024)
        all_objects = list(catalog_kb.objects)
        invariants = [n for n, e in catalog_kb.concepts.items()
                      if e.kind == "invariant"]
        properties = [n for n, e in catalog_kb.concepts.items()
                      if e.kind == "property"]
        runs = 0
        for _ in range(120):
            k = rng.randint(2, 10)
            sample = rng.sample(all_objects, k)
            kb = KnowledgeBase(domain="graph",
                               concepts=builtin_concepts("graph"))
            for o in sample:
                kb, _ = kb.with_object(o)
            mode = rng.choice(["upper-bound", "lower-bound",
                               "necessary", "sufficient"])
            if mode in ("upper-bound", "lower-bound"):
                target = rng.choice(invariants)
                atoms = tuple((n, "invariant")
                              for n in rng.sample(invariants, 3) if n != target)
                sig = Signature(atoms=atoms or ((invariants[0], "invariant"),),
                                binary_ops=("plus", "minus"),
                                constants=(Fraction(1),))
                gen = generate_bound_conjectures
            else:
                target = rng.choice(properties)
                atoms = tuple((n, "property")
                              for n in rng.sample(properties, 3) if n != target)
                sig = Signature(atoms=atoms or ((properties[0], "property"),),
                                unary_ops=("not",), binary_ops=("and", "or"))
                gen = generate_condition_conjectures
            try:
                store = gen(kb, target, mode, sig,
                            Budget(max_complexity=3, timeout=None))
            except (VacuousHypothesis, NoEligibleObjects, Exception) as exc:
                if type(exc).__name__ in ("VacuousHypothesis", "NoEligibleObjects",
                                          "EmptySignature", "SizeCapExceeded"):
                    continue
                raise
            runs += 1
            assert len(store.conjectures) <= len(kb.objects)
            for c in store.conjectures:
                assert verify_conjecture(kb, c).ok
        assert runs >= 50
