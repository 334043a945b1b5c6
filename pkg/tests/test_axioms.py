import json

import numpy as np
import pytest

from pragql.axioms import (
    DISTRIBUTIVITY,
    SCHEMATA,
    default_pool,
    find_distributivity_counterexample,
    find_nonclosed_disjunction,
    find_tertium_counterexample,
    instantiate,
    schema,
    total_failures,
    verify_axioms,
)
from pragql.extension import StateRef, contains_state
from pragql.formula import And, Assert, Not, desugar_iq, parse
from pragql.model import PropertyModel
from pragql.pragmatics import p_valid, pragmatic_extension
from pragql.subspace import complement, equals, full_space, join, meet, span

E, F = Assert("E"), Assert("F")


def sasaki(a, b):
    return join(complement(a), meet(a, b))


class TestInstantiate:
    def test_a1(self):
        assert instantiate("A1", [E]) == desugar_iq(E, E)

    def test_a2(self):
        assert instantiate("A2", [E, F]) == desugar_iq(And(E, F), E)

    def test_a8(self):
        assert instantiate("A8", [E, F]) == desugar_iq(desugar_iq(E, F), desugar_iq(Not(F), Not(E)))

    def test_arity(self):
        with pytest.raises(ValueError):
            instantiate("A6", [E, F])

    def test_fragment(self):
        with pytest.raises(ValueError):
            instantiate("A1", [parse("(|-E(x) A |-F(x))")])

    def test_arities(self):
        assert {s.id: s.arity for s in SCHEMATA} == {
            "A1": 1, "A2": 2, "A3": 2, "A4": 1, "A5": 1, "A6": 3, "A7": 3, "A8": 2, "A9": 2,
        }


class TestVerify:
    def test_a1_to_a6_valid_in_qubit(self, qubit):
        results = verify_axioms(qubit, trials=200, schemata=SCHEMATA[:6])
        assert total_failures(results) == 0
        assert all(r.instances_checked == 200 for r in results)

    def test_rule_reading_holds(self, qubit, qutrit):
        for m in (qubit, qutrit):
            for r in verify_axioms(m, trials=150, seed=2):
                assert r.rule_failures == 0

    def test_a8_counterexample_matches_subspace_arithmetic(self, qubit):
        inst = instantiate("A8", [Assert("Ez+"), Assert("Ex+")])
        a, b = qubit.subspace("Ez+"), qubit.subspace("Ex+")
        direct = sasaki(sasaki(a, b), sasaki(complement(b), complement(a)))
        assert not direct.is_full
        ext = pragmatic_extension(qubit, inst)
        assert len(ext) == 1 and equals(ext.components[0], direct)
        assert not p_valid(qubit, inst)

    def test_a9_comparable_pair(self, qutrit):
        assert p_valid(qutrit, instantiate("A9", [Assert("X1"), Assert("P12")]))

    def test_deterministic_and_stream_independent(self, qubit):
        a = [r.to_dict() for r in verify_axioms(qubit, trials=30, seed=4)]
        b = [r.to_dict() for r in verify_axioms(qubit, trials=30, seed=4)]
        assert json.dumps(a) == json.dumps(b)
        only = verify_axioms(qubit, trials=30, seed=4, schemata=[schema("A8")])[0]
        assert only.to_dict() == a[7]

    def test_failures_are_capped_but_counted(self, qubit):
        r = verify_axioms(qubit, trials=200, schemata=[DISTRIBUTIVITY], max_failures=3)[0]
        assert len(r.failures) <= 3 and r.failure_count >= len(r.failures)

    def test_default_pool(self, qubit):
        pool = default_pool(qubit)
        assert len(pool) == 2 * len(qubit.names)


class TestCounterexamples:
    def test_tertium(self, qubit):
        rep = find_tertium_counterexample(qubit)
        assert rep.found and rep.replay()
        assert rep.residuals["distance_to_property"] > 1e-6
        assert rep.residuals["distance_to_complement"] > 1e-6

    def test_tertium_none_in_classical_registry(self):
        m = PropertyModel(2, {"A": span([1, 0]), "B": span([0, 1]), "I": full_space(2)})
        # candidate states are only the atom rays: every property is actual or nonactual there
        rep = find_tertium_counterexample(m, random_count=0)
        assert not rep.found and not rep.replay()

    def test_nonclosed_disjunction(self, qubit):
        rep = find_nonclosed_disjunction(qubit)
        assert rep.found and rep.replay()
        assert rep.residuals["distance_to_join"] < 1e-9
        assert min(rep.residuals["distance_to_left"], rep.residuals["distance_to_right"]) > 1e-6

    def test_distributivity_refuted(self, qubit):
        rep = find_distributivity_counterexample(qubit)
        assert rep.found and rep.replay()
        assert rep.residuals["extension_dim"] < qubit.dim
        inst = parse(rep.witnesses["instance"])
        assert not contains_state(pragmatic_extension(qubit, inst), StateRef(rep.witnesses["state"]))

    def test_report_json(self, qubit):
        d = find_tertium_counterexample(qubit).to_dict()
        text = json.dumps(d, sort_keys=True)
        assert json.loads(text)["kind"] == "tertium_non_datur"
        assert len(d["witnesses"]["state"]) == 2

    def test_replay_unknown_kind(self, qubit):
        rep = find_tertium_counterexample(qubit)
        rep.kind = "bogus"
        with pytest.raises(ValueError):
            rep.replay()
