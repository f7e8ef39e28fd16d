# Copyright 2026 The relmalcev Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from itertools import product

import logging

import numpy as np
import pytest

from relmalcev.classes.check_verdict import TermWitness
from relmalcev.classes.malcev_condition import Algorithm
from relmalcev.classes.malcev_condition import Application
from relmalcev.classes.malcev_condition import FormalIdentity
from relmalcev.classes.malcev_condition import MalcevCondition
from relmalcev.classes.malcev_condition import TermSymbol
from relmalcev.classes.relation_mode import CheckLevel
from relmalcev.classes.relation_mode import RelationMode
from relmalcev.classes.term import Var
from relmalcev.decide import check_algebra
from relmalcev.decide import check_variety
from relmalcev.decide import enumerate_relations
from relmalcev.decide import equivalence_report
from relmalcev.decide import generic_relations
from relmalcev.decide import kfamily_witness
from relmalcev.decide import synthesize_terms
from relmalcev.decide import thr_pair_check
from relmalcev.decide import verify_witness
from relmalcev.finalg import CapacityExceededError
from relmalcev.finalg import EnumerationBoundError
from relmalcev.finalg import eval_term
from relmalcev.finalg import free_algebra
from relmalcev.malcevgen import gen_eqr
from relmalcev.relterm import parse_inequality
from relmalcev.termgraph import build_graph


logger = logging.getLogger(__name__)


def brute_force_holds(algebra, ineq, mode):
    relations = list(enumerate_relations(algebra, mode))
    variables = ineq.variables()
    for picked in product(relations, repeat=len(variables)):
        env = dict(zip(variables, picked))
        if not eval_term(ineq.lhs, env).issubset(eval_term(ineq.rhs, env)):
            return False
    return True


def majority_table(size):
    table = np.empty((size,) * 3, dtype=np.int64)
    for a, b, c in product(range(size), repeat=3):
        table[a, b, c] = sorted((a, b, c))[1]
    return table


class TestCheckAlgebra:

    def test_permutability_of_z2(self, z2):
        verdict = check_algebra(z2, parse_inequality("X o X <= X"))
        assert verdict.holds
        assert verdict.level == CheckLevel.ALGEBRA
        assert verdict.witness_k is None
        assert verdict.counterexample is None

    def test_counterexample_on_bare3(self, bare3):
        ineq = parse_inequality("X o X <= X")
        verdict = check_algebra(bare3, ineq, RelationMode.CRR)
        assert not verdict.holds
        relation = np.array(verdict.counterexample["relations"]["X"], dtype=bool)
        a, b = verdict.counterexample["pair"]
        square = (relation.astype(int) @ relation.astype(int)) > 0
        assert square[a, b]
        assert not relation[a, b]

    def test_congruences_are_transitive(self, bare3):
        verdict = check_algebra(bare3, parse_inequality("X o X <= X"), RelationMode.CON)
        assert verdict.holds
        assert verdict.mode == RelationMode.CON

    def test_congruences_of_bare3_do_not_permute(self, bare3):
        verdict = check_algebra(bare3, parse_inequality("X o Y <= Y o X"), "con")
        assert not verdict.holds

    @pytest.mark.parametrize(
        "text",
        [
            pytest.param("X o Y <= Y o X", id="permutability"),
            pytest.param("X & (Y o Z) <= (X & Y) o Z", id="majority"),
            pytest.param("Y o X <= X + Y", id="plus"),
            pytest.param("X o Y o X <= X o Y", id="three-to-two"),
        ],
    )
    @pytest.mark.parametrize("mode", ["crr", "con"])
    def test_matches_brute_force(self, lat2, bare2, text, mode):
        ineq = parse_inequality(text)
        for algebra in (lat2, bare2):
            verdict = check_algebra(algebra, ineq, mode)
            assert verdict.holds == brute_force_holds(algebra, ineq, mode)

    def test_witness_k(self, bare3, z2):
        ineq = parse_inequality("Y o X <= X + Y")
        assert check_algebra(bare3, ineq).witness_k == 3
        assert check_algebra(z2, ineq).witness_k == 2

    def test_threads_give_the_same_counterexample(self, bare3):
        ineq = parse_inequality("X o Y o Z <= Z o Y o X")
        sequential = check_algebra(bare3, ineq, threads=1)
        parallel = check_algebra(bare3, ineq, threads=4)
        assert not sequential.holds
        assert parallel.to_dict() == sequential.to_dict()

    def test_enumeration_bound(self, bare3):
        with pytest.raises(EnumerationBoundError):
            check_algebra(bare3, parse_inequality("X o X <= X"), bound=5)


class TestCheckVariety:

    @pytest.mark.parametrize(
        "algebra_name,text,mode,expected",
        [
            pytest.param("Z2", "X o X <= X", "crr", True, id="z2-permutable"),
            pytest.param("LAT2", "X o X <= X", "crr", False, id="lat2-not-permutable"),
            pytest.param("LAT2", "X o X <= X", "con", True, id="lat2-congruences"),
            pytest.param(
                "LAT2", "R & (S o T) <= (R & S) o T", "crr", True, id="lat2-majority"
            ),
            pytest.param(
                "SLAT2", "R & (S o T) <= (R & S) o T", "crr", False, id="slat2-majority"
            ),
            pytest.param(
                "LAT2",
                "R & (S o T) <= (R & S) o (R & T)",
                "crr",
                True,
                id="lat2-distributive",
            ),
        ],
    )
    def test_verdicts(self, catalog, algebra_name, text, mode, expected):
        verdict = check_variety(catalog[algebra_name], parse_inequality(text), mode)
        assert verdict.holds == expected
        assert verdict.level == CheckLevel.VARIETY

    def test_failure_details(self, lat2):
        verdict = check_variety(lat2, parse_inequality("X o X <= X"))
        assert verdict.counterexample["free_algebra_size"] == 18
        assert verdict.counterexample["generators"] == 3
        assert verdict.counterexample["pair"] == ["x1", "x2"]
        assert set(verdict.counterexample["relation_sizes"]) == {"X"}

    def test_witness_k(self, lat2, caplog):
        ineq = parse_inequality("R & (S o T) <= (R & S) + (R & T)")
        verdict = check_variety(lat2, ineq)
        assert verdict.holds
        assert verdict.witness_k == 2
        with caplog.at_level(logging.WARNING, logger="relmalcev.decide"):
            check_variety(lat2, ineq, k_max=1)
        assert "exceeds" in caplog.text

    def test_plus_on_the_left(self, z2):
        with pytest.raises(ValueError):
            check_variety(z2, parse_inequality("X + X <= X"))

    def test_generic_relations(self, lat2):
        graph = build_graph(parse_inequality("X o X <= X").lhs)
        free = free_algebra(lat2, graph.vertex_count)
        env = generic_relations(free, graph, [var for var in graph.labels], "crr")
        (relation,) = env.values()
        x1, x2, x3 = (free.generator_index(i) for i in (1, 2, 3))
        assert relation.is_reflexive()
        assert relation.contains(x1, x3)
        assert relation.contains(x3, x2)
        assert not relation.contains(x1, x2)


class TestSynthesize:

    def test_z2_permutability_term(self, z2):
        condition = gen_eqr(*_sides("X o X <= X"))
        witness = synthesize_terms(z2, condition)
        assert witness is not None
        assert verify_witness(z2, condition, witness)
        table = witness.operation_table("t_(1,2,X)")
        for a, b, c in product(range(2), repeat=3):
            assert table[0, 0, a, b, c] == (a + b + c) % 2

    def test_lattice_majority_term(self, lat2):
        condition = gen_eqr(*_sides("R & (S o T) <= (R & S) o T"))
        witness = synthesize_terms(lat2, condition)
        assert witness is not None
        assert verify_witness(lat2, condition, witness)
        assert np.array_equal(witness.operation_table("t_3"), majority_table(2))

    def test_semilattice_has_no_majority_term(self, slat2):
        condition = gen_eqr(*_sides("R & (S o T) <= (R & S) o T"))
        assert synthesize_terms(slat2, condition) is None

    def test_projection_clash(self, z2):
        condition = MalcevCondition(
            source="",
            algorithm=Algorithm.CRR,
            m=2,
            symbols=(
                TermSymbol("pi_1", 2, projection=1),
                TermSymbol("pi_2", 2, projection=2),
            ),
            identities=(
                FormalIdentity(Application("pi_1", (1, 2)), Application("pi_2", (1, 2))),
            ),
        )
        assert synthesize_terms(z2, condition) is None

    def test_arity_cap(self, z2):
        condition = gen_eqr(*_sides("X o X <= X"))
        with pytest.raises(CapacityExceededError):
            synthesize_terms(z2, condition, arity_cap=4)

    def test_verify_rejects_wrong_terms(self, z2):
        condition = gen_eqr(*_sides("X o X <= X"))
        terms = {symbol.name: Var(1) for symbol in condition.symbols}
        terms["pi_2"] = Var(2)
        witness = TermWitness(algebra=z2, condition=condition, terms=terms)
        assert not verify_witness(z2, condition, witness)


class TestKFamilyWitness:

    def test_least_k(self, z2):
        witness = kfamily_witness(z2, parse_inequality("X o X <= X + X"), 2, 3)
        assert witness is not None
        assert witness.condition.k == 2

    def test_classic_family(self, z2):
        witness = kfamily_witness(
            z2, parse_inequality("X o X <= X + X"), 2, 2, algorithm="classic"
        )
        assert witness.condition.algorithm == Algorithm.CLASSIC

    def test_semilattices_are_not_n_permutable(self, slat2):
        assert kfamily_witness(slat2, parse_inequality("X o Y <= Y + X"), 2, 3) is None


class TestEquivalenceReport:

    def test_non_regular_p_may_disagree(self, lat2):
        report = equivalence_report(lat2, parse_inequality("X o X <= X"))
        assert not report.crr.holds
        assert report.con.holds
        assert not report.p_regular
        assert not report.discrepancy

    @pytest.mark.parametrize("algebra_name", ["LAT2", "SLAT2", "Z2"])
    def test_regular_p_agrees(self, catalog, algebra_name):
        report = equivalence_report(
            catalog[algebra_name], parse_inequality("R & (S o T) <= (R & S) o T")
        )
        assert report.hypotheses_hold
        assert report.agree
        assert not report.discrepancy

    def test_plus_is_rejected(self, lat2):
        with pytest.raises(ValueError):
            equivalence_report(lat2, parse_inequality("X <= X + X"))


class TestThrPair:

    @pytest.mark.parametrize("algebra_name", ["Z2", "LAT2", "SLAT2", "BARE3"])
    def test_both_or_neither(self, catalog, algebra_name):
        assert thr_pair_check(catalog[algebra_name])


def _sides(text):
    ineq = parse_inequality(text)
    return ineq.lhs, ineq.rhs


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, '-vv', '-rP', '-n', 'auto']))
