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

import logging

import pytest

from relmalcev.classes.rel_term import Compose
from relmalcev.classes.rel_term import Inequality
from relmalcev.classes.rel_term import Variable
from relmalcev.decide import check_algebra
from relmalcev.decide import check_variety
from relmalcev.decide import equivalence_report
from relmalcev.decide import synthesize_terms
from relmalcev.decide import thr_pair_check
from relmalcev.finalg import random_algebra
from relmalcev.malcevgen import gen_eqr
from relmalcev.malcevgen import gen_eqr_family
from relmalcev.relterm import compose_count
from relmalcev.relterm import is_regular
from relmalcev.relterm import parse_inequality
from relmalcev.relterm import render
from relmalcev.relterm import render_inequality
from relmalcev.relterm import variables


logger = logging.getLogger(__name__)


class TestVarietyConsistency:

    @pytest.mark.parametrize("algebra_name", ["BARE2", "BARE3", "Z2", "LAT2", "SLAT2", "BOOL2"])
    def test_thr_pair_on_catalog(self, catalog, algebra_name):
        assert thr_pair_check(catalog[algebra_name])

    def test_thr_pair_on_random_algebras(self, rng):
        for number in range(50):
            algebra = random_algebra(rng, size=2, arities=(2,), name=f"random2-{number}")
            assert thr_pair_check(algebra), algebra.to_dict()

    def test_generic_test_matches_synthesis(self, catalog, rng, random_term):
        inequalities = []
        while len(inequalities) < 20:
            p = random_term(depth=2, variable_count=3)
            # F(4) of BOOL2 overflows the operation table cap, so p keeps at most 3 vertices
            if compose_count(p) > 1 or not is_regular(p):
                continue
            q = random_term(depth=2, variable_count=3)
            inequalities.append(Inequality(p, q))
        for ineq in inequalities:
            condition = gen_eqr(ineq.lhs, ineq.rhs)
            for algebra_name in ("Z2", "LAT2", "SLAT2", "BOOL2"):
                algebra = catalog[algebra_name]
                holds = check_variety(algebra, ineq, "crr").holds
                witness = synthesize_terms(algebra, condition)
                logger.info(
                    f"{render_inequality(ineq)} on {algebra.name}: holds={holds}, "
                    f"witness={witness is not None}"
                )
                assert holds == (witness is not None), render_inequality(ineq)

    @pytest.mark.parametrize(
        "algebra_name,text",
        [
            pytest.param("Z2", "X o Y <= Y + X", id="z2-permutable"),
            pytest.param("LAT2", "X o Y <= Y + X", id="lat2-three-permutable"),
            pytest.param("SLAT2", "X o Y <= Y + X", id="slat2-three-permutable"),
            pytest.param(
                "LAT2", "R & (S o T) <= (R & S) + (R & T)", id="lat2-distributive"
            ),
        ],
    )
    def test_witness_k_is_least_synthesizable_k(self, catalog, algebra_name, text):
        algebra = catalog[algebra_name]
        ineq = parse_inequality(text)
        verdict = check_variety(algebra, ineq, "crr")
        assert verdict.holds
        assert verdict.witness_k is not None
        family = gen_eqr_family(ineq.lhs, ineq.rhs, k_min=2, k_max=verdict.witness_k)
        solvable = [
            condition.k
            for condition in family
            if synthesize_terms(algebra, condition) is not None
        ]
        assert solvable == [verdict.witness_k]


class TestRelationCongruenceAgreement:

    def test_regular_p_with_simple_q(self, catalog, rng, random_term):
        inequalities = {}
        while len(inequalities) < 50:
            p = random_term(depth=3, variable_count=4, leaf_chance=0.3)
            # F(4) of BOOL2 overflows the operation table cap, so p keeps at most 3 vertices
            if compose_count(p) > 1 or not is_regular(p):
                continue
            names = variables(p)
            if rng.random() < 0.5:
                q = Variable(rng.choice(names))
            else:
                q = Compose(Variable(rng.choice(names)), Variable(rng.choice(names)))
            ineq = Inequality(p, q)
            inequalities.setdefault(render_inequality(ineq), ineq)
        for source, ineq in inequalities.items():
            for algebra_name in ("BARE2", "BARE3", "Z2", "LAT2", "SLAT2", "BOOL2"):
                report = equivalence_report(catalog[algebra_name], ineq)
                logger.info(
                    f"{source} on {algebra_name}: crr={report.crr.holds}, "
                    f"con={report.con.holds}"
                )
                assert report.hypotheses_hold, render(ineq.lhs)
                assert not report.discrepancy, f"{source} on {algebra_name}"


EXAMPLE_INEQUALITIES = [
    "X o X <= X",
    "a o b <= b o a",
    "X o Y <= Y + X",
    "R & (S o T) <= (R & S) o T",
    "R & (S o T) <= (R & S) o (R & T) o (R & S)",
    "R & (S o T) <= (R & S) + (R & T)",
]


class TestCheckLevels:

    @pytest.mark.parametrize("mode", ["crr", "con"])
    @pytest.mark.parametrize("text", EXAMPLE_INEQUALITIES)
    @pytest.mark.parametrize("algebra_name", ["BARE2", "BARE3", "Z2", "LAT2", "SLAT2", "BOOL2"])
    def test_variety_verdict_implies_algebra_verdict(self, catalog, algebra_name, text, mode):
        algebra = catalog[algebra_name]
        ineq = parse_inequality(text)
        variety = check_variety(algebra, ineq, mode)
        algebra_level = check_algebra(algebra, ineq, mode)
        if variety.holds:
            assert algebra_level.holds, algebra_level.counterexample
        if not algebra_level.holds:
            assert not variety.holds


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, '-vv', '-rP', '-n', 'auto']))
