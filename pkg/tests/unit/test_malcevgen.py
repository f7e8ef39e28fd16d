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

import json
import logging

import pytest

from relmalcev.classes.check_verdict import TermWitness
from relmalcev.classes.malcev_condition import Algorithm
from relmalcev.classes.malcev_condition import Application
from relmalcev.classes.malcev_condition import FormalIdentity
from relmalcev.classes.malcev_condition import MalcevCondition
from relmalcev.classes.malcev_condition import TermSymbol
from relmalcev.classes.term import Var
from relmalcev.decide import synthesize_terms
from relmalcev.decide import verify_witness
from relmalcev.malcevgen import gen_eq
from relmalcev.malcevgen import gen_eq_family
from relmalcev.malcevgen import gen_eqr
from relmalcev.malcevgen import gen_eqr_family
from relmalcev.malcevgen import is_trivial
from relmalcev.malcevgen import lr_consequences
from relmalcev.malcevgen import prune_trivial
from relmalcev.malcevgen import render_condition
from relmalcev.malcevgen import render_conditions
from relmalcev.relterm import parse_inequality


logger = logging.getLogger(__name__)


def sides(text):
    ineq = parse_inequality(text)
    return ineq.lhs, ineq.rhs


class TestGenEq:

    def test_permutability_gives_malcev_identities(self):
        condition = gen_eq(*sides("a o b <= b o a"))
        assert condition.algorithm == Algorithm.CLASSIC
        assert condition.m == 3
        assert [symbol.name for symbol in condition.symbols] == ["pi_1", "pi_2", "t_3"]
        assert render_condition(condition, "text") == (
            "x1 = t_3(x1,x2,x2)\n" "t_3(x1,x2,x1) = x2\n"
        )
        assert prune_trivial(condition) == condition.identities

    def test_arguments_collapse_per_label(self):
        condition = gen_eq(*sides("X o X <= X"))
        assert condition.identities == (
            FormalIdentity(
                lhs=Application("pi_1", (1, 1, 1)), rhs=Application("pi_2", (1, 1, 1))
            ),
        )
        assert is_trivial(condition.identities[0], condition)

    def test_trivial_condition_renders_empty(self):
        condition = gen_eq(*sides("X <= X"))
        assert prune_trivial(condition) == ()
        assert render_condition(condition, "json", prune_trivial=True) == "[]\n"
        assert render_condition(condition, "text", prune_trivial=True) == ""

    def test_plus_is_rejected(self):
        with pytest.raises(ValueError):
            gen_eq(*sides("X <= X + X"))


class TestGenEqr:

    def test_permutability(self):
        condition = gen_eqr(*sides("X o X <= X"))
        assert condition.algorithm == Algorithm.CRR
        assert condition.m == 3
        assert condition.symbol("t_(1,2,X)").arity == 5
        assert condition.edge_counts == {"X": 2}
        assert render_condition(condition, "text") == (
            "t_(1,2,X)(x1,x2,x3,x1,x3) = x1\n" "t_(1,2,X)(x1,x2,x3,x3,x2) = x2\n"
        )

    def test_majority_inequality(self):
        condition = gen_eqr(*sides("R & (S o T) <= (R & S) o T"))
        fresh = [symbol for symbol in condition.symbols if symbol.name.startswith("t_(")]
        assert [(symbol.name, symbol.arity) for symbol in fresh] == [
            ("t_(1,3,R)", 4),
            ("t_(1,3,S)", 4),
            ("t_(3,2,T)", 4),
        ]
        assert len(condition.identities) == 6
        assert condition.identities[1] == FormalIdentity(
            lhs=Application("t_(1,3,R)", (1, 2, 3, 2)), rhs=Application("t_3", (1, 2, 3))
        )

    def test_duplicate_edges_get_distinct_symbols(self):
        condition = gen_eqr(*sides("X <= X & X"))
        names = [symbol.name for symbol in condition.symbols]
        assert names == ["pi_1", "pi_2", "t_(1,2,X)", "t_(1,2,X)_2"]

    def test_variables_missing_from_p_have_no_pairs(self):
        condition = gen_eqr(*sides("X <= X o Y"))
        assert condition.symbol("t_(3,2,Y)").arity == 2
        assert condition.identities[-1] == FormalIdentity(
            lhs=Application("t_(3,2,Y)", (1, 2)), rhs=Application("pi_2", (1, 2))
        )

    def test_plus_is_rejected(self):
        with pytest.raises(ValueError):
            gen_eqr(*sides("X <= X + X"))


class TestFamilies:

    def test_gen_eqr_family(self):
        family = gen_eqr_family(*sides("X <= X + X"), k_min=2, k_max=4)
        assert [condition.k for condition in family] == [2, 3, 4]
        assert {condition.source for condition in family} == {"X <= X + X"}
        assert [len(condition.identities) for condition in family] == [4, 6, 8]

    def test_gen_eq_family(self):
        family = gen_eq_family(*sides("X o X <= X + X"), k_min=3, k_max=3)
        assert len(family) == 1
        assert family[0].algorithm == Algorithm.CLASSIC
        assert family[0].k == 3

    @pytest.mark.parametrize(
        "k_min,k_max",
        [
            pytest.param(1, 4, id="k-min-below-two"),
            pytest.param(5, 4, id="empty-range"),
        ],
    )
    def test_bad_ranges(self, k_min, k_max):
        with pytest.raises(ValueError):
            gen_eqr_family(*sides("X <= X + X"), k_min=k_min, k_max=k_max)

    def test_plus_in_p_is_rejected(self):
        with pytest.raises(ValueError):
            gen_eqr_family(*sides("X + X <= X"))


class TestLrConsequences:

    def test_majority_inequality(self):
        identities = lr_consequences(*sides("R & (S o T) <= (R & S) o T"))
        assert len(identities) == 6
        assert identities[0] == FormalIdentity(
            lhs=Application("pi_1", (1, 1, 3)), rhs=Application("t_3", (1, 1, 3))
        )
        assert identities[1] == FormalIdentity(
            lhs=Application("pi_1", (2, 2, 3)), rhs=Application("t_3", (2, 2, 3))
        )

    def test_needs_regular_p(self):
        with pytest.raises(ValueError):
            lr_consequences(*sides("X o X <= X"))

    @pytest.mark.parametrize(
        "text",
        [
            pytest.param("R & (S o T) <= (R & S) o T", id="majority"),
            pytest.param(
                "R & (S o T) <= (R & S) o (R & T) o (R & S)", id="three_distributive"
            ),
        ],
    )
    def test_hold_under_synthesized_terms(self, lat2, text):
        p, q = sides(text)
        condition = gen_eqr(p, q)
        witness = synthesize_terms(lat2, condition)
        assert witness is not None
        consequences = MalcevCondition(
            source=condition.source,
            algorithm=condition.algorithm,
            m=condition.m,
            symbols=condition.symbols,
            identities=tuple(lr_consequences(p, q)),
        )
        assert verify_witness(lat2, consequences, witness)

    def test_detect_terms_that_break_them(self, lat2):
        p, q = sides("R & (S o T) <= (R & S) o T")
        condition = gen_eqr(p, q)
        witness = synthesize_terms(lat2, condition)
        broken = TermWitness(
            algebra=lat2,
            condition=condition,
            terms={**witness.terms, "t_3": Var(3)},
        )
        consequences = MalcevCondition(
            source=condition.source,
            algorithm=condition.algorithm,
            m=condition.m,
            symbols=condition.symbols,
            identities=tuple(lr_consequences(p, q)),
        )
        assert not verify_witness(lat2, consequences, broken)


class TestRender:

    @pytest.fixture
    def condition(self):
        return gen_eq(*sides("a o b <= b o a"))

    def test_json(self, condition):
        payload = json.loads(render_condition(condition, "json"))
        assert payload["source"] == "a o b <= b o a"
        assert payload["algorithm"] == "classic"
        assert payload["k"] is None
        assert payload["m"] == 3
        assert payload["symbols"][0] == {"name": "pi_1", "arity": 3, "projection": 1}
        assert payload["identities"][0] == {
            "lhs": {"symbol": "pi_1", "args": [1, 2, 2]},
            "rhs": {"symbol": "t_3", "args": [1, 2, 2]},
        }

    def test_latex(self, condition):
        latex = render_condition(condition, "latex")
        assert latex.startswith("% a o b <= b o a\n% algorithm: classic, m = 3\n")
        assert "\\begin{align*}" in latex
        assert "  x_{1} &\\approx t_{3}(x_{1}, x_{2}, x_{2}) \\\\\n" in latex
        assert "  t_{3}(x_{1}, x_{2}, x_{1}) &\\approx x_{2}\n" in latex

    def test_render_is_deterministic(self, condition):
        again = gen_eq(*sides("a o b <= b o a"))
        for output_format in ("json", "text", "latex"):
            assert render_condition(condition, output_format) == render_condition(
                again, output_format
            )

    def test_families(self):
        family = gen_eqr_family(*sides("X <= X + X"), k_min=2, k_max=3)
        payload = json.loads(render_conditions(family, "json"))
        assert [item["k"] for item in payload] == [2, 3]
        assert render_conditions([], "json") == "[]\n"
        text = render_conditions(family, "text")
        assert text.startswith("# k = 2\n")
        assert "\n# k = 3\n" in text


class TestMalcevCondition:

    def test_unknown_symbol(self):
        with pytest.raises(ValueError):
            MalcevCondition(
                source="",
                algorithm=Algorithm.CRR,
                m=1,
                symbols=(TermSymbol("f", 1),),
                identities=(FormalIdentity(Application("f", (1,)), Application("g", (1,))),),
            )

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            MalcevCondition(
                source="",
                algorithm=Algorithm.CRR,
                m=1,
                symbols=(TermSymbol("f", 2),),
                identities=(FormalIdentity(Application("f", (1,)), Application("f", (1,))),),
            )

    def test_projection_range(self):
        with pytest.raises(ValueError):
            TermSymbol("p", 2, projection=3)

    def test_variable_count(self):
        condition = gen_eqr(*sides("X o X <= X"))
        assert condition.variable_count == 3


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, '-vv', '-rP', '-n', 'auto']))
