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

from collections import Counter
from itertools import product

import logging

import pytest

from relmalcev.decide import check_variety
from relmalcev.decide import synthesize_terms
from relmalcev.decide import verify_witness
from relmalcev.malcevgen import gen_eq
from relmalcev.malcevgen import gen_eqr
from relmalcev.malcevgen import prune_trivial
from relmalcev.malcevgen import render_condition
from relmalcev.relterm import parse_inequality


logger = logging.getLogger(__name__)

MAJORITY = "R & (S o T) <= (R & S) o T"
FOUR_ARY_CHAIN = {
    2: "R & (S o T) <= T o S o (R & S) o (R & T)",
    3: "R & (S o T) <= T o S o (R & S) o (R & T) o (R & S)",
}


def sides(text):
    ineq = parse_inequality(text)
    return ineq.lhs, ineq.rhs


class TestMalcevReproduction:

    def test_permutability_condition(self, z2, slat2):
        condition = gen_eq(*sides("a o b <= b o a"))
        identities = prune_trivial(condition)
        assert len(identities) == 2
        unknown = [symbol for symbol in condition.symbols if not symbol.is_projection]
        assert [(symbol.name, symbol.arity) for symbol in unknown] == [("t_3", 3)]

        witness = synthesize_terms(z2, condition)
        assert witness is not None
        assert verify_witness(z2, condition, witness)
        table = witness.operation_table("t_3")
        for x, y, z in product(range(2), repeat=3):
            assert table[x, y, z] == (x + y + z) % 2

        assert synthesize_terms(slat2, condition) is None

    @pytest.mark.parametrize(
        "algebra_name,crr_holds",
        [
            pytest.param("Z2", True, id="z2"),
            pytest.param("LAT2", False, id="lat2"),
        ],
    )
    def test_transitivity_over_relations_and_congruences(
        self, catalog, algebra_name, crr_holds
    ):
        ineq = parse_inequality("X o X <= X")
        algebra = catalog[algebra_name]
        assert check_variety(algebra, ineq, "crr").holds == crr_holds
        assert check_variety(algebra, ineq, "con").holds


class TestMajority:

    @pytest.mark.parametrize("algebra_name", ["BARE2", "BARE3", "Z2", "LAT2", "SLAT2", "BOOL2"])
    def test_modes_agree(self, catalog, algebra_name):
        ineq = parse_inequality(MAJORITY)
        algebra = catalog[algebra_name]
        crr = check_variety(algebra, ineq, "crr")
        con = check_variety(algebra, ineq, "con")
        logger.info(f"{algebra_name}: crr={crr.holds} con={con.holds}")
        assert crr.holds == con.holds

    @pytest.mark.parametrize(
        "algebra_name,expected",
        [
            pytest.param("LAT2", True, id="lat2"),
            pytest.param("BOOL2", True, id="bool2"),
            pytest.param("SLAT2", False, id="slat2"),
            pytest.param("BARE2", False, id="bare2"),
        ],
    )
    def test_verdicts(self, catalog, algebra_name, expected):
        verdict = check_variety(catalog[algebra_name], parse_inequality(MAJORITY))
        assert verdict.holds == expected

    def test_boolean_witness_is_the_median(self, bool2):
        condition = gen_eqr(*sides(MAJORITY))
        witness = synthesize_terms(bool2, condition)
        assert witness is not None
        assert verify_witness(bool2, condition, witness)
        table = witness.operation_table("t_3")
        for x, y, z in product(range(2), repeat=3):
            assert table[x, y, z] == sorted((x, y, z))[1]

    def test_semilattice_has_no_witness(self, slat2):
        assert synthesize_terms(slat2, gen_eqr(*sides(MAJORITY))) is None


class TestFourAryChain:

    @pytest.mark.parametrize("n", [2, 3])
    def test_golden_condition(self, resources_path, n):
        condition = gen_eqr(*sides(FOUR_ARY_CHAIN[n]))
        fresh = [symbol for symbol in condition.symbols if symbol.name.startswith("t_(")]
        assert Counter(symbol.arity for symbol in fresh) == {4: 2 * n + 2}
        assert condition.m == 3
        vertex_symbols = [
            symbol
            for symbol in condition.symbols
            if not symbol.is_projection and symbol not in fresh
        ]
        assert [symbol.arity for symbol in vertex_symbols] == [3] * (n + 1)
        expected = resources_path.joinpath(f"four_ary_chain_n{n}.txt").read_text()
        assert render_condition(condition, "text") == expected

    def test_four_ary_chain_holds_in_lattices(self, lat2):
        ineq = parse_inequality(FOUR_ARY_CHAIN[2])
        assert check_variety(lat2, ineq).holds


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, '-vv', '-rP', '-n', 'auto']))
