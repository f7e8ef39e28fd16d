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

"""Results of the decision procedures."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict
from typing import Optional

import numpy as np

from relmalcev.classes.finite_algebra import FiniteAlgebra
from relmalcev.classes.malcev_condition import MalcevCondition
from relmalcev.classes.relation_mode import CheckLevel
from relmalcev.classes.relation_mode import RelationMode
from relmalcev.classes.term import Term
from relmalcev.classes.term import term_table


@dataclass(frozen=True)
class CheckVerdict:
    """ """

    mode: RelationMode
    level: CheckLevel
    holds: bool
    witness_k: Optional[int] = None
    counterexample: Optional[dict] = None

    def __post_init__(self):
        if not self.holds and self.level == CheckLevel.ALGEBRA and not self.counterexample:
            raise ValueError("A failing algebra-level verdict needs a counterexample.")
        if self.witness_k is not None and self.witness_k < 2:
            raise ValueError(f"witness_k must be >= 2, got {self.witness_k}.")

    def to_dict(self: CheckVerdict) -> dict:
        return {
            "mode": self.mode.value,
            "level": self.level.value,
            "holds": self.holds,
            "witness_k": self.witness_k,
            "counterexample": self.counterexample,
        }


@dataclass(frozen=True)
class TermWitness:
    """Concrete terms for the symbols of a condition, over the algebra's operations."""

    algebra: FiniteAlgebra
    condition: MalcevCondition
    terms: Dict[str, Term]

    def term(self: TermWitness, name: str) -> Term:
        return self.terms[name]

    def operation_table(self: TermWitness, name: str) -> np.ndarray:
        """The term operation induced on the base algebra by symbol `name`."""
        return term_table(
            self.terms[name], self.algebra, self.condition.symbol(name).arity
        )

    def to_dict(self: TermWitness) -> dict:
        return {
            "algebra": self.algebra.name,
            "source": self.condition.source,
            "algorithm": self.condition.algorithm.value,
            "k": self.condition.k,
            "terms": {
                symbol.name: str(self.terms[symbol.name])
                for symbol in self.condition.symbols
            },
        }


@dataclass(frozen=True)
class EquivalenceReport:
    """Both generic tests side by side; `discrepancy` flags disagreement under the hypotheses."""

    algebra: str
    source: str
    crr: CheckVerdict
    con: CheckVerdict
    p_regular: bool
    q_compose_count: int

    @property
    def hypotheses_hold(self: EquivalenceReport) -> bool:
        return self.p_regular and self.q_compose_count <= 1

    @property
    def agree(self: EquivalenceReport) -> bool:
        return self.crr.holds == self.con.holds

    @property
    def discrepancy(self: EquivalenceReport) -> bool:
        return self.hypotheses_hold and not self.agree

    def to_dict(self: EquivalenceReport) -> dict:
        return {
            "algebra": self.algebra,
            "source": self.source,
            "p_regular": self.p_regular,
            "q_compose_count": self.q_compose_count,
            "hypotheses_hold": self.hypotheses_hold,
            "crr": self.crr.to_dict(),
            "con": self.con.to_dict(),
            "agree": self.agree,
            "discrepancy": self.discrepancy,
        }
