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

"""Terms over an algebra's operation symbols, used as synthesized witnesses."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence
from typing import Tuple

import numpy as np

from relmalcev.classes.finite_algebra import FiniteAlgebra


class Term:
    def evaluate(self: Term, algebra: FiniteAlgebra, columns: np.ndarray) -> np.ndarray:
        """Evaluate pointwise; row i of `columns` holds the values of x_{i+1}."""
        raise NotImplementedError

    def substitute(self: Term, replacements: Sequence[Term]) -> Term:
        """Replace x_i by replacements[i-1]."""
        raise NotImplementedError

    def max_variable(self: Term) -> int:
        raise NotImplementedError

    def depth(self: Term) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Var(Term):
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"Variable index must be >= 1, got {self.index}.")

    def evaluate(self: Var, algebra: FiniteAlgebra, columns: np.ndarray) -> np.ndarray:
        if self.index > len(columns):
            raise ValueError(
                f"Term uses x{self.index} but only {len(columns)} values were given."
            )
        return np.asarray(columns[self.index - 1])

    def substitute(self: Var, replacements: Sequence[Term]) -> Term:
        return replacements[self.index - 1]

    def max_variable(self: Var) -> int:
        return self.index

    def depth(self: Var) -> int:
        return 0

    def __str__(self: Var) -> str:
        return f"x{self.index}"


@dataclass(frozen=True)
class Apply(Term):
    op: str
    args: Tuple[Term, ...] = ()

    def evaluate(self: Apply, algebra: FiniteAlgebra, columns: np.ndarray) -> np.ndarray:
        operation = algebra.operation(self.op)
        if operation.arity != len(self.args):
            raise ValueError(
                f"Operation '{self.op}' has arity {operation.arity}, "
                f"applied to {len(self.args)} arguments."
            )
        if not self.args:
            width = np.asarray(columns).shape[1:]
            return np.full(width, operation.table[()], dtype=np.int64)
        values = [arg.evaluate(algebra, columns) for arg in self.args]
        return operation.table[tuple(values)]

    def substitute(self: Apply, replacements: Sequence[Term]) -> Term:
        return Apply(self.op, tuple(arg.substitute(replacements) for arg in self.args))

    def max_variable(self: Apply) -> int:
        return max((arg.max_variable() for arg in self.args), default=0)

    def depth(self: Apply) -> int:
        return 1 + max((arg.depth() for arg in self.args), default=0)

    def __str__(self: Apply) -> str:
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(str(arg) for arg in self.args)})"


def term_table(term: Term, algebra: FiniteAlgebra, arity: int) -> np.ndarray:
    """The term operation A^arity -> A as an array of shape (size,) * arity."""
    if term.max_variable() > arity:
        raise ValueError(f"Term {term} uses more than {arity} variables.")
    if arity == 0:
        empty = np.zeros((0, 1), dtype=np.int64)
        return np.asarray(term.evaluate(algebra, empty)).reshape(())
    grid = np.indices((algebra.size,) * arity).reshape(arity, -1)
    values = term.evaluate(algebra, grid)
    return np.broadcast_to(values, grid.shape[1:]).reshape((algebra.size,) * arity)
