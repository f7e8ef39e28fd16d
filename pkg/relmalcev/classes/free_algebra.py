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

"""Free algebras of the variety generated by a finite algebra, as term functions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict
from typing import Optional
from typing import Tuple
from typing import Union

import numpy as np

from relmalcev.classes.finite_algebra import FiniteAlgebra
from relmalcev.classes.term import Apply
from relmalcev.classes.term import Term
from relmalcev.classes.term import Var


@dataclass(frozen=True)
class Generator:
    """Element produced as the i-th generator (1-based)."""

    index: int


@dataclass(frozen=True)
class Applied:
    """Element produced by applying `op` to earlier elements."""

    op: str
    children: Tuple[int, ...]


Provenance = Union[Generator, Applied]


def provenance_term(provenance: Tuple[Provenance, ...], index: int) -> Term:
    """Rebuild the term of element `index`; generators become x1, x2, ..."""
    memo: Dict[int, Term] = {}

    def build(position: int) -> Term:
        if position in memo:
            return memo[position]
        source = provenance[position]
        if isinstance(source, Generator):
            term = Var(source.index)
        else:
            term = Apply(source.op, tuple(build(child) for child in source.children))
        memo[position] = term
        return term

    return build(index)


@dataclass(frozen=True, eq=False)
class FreeAlgebra:
    """Closure of the m projections A^m -> A under the operations of A.

    Row k of `elements` is the function table of element k over the points of
    A^m in row-major order; `provenance[k]` records how it was first produced.
    """

    base: FiniteAlgebra
    generator_count: int
    elements: np.ndarray
    provenance: Tuple[Provenance, ...]
    generator_indices: Tuple[int, ...]

    @property
    def size(self: FreeAlgebra) -> int:
        return int(self.elements.shape[0])

    def __len__(self: FreeAlgebra) -> int:
        return self.size

    def points(self: FreeAlgebra) -> np.ndarray:
        """Points of A^m, shape (n^m, m), in the column order of `elements`."""
        shape = (self.base.size,) * self.generator_count
        return np.indices(shape).reshape(self.generator_count, -1).T

    def generator_index(self: FreeAlgebra, i: int) -> int:
        """Element index of x_i (1-based)."""
        if not 1 <= i <= self.generator_count:
            raise ValueError(
                f"Generator x{i} outside 1..{self.generator_count}."
            )
        return self.generator_indices[i - 1]

    def index_of(self: FreeAlgebra, vector: np.ndarray) -> Optional[int]:
        matches = np.flatnonzero((self.elements == np.asarray(vector)).all(axis=1))
        return int(matches[0]) if len(matches) else None

    def term(self: FreeAlgebra, index: int) -> Term:
        return provenance_term(self.provenance, index)
