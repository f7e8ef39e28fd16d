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

"""Binary relations on {0..n-1} as boolean adjacency matrices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable
from typing import List
from typing import Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class BinRel:
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=bool)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(
                f"A binary relation needs a square matrix, got shape {matrix.shape}."
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, size: int) -> BinRel:
        return cls(np.eye(size, dtype=bool))

    @classmethod
    def full(cls, size: int) -> BinRel:
        return cls(np.ones((size, size), dtype=bool))

    @classmethod
    def empty(cls, size: int) -> BinRel:
        return cls(np.zeros((size, size), dtype=bool))

    @classmethod
    def from_pairs(
        cls, size: int, pairs: Iterable[Tuple[int, int]], reflexive: bool = False
    ) -> BinRel:
        matrix = np.eye(size, dtype=bool) if reflexive else np.zeros((size, size), bool)
        for a, b in pairs:
            if not (0 <= a < size and 0 <= b < size):
                raise ValueError(f"Pair ({a}, {b}) is outside the universe 0..{size - 1}.")
            matrix[a, b] = True
        return cls(matrix)

    @property
    def size(self: BinRel) -> int:
        return self.matrix.shape[0]

    def pairs(self: BinRel) -> List[Tuple[int, int]]:
        return [(int(a), int(b)) for a, b in np.argwhere(self.matrix)]

    def contains(self: BinRel, a: int, b: int) -> bool:
        return bool(self.matrix[a, b])

    def __contains__(self: BinRel, pair: Tuple[int, int]) -> bool:
        return self.contains(*pair)

    def __len__(self: BinRel) -> int:
        return int(self.matrix.sum())

    def _check_size(self: BinRel, other: BinRel) -> None:
        if self.size != other.size:
            raise ValueError(
                f"Relations live on different universes: {self.size} != {other.size}."
            )

    def __and__(self: BinRel, other: BinRel) -> BinRel:
        self._check_size(other)
        return BinRel(self.matrix & other.matrix)

    def __or__(self: BinRel, other: BinRel) -> BinRel:
        self._check_size(other)
        return BinRel(self.matrix | other.matrix)

    def issubset(self: BinRel, other: BinRel) -> bool:
        self._check_size(other)
        return not bool((self.matrix & ~other.matrix).any())

    def __le__(self: BinRel, other: BinRel) -> bool:
        return self.issubset(other)

    def __eq__(self: BinRel, other: object) -> bool:
        if not isinstance(other, BinRel):
            return NotImplemented
        return self.size == other.size and bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self: BinRel) -> int:
        return hash((self.size, np.packbits(self.matrix).tobytes()))

    def is_reflexive(self: BinRel) -> bool:
        return bool(self.matrix.diagonal().all())

    def is_symmetric(self: BinRel) -> bool:
        return bool(np.array_equal(self.matrix, self.matrix.T))

    def is_transitive(self: BinRel) -> bool:
        square = (self.matrix.astype(np.float32) @ self.matrix.astype(np.float32)) > 0
        return not bool((square & ~self.matrix).any())

    def to_list(self: BinRel) -> List[List[int]]:
        return self.matrix.astype(int).tolist()

    def __repr__(self: BinRel) -> str:
        return f"BinRel(size={self.size}, pairs={self.pairs()})"
