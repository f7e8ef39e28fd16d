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

"""Finite algebras given by operation tables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict
from typing import Tuple

import numpy as np

from relmalcev.utils import get_from_dict_and_assert


@dataclass(frozen=True, eq=False)
class Operation:
    """ """

    name: str
    arity: int
    table: np.ndarray

    @classmethod
    def from_dict(cls: Operation, algebra_id: str, size: int, kwargs: dict) -> Operation:
        """Build from the row-major JSON form `{name, arity, table}`."""
        name = str(get_from_dict_and_assert(algebra_id, kwargs, "name"))
        arity = kwargs.get("arity", None)
        if type(arity) != int or arity < 0:
            raise ValueError(
                f"Algebra ID: {algebra_id} operation '{name}' must define "
                f"a non-negative integer 'arity', got {arity!r}."
            )
        table = kwargs.get("table", None)
        if not isinstance(table, (list, tuple)) or len(table) != size ** arity:
            raise ValueError(
                f"Algebra ID: {algebra_id} operation '{name}' of arity {arity} "
                f"must define a 'table' of length {size ** arity}."
            )
        if any(type(value) != int or not 0 <= value < size for value in table):
            raise ValueError(
                f"Algebra ID: {algebra_id} operation '{name}' has table entries "
                f"outside 0..{size - 1}."
            )
        return Operation(
            name=name,
            arity=arity,
            table=np.array(table, dtype=np.int64).reshape((size,) * arity),
        )

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def to_dict(self: Operation) -> dict:
        return {
            "name": self.name,
            "arity": self.arity,
            "table": [int(value) for value in self.table.reshape(-1)],
        }

    def apply(self: Operation, *args: int) -> int:
        if len(args) != self.arity:
            raise ValueError(
                f"Operation '{self.name}' takes {self.arity} arguments, got {len(args)}."
            )
        return int(self.table[tuple(args)])


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """An algebra on {0..size-1}; equality and hashing go by content."""

    name: str
    size: int
    operations: Tuple[Operation, ...] = ()

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"Algebra '{self.name}' must have size >= 1.")
        names = [operation.name for operation in self.operations]
        if len(set(names)) != len(names):
            raise ValueError(f"Algebra '{self.name}' has duplicate operation names.")
        for operation in self.operations:
            if operation.table.shape != (self.size,) * operation.arity:
                raise ValueError(
                    f"Algebra '{self.name}' operation '{operation.name}' has a table "
                    f"of shape {operation.table.shape}, expected {(self.size,) * operation.arity}."
                )
        object.__setattr__(self, "operations", tuple(self.operations))

    @classmethod
    def from_dict(cls: FiniteAlgebra, algebra_id: str, kwargs: dict) -> FiniteAlgebra:
        size = kwargs.get("size", None)
        if type(size) != int or size < 1:
            raise ValueError(
                f"Algebra ID: {algebra_id} must define a positive integer 'size', "
                f"got {size!r}."
            )
        operations = kwargs.get("operations", None) or []
        if not isinstance(operations, list):
            raise ValueError(f"Algebra ID: {algebra_id} 'operations' must be a list.")
        return FiniteAlgebra(
            name=str(kwargs.get("name", algebra_id.lower())),
            size=size,
            operations=tuple(
                Operation.from_dict(algebra_id, size, operation)
                for operation in operations
            ),
        )

    def to_dict(self: FiniteAlgebra) -> dict:
        return {
            "name": self.name,
            "size": self.size,
            "operations": [operation.to_dict() for operation in self.operations],
        }

    def operation(self: FiniteAlgebra, name: str) -> Operation:
        for operation in self.operations:
            if operation.name == name:
                return operation
        raise KeyError(f"Algebra '{self.name}' has no operation '{name}'.")

    @property
    def signature(self: FiniteAlgebra) -> Dict[str, int]:
        return {operation.name: operation.arity for operation in self.operations}

    def _key(self: FiniteAlgebra) -> tuple:
        return (
            self.name,
            self.size,
            tuple(
                (operation.name, operation.arity, operation.table.tobytes())
                for operation in self.operations
            ),
        )

    def __eq__(self: FiniteAlgebra, other: object) -> bool:
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self: FiniteAlgebra) -> int:
        return hash(self._key())
