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

"""Relational terms over {meet, compose, plus} and inequalities between them."""
from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field

import typing


@dataclass(frozen=True)
class VarId:
    """A relation variable X_s; identity is the index only."""

    index: int
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"VarId index must be >= 1, got {self.index}.")

    @property
    def display_name(self: VarId) -> str:
        return self.name if self.name else f"X{self.index}"

    def __str__(self: VarId) -> str:
        return self.display_name


class RelTerm:
    """Base class of the term AST. Subclasses are frozen dataclasses."""

    precedence: typing.ClassVar[int] = 0

    def children(self: RelTerm) -> typing.Tuple[RelTerm, ...]:
        return ()

    def is_plus_free(self: RelTerm) -> bool:
        return all(child.is_plus_free() for child in self.children())

    def walk(self: RelTerm) -> typing.Iterator[RelTerm]:
        """Pre-order traversal."""
        yield self
        for child in self.children():
            yield from child.walk()

    def __and__(self: RelTerm, other: RelTerm) -> RelTerm:
        return Meet(self, other)

    def __matmul__(self: RelTerm, other: RelTerm) -> RelTerm:
        return Compose(self, other)

    def __add__(self: RelTerm, other: RelTerm) -> RelTerm:
        return Plus(self, other)


@dataclass(frozen=True)
class Variable(RelTerm):
    var: VarId
    precedence: typing.ClassVar[int] = 4


@dataclass(frozen=True)
class BinaryTerm(RelTerm):
    left: RelTerm
    right: RelTerm

    def children(self: BinaryTerm) -> typing.Tuple[RelTerm, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Meet(BinaryTerm):
    precedence: typing.ClassVar[int] = 3


@dataclass(frozen=True)
class Compose(BinaryTerm):
    precedence: typing.ClassVar[int] = 2


@dataclass(frozen=True)
class Plus(BinaryTerm):
    precedence: typing.ClassVar[int] = 1

    def is_plus_free(self: Plus) -> bool:
        return False


@dataclass(frozen=True)
class Inequality:
    """p <= q."""

    lhs: RelTerm
    rhs: RelTerm

    def is_plus_free(self: Inequality) -> bool:
        return self.lhs.is_plus_free() and self.rhs.is_plus_free()

    def variables(self: Inequality) -> typing.List[VarId]:
        """Distinct variables of both sides in first-occurrence order."""
        seen: typing.Dict[VarId, None] = {}
        for side in (self.lhs, self.rhs):
            for node in side.walk():
                if isinstance(node, Variable):
                    seen.setdefault(node.var, None)
        return list(seen)
