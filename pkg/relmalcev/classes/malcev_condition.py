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

"""Abstract term symbols, formal identities and Mal'cev conditions."""
from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from enum import unique
from typing import Dict
from typing import Optional
from typing import Tuple


@unique
class Algorithm(str, Enum):
    """ """

    CLASSIC = "classic"
    CRR = "crr"

    @classmethod
    def from_name(cls, name: str | Algorithm) -> Algorithm:
        if isinstance(name, Algorithm):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(
                f"Algorithm '{name}' is not supported. "
                f"Use one of: {[item.value for item in cls]}."
            )


@dataclass(frozen=True)
class TermSymbol:
    """ """

    name: str
    arity: int
    projection: Optional[int] = None

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"Symbol '{self.name}' must have arity >= 1.")
        if self.projection is not None and not 1 <= self.projection <= self.arity:
            raise ValueError(
                f"Projection symbol '{self.name}' of arity {self.arity} "
                f"cannot project onto coordinate {self.projection}."
            )

    @property
    def is_projection(self: TermSymbol) -> bool:
        return self.projection is not None

    def to_dict(self: TermSymbol) -> dict:
        return {"name": self.name, "arity": self.arity, "projection": self.projection}


@dataclass(frozen=True)
class Application:
    """A symbol applied to variables x_{args[0]}, x_{args[1]}, ..."""

    symbol: str
    args: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(int(arg) for arg in self.args))
        if any(arg < 1 for arg in self.args):
            raise ValueError(f"Variable indices must be >= 1, got {self.args}.")

    def to_dict(self: Application) -> dict:
        return {"symbol": self.symbol, "args": list(self.args)}


@dataclass(frozen=True)
class FormalIdentity:
    """ """

    lhs: Application
    rhs: Application

    def to_dict(self: FormalIdentity) -> dict:
        return {"lhs": self.lhs.to_dict(), "rhs": self.rhs.to_dict()}


@dataclass(frozen=True)
class MalcevCondition:
    """A finite set of identities over abstract symbols, with how it was produced."""

    source: str
    algorithm: Algorithm
    m: int
    symbols: Tuple[TermSymbol, ...]
    identities: Tuple[FormalIdentity, ...]
    k: Optional[int] = None
    edge_counts: Dict[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        table = {}
        for symbol in self.symbols:
            if symbol.name in table:
                raise ValueError(f"Duplicate symbol name '{symbol.name}'.")
            table[symbol.name] = symbol
        for identity in self.identities:
            for side in (identity.lhs, identity.rhs):
                if side.symbol not in table:
                    raise ValueError(f"Identity uses unknown symbol '{side.symbol}'.")
                if len(side.args) != table[side.symbol].arity:
                    raise ValueError(
                        f"Symbol '{side.symbol}' has arity {table[side.symbol].arity} "
                        f"but is applied to {len(side.args)} variables."
                    )

    def symbol(self: MalcevCondition, name: str) -> TermSymbol:
        for symbol in self.symbols:
            if symbol.name == name:
                return symbol
        raise KeyError(f"Unknown symbol '{name}'.")

    @property
    def variable_count(self: MalcevCondition) -> int:
        """Size M of the variable pool x1..xM used by the identities."""
        return max(
            (
                max(side.args)
                for identity in self.identities
                for side in (identity.lhs, identity.rhs)
                if side.args
            ),
            default=0,
        )

    def resolve(self: MalcevCondition, application: Application) -> Tuple:
        """("var", i) for a projection landing on x_i, else (symbol, args)."""
        symbol = self.symbol(application.symbol)
        if symbol.is_projection:
            return ("var", application.args[symbol.projection - 1])
        return (application.symbol, application.args)

    def is_trivial(self: MalcevCondition, identity: FormalIdentity) -> bool:
        return self.resolve(identity.lhs) == self.resolve(identity.rhs)

    def to_dict(
        self: MalcevCondition, prune_trivial: bool = False
    ) -> dict:
        identities = [
            identity
            for identity in self.identities
            if not (prune_trivial and self.is_trivial(identity))
        ]
        return {
            "source": self.source,
            "algorithm": self.algorithm.value,
            "k": self.k,
            "m": self.m,
            "symbols": [symbol.to_dict() for symbol in self.symbols],
            "identities": [identity.to_dict() for identity in identities],
        }
