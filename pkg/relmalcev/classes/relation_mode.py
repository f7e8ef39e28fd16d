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

from __future__ import annotations

from enum import Enum
from enum import unique


@unique
class RelationMode(str, Enum):
    """Which relations the variables of an inequality range over."""

    CRR = "crr"
    CON = "con"

    @classmethod
    def from_name(cls, name: str | RelationMode) -> RelationMode:
        if isinstance(name, RelationMode):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(
                f"Relation mode '{name}' is not supported. "
                f"Use one of: {[item.value for item in cls]}."
            )

    @property
    def description(self: RelationMode) -> str:
        if self == RelationMode.CRR:
            return "compatible reflexive relations"
        elif self == RelationMode.CON:
            return "congruences"
        else:
            raise NotImplementedError(f"Relation mode: {self} not implemented.")


@unique
class CheckLevel(str, Enum):
    """ """

    ALGEBRA = "algebra"
    VARIETY = "variety"

    @classmethod
    def from_name(cls, name: str | CheckLevel) -> CheckLevel:
        if isinstance(name, CheckLevel):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(
                f"Check level '{name}' is not supported. "
                f"Use one of: {[item.value for item in cls]}."
            )
