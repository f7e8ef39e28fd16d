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

from relmalcev.classes.check_config import CheckConfig
from relmalcev.classes.finite_algebra import FiniteAlgebra


@unique
class ConfigType(str, Enum):
    """Top-level nodes of a YAML config file."""

    CHECKS = "checks"
    ALGEBRAS = "algebras"

    def is_required(
        self: ConfigType,
    ) -> bool:
        if self == ConfigType.CHECKS:
            return True
        elif self == ConfigType.ALGEBRAS:
            return False
        else:
            raise NotImplementedError(f"Config Type: {self} not implemented.")

    def to_class(
        self: ConfigType,
    ) -> type[CheckConfig] | type[FiniteAlgebra]:
        if self == ConfigType.CHECKS:
            return CheckConfig
        elif self == ConfigType.ALGEBRAS:
            return FiniteAlgebra
        else:
            raise NotImplementedError(f"Config Type: {self} not implemented.")
