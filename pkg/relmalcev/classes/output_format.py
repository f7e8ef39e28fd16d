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
class OutputFormat(str, Enum):
    """ """

    TEXT = "text"
    LATEX = "latex"
    JSON = "json"

    @classmethod
    def from_name(cls, name: str | OutputFormat) -> OutputFormat:
        if isinstance(name, OutputFormat):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(
                f"Output format '{name}' is not supported. "
                f"Use one of: {[item.value for item in cls]}."
            )

    @property
    def file_suffix(self: OutputFormat) -> str:
        if self == OutputFormat.TEXT:
            return "txt"
        elif self == OutputFormat.LATEX:
            return "tex"
        elif self == OutputFormat.JSON:
            return "json"
        else:
            raise NotImplementedError(f"Output format: {self} not implemented.")
