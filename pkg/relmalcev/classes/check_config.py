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

"""A named check of one inequality against one algebra, as read from a YAML suite."""
from __future__ import annotations

from dataclasses import dataclass

from relmalcev.classes.relation_mode import CheckLevel
from relmalcev.classes.relation_mode import RelationMode
from relmalcev.utils import get_from_dict_and_assert


@dataclass
class CheckConfig:
    """ """

    check_id: str
    inequality: str
    algebra: str
    level: CheckLevel = CheckLevel.VARIETY
    mode: RelationMode = RelationMode.CRR
    expect: bool | None = None

    @classmethod
    def from_dict(cls: CheckConfig, check_id: str, kwargs: dict) -> CheckConfig:
        """

        Args:
          cls: CheckConfig:
          check_id: str:
          kwargs: typing.Dict:

        Returns:

        """
        inequality: str = get_from_dict_and_assert(
            config_id=check_id,
            kwargs=kwargs,
            key="inequality",
            assertion=lambda x: type(x) == str,
            error_msg=f"Check ID: '{check_id}' must define 'inequality' as a string.",
        )
        algebra: str = get_from_dict_and_assert(
            config_id=check_id,
            kwargs=kwargs,
            key="algebra",
            assertion=lambda x: type(x) == str,
            error_msg=f"Check ID: '{check_id}' must define 'algebra' as a string.",
        )
        expect = kwargs.get("expect", None)
        if expect is not None and type(expect) != bool:
            raise ValueError(
                f"Check ID: '{check_id}' has invalid 'expect' value {expect!r}; "
                "'expect' must be true or false."
            )
        return CheckConfig(
            check_id=str(check_id).upper(),
            inequality=inequality,
            algebra=algebra,
            level=CheckLevel.from_name(kwargs.get("level", CheckLevel.VARIETY.value)),
            mode=RelationMode.from_name(kwargs.get("mode", RelationMode.CRR.value)),
            expect=expect,
        )

    def to_dict(self: CheckConfig) -> dict:
        return {
            f"{self.check_id}": {
                "inequality": self.inequality,
                "algebra": self.algebra,
                "level": self.level.value,
                "mode": self.mode.value,
                "expect": self.expect,
            }
        }
