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

"""Config loading, template loading and small validation helpers."""
from inspect import getsourcefile
from pathlib import Path

import logging
import re
import typing

from jinja2 import ChainableUndefined  # type: ignore
from jinja2 import DebugUndefined
from jinja2 import Environment
from jinja2 import FileSystemLoader
from jinja2 import Template
from jinja2 import select_autoescape

import yaml


logger = logging.getLogger(__name__)

RE_K_RANGE = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?$")
RE_SLUG_UNSAFE = re.compile(r"[^0-9A-Za-z]+")


def load_yaml(file_path: Path, key: str = None) -> typing.Any:
    with file_path.open() as f:
        yaml_configs = yaml.safe_load(f)
    if not yaml_configs:
        return dict()
    if key is None:
        return yaml_configs
    output = yaml_configs.get(key, dict())
    if type(output) == dict:
        return {key.upper(): value for key, value in output.items()}
    elif output is None:
        raise RuntimeError(
            f"Configs file `{file_path}` has empty config node type `{key}:`. "
            "Please remove the node if it is not being used."
        )
    else:
        raise RuntimeError(
            f"Configs file `{file_path}` node `{key}:` must be a mapping "
            f"of IDs to configs, found {type(output).__name__}."
        )


def get_package_path(*parts: str) -> Path:
    return Path(getsourcefile(lambda: 0)).resolve().parent.joinpath(*parts)


def get_templates_path(file_path: Path) -> Path:
    return get_package_path("templates", str(file_path))


def assert_not_none_or_empty(value: typing.Any, error_msg: str) -> None:
    if not value:
        raise ValueError(error_msg)


def assert_positive(value: int, name: str) -> None:
    if value is None or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}.")


def get_from_dict_and_assert(
    config_id: str,
    kwargs: typing.Dict,
    key: str,
    assertion: typing.Callable[[typing.Any], bool] = None,
    error_msg: str = None,
) -> typing.Any:
    value = kwargs.get(key, None)
    if value is None or value == "":
        raise ValueError(f"Config ID: {config_id} must define non-empty value: '{key}'.")
    if assertion and not assertion(value):
        raise ValueError(
            f"Assertion failed on value {value}.\n"
            f"Config ID: {config_id}, kwargs: {kwargs}.\n"
            f"Error: {error_msg}"
        )
    return value


class DebugChainableUndefined(ChainableUndefined, DebugUndefined):
    pass


def load_jinja_template(template_path: Path) -> Template:
    """Load a template under `templates/`, one cached Environment per directory."""
    if not hasattr(load_jinja_template, "environments"):
        load_jinja_template.environments = {}
    environments = load_jinja_template.environments
    templates_parent_path = get_templates_path(template_path.parent).absolute()
    environment = environments.get(templates_parent_path)
    if environment is None:
        if not templates_parent_path.is_dir():
            raise ValueError(
                f"Error while loading template: {template_path}:\n"
                f"Jinja template directory not found: "
                f"{templates_parent_path.absolute()}"
            )
        environment = Environment(
            loader=FileSystemLoader(str(templates_parent_path)),
            autoescape=select_autoescape(),
            undefined=DebugChainableUndefined,
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )
        environments[templates_parent_path] = environment
    return environment.get_template(template_path.name)


def parse_k_range(value: str) -> typing.Tuple[int, int]:
    """Parse "k" or "k_min..k_max"."""
    match = RE_K_RANGE.match(value or "")
    if not match:
        raise ValueError(
            f"Invalid k range '{value}'. Expected 'K' or 'K_MIN..K_MAX', e.g. '2..8'."
        )
    k_min = int(match.group(1))
    k_max = int(match.group(2)) if match.group(2) else k_min
    if k_min < 2:
        raise ValueError(f"k range must start at 2 or above, got {k_min}.")
    if k_max < k_min:
        raise ValueError(f"Empty k range '{value}'.")
    return k_min, k_max


def slugify(text: str) -> str:
    slug = RE_SLUG_UNSAFE.sub("-", text.replace("<=", " le ")).strip("-").lower()
    return slug or "condition"
