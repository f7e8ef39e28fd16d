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
from pathlib import Path

import logging
import random

import click.testing
import numpy as np
import pytest

from relmalcev.classes.bin_rel import BinRel
from relmalcev.classes.rel_term import Compose
from relmalcev.classes.rel_term import Meet
from relmalcev.classes.rel_term import Plus
from relmalcev.classes.rel_term import Variable
from relmalcev.classes.rel_term import VarId
from relmalcev.lib import load_catalog


logger = logging.getLogger(__name__)


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def bare2(catalog):
    return catalog["BARE2"]


@pytest.fixture(scope="session")
def bare3(catalog):
    return catalog["BARE3"]


@pytest.fixture(scope="session")
def z2(catalog):
    return catalog["Z2"]


@pytest.fixture(scope="session")
def lat2(catalog):
    return catalog["LAT2"]


@pytest.fixture(scope="session")
def slat2(catalog):
    return catalog["SLAT2"]


@pytest.fixture(scope="session")
def bool2(catalog):
    return catalog["BOOL2"]


@pytest.fixture(scope="session")
def source_configs_path():
    return Path("configs").absolute()


@pytest.fixture(scope="session")
def resources_path():
    return Path("tests").joinpath("resources").absolute()


@pytest.fixture(scope="session")
def source_checks_path(source_configs_path):
    return source_configs_path.joinpath("checks.yml")


@pytest.fixture
def rng():
    return random.Random(20260101)


@pytest.fixture(scope="session")
def runner():
    return click.testing.CliRunner(mix_stderr=False)


@pytest.fixture
def random_term(rng):
    """Factory for random terms over X1..Xv with at most `depth` nested operators."""

    def build(depth=6, variable_count=3, plus=False, leaf_chance=0.35):
        operators = [Meet, Compose, Plus] if plus else [Meet, Compose]

        def grow(level):
            if level == 0 or rng.random() < leaf_chance:
                return Variable(VarId(rng.randint(1, variable_count)))
            operator = rng.choice(operators)
            return operator(grow(level - 1), grow(level - 1))

        return grow(depth)

    return build


@pytest.fixture
def random_relation(rng):
    """Factory for random relations on {0..size-1}, optionally reflexive."""

    def build(size, reflexive=False, density=0.4):
        matrix = np.array(
            [[rng.random() < density for _ in range(size)] for _ in range(size)],
            dtype=bool,
        )
        if reflexive:
            matrix |= np.eye(size, dtype=bool)
        return BinRel(matrix)

    return build
