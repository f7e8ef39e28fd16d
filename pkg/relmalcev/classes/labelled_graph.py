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

from dataclasses import dataclass
from typing import Dict
from typing import List
from typing import Tuple

from relmalcev.classes.rel_term import VarId


@dataclass(frozen=True)
class Edge:
    """ """

    source: int
    target: int
    label: VarId

    def to_dict(self: Edge) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "label": self.label.display_name,
        }


@dataclass(frozen=True)
class LabelledGraph:
    """Vertices y1..ym; y1 and y2 are the ends of the root edge."""

    vertex_count: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if self.vertex_count < 2:
            raise ValueError(
                f"A term graph has at least 2 vertices, got {self.vertex_count}."
            )
        for edge in self.edges:
            for vertex in (edge.source, edge.target):
                if not 1 <= vertex <= self.vertex_count:
                    raise ValueError(
                        f"Edge {edge} references vertex {vertex} outside "
                        f"1..{self.vertex_count}."
                    )

    @property
    def labels(self: LabelledGraph) -> List[VarId]:
        seen: Dict[VarId, None] = {}
        for edge in self.edges:
            seen.setdefault(edge.label, None)
        return list(seen)

    def incident_edges(self: LabelledGraph, vertex: int) -> List[Edge]:
        return [edge for edge in self.edges if vertex in (edge.source, edge.target)]

    def to_dict(self: LabelledGraph) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "edges": [edge.to_dict() for edge in self.edges],
        }


@dataclass(frozen=True)
class EdgePairs:
    """T_s: per label, the (source, target) pairs in edge creation order."""

    pairs: Dict[VarId, Tuple[Tuple[int, int], ...]]

    def __getitem__(self: EdgePairs, var: VarId) -> Tuple[Tuple[int, int], ...]:
        return self.pairs.get(var, ())

    def count(self: EdgePairs, var: VarId) -> int:
        """c(s)."""
        return len(self[var])

    def labels(self: EdgePairs) -> List[VarId]:
        return list(self.pairs)

    def to_dict(self: EdgePairs) -> dict:
        return {
            var.display_name: [list(pair) for pair in pairs]
            for var, pairs in self.pairs.items()
        }
