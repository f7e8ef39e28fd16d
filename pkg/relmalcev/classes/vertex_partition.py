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

"""Union-find and the vertex partitions it produces."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict
from typing import Generic
from typing import Hashable
from typing import Iterable
from typing import Tuple
from typing import TypeVar


T = TypeVar("T", bound=Hashable)


class DisjointSet(Generic[T]):
    def __init__(self, elements: Iterable[T] = ()):
        self.parent: Dict[T, T] = {}
        self.rank: Dict[T, int] = {}
        for element in elements:
            self.make_set(element)

    def make_set(self, element: T) -> None:
        if element in self.parent:
            return
        self.parent[element] = element
        self.rank[element] = 0

    def find(self, element: T) -> T:
        self.make_set(element)
        root = element
        while self.parent[root] != root:
            root = self.parent[root]
        # path compression
        while self.parent[element] != root:
            self.parent[element], element = root, self.parent[element]
        return root

    def union(self, x: T, y: T) -> bool:
        """Merge the classes of x and y; False if they were already merged."""
        x_root = self.find(x)
        y_root = self.find(y)
        if x_root == y_root:
            return False
        if self.rank[x_root] < self.rank[y_root]:
            x_root, y_root = y_root, x_root
        self.parent[y_root] = x_root
        if self.rank[x_root] == self.rank[y_root]:
            self.rank[x_root] += 1
        return True

    def classes(self) -> Tuple[Tuple[T, ...], ...]:
        """Sorted tuple of sorted classes."""
        groups: Dict[T, list] = {}
        for element in self.parent:
            groups.setdefault(self.find(element), []).append(element)
        return tuple(sorted(tuple(sorted(group)) for group in groups.values()))


@dataclass(frozen=True)
class VertexPartition:
    """A partition of {1..m}; each vertex maps to the minimum of its class."""

    classes: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_disjoint_set(cls, disjoint_set: DisjointSet[int]) -> VertexPartition:
        return cls(classes=disjoint_set.classes())

    @classmethod
    def discrete(cls, vertex_count: int) -> VertexPartition:
        return cls(classes=tuple((vertex,) for vertex in range(1, vertex_count + 1)))

    @property
    def domain(self: VertexPartition) -> Tuple[int, ...]:
        return tuple(sorted(vertex for group in self.classes for vertex in group))

    def representative(self: VertexPartition, vertex: int) -> int:
        for group in self.classes:
            if vertex in group:
                return group[0]
        raise ValueError(f"Vertex {vertex} is not in the partition domain.")

    def representatives(self: VertexPartition) -> Tuple[int, ...]:
        """Min representative of every vertex, in vertex order."""
        lookup = {vertex: group[0] for group in self.classes for vertex in group}
        return tuple(lookup[vertex] for vertex in sorted(lookup))

    def class_of(self: VertexPartition, vertex: int) -> Tuple[int, ...]:
        for group in self.classes:
            if vertex in group:
                return group
        raise ValueError(f"Vertex {vertex} is not in the partition domain.")

    def max_class_size(self: VertexPartition) -> int:
        return max((len(group) for group in self.classes), default=0)

    def to_dict(self: VertexPartition) -> dict:
        return {"classes": [list(group) for group in self.classes]}
