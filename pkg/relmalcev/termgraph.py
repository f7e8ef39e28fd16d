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

"""Labelled graphs G(p) of {o, &}-terms and what they say about relations."""
from pathlib import Path
from typing import Dict
from typing import List
from typing import Mapping
from typing import Optional
from typing import Tuple

import logging

from relmalcev.classes.bin_rel import BinRel
from relmalcev.classes.labelled_graph import Edge
from relmalcev.classes.labelled_graph import EdgePairs
from relmalcev.classes.labelled_graph import LabelledGraph
from relmalcev.classes.rel_term import Compose
from relmalcev.classes.rel_term import Meet
from relmalcev.classes.rel_term import RelTerm
from relmalcev.classes.rel_term import Variable
from relmalcev.classes.rel_term import VarId
from relmalcev.classes.vertex_partition import VertexPartition
from relmalcev.finalg import eqv
from relmalcev.relterm import render
from relmalcev.utils import load_jinja_template


logger = logging.getLogger(__name__)


def build_graph(t: RelTerm) -> LabelledGraph:
    """Split the root edge y1 -> y2 labelled t until every label is a variable.

    A meet puts both sides on the same endpoints; a composition creates a new
    vertex (numbered in creation order) and puts the left side before it. The
    left subterm is expanded completely before the right one.
    """
    if not t.is_plus_free():
        raise ValueError(
            f"Cannot build the graph of '{render(t)}': it contains '+'. "
            "Expand it first with expand_plus."
        )
    edges: List[Edge] = []
    vertex_count = 2

    def expand(term: RelTerm, source: int, target: int) -> None:
        nonlocal vertex_count
        if isinstance(term, Variable):
            edges.append(Edge(source=source, target=target, label=term.var))
        elif isinstance(term, Meet):
            expand(term.left, source, target)
            expand(term.right, source, target)
        elif isinstance(term, Compose):
            vertex_count += 1
            middle = vertex_count
            expand(term.left, source, middle)
            expand(term.right, middle, target)
        else:
            raise NotImplementedError(f"Term node {type(term).__name__} not supported.")

    expand(t, 1, 2)
    return LabelledGraph(vertex_count=vertex_count, edges=tuple(edges))


def edge_pairs(g: LabelledGraph) -> EdgePairs:
    pairs: Dict[VarId, List[Tuple[int, int]]] = {}
    for edge in g.edges:
        pairs.setdefault(edge.label, []).append((edge.source, edge.target))
    return EdgePairs(pairs={var: tuple(items) for var, items in pairs.items()})


def vertex_partition(g: LabelledGraph, s: VarId) -> VertexPartition:
    """Eqv(T_s) over all vertices of g."""
    return eqv(edge_pairs(g)[s], g.vertex_count)


def graph_is_regular(g: LabelledGraph) -> bool:
    """No vertex has two incident edges with the same label."""
    seen = set()
    for edge in g.edges:
        ends = {edge.source, edge.target}
        for vertex in ends:
            if (vertex, edge.label) in seen:
                return False
        seen.update((vertex, edge.label) for vertex in ends)
    return True


def _check_relations(
    g: LabelledGraph, rels: Mapping[VarId, BinRel]
) -> int:
    sizes = {rel.size for rel in rels.values()}
    if len(sizes) > 1:
        raise ValueError(f"Relations live on different universes: {sorted(sizes)}.")
    for label in g.labels:
        if label not in rels:
            raise ValueError(f"No relation given for variable {label}.")
    return sizes.pop() if sizes else 0


def check_assignment(
    g: LabelledGraph, rels: Mapping[VarId, BinRel], assign: Tuple[int, ...]
) -> bool:
    """True iff (assign[i], assign[j]) is in the relation of every edge (i, j)."""
    size = _check_relations(g, rels)
    if len(assign) != g.vertex_count:
        raise ValueError(
            f"Assignment has {len(assign)} values for {g.vertex_count} vertices."
        )
    if any(not 0 <= value < size for value in assign):
        raise ValueError(f"Assignment {tuple(assign)} leaves the universe 0..{size - 1}.")
    return all(
        rels[edge.label].contains(assign[edge.source - 1], assign[edge.target - 1])
        for edge in g.edges
    )


def find_assignment(
    g: LabelledGraph, rels: Mapping[VarId, BinRel], a1: int, a2: int
) -> Optional[Tuple[int, ...]]:
    """Extend y1 -> a1, y2 -> a2 to an assignment satisfying every edge.

    Backtracks over y3..ym trying values in increasing order; each edge is
    checked as soon as both of its ends are assigned.
    """
    size = _check_relations(g, rels)
    if not (0 <= a1 < size and 0 <= a2 < size):
        raise ValueError(f"Endpoints ({a1}, {a2}) leave the universe 0..{size - 1}.")
    order = [1, 2] + list(range(3, g.vertex_count + 1))
    step_of = {vertex: step for step, vertex in enumerate(order)}
    checks: List[List[Edge]] = [[] for _ in order]
    for edge in g.edges:
        checks[max(step_of[edge.source], step_of[edge.target])].append(edge)
    assign = [0] * g.vertex_count

    def consistent(step: int) -> bool:
        return all(
            rels[edge.label].contains(assign[edge.source - 1], assign[edge.target - 1])
            for edge in checks[step]
        )

    def search(step: int) -> bool:
        if step == len(order):
            return True
        vertex = order[step]
        for value in range(size):
            assign[vertex - 1] = value
            if consistent(step) and search(step + 1):
                return True
        return False

    assign[0], assign[1] = a1, a2
    if not (consistent(0) and consistent(1)):
        return None
    return tuple(assign) if search(2) else None


def to_dot(g: LabelledGraph, name: str = "G") -> str:
    template = load_jinja_template(template_path=Path("dot", "graph.dot"))
    return template.render(
        name=name,
        vertex_count=g.vertex_count,
        edges=[edge.to_dict() for edge in g.edges],
    )
