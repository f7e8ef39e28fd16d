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

"""Mal'cev conditions from relational inequalities p <= q."""
from pathlib import Path
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import json
import logging

from relmalcev.classes.labelled_graph import LabelledGraph
from relmalcev.classes.malcev_condition import Algorithm
from relmalcev.classes.malcev_condition import Application
from relmalcev.classes.malcev_condition import FormalIdentity
from relmalcev.classes.malcev_condition import MalcevCondition
from relmalcev.classes.malcev_condition import TermSymbol
from relmalcev.classes.output_format import OutputFormat
from relmalcev.classes.rel_term import Inequality
from relmalcev.classes.rel_term import RelTerm
from relmalcev.relterm import expand_plus
from relmalcev.relterm import is_regular
from relmalcev.relterm import render
from relmalcev.relterm import render_inequality
from relmalcev.termgraph import build_graph
from relmalcev.termgraph import edge_pairs
from relmalcev.termgraph import vertex_partition
from relmalcev.utils import load_jinja_template


logger = logging.getLogger(__name__)

SYMBOL_PREFIX = "t_"


def projection_name(i: int) -> str:
    return f"pi_{i}"


def vertex_symbol_name(vertex: int) -> str:
    """t_1 and t_2 are the projections; other vertices of G(q) get t_i."""
    if vertex in (1, 2):
        return projection_name(vertex)
    return f"{SYMBOL_PREFIX}{vertex}"


def _require_plus_free(p: RelTerm, q: RelTerm, operation: str) -> None:
    for side, name in ((p, "p"), (q, "q")):
        if not side.is_plus_free():
            raise ValueError(
                f"{operation} needs a +-free {name}, got '{render(side)}'. "
                "Use gen_eqr_family for '+' on the right."
            )


def _vertex_symbols(m: int, graph_q: LabelledGraph) -> List[TermSymbol]:
    symbols = [
        TermSymbol(name=projection_name(1), arity=m, projection=1),
        TermSymbol(name=projection_name(2), arity=m, projection=2),
    ]
    symbols.extend(
        TermSymbol(name=vertex_symbol_name(vertex), arity=m)
        for vertex in range(3, graph_q.vertex_count + 1)
    )
    return symbols


def gen_eq(
    p: RelTerm, q: RelTerm, k: Optional[int] = None, source: str = None
) -> MalcevCondition:
    """Congruence version: one m-ary symbol per vertex of G(q), arguments collapsed per label.

    For an edge (z_i, z_j, X_s) of G(q) the identity t_i(x_r1, ..., x_rm) = t_j(x_r1, ..., x_rm)
    is emitted, where r_d is the least vertex of G(p) in the Eqv(T_s(p)) class of d.
    """
    _require_plus_free(p, q, "gen_eq")
    graph_p, graph_q = build_graph(p), build_graph(q)
    m = graph_p.vertex_count
    pairs_p = edge_pairs(graph_p)
    collapsed: Dict = {}
    identities = []
    for edge in graph_q.edges:
        if edge.label not in collapsed:
            collapsed[edge.label] = vertex_partition(graph_p, edge.label).representatives()
        args = collapsed[edge.label]
        identities.append(
            FormalIdentity(
                lhs=Application(vertex_symbol_name(edge.source), args),
                rhs=Application(vertex_symbol_name(edge.target), args),
            )
        )
    condition = MalcevCondition(
        source=source or render_inequality(Inequality(p, q)),
        algorithm=Algorithm.CLASSIC,
        m=m,
        symbols=tuple(_vertex_symbols(m, graph_q)),
        identities=tuple(identities),
        k=k,
        edge_counts={var.display_name: pairs_p.count(var) for var in graph_q.labels},
    )
    logger.debug(f"gen_eq: m={m}, {len(identities)} identities for {condition.source}")
    return condition


def gen_eqr(
    p: RelTerm, q: RelTerm, k: Optional[int] = None, source: str = None
) -> MalcevCondition:
    """Compatible reflexive relation version.

    Every edge (z_i, z_j, X_s) of G(q) gets a fresh (m + c(s))-ary symbol t_(i,j,s) with
      t_(i,j,s)(x1..xm, x_i1..x_ic) = t_i(x1..xm)
      t_(i,j,s)(x1..xm, x_j1..x_jc) = t_j(x1..xm)
    where T_s(p) = [(i1, j1), ..., (ic, jc)].
    """
    _require_plus_free(p, q, "gen_eqr")
    graph_p, graph_q = build_graph(p), build_graph(q)
    m = graph_p.vertex_count
    pairs_p = edge_pairs(graph_p)
    base_args = tuple(range(1, m + 1))
    symbols = _vertex_symbols(m, graph_q)
    used_names = {symbol.name for symbol in symbols}
    identities = []
    for edge in graph_q.edges:
        pairs = pairs_p[edge.label]
        name = f"{SYMBOL_PREFIX}({edge.source},{edge.target},{edge.label.display_name})"
        unique_name, copy = name, 1
        while unique_name in used_names:
            copy += 1
            unique_name = f"{name}_{copy}"
        used_names.add(unique_name)
        symbols.append(TermSymbol(name=unique_name, arity=m + len(pairs)))
        source_args = base_args + tuple(i for i, _ in pairs)
        target_args = base_args + tuple(j for _, j in pairs)
        identities.append(
            FormalIdentity(
                lhs=Application(unique_name, source_args),
                rhs=Application(vertex_symbol_name(edge.source), base_args),
            )
        )
        identities.append(
            FormalIdentity(
                lhs=Application(unique_name, target_args),
                rhs=Application(vertex_symbol_name(edge.target), base_args),
            )
        )
    condition = MalcevCondition(
        source=source or render_inequality(Inequality(p, q)),
        algorithm=Algorithm.CRR,
        m=m,
        symbols=tuple(symbols),
        identities=tuple(identities),
        k=k,
        edge_counts={var.display_name: pairs_p.count(var) for var in graph_q.labels},
    )
    logger.debug(
        f"gen_eqr: m={m}, {len(graph_q.edges)} fresh symbols for {condition.source}"
    )
    return condition


def gen_eqr_family(
    p: RelTerm, q: RelTerm, k_min: int = 2, k_max: int = 8
) -> List[MalcevCondition]:
    """[gen_eqr(p, expand_plus(q, k)) for k in k_min..k_max], each tagged with k."""
    if not p.is_plus_free():
        raise ValueError(f"gen_eqr_family needs a +-free p, got '{render(p)}'.")
    if k_min < 2:
        raise ValueError(f"gen_eqr_family needs k_min >= 2, got {k_min}.")
    if k_max < k_min:
        raise ValueError(f"Empty k range {k_min}..{k_max}.")
    source = render_inequality(Inequality(p, q))
    return [
        gen_eqr(p, expand_plus(q, k), k=k, source=source)
        for k in range(k_min, k_max + 1)
    ]


def gen_eq_family(
    p: RelTerm, q: RelTerm, k_min: int = 2, k_max: int = 8
) -> List[MalcevCondition]:
    """Congruence counterpart of gen_eqr_family."""
    if not p.is_plus_free():
        raise ValueError(f"gen_eq_family needs a +-free p, got '{render(p)}'.")
    if k_min < 2:
        raise ValueError(f"gen_eq_family needs k_min >= 2, got {k_min}.")
    if k_max < k_min:
        raise ValueError(f"Empty k range {k_min}..{k_max}.")
    source = render_inequality(Inequality(p, q))
    return [
        gen_eq(p, expand_plus(q, k), k=k, source=source)
        for k in range(k_min, k_max + 1)
    ]


def lr_consequences(p: RelTerm, q: RelTerm) -> List[FormalIdentity]:
    """The l- and r-substituted instances of every edge identity of G(q).

    For a label s, the l-vector sets positions i and j of each (i, j) in T_s(p)
    to x_i and the r-vector sets both to x_j. T_s(p) pairs are vertex-disjoint
    for regular p.
    """
    _require_plus_free(p, q, "lr_consequences")
    if not is_regular(p):
        raise ValueError(
            f"lr_consequences needs a regular p; '{render(p)}' is not regular, "
            "so some Eqv(T_s(p)) class has more than two vertices."
        )
    graph_p, graph_q = build_graph(p), build_graph(q)
    m = graph_p.vertex_count
    pairs_p = edge_pairs(graph_p)
    identities = []
    for edge in graph_q.edges:
        left_vector = list(range(1, m + 1))
        right_vector = list(range(1, m + 1))
        for i, j in pairs_p[edge.label]:
            left_vector[i - 1] = left_vector[j - 1] = i
            right_vector[i - 1] = right_vector[j - 1] = j
        for vector in (tuple(left_vector), tuple(right_vector)):
            identities.append(
                FormalIdentity(
                    lhs=Application(vertex_symbol_name(edge.source), vector),
                    rhs=Application(vertex_symbol_name(edge.target), vector),
                )
            )
    return identities


def is_trivial(identity: FormalIdentity, condition: MalcevCondition) -> bool:
    return condition.is_trivial(identity)


def prune_trivial(condition: MalcevCondition) -> Tuple[FormalIdentity, ...]:
    return tuple(
        identity for identity in condition.identities if not condition.is_trivial(identity)
    )


def _application_text(condition: MalcevCondition, application: Application) -> str:
    resolved = condition.resolve(application)
    if resolved[0] == "var":
        return f"x{resolved[1]}"
    return f"{application.symbol}({','.join(f'x{arg}' for arg in application.args)})"


def _latex_symbol(name: str) -> str:
    if name.startswith(SYMBOL_PREFIX):
        return f"t_{{{name[len(SYMBOL_PREFIX):]}}}"
    return name


def _application_latex(condition: MalcevCondition, application: Application) -> str:
    resolved = condition.resolve(application)
    if resolved[0] == "var":
        return f"x_{{{resolved[1]}}}"
    args = ", ".join(f"x_{{{arg}}}" for arg in application.args)
    return f"{_latex_symbol(application.symbol)}({args})"


def render_condition(
    c: MalcevCondition,
    format: Union[str, OutputFormat] = OutputFormat.JSON,
    prune_trivial: bool = False,
) -> str:
    output_format = OutputFormat.from_name(format)
    identities = [
        identity
        for identity in c.identities
        if not (prune_trivial and c.is_trivial(identity))
    ]
    if output_format == OutputFormat.TEXT:
        return "".join(
            f"{_application_text(c, identity.lhs)} = {_application_text(c, identity.rhs)}\n"
            for identity in identities
        )
    elif output_format == OutputFormat.LATEX:
        template = load_jinja_template(template_path=Path("latex", "condition.tex"))
        return template.render(
            source=c.source,
            algorithm=c.algorithm.value,
            k=c.k,
            m=c.m,
            identities=[
                {
                    "lhs": _application_latex(c, identity.lhs),
                    "rhs": _application_latex(c, identity.rhs),
                }
                for identity in identities
            ],
        )
    elif output_format == OutputFormat.JSON:
        if not identities:
            return "[]\n"
        return json.dumps(c.to_dict(prune_trivial), indent=2, ensure_ascii=False) + "\n"
    else:
        raise NotImplementedError(f"Output format: {output_format} not implemented.")


def render_conditions(
    conditions: Sequence[MalcevCondition],
    format: Union[str, OutputFormat] = OutputFormat.JSON,
    prune_trivial: bool = False,
) -> str:
    output_format = OutputFormat.from_name(format)
    if output_format == OutputFormat.JSON:
        payload = [condition.to_dict(prune_trivial) for condition in conditions]
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    sections = []
    for condition in conditions:
        body = render_condition(condition, output_format, prune_trivial)
        if output_format == OutputFormat.TEXT:
            body = f"# k = {condition.k}\n{body}"
        sections.append(body)
    return "\n".join(sections)
