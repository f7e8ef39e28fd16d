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

"""Decision procedures: per-algebra enumeration, generic free-algebra tests, term synthesis."""
from concurrent.futures import ThreadPoolExecutor
from typing import Dict
from typing import Iterator
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import logging
import threading

import numpy as np

from relmalcev.classes.bin_rel import BinRel
from relmalcev.classes.check_verdict import CheckVerdict
from relmalcev.classes.check_verdict import EquivalenceReport
from relmalcev.classes.check_verdict import TermWitness
from relmalcev.classes.finite_algebra import FiniteAlgebra
from relmalcev.classes.free_algebra import FreeAlgebra
from relmalcev.classes.free_algebra import provenance_term
from relmalcev.classes.labelled_graph import LabelledGraph
from relmalcev.classes.malcev_condition import Algorithm
from relmalcev.classes.malcev_condition import Application
from relmalcev.classes.malcev_condition import MalcevCondition
from relmalcev.classes.rel_term import Compose
from relmalcev.classes.rel_term import Inequality
from relmalcev.classes.rel_term import Meet
from relmalcev.classes.rel_term import Plus
from relmalcev.classes.rel_term import RelTerm
from relmalcev.classes.rel_term import Variable
from relmalcev.classes.rel_term import VarId
from relmalcev.classes.relation_mode import CheckLevel
from relmalcev.classes.relation_mode import RelationMode
from relmalcev.classes.term import Term
from relmalcev.classes.term import Var
from relmalcev.classes.vertex_partition import DisjointSet
from relmalcev.finalg import DEFAULT_ENUMERATION_BOUND
from relmalcev.finalg import DEFAULT_SIZE_CAP
from relmalcev.finalg import CapacityExceededError
from relmalcev.finalg import cg
from relmalcev.finalg import crg
from relmalcev.finalg import enumerate_con
from relmalcev.finalg import enumerate_crr
from relmalcev.finalg import eval_term
from relmalcev.finalg import free_algebra
from relmalcev.finalg import index_algebra
from relmalcev.finalg import stabilization_k
from relmalcev.finalg import subpower
from relmalcev.malcevgen import gen_eq_family
from relmalcev.malcevgen import gen_eqr_family
from relmalcev.relterm import compose_count
from relmalcev.relterm import expand_plus
from relmalcev.relterm import is_regular
from relmalcev.relterm import parse_inequality
from relmalcev.relterm import render_inequality
from relmalcev.termgraph import build_graph
from relmalcev.termgraph import edge_pairs


logger = logging.getLogger(__name__)

DEFAULT_ARITY_CAP = 6
DEFAULT_K_MAX = 8
BATCH_SIZE = 4096
THR_FIRST = "R & (S o T) <= (R & S) o T"
THR_SECOND = "R & (S o T) <= (R & S) o (R & T)"


def enumerate_relations(
    algebra: FiniteAlgebra,
    mode: Union[str, RelationMode],
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> Iterator[BinRel]:
    mode = RelationMode.from_name(mode)
    if mode == RelationMode.CRR:
        return enumerate_crr(algebra, bound)
    elif mode == RelationMode.CON:
        return enumerate_con(algebra, bound)
    else:
        raise NotImplementedError(f"Relation mode: {mode} not implemented.")


def _batch_compose(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return np.matmul(left.astype(np.float32), right.astype(np.float32)) > 0


def _batch_eval(t: RelTerm, env: Mapping[VarId, np.ndarray]) -> np.ndarray:
    """Evaluate t on a stack of environments (arrays of shape (batch, n, n)).

    '+' is computed as the limit of the alternating products, which is exact
    because enumerated relations are reflexive.
    """
    if isinstance(t, Variable):
        return env[t.var]
    left = _batch_eval(t.left, env)
    right = _batch_eval(t.right, env)
    if isinstance(t, Meet):
        return left & right
    elif isinstance(t, Compose):
        return _batch_compose(left, right)
    elif isinstance(t, Plus):
        current = left
        index, quiet = 1, 0
        # two steps without growth means both factors are absorbed
        while quiet < 2:
            following = _batch_compose(current, left if index % 2 == 0 else right)
            index += 1
            quiet = 0 if (following & ~current).any() else quiet + 1
            current = following | current
        return current
    else:
        raise NotImplementedError(f"Term node {type(t).__name__} not supported.")


class _TupleSpace:
    """All assignments of enumerated relations to the variables, in row-major order."""

    def __init__(self, relations: Sequence[BinRel], variables: Sequence[VarId]):
        self.relations = list(relations)
        self.variables = list(variables)
        size = self.relations[0].size if self.relations else 0
        self.stack = (
            np.stack([relation.matrix for relation in self.relations])
            if self.relations
            else np.zeros((0, size, size), dtype=bool)
        )
        self.shape = (len(self.relations),) * len(self.variables)
        self.total = len(self.relations) ** len(self.variables)

    def picks(self, start: int, stop: int) -> Tuple[np.ndarray, ...]:
        return np.unravel_index(np.arange(start, stop, dtype=np.int64), self.shape)

    def env(self, start: int, stop: int) -> Dict[VarId, np.ndarray]:
        return {
            var: self.stack[pick]
            for var, pick in zip(self.variables, self.picks(start, stop))
        }

    def assignment(self, index: int) -> Dict[VarId, BinRel]:
        picks = np.unravel_index(index, self.shape)
        return {
            var: self.relations[int(pick)] for var, pick in zip(self.variables, picks)
        }


def _first_failure(
    space: _TupleSpace, p: RelTerm, q: RelTerm, start: int, stop: int
) -> Optional[int]:
    env = space.env(start, stop)
    failing = (_batch_eval(p, env) & ~_batch_eval(q, env)).any(axis=(1, 2))
    positions = np.flatnonzero(failing)
    return start + int(positions[0]) if len(positions) else None


def _scan(space: _TupleSpace, p: RelTerm, q: RelTerm, threads: int) -> Optional[int]:
    """Index of the first tuple with p not below q, whatever the thread count."""
    batches = [
        (start, min(start + BATCH_SIZE, space.total))
        for start in range(0, space.total, BATCH_SIZE)
    ]
    if threads <= 1 or len(batches) <= 1:
        for start, stop in batches:
            failure = _first_failure(space, p, q, start, stop)
            if failure is not None:
                return failure
        return None

    stop_event = threading.Event()

    def job(start: int, stop: int) -> Optional[int]:
        if stop_event.is_set():
            return None
        return _first_failure(space, p, q, start, stop)

    with ThreadPoolExecutor(max_workers=threads) as executor:
        futures = [executor.submit(job, start, stop) for start, stop in batches]
        for future in futures:
            # every earlier batch has finished cleanly when this one is inspected
            failure = future.result()
            if failure is not None:
                stop_event.set()
                for pending in futures:
                    pending.cancel()
                return failure
    return None


def check_algebra(
    algebra: FiniteAlgebra,
    ineq: Inequality,
    mode: Union[str, RelationMode] = RelationMode.CRR,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    threads: int = 1,
) -> CheckVerdict:
    """Does p <= q hold for every assignment of enumerated relations of A?"""
    mode = RelationMode.from_name(mode)
    relations = list(enumerate_relations(algebra, mode, bound))
    space = _TupleSpace(relations, ineq.variables())
    logger.debug(
        f"check_algebra {algebra.name}/{mode.value}: {len(relations)} relations, "
        f"{space.total} tuples"
    )
    failure = _scan(space, ineq.lhs, ineq.rhs, threads)
    if failure is not None:
        assignment = space.assignment(failure)
        lhs = eval_term(ineq.lhs, assignment)
        rhs = eval_term(ineq.rhs, assignment)
        pair = next(pair for pair in lhs.pairs() if not rhs.contains(*pair))
        counterexample = {
            "relations": {
                var.display_name: relation.to_list() for var, relation in assignment.items()
            },
            "pair": list(pair),
        }
        logger.info(
            f"{render_inequality(ineq)} fails in {algebra.name} over "
            f"{mode.description} at pair {pair}"
        )
        return CheckVerdict(
            mode=mode,
            level=CheckLevel.ALGEBRA,
            holds=False,
            counterexample=counterexample,
        )
    witness_k = None
    if not ineq.rhs.is_plus_free():
        witness_k = _algebra_witness_k(space, ineq, algebra.size)
    return CheckVerdict(
        mode=mode, level=CheckLevel.ALGEBRA, holds=True, witness_k=witness_k
    )


def _algebra_witness_k(space: _TupleSpace, ineq: Inequality, size: int) -> Optional[int]:
    for k in range(2, size * size + 3):
        if _scan(space, ineq.lhs, expand_plus(ineq.rhs, k), threads=1) is None:
            return k
    return None


def generic_relations(
    free: FreeAlgebra,
    graph: LabelledGraph,
    variables: Sequence[VarId],
    mode: Union[str, RelationMode] = RelationMode.CRR,
) -> Dict[VarId, BinRel]:
    """R'_s = Crg_F(T_s(p)) (or Cg_F) with vertex y_i read as generator x_i."""
    mode = RelationMode.from_name(mode)
    algebra = index_algebra(free)
    pairs = edge_pairs(graph)
    env = {}
    for var in variables:
        generating = [
            (free.generator_index(i), free.generator_index(j)) for i, j in pairs[var]
        ]
        if mode == RelationMode.CRR:
            env[var] = crg(algebra, generating)
        elif mode == RelationMode.CON:
            env[var] = cg(algebra, generating)
        else:
            raise NotImplementedError(f"Relation mode: {mode} not implemented.")
        logger.debug(f"generic relation {var}: {len(env[var])} pairs")
    return env


def check_variety(
    algebra: FiniteAlgebra,
    ineq: Inequality,
    mode: Union[str, RelationMode] = RelationMode.CRR,
    k_max: int = DEFAULT_K_MAX,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> CheckVerdict:
    """Does p <= q hold in the variety generated by A?

    Builds F = F(m) on the m vertices of G(p), instantiates every variable with
    the relation its edge pairs generate in F, and tests (x1, x2) against q.
    """
    mode = RelationMode.from_name(mode)
    if not ineq.lhs.is_plus_free():
        raise ValueError(
            f"check_variety needs a +-free left side, got '{render_inequality(ineq)}'."
        )
    graph = build_graph(ineq.lhs)
    free = free_algebra(algebra, graph.vertex_count, size_cap)
    env = generic_relations(free, graph, ineq.variables(), mode)
    x1, x2 = free.generator_index(1), free.generator_index(2)
    target = eval_term(ineq.rhs, env)
    holds = target.contains(x1, x2)
    logger.debug(
        f"check_variety {algebra.name}/{mode.value}: |F({graph.vertex_count})| = "
        f"{free.size}, holds = {holds}"
    )
    if not holds:
        return CheckVerdict(
            mode=mode,
            level=CheckLevel.VARIETY,
            holds=False,
            counterexample={
                "free_algebra_size": free.size,
                "generators": graph.vertex_count,
                "relation_sizes": {var.display_name: len(rel) for var, rel in env.items()},
                "rhs_size": len(target),
                "pair": ["x1", "x2"],
            },
        )
    witness_k = None
    if not ineq.rhs.is_plus_free():
        witness_k = stabilization_k(ineq.rhs, env, pair=(x1, x2))
        if witness_k is not None and witness_k > k_max:
            logger.warning(
                f"Minimal k = {witness_k} for {render_inequality(ineq)} exceeds "
                f"k_max = {k_max}; family members up to k_max will not be satisfiable."
            )
    return CheckVerdict(
        mode=mode, level=CheckLevel.VARIETY, holds=True, witness_k=witness_k
    )


def _slot_key(application: Application) -> Tuple[str, Tuple[int, ...]]:
    return (application.symbol, application.args)


def synthesize_terms(
    algebra: FiniteAlgebra,
    cond: MalcevCondition,
    arity_cap: int = DEFAULT_ARITY_CAP,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> Optional[TermWitness]:
    """Find terms of A satisfying every identity of `cond`, or None if there are none.

    Each occurrence f(x_a1, ..., x_ar) of a symbol is a slot whose value is an
    element of F(M). The possible slot-value tuples of f form the subpower of
    F(M)^q generated by its argument columns, listed breadth first with
    provenance; identities glue slots into classes and projections fix values.
    """
    for symbol in cond.symbols:
        if not symbol.is_projection and symbol.arity > arity_cap:
            raise CapacityExceededError(
                f"Symbol '{symbol.name}' has arity {symbol.arity}, above the "
                f"arity cap of {arity_cap}.",
                partial_count=0,
            )
    variable_count = max(cond.variable_count, 1)
    free = free_algebra(algebra, variable_count, size_cap)
    algebra_f = index_algebra(free)
    generators = [free.generator_index(i) for i in range(1, variable_count + 1)]

    slots: Dict[Tuple[str, Tuple[int, ...]], int] = {}
    for identity in cond.identities:
        for side in (identity.lhs, identity.rhs):
            slots.setdefault(_slot_key(side), len(slots))
    classes: DisjointSet[int] = DisjointSet(range(len(slots)))
    for identity in cond.identities:
        classes.union(slots[_slot_key(identity.lhs)], slots[_slot_key(identity.rhs)])

    assignment: Dict[int, int] = {}
    symbol_slots: Dict[str, List[Tuple[int, ...]]] = {}
    for (name, args), slot in slots.items():
        symbol = cond.symbol(name)
        if symbol.is_projection:
            value = generators[args[symbol.projection - 1] - 1]
            root = classes.find(slot)
            if assignment.get(root, value) != value:
                logger.debug(f"projections clash in the class of {name}{args}")
                return None
            assignment[root] = value
        else:
            symbol_slots.setdefault(name, []).append(args)

    candidates = {}
    roots = {}
    for name, arg_lists in symbol_slots.items():
        rows = np.array(
            [
                [generators[args[position] - 1] for args in arg_lists]
                for position in range(cond.symbol(name).arity)
            ],
            dtype=np.int64,
        )
        candidates[name] = subpower(
            algebra_f,
            rows,
            size_cap=size_cap,
            track_provenance=True,
            description=f"candidates for {name}",
        )
        roots[name] = [classes.find(slots[(name, args)]) for args in arg_lists]
        logger.debug(
            f"{name}: {len(candidates[name])} candidates over {len(arg_lists)} slots"
        )

    order = [symbol.name for symbol in cond.symbols]
    chosen: Dict[str, int] = {}

    def pick(remaining: List[str]) -> str:
        return max(
            remaining,
            key=lambda name: (
                len({root for root in roots[name] if root in assignment}),
                -len(candidates[name]),
                -order.index(name),
            ),
        )

    def search(remaining: List[str]) -> bool:
        if not remaining:
            return True
        name = pick(remaining)
        elements = candidates[name].elements
        mask = np.ones(len(elements), dtype=bool)
        first_position: Dict[int, int] = {}
        for position, root in enumerate(roots[name]):
            if root in assignment:
                mask &= elements[:, position] == assignment[root]
            elif root in first_position:
                mask &= elements[:, position] == elements[:, first_position[root]]
            else:
                first_position[root] = position
        rest = [other for other in remaining if other != name]
        for index in np.flatnonzero(mask).tolist():
            for root, position in first_position.items():
                assignment[root] = int(elements[index, position])
            chosen[name] = index
            if search(rest):
                return True
            for root in first_position:
                del assignment[root]
            del chosen[name]
        return False

    if not search(list(symbol_slots)):
        logger.info(f"No witness terms in the variety of {algebra.name} for {cond.source}")
        return None

    terms: Dict[str, Term] = {}
    for symbol in cond.symbols:
        if symbol.is_projection:
            terms[symbol.name] = Var(symbol.projection)
        elif symbol.name in chosen:
            terms[symbol.name] = provenance_term(
                candidates[symbol.name].provenance, chosen[symbol.name]
            )
        else:
            terms[symbol.name] = Var(1)
    return TermWitness(algebra=algebra, condition=cond, terms=terms)


def verify_witness(
    algebra: FiniteAlgebra, cond: MalcevCondition, witness: TermWitness
) -> bool:
    """Check every identity pointwise on A^M, independently of the search."""
    variable_count = max(cond.variable_count, 1)
    grid = np.indices((algebra.size,) * variable_count).reshape(variable_count, -1)

    def evaluate(application: Application) -> np.ndarray:
        term = witness.terms[application.symbol]
        columns = grid[[arg - 1 for arg in application.args]]
        return np.broadcast_to(term.evaluate(algebra, columns), grid.shape[1:])

    for identity in cond.identities:
        if not np.array_equal(evaluate(identity.lhs), evaluate(identity.rhs)):
            logger.debug(f"witness fails {identity}")
            return False
    return True


def kfamily_witness(
    algebra: FiniteAlgebra,
    ineq: Inequality,
    k_min: int = 2,
    k_max: int = DEFAULT_K_MAX,
    algorithm: Union[str, Algorithm] = Algorithm.CRR,
    arity_cap: int = DEFAULT_ARITY_CAP,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> Optional[TermWitness]:
    """Witness for the member of least k in k_min..k_max that has one."""
    algorithm = Algorithm.from_name(algorithm)
    if algorithm == Algorithm.CRR:
        family = gen_eqr_family(ineq.lhs, ineq.rhs, k_min, k_max)
    else:
        family = gen_eq_family(ineq.lhs, ineq.rhs, k_min, k_max)
    for condition in family:
        witness = synthesize_terms(algebra, condition, arity_cap, size_cap)
        if witness is not None:
            return witness
    return None


def equivalence_report(
    algebra: FiniteAlgebra, ineq: Inequality, size_cap: int = DEFAULT_SIZE_CAP
) -> EquivalenceReport:
    """Generic tests over compatible reflexive relations and over congruences.

    When p is regular and q has at most one composition the two must agree;
    a disagreement is reported as a discrepancy.
    """
    if not ineq.is_plus_free():
        raise ValueError(
            f"equivalence_report needs a +-free inequality, got '{render_inequality(ineq)}'."
        )
    report = EquivalenceReport(
        algebra=algebra.name,
        source=render_inequality(ineq),
        crr=check_variety(algebra, ineq, RelationMode.CRR, size_cap=size_cap),
        con=check_variety(algebra, ineq, RelationMode.CON, size_cap=size_cap),
        p_regular=is_regular(ineq.lhs),
        q_compose_count=compose_count(ineq.rhs),
    )
    if report.discrepancy:
        logger.error(
            f"crr and con verdicts disagree for {report.source} on {algebra.name} "
            "although p is regular and q has at most one composition."
        )
    return report


def thr_pair_check(
    algebra: FiniteAlgebra,
    bound: int = DEFAULT_ENUMERATION_BOUND,
    threads: int = 1,
) -> bool:
    """True iff R & (S o T) <= (R & S) o T and R & (S o T) <= (R & S) o (R & T)
    both hold or both fail on the algebra's compatible reflexive relations."""
    first = check_algebra(
        algebra, parse_inequality(THR_FIRST), RelationMode.CRR, bound, threads
    )
    second = check_algebra(
        algebra, parse_inequality(THR_SECOND), RelationMode.CRR, bound, threads
    )
    if first.holds != second.holds:
        logger.error(
            f"{algebra.name}: '{THR_FIRST}' holds = {first.holds} but "
            f"'{THR_SECOND}' holds = {second.holds}."
        )
    return first.holds == second.holds
