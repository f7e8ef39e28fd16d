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

"""Finite algebras and binary relations.

Relations are boolean adjacency matrices. Subuniverses of powers of an algebra
(free algebras, Crg in A x A, witness searches) are all produced by one
breadth-first closure, `subpower`, which optionally records for every element
the operation and arguments it was first obtained from.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict
from typing import Iterable
from typing import Iterator
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import logging
import random

import numpy as np

from relmalcev.classes.bin_rel import BinRel
from relmalcev.classes.finite_algebra import FiniteAlgebra
from relmalcev.classes.finite_algebra import Operation
from relmalcev.classes.free_algebra import Applied
from relmalcev.classes.free_algebra import FreeAlgebra
from relmalcev.classes.free_algebra import Generator
from relmalcev.classes.free_algebra import Provenance
from relmalcev.classes.rel_term import Compose
from relmalcev.classes.rel_term import Meet
from relmalcev.classes.rel_term import Plus
from relmalcev.classes.rel_term import RelTerm
from relmalcev.classes.rel_term import Variable
from relmalcev.classes.rel_term import VarId
from relmalcev.classes.vertex_partition import DisjointSet
from relmalcev.classes.vertex_partition import VertexPartition
from relmalcev.relterm import expand_plus


logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_BOUND = 12
DEFAULT_SIZE_CAP = 200_000
DEFAULT_TABLE_CAP = 1 << 24
CHUNK_CELLS = 1 << 22


class CapacityExceededError(RuntimeError):
    def __init__(self, message: str, partial_count: int = 0):
        super().__init__(message)
        self.partial_count = partial_count


class EnumerationBoundError(CapacityExceededError):
    pass


def _check_same_universe(*relations: BinRel) -> int:
    sizes = {relation.size for relation in relations}
    if len(sizes) > 1:
        raise ValueError(f"Relations live on different universes: {sorted(sizes)}.")
    return sizes.pop() if sizes else 0


def compose(r: BinRel, t: BinRel) -> BinRel:
    _check_same_universe(r, t)
    product = r.matrix.astype(np.float32) @ t.matrix.astype(np.float32)
    return BinRel(product > 0)


def kfold(r: BinRel, t: BinRel, k: int) -> BinRel:
    """r o t o r o ... with k factors."""
    if k < 1:
        raise ValueError(f"kfold needs k >= 1, got {k}.")
    _check_same_universe(r, t)
    result = r
    for position in range(1, k):
        result = compose(result, r if position % 2 == 0 else t)
    return result


def plus(r: BinRel, t: BinRel) -> Tuple[BinRel, int]:
    """Union of kfold(r, t, i) over i >= 1, and the least i after which it stops growing.

    The union starts at i = 1. For reflexive arguments including i = 0 would
    change nothing since the identity is already below r.
    """
    _check_same_universe(r, t)
    current = r
    union = r.matrix.copy()
    stabilization = 1
    index = 1
    seen = set()
    # the next factor only depends on the parity of the index
    while (current.matrix.tobytes(), index % 2) not in seen:
        seen.add((current.matrix.tobytes(), index % 2))
        current = compose(current, r if index % 2 == 0 else t)
        index += 1
        if (current.matrix & ~union).any():
            union |= current.matrix
            stabilization = index
    logger.debug(f"plus stabilized at index {stabilization} after {index} products")
    return BinRel(union), stabilization


def transitive_closure(r: BinRel) -> BinRel:
    matrix = r.matrix.copy()
    for k in range(r.size):
        matrix |= np.outer(matrix[:, k], matrix[k, :])
    return BinRel(matrix)


def eval_term(t: RelTerm, env: Mapping[VarId, BinRel]) -> BinRel:
    """Evaluate with meet as intersection, o as composition and + as `plus`."""
    _check_same_universe(*env.values())
    return _eval(t, env)


def _eval(t: RelTerm, env: Mapping[VarId, BinRel]) -> BinRel:
    if isinstance(t, Variable):
        if t.var not in env:
            raise ValueError(f"Variable {t.var} is unbound in the environment.")
        return env[t.var]
    left = _eval(t.left, env)
    right = _eval(t.right, env)
    if isinstance(t, Meet):
        return left & right
    elif isinstance(t, Compose):
        return compose(left, right)
    elif isinstance(t, Plus):
        return plus(left, right)[0]
    else:
        raise NotImplementedError(f"Term node {type(t).__name__} not supported.")


def stabilization_k(
    t: RelTerm,
    env: Mapping[VarId, BinRel],
    pair: Optional[Tuple[int, int]] = None,
    k_limit: Optional[int] = None,
) -> Optional[int]:
    """Least k >= 2 with eval(expand_plus(t, k)) == eval(t).

    With `pair`, the least k whose expansion already contains the pair; None
    when eval(t) does not contain it. Expansions grow with k only for reflexive
    environments.
    """
    target = eval_term(t, env)
    if pair is not None and not target.contains(*pair):
        return None
    limit = k_limit or target.size * target.size + 2
    for k in range(2, limit + 1):
        value = eval_term(expand_plus(t, k), env)
        if pair is not None and value.contains(*pair):
            return k
        if pair is None and value == target:
            return k
    return None


def _product_chunks(
    sizes: Sequence[int], offsets: Sequence[int], chunk: int
) -> Iterator[Tuple[np.ndarray, ...]]:
    """Row-major index tuples of range(size_0) x range(size_1) x ..., shifted by offsets."""
    total = 1
    for size in sizes:
        total *= size
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total), dtype=np.int64)
        indices = np.unravel_index(flat, tuple(sizes))
        yield tuple(index + offset for index, offset in zip(indices, offsets))


class _RowIndex:
    """Assigns consecutive indices to distinct rows of a (count, width) array over 0..base-1."""

    def __init__(self, base: int, width: int):
        self.width = width
        self.lookup: Dict = {}
        self.use_codes = base ** width < 2 ** 62
        if self.use_codes:
            self.weights = np.array(
                [base ** power for power in reversed(range(width))], dtype=np.int64
            )
            self.codes = np.empty(0, dtype=np.int64)
            self._sorted: Optional[Tuple[np.ndarray, np.ndarray]] = None

    def __len__(self) -> int:
        return len(self.lookup)

    def _keys(self, rows: np.ndarray) -> Union[np.ndarray, List[bytes]]:
        rows = np.ascontiguousarray(rows, dtype=np.int64).reshape(-1, self.width)
        if self.use_codes:
            return rows @ self.weights
        return [row.tobytes() for row in rows]

    def add_rows(self, rows: np.ndarray) -> np.ndarray:
        """Register unseen rows; returns their positions in `rows`, first occurrences only."""
        if self.use_codes:
            codes = self._keys(rows)
            unique_codes, first = np.unique(codes, return_index=True)
            fresh = ~np.isin(unique_codes, self.codes)
            first = np.sort(first[fresh])
            new_codes = codes[first]
            offset = len(self.lookup)
            for position, code in enumerate(new_codes.tolist()):
                self.lookup[code] = offset + position
            self.codes = np.concatenate([self.codes, new_codes])
            self._sorted = None
            return first
        fresh = []
        for position, key in enumerate(self._keys(rows)):
            if key not in self.lookup:
                self.lookup[key] = len(self.lookup)
                fresh.append(position)
        return np.array(fresh, dtype=np.int64)

    def indices(self, rows: np.ndarray) -> np.ndarray:
        """Indices of rows that are all known."""
        if self.use_codes:
            if self._sorted is None:
                order = np.argsort(self.codes, kind="stable")
                self._sorted = (order, self.codes[order])
            order, sorted_codes = self._sorted
            return order[np.searchsorted(sorted_codes, self._keys(rows))]
        return np.array([self.lookup[key] for key in self._keys(rows)], dtype=np.int64)

    def get(self, row: np.ndarray) -> Optional[int]:
        key = self._keys(np.asarray(row))[0]
        return self.lookup.get(int(key) if self.use_codes else key)


@dataclass(frozen=True, eq=False)
class Subpower:
    """A subuniverse of A^width; provenance is empty unless it was tracked."""

    elements: np.ndarray
    provenance: Tuple[Provenance, ...]
    row_index: _RowIndex

    def __len__(self: Subpower) -> int:
        return int(self.elements.shape[0])

    def index_of(self: Subpower, row: Sequence[int]) -> Optional[int]:
        return self.row_index.get(np.asarray(row, dtype=np.int64))

    def indices(self: Subpower, rows: np.ndarray) -> np.ndarray:
        return self.row_index.indices(rows)


def subpower(
    algebra: FiniteAlgebra,
    generators: np.ndarray,
    size_cap: Optional[int] = None,
    track_provenance: bool = False,
    description: str = "subpower",
) -> Subpower:
    """Subuniverse of A^width generated by the rows of `generators`, breadth first.

    Each round applies every operation to tuples that use at least one element
    found in the previous round, so every combination is tried exactly once.
    """
    generators = np.asarray(generators, dtype=np.int64)
    if generators.ndim != 2:
        raise ValueError(f"Generators must be a 2-d array, got shape {generators.shape}.")
    if generators.size and (generators.min() < 0 or generators.max() >= algebra.size):
        raise ValueError(
            f"Generator entries must lie in 0..{algebra.size - 1} for algebra '{algebra.name}'."
        )
    width = generators.shape[1]
    row_index = _RowIndex(algebra.size, width)
    provenance: List[Provenance] = []

    fresh = row_index.add_rows(generators)
    blocks = [generators[fresh]]
    if track_provenance:
        provenance.extend(Generator(int(position) + 1) for position in fresh)
    for operation in algebra.operations:
        if operation.arity == 0:
            row = np.full((1, width), operation.table[()], dtype=np.int64)
            if len(row_index.add_rows(row)):
                blocks.append(row)
                if track_provenance:
                    provenance.append(Applied(operation.name, ()))
    count = len(row_index)
    _check_size_cap(count, size_cap, description)

    operations = [operation for operation in algebra.operations if operation.arity > 0]
    start = 0
    rounds = 0
    while True:
        elements = np.concatenate(blocks) if len(blocks) > 1 else blocks[0]
        blocks = [elements]
        end = len(elements)
        if start == end:
            break
        rounds += 1
        for operation in operations:
            arity = operation.arity
            chunk = max(1, CHUNK_CELLS // max(width * arity, 1))
            for position in range(arity):
                sizes = [start] * position + [end - start] + [end] * (arity - position - 1)
                if 0 in sizes:
                    continue
                offsets = [0] * position + [start] + [0] * (arity - position - 1)
                for combo in _product_chunks(sizes, offsets, chunk):
                    results = operation.table[tuple(elements[index] for index in combo)]
                    fresh = row_index.add_rows(results)
                    if not len(fresh):
                        continue
                    blocks.append(results[fresh])
                    if track_provenance:
                        provenance.extend(
                            Applied(operation.name, tuple(int(index[f]) for index in combo))
                            for f in fresh
                        )
                    count += len(fresh)
                    _check_size_cap(count, size_cap, description)
        start = end
    logger.debug(f"{description}: {len(elements)} elements after {rounds} rounds")
    elements.setflags(write=False)
    return Subpower(elements=elements, provenance=tuple(provenance), row_index=row_index)


def _check_size_cap(count: int, size_cap: Optional[int], description: str) -> None:
    if size_cap is not None and count > size_cap:
        logger.debug(f"{description}: size cap {size_cap} hit")
        raise CapacityExceededError(
            f"{description} exceeded the size cap of {size_cap} elements "
            f"(at least {count} generated). Raise the cap with --size-cap or MALCEV_CAP.",
            partial_count=count,
        )


def _check_pairs(algebra: FiniteAlgebra, pairs: Iterable[Tuple[int, int]]) -> np.ndarray:
    pairs = np.array([(int(a), int(b)) for a, b in pairs], dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= algebra.size):
        raise ValueError(
            f"Pairs must lie in 0..{algebra.size - 1} for algebra '{algebra.name}'."
        )
    return pairs


def is_compatible(algebra: FiniteAlgebra, relation: BinRel) -> bool:
    """True iff the relation is a subuniverse of A x A."""
    if algebra.size != relation.size:
        raise ValueError(
            f"Relation on {relation.size} elements checked against "
            f"algebra '{algebra.name}' of size {algebra.size}."
        )
    pairs = np.argwhere(relation.matrix)
    for operation in algebra.operations:
        arity = operation.arity
        if arity == 0:
            constant = operation.table[()]
            if not relation.matrix[constant, constant]:
                return False
            continue
        if not len(pairs):
            continue
        chunk = max(1, CHUNK_CELLS // arity)
        for combo in _product_chunks([len(pairs)] * arity, [0] * arity, chunk):
            left = operation.table[tuple(pairs[index, 0] for index in combo)]
            right = operation.table[tuple(pairs[index, 1] for index in combo)]
            if not relation.matrix[left, right].all():
                return False
    return True


def crg(
    algebra: FiniteAlgebra,
    pairs: Iterable[Tuple[int, int]],
    size_cap: Optional[int] = None,
) -> BinRel:
    """Least reflexive compatible relation containing the pairs."""
    pairs = _check_pairs(algebra, pairs)
    diagonal = np.repeat(np.arange(algebra.size, dtype=np.int64)[:, None], 2, axis=1)
    if not len(pairs):
        return BinRel.identity(algebra.size)
    closure = subpower(
        algebra,
        np.concatenate([diagonal, pairs]),
        size_cap=size_cap,
        description=f"Crg in {algebra.name}^2",
    )
    matrix = np.zeros((algebra.size, algebra.size), dtype=bool)
    matrix[closure.elements[:, 0], closure.elements[:, 1]] = True
    return BinRel(matrix)


def basic_translations(algebra: FiniteAlgebra) -> np.ndarray:
    """All maps x -> f(c1, .., x, .., ck) as rows of a (count, size) array."""
    rows = [np.arange(algebra.size, dtype=np.int64)[None, :]]
    for operation in algebra.operations:
        for position in range(operation.arity):
            rows.append(
                np.moveaxis(operation.table, position, -1).reshape(-1, algebra.size)
            )
    return np.unique(np.concatenate(rows), axis=0)


def cg(algebra: FiniteAlgebra, pairs: Iterable[Tuple[int, int]]) -> BinRel:
    """Least congruence containing the pairs.

    Union-find over the universe: each merging pair pushes its images under
    every basic translation, which closes the equivalence under unary polynomials.
    """
    pairs = _check_pairs(algebra, pairs)
    labels = np.arange(algebra.size)
    translations = basic_translations(algebra)
    pending = [(pairs[:, 0], pairs[:, 1])]
    merges = 0
    while pending:
        sources, targets = pending.pop()
        differing = labels[sources] != labels[targets]
        for x, y in zip(sources[differing].tolist(), targets[differing].tolist()):
            low, high = sorted((labels[x], labels[y]))
            if low == high:
                continue
            labels[labels == high] = low
            merges += 1
            pending.append((translations[:, x], translations[:, y]))
    logger.debug(f"Cg in {algebra.name}: {merges} merges")
    return BinRel(labels[:, None] == labels[None, :])


def eqv(
    pairs: Iterable[Tuple[int, int]], domain: Union[int, Iterable[int]]
) -> VertexPartition:
    """Equivalence generated by the pairs on `domain` (an int m means 1..m)."""
    elements = range(1, domain + 1) if isinstance(domain, int) else list(domain)
    disjoint_set: DisjointSet[int] = DisjointSet(elements)
    for a, b in pairs:
        if a not in disjoint_set.parent or b not in disjoint_set.parent:
            raise ValueError(f"Pair ({a}, {b}) is outside the domain.")
        disjoint_set.union(a, b)
    return VertexPartition.from_disjoint_set(disjoint_set)


def enumerate_crr(
    algebra: FiniteAlgebra, bound: int = DEFAULT_ENUMERATION_BOUND
) -> Iterator[BinRel]:
    """All compatible reflexive relations, in increasing order of off-diagonal bitmask."""
    n = algebra.size
    free_bits = n * n - n
    if free_bits > bound:
        raise EnumerationBoundError(
            f"Algebra '{algebra.name}' has 2^{free_bits} reflexive relations, above the "
            f"enumeration bound 2^{bound}. Use a variety-level check instead.",
            partial_count=0,
        )
    off_diagonal = [(a, b) for a in range(n) for b in range(n) if a != b]

    def generate() -> Iterator[BinRel]:
        for mask in range(1 << free_bits):
            matrix = np.eye(n, dtype=bool)
            for bit, (a, b) in enumerate(off_diagonal):
                if mask >> bit & 1:
                    matrix[a, b] = True
            relation = BinRel(matrix)
            if is_compatible(algebra, relation):
                yield relation

    return generate()


def _set_partitions(n: int) -> Iterator[List[int]]:
    """Restricted growth strings of length n, lexicographically."""
    prefix: List[int] = []

    def extend(maximum: int) -> Iterator[List[int]]:
        if len(prefix) == n:
            yield list(prefix)
            return
        for block in range(maximum + 2):
            prefix.append(block)
            yield from extend(max(maximum, block))
            prefix.pop()

    if n == 0:
        yield []
        return
    prefix.append(0)
    yield from extend(0)


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        next_row = [row[-1]]
        for value in row:
            next_row.append(next_row[-1] + value)
        row = next_row
    return row[0]


def enumerate_con(
    algebra: FiniteAlgebra, bound: int = DEFAULT_ENUMERATION_BOUND
) -> Iterator[BinRel]:
    """All congruences, in lexicographic order of their restricted growth strings."""
    n = algebra.size
    candidates = bell_number(n)
    if candidates > 2 ** bound:
        raise EnumerationBoundError(
            f"Algebra '{algebra.name}' has {candidates} equivalence relations, above the "
            f"enumeration bound 2^{bound}. Use a variety-level check instead.",
            partial_count=0,
        )

    def generate() -> Iterator[BinRel]:
        for blocks in _set_partitions(n):
            labels = np.array(blocks)
            relation = BinRel(labels[:, None] == labels[None, :])
            if is_compatible(algebra, relation):
                yield relation

    return generate()


@lru_cache(maxsize=32)
def free_algebra(
    algebra: FiniteAlgebra, m: int, size_cap: int = DEFAULT_SIZE_CAP
) -> FreeAlgebra:
    """The m-generated free algebra of the variety generated by `algebra`."""
    if m < 1:
        raise ValueError(f"free_algebra needs m >= 1, got {m}.")
    width = algebra.size ** m
    if width > DEFAULT_TABLE_CAP:
        raise CapacityExceededError(
            f"{algebra.name}^{m} has {width} points; free algebra elements would not fit.",
            partial_count=0,
        )
    projections = np.indices((algebra.size,) * m).reshape(m, -1)
    closure = subpower(
        algebra,
        projections,
        size_cap=size_cap,
        track_provenance=True,
        description=f"F({m}) of {algebra.name}",
    )
    generator_indices = tuple(closure.index_of(projections[i]) for i in range(m))
    logger.debug(f"F({m}) of {algebra.name} has {len(closure)} elements")
    return FreeAlgebra(
        base=algebra,
        generator_count=m,
        elements=closure.elements,
        provenance=closure.provenance,
        generator_indices=generator_indices,
    )


@lru_cache(maxsize=32)
def index_algebra(
    free: FreeAlgebra, table_cap: int = DEFAULT_TABLE_CAP
) -> FiniteAlgebra:
    """The free algebra as a FiniteAlgebra on element indices 0..|F|-1."""
    size = free.size
    row_index = _RowIndex(free.base.size, free.elements.shape[1])
    row_index.add_rows(free.elements)
    operations = []
    for operation in free.base.operations:
        arity = operation.arity
        if size ** arity > table_cap:
            raise CapacityExceededError(
                f"Operation '{operation.name}' on the {size}-element free algebra needs "
                f"{size ** arity} table cells, above the cap of {table_cap}.",
                partial_count=size,
            )
        if arity == 0:
            row = np.full((1, free.elements.shape[1]), operation.table[()])
            table = row_index.indices(row)[0]
        else:
            table = np.empty(size ** arity, dtype=np.int64)
            chunk = max(1, CHUNK_CELLS // max(free.elements.shape[1] * arity, 1))
            for combo in _product_chunks([size] * arity, [0] * arity, chunk):
                results = operation.table[tuple(free.elements[index] for index in combo)]
                table[np.ravel_multi_index(combo, (size,) * arity)] = row_index.indices(
                    results
                )
            table = table.reshape((size,) * arity)
        operations.append(Operation(name=operation.name, arity=arity, table=table))
    return FiniteAlgebra(
        name=f"F{free.generator_count}({free.base.name})",
        size=size,
        operations=tuple(operations),
    )


def random_algebra(
    rng: random.Random,
    size: int = 2,
    arities: Sequence[int] = (2,),
    name: Optional[str] = None,
) -> FiniteAlgebra:
    """Operations f1, f2, ... with uniformly random tables."""
    operations = []
    for number, arity in enumerate(arities, start=1):
        values = [rng.randrange(size) for _ in range(size ** arity)]
        operations.append(
            Operation(
                name=f"f{number}",
                arity=arity,
                table=np.array(values, dtype=np.int64).reshape((size,) * arity),
            )
        )
    return FiniteAlgebra(
        name=name or f"random{size}", size=size, operations=tuple(operations)
    )
