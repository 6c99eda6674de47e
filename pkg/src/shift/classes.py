# src/shift/classes.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from src.errors import DomainError, GraphError
from src.shift.clopen import ClopenSet
from src.shift.graph import DirectedGraph, irreducible
from src.shift.paths import Path, children

logger = logging.getLogger(__name__)

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """
    Smith normal form over the integers.

    Parameters
    ----------
    matrix : m x n integer matrix (Python ints, arbitrary precision)

    Returns
    -------
    (D, L, R) with ``L @ matrix @ R == D``, L and R unimodular and the
    diagonal of D nonnegative with ``d_1 | d_2 | ...``.
    """
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    left = _identity(m)
    right = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + k * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in right:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            nonzero = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j] != 0]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = a[t][t]

            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue

            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)

        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]

    return a, left, right


@dataclass(frozen=True)
class ClassElement:
    """Coordinates in the Smith basis; entry i is taken modulo ``moduli[i]`` (0 = free)."""

    coords: tuple[int, ...]
    moduli: tuple[int, ...]

    def _new(self, coords: Iterable[int]) -> "ClassElement":
        return ClassElement(
            tuple(c % d if d else c for c, d in zip(coords, self.moduli)),
            self.moduli,
        )

    def _check(self, other: "ClassElement") -> None:
        if self.moduli != other.moduli:
            raise DomainError("Class elements from different groups.")

    def __add__(self, other: "ClassElement") -> "ClassElement":
        self._check(other)
        return self._new(x + y for x, y in zip(self.coords, other.coords))

    def __sub__(self, other: "ClassElement") -> "ClassElement":
        self._check(other)
        return self._new(x - y for x, y in zip(self.coords, other.coords))

    def __neg__(self) -> "ClassElement":
        return self._new(-x for x in self.coords)

    def __rmul__(self, k: int) -> "ClassElement":
        return self._new(k * x for x in self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class ClassesGroup:
    generators: tuple[str, ...]
    relations: tuple[tuple[int, ...], ...]
    diagonal: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    @property
    def invariants(self) -> tuple[int, ...]:
        """Invariant factors, zeros included, padded to the number of generators."""
        n = len(self.generators)
        return self.diagonal + (0,) * (n - len(self.diagonal))

    @property
    def kept(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.invariants) if d != 1)

    @property
    def moduli(self) -> tuple[int, ...]:
        inv = self.invariants
        return tuple(inv[i] for i in self.kept)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.moduli if d == 0)

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.moduli if d] + ["Z"] * self.rank
        return " + ".join(parts) if parts else "0"

    def verify(self) -> bool:
        """Recompute L·M·R and compare with the stored diagonal."""
        prod = matmul(matmul(self.left, self.relations), self.right)
        for i, row in enumerate(prod):
            for j, x in enumerate(row):
                want = self.diagonal[i] if i == j and i < len(self.diagonal) else 0
                if x != want:
                    return False
        return True

    def zero(self) -> ClassElement:
        return ClassElement((0,) * len(self.kept), self.moduli)

    def element(self, vector: Sequence[int]) -> ClassElement:
        """Class of ``sum vector[i] * [generator i]``."""
        if len(vector) != len(self.generators):
            raise DomainError(f"Expected {len(self.generators)} coordinates, got {len(vector)}.")
        y = [sum(vector[k] * self.right[k][j] for k in range(len(vector))) for j in range(len(self.generators))]
        return ClassElement((), ()) if not self.kept else self.zero()._new(y[i] for i in self.kept)

    def node_class(self, name: str) -> ClassElement:
        vec = [0] * len(self.generators)
        try:
            vec[self.generators.index(name)] = 1
        except ValueError:
            raise DomainError(f"Node {name!r} is not a generator of this classes group.") from None
        return self.element(vec)


def _relations(graph: DirectedGraph, nodes: Sequence[int]) -> list[list[int]]:
    pos = {v: i for i, v in enumerate(nodes)}
    rows = []
    for v in nodes:
        row = [0] * len(nodes)
        row[pos[v]] += 1
        for e in graph.out_edges(v):
            row[pos[graph.terminus(e)]] -= 1
        rows.append(row)
    return rows


def _group(graph: DirectedGraph, nodes: Sequence[int]) -> ClassesGroup:
    rel = _relations(graph, nodes)
    d, left, right = smith_normal_form(rel)
    diag = tuple(d[i][i] for i in range(min(len(d), len(d[0]))))
    group = ClassesGroup(
        generators=tuple(graph.node_names[v] for v in nodes),
        relations=tuple(map(tuple, rel)),
        diagonal=diag,
        left=tuple(map(tuple, left)),
        right=tuple(map(tuple, right)),
    )
    logger.debug("Classes group on %d generators: %s", len(nodes), group.describe())
    return group


def classes_group(core: DirectedGraph) -> ClassesGroup:
    """Classes group of an irreducible graph, one relation ``[v] = sum [t(e)]`` per node."""
    if not irreducible(core):
        raise GraphError("classes_group needs an irreducible graph.")
    return _group(core, list(range(core.n_nodes)))


def relative_classes_group(graph: DirectedGraph, nodes: Iterable[int]) -> ClassesGroup:
    """
    Same presentation restricted to a successor-closed node set.

    Used where an ambient set never reaches an irreducible core.
    """
    nodes = sorted(set(nodes))
    if not graph.successors_closed(nodes):
        raise GraphError("relative_classes_group needs a successor-closed node set.")
    return _group(graph, nodes)


def class_of(clopen: ClopenSet, group: ClassesGroup, max_depth: int | None = None) -> ClassElement:
    """
    Class of a clopen set: the sum of node classes over its minimal code,
    after expanding paths whose terminus lies outside the group's generators.
    """
    if clopen.is_empty():
        raise DomainError("class_of needs a nonempty clopen set.")
    graph = clopen.graph
    names = graph.node_names
    gens = set(group.generators)
    limit = graph.n_nodes + 1 if max_depth is None else max_depth

    vec = [0] * len(group.generators)
    frontier: list[tuple[Path, int]] = [(p, 0) for p in clopen.paths]
    while frontier:
        p, depth = frontier.pop()
        if not p.is_null and names[p.terminus] in gens:
            vec[group.generators.index(names[p.terminus])] += 1
            continue
        if depth > limit:
            raise DomainError(f"Path {p} does not reach the generator nodes within {limit} steps.")
        frontier.extend((c, depth + 1) for c in children(graph, p))
    return group.element(vec)
