# src/shift/points.py
from __future__ import annotations

from dataclasses import dataclass

from src.errors import PathError
from src.shift.graph import DirectedGraph
from src.shift.paths import Path


def primitive_root(word: tuple[int, ...]) -> tuple[int, ...]:
    """Shortest u with word = u^k (smallest rotation period)."""
    n = len(word)
    doubled = word + word
    for k in range(1, n + 1):
        if n % k == 0 and doubled[k:k + n] == word:
            return word[:k]
    return word


def is_proper_power(word: tuple[int, ...]) -> bool:
    return len(primitive_root(word)) < len(word)


@dataclass(frozen=True)
class RationalPoint:
    """
    The eventually periodic point ``prefix . period^∞``.

    ``prefix`` is a node or edge path, ``period`` a nonempty tuple of edges
    forming a cycle at ``prefix.terminus``. Instances built with
    :meth:`make` are canonical: primitive period and shortest prefix.
    """

    prefix: Path
    period: tuple[int, ...]

    @classmethod
    def make(cls, graph: DirectedGraph, prefix: Path, period: tuple[int, ...]) -> "RationalPoint":
        if prefix.is_null:
            raise PathError("A point needs a starting node.")
        if not period:
            raise PathError("The period of a point must be nonempty.")
        if graph.origin(period[0]) != prefix.terminus or graph.terminus(period[-1]) != prefix.terminus:
            raise PathError("The period must be a cycle at the end of the prefix.")
        for a, b in zip(period, period[1:]):
            if graph.terminus(a) != graph.origin(b):
                raise PathError("The period is not a path.")
        period = primitive_root(tuple(period))
        edges = prefix.edges
        while edges and edges[-1] == period[-1]:
            period = (period[-1],) + period[:-1]
            edges = edges[:-1]
        if edges:
            start = Path(prefix.origin, edges, graph.terminus(edges[-1]))
        else:
            start = Path.node_path(prefix.origin)
        return cls(start, period)

    @property
    def origin(self) -> int:
        return self.prefix.origin

    def truncated(self, graph: DirectedGraph, n: int) -> Path:
        """The path of the first ``n`` edges."""
        edges = list(self.prefix.edges)
        i = 0
        while len(edges) < n:
            edges.append(self.period[i % len(self.period)])
            i += 1
        edges = edges[:n]
        if not edges:
            return Path.node_path(self.prefix.origin)
        return Path(self.prefix.origin, tuple(edges), graph.terminus(edges[-1]))

    def in_cone(self, graph: DirectedGraph, alpha: Path) -> bool:
        if alpha.is_null:
            return True
        return alpha.is_prefix_of(self.truncated(graph, len(alpha)))

    def shifted(self, graph: DirectedGraph, alpha: Path) -> "RationalPoint":
        """The tail ω with ``self = alpha . ω``; ``alpha`` must be a prefix."""
        if not self.in_cone(graph, alpha):
            raise PathError(f"Point does not start with {alpha}.")
        n = len(alpha)
        p = len(self.prefix.edges)
        if n < p:
            tail = self.prefix.edges[n:]
            return RationalPoint.make(graph, Path(graph.origin(tail[0]), tail, graph.terminus(tail[-1])), self.period)
        k = (n - p) % len(self.period)
        period = self.period[k:] + self.period[:k]
        return RationalPoint.make(graph, Path.node_path(graph.origin(period[0])), period)
