# src/shift/paths.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

from src.errors import PathError
from src.shift.graph import DirectedGraph


@dataclass(frozen=True, order=False)
class Path:
    """
    A finite path in a directed graph.

    Three kinds share one representation:

    - the null path: ``origin is None`` (its cone is the whole edge shift),
    - a node path ``v``: ``edges == ()`` and ``origin == terminus == v``,
    - an edge path: nonempty ``edges`` with ``t(e_i) = o(e_{i+1})``.

    Paths are built through :func:`make_path` / :meth:`node_path` so the
    adjacency condition is checked once; afterwards they are plain values.
    """

    origin: Optional[int]
    edges: tuple[int, ...]
    terminus: Optional[int]

    # -------------------------
    # constructors
    # -------------------------
    @staticmethod
    def null() -> "Path":
        return NULL

    @staticmethod
    def node_path(v: int) -> "Path":
        return Path(v, (), v)

    # -------------------------
    # kind
    # -------------------------
    @property
    def is_null(self) -> bool:
        return self.origin is None

    @property
    def is_node(self) -> bool:
        return self.origin is not None and not self.edges

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def sort_key(self) -> tuple:
        return (-1 if self.origin is None else self.origin, self.edges)

    def __lt__(self, other: "Path") -> bool:
        return self.sort_key < other.sort_key

    # -------------------------
    # algebra
    # -------------------------
    def concat(self, other: "Path") -> "Path":
        if self.is_null:
            return other
        if other.is_null:
            return self
        if other.origin != self.terminus:
            raise PathError(f"Cannot concatenate: terminus {self.terminus} != origin {other.origin}.")
        if not other.edges:
            return self
        if not self.edges:
            return other
        return Path(self.origin, self.edges + other.edges, other.terminus)

    __mul__ = concat

    def is_prefix_of(self, other: "Path") -> bool:
        """True iff the cone of ``other`` is contained in the cone of ``self``."""
        if self.is_null:
            return True
        if other.is_null or other.origin != self.origin:
            return False
        return other.edges[: len(self.edges)] == self.edges

    def comparable(self, other: "Path") -> bool:
        return self.is_prefix_of(other) or other.is_prefix_of(self)

    def strip(self, path: "Path") -> "Path":
        """The remainder ``r`` with ``self.concat(r) == path``."""
        if not self.is_prefix_of(path):
            raise PathError(f"{self} is not a prefix of {path}.")
        if self.is_null:
            return path
        rest = path.edges[len(self.edges):]
        if not rest:
            return Path.node_path(self.terminus)
        return Path(self.terminus, rest, path.terminus)

    def truncate(self, graph: DirectedGraph, k: int) -> "Path":
        if self.is_null:
            return self
        if k <= 0:
            return Path.node_path(self.origin)
        if k >= len(self.edges):
            return self
        return Path(self.origin, self.edges[:k], graph.terminus(self.edges[k - 1]))

    def __repr__(self) -> str:
        if self.is_null:
            return "Path(∅)"
        if not self.edges:
            return f"Path(node={self.origin})"
        return f"Path({'.'.join(map(str, self.edges))})"


NULL = Path(None, (), None)


def make_path(graph: DirectedGraph, edges: Sequence[int]) -> Path:
    edges = tuple(edges)
    if not edges:
        raise PathError("Use Path.node_path or Path.null for edgeless paths.")
    for a, b in zip(edges, edges[1:]):
        if graph.terminus(a) != graph.origin(b):
            raise PathError(
                f"Edges {graph.edge_names[a]!r} and {graph.edge_names[b]!r} are not adjacent."
            )
    return Path(graph.origin(edges[0]), edges, graph.terminus(edges[-1]))


def gcp(graph: DirectedGraph, a: Path, b: Path) -> Path:
    """Greatest common prefix of two paths."""
    if a.is_null or b.is_null or a.origin != b.origin:
        return NULL
    k = 0
    for x, y in zip(a.edges, b.edges):
        if x != y:
            break
        k += 1
    return a.truncate(graph, k)


def gcp_all(graph: DirectedGraph, paths: Iterable[Path]) -> Path:
    it = iter(paths)
    try:
        acc = next(it)
    except StopIteration:
        raise PathError("gcp of an empty family is undefined.") from None
    for p in it:
        acc = gcp(graph, acc, p)
        if acc.is_null:
            break
    return acc


def extend(graph: DirectedGraph, path: Path, e: int) -> Path:
    """``path`` followed by edge ``e``; ``path`` must not be null."""
    if path.is_null:
        raise PathError("Cannot extend the null path by an edge.")
    if graph.origin(e) != path.terminus:
        raise PathError(f"Edge {graph.edge_names[e]!r} does not leave node {path.terminus}.")
    return Path(path.origin, path.edges + (e,), graph.terminus(e))


def children(graph: DirectedGraph, path: Path) -> list[Path]:
    """Paths one step below ``path`` in the cone tree."""
    if path.is_null:
        return [Path.node_path(v) for v in range(graph.n_nodes)]
    return [extend(graph, path, e) for e in graph.out_edges(path.terminus)]


def parent(graph: DirectedGraph, path: Path) -> Optional[Path]:
    if path.is_null:
        return None
    if not path.edges:
        return NULL
    return path.truncate(graph, len(path.edges) - 1)


def descendants(graph: DirectedGraph, path: Path, depth: int) -> list[Path]:
    """All paths exactly ``depth`` levels below ``path``."""
    layer = [path]
    for _ in range(depth):
        layer = [c for p in layer for c in children(graph, p)]
    return layer


def paths_from(graph: DirectedGraph, v: int, length: int) -> Iterator[Path]:
    """Edge paths of the given length starting at ``v`` (node path when 0)."""
    yield from descendants(graph, Path.node_path(v), length)


# ==========================================================
# JSON-facing conversions (string ids)
# ==========================================================
PathJSON = Union[list, dict]


def path_to_json(graph: DirectedGraph, path: Path) -> PathJSON:
    if path.is_null:
        return {"null": True}
    if not path.edges:
        return {"node": graph.node_names[path.origin]}
    return [graph.edge_names[e] for e in path.edges]


def path_from_json(graph: DirectedGraph, obj: PathJSON) -> Path:
    if isinstance(obj, dict):
        if obj.get("null"):
            return NULL
        if "node" in obj:
            return Path.node_path(graph.node(obj["node"]))
        raise PathError(f"Unrecognized path object: {obj!r}")
    if isinstance(obj, (list, tuple)):
        if not obj:
            raise PathError("Empty edge list; use {'null': true} or {'node': v}.")
        return make_path(graph, [graph.edge(e) for e in obj])
    raise PathError(f"Unrecognized path value: {obj!r}")


def format_path(graph: DirectedGraph, path: Path) -> str:
    if path.is_null:
        return "∅"
    if not path.edges:
        return f"<{graph.node_names[path.origin]}>"
    return ".".join(graph.edge_names[e] for e in path.edges)


def parse_path(graph: DirectedGraph, text: str) -> Path:
    """
    Inverse of :func:`format_path`. ``∅`` or ``null`` is the null path,
    ``<v>`` a node path and ``a.b.c`` an edge path; without dots a known
    edge id is one edge and anything else is read one character per edge.
    """
    text = text.strip()
    if not text:
        raise PathError("Empty path text.")
    if text in ("∅", "null"):
        return NULL
    if text.startswith("<") and text.endswith(">"):
        return Path.node_path(graph.node(text[1:-1]))
    if "." in text:
        ids = text.split(".")
    elif text in graph.edge_names:
        ids = [text]
    else:
        ids = list(text)
    return make_path(graph, [graph.edge(e) for e in ids])
