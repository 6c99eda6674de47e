# src/shift/clopen.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from src.errors import DomainError, PathError
from src.shift.graph import DirectedGraph
from src.shift.paths import NULL, Path, children, descendants, parent


# ==========================================================
# Canonical form
# ==========================================================
def _drop_covered(paths: Iterable[Path]) -> list[Path]:
    """Remove every path that has a (non-strict) prefix elsewhere in the family."""
    uniq = sorted(set(paths))
    kept: list[Path] = []
    for p in uniq:
        if any(q != p and q.is_prefix_of(p) for q in uniq):
            continue
        kept.append(p)
    return kept


def canonical_paths(graph: DirectedGraph, paths: Iterable[Path]) -> tuple[Path, ...]:
    """
    Shortest-paths form of a union of cones.

    Covered paths are dropped, then complete sibling families are merged into
    their parent until nothing changes; the result is sorted.
    """
    current = set(_drop_covered(paths))
    changed = True
    while changed:
        changed = False
        by_parent: dict[Path, set[Path]] = {}
        for p in current:
            par = parent(graph, p)
            if par is not None:
                by_parent.setdefault(par, set()).add(p)
        for par, kids in sorted(by_parent.items(), key=lambda kv: kv[0].sort_key):
            family = children(graph, par)
            if family and all(c in kids for c in family):
                current -= set(family)
                current.add(par)
                changed = True
                break
    return tuple(sorted(current))


# ==========================================================
# Set algebra on path families
# ==========================================================
def _difference(graph: DirectedGraph, a_paths: Sequence[Path], b_paths: Sequence[Path]) -> list[Path]:
    out: list[Path] = []
    stack = list(a_paths)
    while stack:
        a = stack.pop()
        if any(b.is_prefix_of(a) for b in b_paths):
            continue
        if not any(a.is_prefix_of(b) for b in b_paths):
            out.append(a)
            continue
        stack.extend(children(graph, a))
    return out


@dataclass(frozen=True)
class ClopenSet:
    """
    A finite union of cones, stored in canonical form.

    Two ClopenSets over the same graph are equal as sets iff their ``paths``
    tuples are equal.
    """

    graph: DirectedGraph
    paths: tuple[Path, ...]

    @classmethod
    def of(cls, graph: DirectedGraph, paths: Iterable[Path]) -> "ClopenSet":
        return cls(graph, canonical_paths(graph, paths))

    @classmethod
    def everything(cls, graph: DirectedGraph) -> "ClopenSet":
        return cls(graph, (NULL,))

    @classmethod
    def empty(cls, graph: DirectedGraph) -> "ClopenSet":
        return cls(graph, ())

    @classmethod
    def cone(cls, graph: DirectedGraph, path: Path) -> "ClopenSet":
        return cls.of(graph, [path])

    def _same_graph(self, other: "ClopenSet") -> None:
        if self.graph != other.graph:
            raise DomainError("Clopen sets live over different graphs.")

    def is_empty(self) -> bool:
        return not self.paths

    def union(self, other: "ClopenSet") -> "ClopenSet":
        self._same_graph(other)
        return ClopenSet.of(self.graph, self.paths + other.paths)

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        self._same_graph(other)
        return ClopenSet.of(self.graph, _difference(self.graph, self.paths, other.paths))

    def intersection(self, other: "ClopenSet") -> "ClopenSet":
        return self.difference(self.difference(other))

    __or__ = union
    __sub__ = difference
    __and__ = intersection

    def complement(self, ambient: "ClopenSet") -> "ClopenSet":
        return ambient.difference(self)

    def is_subset(self, other: "ClopenSet") -> bool:
        self._same_graph(other)
        return not _difference(self.graph, self.paths, other.paths)

    def contains_path(self, path: Path) -> bool:
        """True iff the cone of ``path`` lies inside the set."""
        return not _difference(self.graph, [path], self.paths)

    def disjoint(self, other: "ClopenSet") -> bool:
        return self.intersection(other).is_empty()

    def expanded(self) -> tuple[Path, ...]:
        """Minimal code with the null path replaced by node paths."""
        out: list[Path] = []
        for p in self.paths:
            out.extend(children(self.graph, p) if p.is_null else [p])
        return tuple(sorted(out))

    def paths_at_depth(self, depth: int) -> tuple[Path, ...]:
        """The complete code obtained by refining every path ``depth`` levels."""
        return tuple(sorted(q for p in self.expanded() for q in descendants(self.graph, p, depth)))

    def code(self) -> "Code":
        return Code(tuple(self.expanded()), self)


# ==========================================================
# Codes
# ==========================================================
@dataclass(frozen=True)
class Code:
    """A family of paths with pairwise disjoint cones inside ``ambient``."""

    paths: tuple[Path, ...]
    ambient: ClopenSet

    def __post_init__(self):
        ps = self.paths
        for i, p in enumerate(ps):
            for q in ps[i + 1:]:
                if p.comparable(q):
                    raise PathError(f"Code paths {p} and {q} have overlapping cones.")
        if not ClopenSet.of(self.ambient.graph, ps).is_subset(self.ambient):
            raise DomainError("Code is not contained in its ambient set.")

    @property
    def union(self) -> ClopenSet:
        return ClopenSet.of(self.ambient.graph, self.paths)

    @property
    def complete(self) -> bool:
        return self.union == self.ambient

    def refine(self, depth: int = 1) -> "Code":
        g = self.ambient.graph
        return Code(tuple(sorted(q for p in self.paths for q in descendants(g, p, depth))), self.ambient)


def common_refinement(a: Code, b: Code) -> Code:
    """
    Coarsest code refining both ``a`` and ``b``.

    Raises
    ------
    DomainError
        If the codes cover different sets.
    """
    if a.ambient != b.ambient or a.union != b.union:
        raise DomainError("common_refinement needs two codes of the same clopen set.")
    out: set[Path] = set()
    for p in a.paths:
        for q in b.paths:
            if p.is_prefix_of(q):
                out.add(q)
            elif q.is_prefix_of(p):
                out.add(p)
    return Code(tuple(sorted(out)), a.ambient)
