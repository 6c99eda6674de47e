# src/thompson/flexibility.py
"""
Constructive flexibility: realizing class equalities by prefix exchanges.

Two clopen sets are exchanged by a Thompson-like map exactly when they have
codes with the same multiset of termini. The class of a set in the classes
group is an obstruction to this; when classes agree, the codes are searched
breadth-first over terminus-count vectors.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import networkx as nx

from src.errors import BudgetExceeded, ClassObstruction, DomainError, GraphError
from src.shift.classes import ClassesGroup, class_of, relative_classes_group
from src.shift.clopen import ClopenSet
from src.shift.graph import DirectedGraph, core_nodes
from src.shift.paths import Path, children, descendants, make_path
from src.thompson.velement import Pair, VElement, v_compose, v_invert

logger = logging.getLogger(__name__)

Counts = tuple[int, ...]


# ==========================================================
# class comparison
# ==========================================================
def comparison_group(graph: DirectedGraph, *sets: ClopenSet) -> ClassesGroup:
    """Classes group on the nodes reachable from the termini of the given sets."""
    g = graph.to_networkx()
    nodes: set[int] = set()
    for s in sets:
        for p in s.expanded():
            nodes.add(p.terminus)
            nodes |= nx.descendants(g, p.terminus)
    if not nodes:
        raise DomainError("comparison_group needs a nonempty set.")
    return relative_classes_group(graph, nodes)


def check_same_class(a: ClopenSet, b: ClopenSet, group: Optional[ClassesGroup] = None) -> ClassesGroup:
    """
    Raises
    ------
    ClassObstruction
        If the classes of ``a`` and ``b`` differ (or exactly one is empty).
    """
    if a.is_empty() or b.is_empty():
        if a.is_empty() != b.is_empty():
            raise ClassObstruction("empty" if a.is_empty() else "nonempty", "empty" if b.is_empty() else "nonempty")
        return group
    group = group or comparison_group(a.graph, a, b)
    ca, cb = class_of(a, group), class_of(b, group)
    if ca != cb:
        raise ClassObstruction(ca, cb, f"in {group.describe()}")
    return group


# ==========================================================
# code search
# ==========================================================
def _counts(graph: DirectedGraph, paths: Iterable[Path]) -> Counts:
    c = [0] * graph.n_nodes
    for p in paths:
        c[p.terminus] += 1
    return tuple(c)


def _successors(graph: DirectedGraph, counts: Counts) -> list[tuple[Counts, int]]:
    out = []
    for v, k in enumerate(counts):
        if not k:
            continue
        c = list(counts)
        c[v] -= 1
        for e in graph.out_edges(v):
            c[graph.terminus(e)] += 1
        out.append((tuple(c), v))
    return out


def _grow(graph: DirectedGraph, frontier: list[Counts], seen: dict, budget: int) -> list[Counts]:
    nxt = []
    for c in frontier:
        for d, v in _successors(graph, c):
            if d not in seen:
                seen[d] = (c, v)
                nxt.append(d)
                if len(seen) > budget:
                    raise BudgetExceeded("code-search", budget, growth=[len(seen)])
    return nxt


def _steps(seen: dict, end: Counts) -> list[int]:
    steps = []
    while seen[end] is not None:
        prev, v = seen[end]
        steps.append(v)
        end = prev
    return steps[::-1]


def _realize(graph: DirectedGraph, code: list[Path], steps: Sequence[int]) -> list[Path]:
    code = sorted(code)
    for v in steps:
        pick = next(p for p in code if p.terminus == v)
        code.remove(pick)
        code = sorted(code + children(graph, pick))
    return code


def _pair_by_terminus(a_code: list[Path], b_code: list[Path]) -> list[Pair]:
    pairs = []
    for v in sorted({p.terminus for p in a_code}):
        xs = [p for p in a_code if p.terminus == v]
        ys = [p for p in b_code if p.terminus == v]
        pairs.extend(zip(xs, ys))
    return pairs


def match_clopen(a: ClopenSet, b: ClopenSet, depth_limit: int = 12, budget: int = 10_000) -> list[Pair]:
    """
    Codes of ``a`` and ``b`` with equal termini, paired in sorted order.

    Raises
    ------
    ClassObstruction
        If the classes differ; no prefix exchange exists at any depth.
    BudgetExceeded
        If no matching codes are found within ``depth_limit`` refinements.
    """
    if a.graph != b.graph:
        raise DomainError("match_clopen needs sets over the same graph.")
    if a.is_empty() and b.is_empty():
        return []
    check_same_class(a, b)
    graph = a.graph
    a0, b0 = list(a.expanded()), list(b.expanded())
    ca, cb = _counts(graph, a0), _counts(graph, b0)
    seen_a: dict = {ca: None}
    seen_b: dict = {cb: None}
    front_a, front_b = [ca], [cb]
    for depth in range(depth_limit + 1):
        common = sorted(set(seen_a) & set(seen_b), key=lambda c: (sum(c), c))
        if common:
            end = common[0]
            code_a = _realize(graph, a0, _steps(seen_a, end))
            code_b = _realize(graph, b0, _steps(seen_b, end))
            logger.debug("match_clopen: matched %d cones after %d rounds", len(code_a), depth)
            return _pair_by_terminus(code_a, code_b)
        front_a = _grow(graph, front_a, seen_a, budget)
        front_b = _grow(graph, front_b, seen_b, budget)
    raise BudgetExceeded("depth", depth_limit, detail="Classes agree but no matching codes were found.")


# ==========================================================
# mapping cones
# ==========================================================
def map_cones_v(
    graph: DirectedGraph,
    pairs: Sequence[Pair],
    ambient: Optional[ClopenSet] = None,
    depth_limit: int = 12,
    budget: int = 10_000,
) -> VElement:
    """
    An element of the Thompson group of ``ambient`` mapping each cone of
    ``alpha_i`` onto the cone of ``beta_i`` by the canonical similarity.

    Raises
    ------
    ClassObstruction
        If the complements have different classes (definitive).
    BudgetExceeded
        If the search runs past ``depth_limit`` (inconclusive).
    """
    ambient = ClopenSet.everything(graph) if ambient is None else ambient
    alphas = [a for a, _ in pairs]
    betas = [b for _, b in pairs]
    for a, b in pairs:
        if a.terminus != b.terminus:
            raise DomainError(f"Cones {a} and {b} end at different nodes.")
        if not (ambient.contains_path(a) and ambient.contains_path(b)):
            raise DomainError(f"Cones {a} and {b} must lie inside the ambient set.")
    for i, a in enumerate(alphas):
        if any(a.comparable(c) for c in alphas[i + 1:]):
            raise DomainError("Source cones must be pairwise disjoint.")
    for i, b in enumerate(betas):
        if any(b.comparable(c) for c in betas[i + 1:]):
            raise DomainError("Target cones must be pairwise disjoint.")
    if all(a == b for a, b in pairs):
        return VElement.identity(graph, ambient)

    rest_a = ambient - ClopenSet.of(graph, alphas)
    rest_b = ambient - ClopenSet.of(graph, betas)
    rest = match_clopen(rest_a, rest_b, depth_limit, budget)
    logger.info("map_cones_v: %d requested cones, %d complementary cones", len(pairs), len(rest))
    return VElement.make(graph, list(pairs) + rest, ambient, ambient)


def exchange(a: ClopenSet, b: ClopenSet, ambient: ClopenSet, depth_limit: int = 12) -> VElement:
    """An element of the Thompson group of ``ambient`` mapping ``a`` onto ``b``."""
    inner = match_clopen(a, b, depth_limit)
    outer = match_clopen(ambient - a, ambient - b, depth_limit)
    return VElement.make(a.graph, inner + outer, ambient, ambient)


# ==========================================================
# pushing into the core
# ==========================================================
@dataclass(frozen=True)
class CorePush:
    """
    A prefix exchange ``h`` from ``source`` onto a clopen set of the core.

    ``target`` is expressed over the ambient graph; :meth:`core_set`
    translates it onto the core subgraph.
    """

    graph: DirectedGraph
    core: frozenset[int]
    reach: int
    source: ClopenSet
    target: ClopenSet
    h: VElement

    @property
    def core_graph(self) -> DirectedGraph:
        return self.graph.subgraph(self.core)

    def conjugate(self, g: VElement) -> VElement:
        """``h g h⁻¹``, an element of the Thompson group of ``target``."""
        return v_compose(self.h, v_compose(g, v_invert(self.h)))

    def in_core(self, g: VElement) -> bool:
        return all(p.origin in self.core for p in g.domain + g.range)

    def translate(self, path: Path) -> Path:
        """The same path over the core subgraph."""
        cg = self.core_graph
        if not path.edges:
            return Path.node_path(cg.node(self.graph.node_names[path.origin]))
        return make_path(cg, [cg.edge(self.graph.edge_names[e]) for e in path.edges])

    def core_set(self) -> ClopenSet:
        return ClopenSet.of(self.core_graph, [self.translate(p) for p in self.target.expanded()])


def _into_core(graph: DirectedGraph, paths: Iterable[Path], core: frozenset[int]) -> list[Path]:
    out, stack = [], list(paths)
    while stack:
        p = stack.pop()
        if p.terminus in core:
            out.append(p)
        else:
            stack.extend(children(graph, p))
    return sorted(out)


def push_into_core(graph: DirectedGraph, clopen: ClopenSet, max_level: int = 32) -> CorePush:
    """
    Map ``clopen`` onto a clopen subset of the core's edge shift.

    Every path of its code is extended until it ends in the core (at most
    ``reach`` steps); the resulting cones are sent to disjoint cones of the
    core with the same termini.

    Raises
    ------
    GraphError
        If the graph has no irreducible core.
    """
    core = core_nodes(graph)
    if core is None:
        raise GraphError("push_into_core needs a graph with an irreducible core.")
    reach = graph.longest_noncore_path(core)
    code = _into_core(graph, clopen.expanded(), core)
    if all(p.origin in core for p in code):
        logger.debug("push_into_core: set already inside the core")
        return CorePush(graph, core, reach, clopen, clopen, VElement.identity(graph, clopen))

    need = _counts(graph, code)
    start = Path.node_path(min(core))
    for level in range(1, max_level + 1):
        layer = sorted(descendants(graph, start, level))
        have = _counts(graph, layer)
        if all(h >= n for h, n in zip(have, need)):
            break
    else:
        raise BudgetExceeded("depth", max_level, detail="Could not place the code inside the core.")
    targets = []
    for v, n in enumerate(need):
        targets.extend([p for p in layer if p.terminus == v][:n])
    pairs = _pair_by_terminus(code, sorted(targets))
    target = ClopenSet.of(graph, targets)
    logger.info("push_into_core: reach %d, %d cones placed at level %d", reach, len(pairs), level)
    return CorePush(graph, core, reach, clopen, target, VElement.make(graph, pairs, clopen, target))
