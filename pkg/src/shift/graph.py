# src/shift/graph.py
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import networkx as nx
from graphviz import Digraph

from src.errors import GraphError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubshiftReport:
    no_isolated_points: bool
    no_empty_cones: bool

    @property
    def ok(self) -> bool:
        return self.no_isolated_points and self.no_empty_cones


@dataclass(frozen=True)
class DirectedGraph:
    """
    Finite directed graph with string ids outside and dense integer ids inside.

    Loops and parallel edges are allowed. Edge order is the order given at
    construction and is the order used for lexicographic sorting of paths.
    """

    node_names: tuple[str, ...]
    edge_names: tuple[str, ...]
    edge_src: tuple[int, ...]
    edge_dst: tuple[int, ...]
    _out: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _node_index: dict = field(init=False, repr=False, compare=False)
    _edge_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.node_names:
            raise GraphError("Graph must have at least one node.")
        if not self.edge_names:
            raise GraphError("Graph must have at least one edge.")
        if len(set(self.node_names)) != len(self.node_names):
            raise GraphError(f"Duplicate node ids: {self.node_names}")
        if len(set(self.edge_names)) != len(self.edge_names):
            raise GraphError(f"Duplicate edge ids: {self.edge_names}")
        n = len(self.node_names)
        for name, s, d in zip(self.edge_names, self.edge_src, self.edge_dst):
            if not (0 <= s < n and 0 <= d < n):
                raise GraphError(f"Edge '{name}' has an endpoint outside the node set.")

        out: list[list[int]] = [[] for _ in range(n)]
        for e, s in enumerate(self.edge_src):
            out[s].append(e)
        object.__setattr__(self, "_out", tuple(tuple(x) for x in out))
        object.__setattr__(self, "_node_index", {v: i for i, v in enumerate(self.node_names)})
        object.__setattr__(self, "_edge_index", {e: i for i, e in enumerate(self.edge_names)})

    def __hash__(self):
        return hash((self.node_names, self.edge_names, self.edge_src, self.edge_dst))

    @classmethod
    def from_spec(cls, nodes: Sequence[str], edges: Iterable[tuple[str, str, str]]) -> "DirectedGraph":
        """Build from node names and ``(edge_id, src, dst)`` triples."""
        index = {v: i for i, v in enumerate(nodes)}
        names, src, dst = [], [], []
        for eid, s, d in edges:
            if s not in index or d not in index:
                raise GraphError(f"Edge '{eid}' refers to unknown node ({s!r} -> {d!r}).")
            names.append(str(eid))
            src.append(index[s])
            dst.append(index[d])
        return cls(tuple(str(v) for v in nodes), tuple(names), tuple(src), tuple(dst))

    # -------------------------
    # lookups
    # -------------------------
    @property
    def n_nodes(self) -> int:
        return len(self.node_names)

    @property
    def n_edges(self) -> int:
        return len(self.edge_names)

    def node(self, name: str) -> int:
        try:
            return self._node_index[name]
        except KeyError:
            raise GraphError(f"Unknown node id: {name!r}") from None

    def edge(self, name: str) -> int:
        try:
            return self._edge_index[name]
        except KeyError:
            raise GraphError(f"Unknown edge id: {name!r}") from None

    def out_edges(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def origin(self, e: int) -> int:
        return self.edge_src[e]

    def terminus(self, e: int) -> int:
        return self.edge_dst[e]

    def max_out_degree(self) -> int:
        return max(len(x) for x in self._out)

    # -------------------------
    # structure
    # -------------------------
    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(range(self.n_nodes))
        for e in range(self.n_edges):
            g.add_edge(self.edge_src[e], self.edge_dst[e], key=e)
        return g

    def subgraph(self, nodes: Iterable[int]) -> "DirectedGraph":
        """Induced subgraph on ``nodes``; ids keep their names."""
        keep = sorted(set(nodes))
        pos = {v: i for i, v in enumerate(keep)}
        names, src, dst = [], [], []
        for e in range(self.n_edges):
            s, d = self.edge_src[e], self.edge_dst[e]
            if s in pos and d in pos:
                names.append(self.edge_names[e])
                src.append(pos[s])
                dst.append(pos[d])
        return DirectedGraph(tuple(self.node_names[v] for v in keep), tuple(names), tuple(src), tuple(dst))

    def successors_closed(self, nodes: Iterable[int]) -> bool:
        s = set(nodes)
        return all(self.edge_dst[e] in s for v in s for e in self._out[v])

    def longest_noncore_path(self, core: Iterable[int]) -> int:
        """
        Smallest N such that every directed path of length N ends in ``core``.

        ``core`` must be successor-closed and contain every cycle.
        """
        core = set(core)
        rest = [v for v in range(self.n_nodes) if v not in core]
        if not rest:
            return 0
        dag = nx.DiGraph()
        dag.add_nodes_from(rest)
        for e in range(self.n_edges):
            s, d = self.edge_src[e], self.edge_dst[e]
            if s not in core and d not in core:
                dag.add_edge(s, d)
        if not nx.is_directed_acyclic_graph(dag):
            raise GraphError("Nodes outside the core carry a cycle.")
        return nx.dag_longest_path_length(dag) + 1

    def to_dot(self, core: Optional[Iterable[int]] = None, name: str = "G") -> str:
        core = set(core or ())
        g = Digraph(name, graph_attr=dict(rankdir="LR"), node_attr=dict(fontname="Monospace", fontsize="10"))
        for v, label in enumerate(self.node_names):
            g.node(str(v), label=label, shape="doublecircle" if v in core else "circle")
        for e, label in enumerate(self.edge_names):
            g.edge(str(self.edge_src[e]), str(self.edge_dst[e]), label=label)
        return g.source


# ==========================================================
# Subshift checks and cores
# ==========================================================
def check_subshift(graph: DirectedGraph) -> SubshiftReport:
    no_empty = all(graph.out_edges(v) for v in range(graph.n_nodes))

    g = graph.to_networkx()
    branching = {v for v in range(graph.n_nodes) if len(graph.out_edges(v)) >= 2}
    # every node must reach a branching node (possibly itself)
    reaches = set(branching)
    for b in branching:
        reaches |= nx.ancestors(g, b)
    no_isolated = len(reaches) == graph.n_nodes
    return SubshiftReport(no_isolated_points=no_isolated, no_empty_cones=no_empty)


def _is_cycle(graph: DirectedGraph, nodes: set[int]) -> bool:
    inner = [e for e in range(graph.n_edges) if graph.edge_src[e] in nodes and graph.edge_dst[e] in nodes]
    return len(inner) == len(nodes)


def irreducible(graph: DirectedGraph) -> bool:
    if not nx.is_strongly_connected(graph.to_networkx()):
        return False
    return graph.n_edges != graph.n_nodes


def core_nodes(graph: DirectedGraph) -> Optional[frozenset[int]]:
    """Node set of the irreducible core, or None when there is none."""
    report = check_subshift(graph)
    if not report.ok:
        raise GraphError(
            f"Subshift precondition violated: no_isolated_points={report.no_isolated_points}, "
            f"no_empty_cones={report.no_empty_cones}"
        )

    simple = nx.DiGraph(graph.to_networkx())
    cond = nx.condensation(simple)
    cyclic = []
    for c in cond.nodes:
        members = cond.nodes[c]["members"]
        if len(members) > 1 or any(simple.has_edge(v, v) for v in members):
            cyclic.append(c)

    if len(cyclic) != 1:
        logger.debug("No irreducible core: %d cyclic components", len(cyclic))
        return None
    c = cyclic[0]
    if cond.out_degree(c) != 0:
        logger.debug("No irreducible core: cyclic component is not terminal")
        return None
    members = set(cond.nodes[c]["members"])
    if _is_cycle(graph, members):
        logger.debug("No irreducible core: the cyclic component is a directed cycle")
        return None
    return frozenset(members)


def irreducible_core(graph: DirectedGraph) -> Optional[DirectedGraph]:
    nodes = core_nodes(graph)
    if nodes is None:
        return None
    return graph.subgraph(nodes)
