# src/transducer/catalog.py
"""
Named graphs and machines used by the demos and the test-suite.

Machines are written as small tables::

    {"f": ("v", "v", {"0": ("0", "f"), "1": ("02", "1"), "2": ("1", "1")}),
     "1": ("v", "v", {"0": ("0", "1"), "1": ("1", "1"), "2": ("2", "1")})}

mapping a state name to (node, target, {edge: (output edges, next state)}).
Output strings are split into edge ids one character at a time unless they
are given as lists.
"""
from __future__ import annotations

from typing import Mapping, Sequence, Union

from src.errors import DomainError
from src.shift.graph import DirectedGraph
from src.shift.paths import Path, make_path
from src.transducer.nucleus import NucleusSet
from src.transducer.state import RawMachine, StateMap, canonicalize

Output = Union[str, Sequence[str]]
Table = Mapping[str, tuple[str, str, Mapping[str, tuple[Output, str]]]]


# ==========================================================
# Graphs
# ==========================================================
def full_shift(n: int, node: str = "v") -> DirectedGraph:
    """Single node with ``n`` loops named ``"0"``, ``"1"``, ..."""
    return DirectedGraph.from_spec([node], [(str(i), node, node) for i in range(n)])


def two_node_graph() -> DirectedGraph:
    """Nodes v, w; two loops at each and one edge each way."""
    return DirectedGraph.from_spec(
        ["v", "w"],
        [("a", "v", "v"), ("b", "v", "v"), ("x", "v", "w"),
         ("c", "w", "w"), ("d", "w", "w"), ("y", "w", "v")],
    )


def houghton_graph(n: int) -> DirectedGraph:
    """Node u with a loop, nodes v1..vn each with a loop and an edge to u."""
    nodes = ["u"] + [f"v{i}" for i in range(1, n + 1)]
    edges = [("l0", "u", "u")]
    for i in range(1, n + 1):
        edges += [(f"l{i}", f"v{i}", f"v{i}"), (f"e{i}", f"v{i}", "u")]
    return DirectedGraph.from_spec(nodes, edges)


def counterexample_graph() -> DirectedGraph:
    """Node v with loop a, node w with loops b1, b2, b3, and an edge x from v to w."""
    return DirectedGraph.from_spec(
        ["v", "w"],
        [("a", "v", "v"), ("x", "v", "w"), ("b1", "w", "w"), ("b2", "w", "w"), ("b3", "w", "w")],
    )


def cycle_graph(k: int) -> DirectedGraph:
    return DirectedGraph.from_spec(
        [f"c{i}" for i in range(k)], [(f"s{i}", f"c{i}", f"c{(i + 1) % k}") for i in range(k)]
    )


def complete_minus_self(k: int) -> DirectedGraph:
    """k nodes, each with one edge to every other node."""
    nodes = [f"n{i}" for i in range(k)]
    edges = [(f"e{i}{j}", nodes[i], nodes[j]) for i in range(k) for j in range(k) if i != j]
    return DirectedGraph.from_spec(nodes, edges)


# ==========================================================
# Machines
# ==========================================================
def _output(graph: DirectedGraph, spec: Output, target: int) -> Path:
    ids = list(spec) if isinstance(spec, str) else list(spec)
    if not ids:
        return Path.node_path(target)
    return make_path(graph, [graph.edge(e) for e in ids])


def machine(graph: DirectedGraph, table: Table, root: str) -> tuple[Path, StateMap]:
    """Build and canonicalize a machine from a table; returns (prefix, state)."""
    raw = RawMachine(graph)
    index = {}
    for name, (node, target, _) in table.items():
        index[name] = raw.add_state(graph.node(node), graph.node(target))
    for name, (_, target, row) in table.items():
        for edge, (out, nxt) in row.items():
            raw.set_transition(index[name], graph.edge(edge), _output(graph, out, graph.node(target)), index[nxt])
    return canonicalize(raw, index[root])


def state(graph: DirectedGraph, table: Table, root: str) -> StateMap:
    prefix, sm = machine(graph, table, root)
    if prefix.edges:
        raise DomainError(f"State {root!r} has a nonempty common output prefix {prefix}.")
    return sm


def _identity_row(edges: Sequence[str]) -> dict:
    return {e: (e, "1") for e in edges}


def ternary_f() -> StateMap:
    """f(0ω) = 0 f(ω), f(1ω) = 02 ω, f(2ω) = 1 ω on the full 3-shift."""
    g = full_shift(3)
    table = {
        "f": ("v", "v", {"0": ("0", "f"), "1": ("02", "1"), "2": ("1", "1")}),
        "1": ("v", "v", _identity_row("012")),
    }
    return state(g, table, "f")


def binary_f() -> StateMap:
    """f(0ω) = 0 f(ω), f(10ω) = 011 ω, f(11ω) = 10 ω on the full 2-shift."""
    g = full_shift(2)
    table = {
        "f": ("v", "v", {"0": ("0", "f"), "1": ("", "s")}),
        "s": ("v", "v", {"0": ("011", "1"), "1": ("10", "1")}),
        "1": ("v", "v", _identity_row("01")),
    }
    return state(g, table, "f")


def wreath_pair() -> tuple[StateMap, StateMap]:
    """g = (0 1)(h, h), h = (g, g) on the full 2-shift."""
    g2 = full_shift(2)
    table = {
        "g": ("v", "v", {"0": ("1", "h"), "1": ("0", "h")}),
        "h": ("v", "v", {"0": ("0", "g"), "1": ("1", "g")}),
    }
    return state(g2, table, "g"), state(g2, table, "h")


def ternary_nucleus() -> NucleusSet:
    f = ternary_f()
    one = StateMap.identity(f.graph, 0)
    return NucleusSet(f.graph, (one, f), {one: "1", f: "f"})


def binary_nucleus(closed: bool = True) -> NucleusSet:
    """
    The binary example. Its restriction at edge 1 is a third state ``s``;
    ``closed=True`` returns the restriction-closed set {1, f, s}.
    """
    f = binary_f()
    one = StateMap.identity(f.graph, 0)
    labels = {one: "1", f: "f"}
    base = NucleusSet(f.graph, (one, f), labels)
    if not closed:
        return base
    full = base.closure()
    s = f.step(f.graph.edge("1"))[1]
    full.labels[s] = "s"
    return full


def wreath_nucleus() -> NucleusSet:
    g, h = wreath_pair()
    return NucleusSet(g.graph, (g, h), {g: "g", h: "h"})


def identity_nucleus(graph: DirectedGraph) -> NucleusSet:
    ids = [StateMap.identity(graph, v) for v in range(graph.n_nodes)]
    return NucleusSet(graph, tuple(ids))
