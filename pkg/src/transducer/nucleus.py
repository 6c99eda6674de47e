# src/transducer/nucleus.py
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

import networkx as nx
from graphviz import Digraph

from src.errors import BudgetExceeded, WorkbenchError
from src.shift.graph import DirectedGraph, core_nodes
from src.transducer.algebra import compose, invert, is_injective
from src.transducer.rational import RationalMap
from src.transducer.state import StateMap

logger = logging.getLogger(__name__)

AXIOMS = ("MapNuc", "IdNuc", "LocNuc", "RecurNuc", "InvNuc", "ProdNuc")


def _state_graph(machines: Iterable[StateMap]) -> nx.DiGraph:
    g = nx.DiGraph()
    for sm in machines:
        states = sm.states()
        for q, row in enumerate(sm.trans):
            g.add_node(states[q])
            for _, nxt in row:
                g.add_edge(states[q], states[nxt])
    return g


def recurrent_states(machines: Iterable[StateMap]) -> set[StateMap]:
    """States reachable from a state lying on a directed cycle."""
    g = _state_graph(machines)
    on_cycle = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or any(g.has_edge(v, v) for v in comp):
            on_cycle |= comp
    out = set(on_cycle)
    for v in on_cycle:
        out |= nx.descendants(g, v)
    return out


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    passed: bool
    witness: Optional[StateMap] = None
    detail: str = ""


@dataclass
class NucleusSet:
    """
    A finite set of canonical states, optionally labelled, with the verdicts
    of the last axiom check.
    """

    graph: DirectedGraph
    states: tuple[StateMap, ...]
    labels: dict = field(default_factory=dict)
    certificate: dict = field(default_factory=dict)

    def __post_init__(self):
        self.states = tuple(sorted(set(self.states)))

    def __contains__(self, item: StateMap) -> bool:
        return item in set(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def label(self, state: StateMap) -> str:
        if state in self.labels:
            return self.labels[state]
        if state.is_identity():
            return f"1_{self.graph.node_names[state.node]}"
        return f"q{self.states.index(state)}" if state in self else "?"

    def find(self, name: str) -> StateMap:
        for s in self.states:
            if self.label(s) == name:
                return s
        raise KeyError(f"No nucleus state labelled {name!r}.")

    @property
    def certified(self) -> bool:
        return bool(self.certificate) and all(v.passed for v in self.certificate.values())

    def closure(self, budget: int = 10_000) -> "NucleusSet":
        """Smallest superset closed under single-edge restriction."""
        found = set(self.states)
        stack = list(self.states)
        while stack:
            s = stack.pop()
            for t in s.states():
                if t not in found:
                    found.add(t)
                    stack.append(t)
                    if len(found) > budget:
                        raise BudgetExceeded("nucleus-closure", budget)
        return NucleusSet(self.graph, tuple(found), dict(self.labels))


def nucleus_of(f: RationalMap) -> NucleusSet:
    """Local actions of ``f`` that occur infinitely often."""
    return NucleusSet(f.graph, tuple(recurrent_states(f.states)))


def _nucleus_of_state(p: StateMap) -> set[StateMap]:
    return recurrent_states([p])


def verify_nucleus_of_injections(nucleus: NucleusSet, budget: Optional[int] = None) -> dict[str, AxiomVerdict]:
    """
    Check the six closure axioms and store the verdicts on ``nucleus``.

    Each failing axiom carries a witness state. Budget overruns in a
    closure computation fail that axiom only.
    """
    g = nucleus.graph
    members = set(nucleus.states)
    core = core_nodes(g) or frozenset()
    verdicts: dict[str, AxiomVerdict] = {}

    # MapNuc
    bad = next(
        (p for p in nucleus.states
         if p.node not in core or p.target not in core or not is_injective(RationalMap.from_state(p))),
        None,
    )
    verdicts["MapNuc"] = AxiomVerdict("MapNuc", bad is None, bad, "" if bad is None else "not an injection between core cones")

    # IdNuc
    missing = [v for v in sorted(core) if StateMap.identity(g, v) not in members]
    verdicts["IdNuc"] = AxiomVerdict(
        "IdNuc", not missing,
        StateMap.identity(g, missing[0]) if missing else None,
        f"identity missing at {[g.node_names[v] for v in missing]}" if missing else "",
    )

    # LocNuc
    bad = None
    for p in nucleus.states:
        for _, nxt in p.trans[0]:
            r = p.rebased(nxt)
            if r not in members:
                bad = r
                break
        if bad is not None:
            break
    verdicts["LocNuc"] = AxiomVerdict("LocNuc", bad is None, bad, "" if bad is None else "restriction leaves the set")

    # RecurNuc
    recurrent = set()
    for q in nucleus.states:
        recurrent |= _nucleus_of_state(q)
    bad = next((p for p in nucleus.states if p not in recurrent), None)
    verdicts["RecurNuc"] = AxiomVerdict("RecurNuc", bad is None, bad, "" if bad is None else "not recurrent in any member")

    # InvNuc
    verdicts["InvNuc"] = _closure_axiom(
        "InvNuc", members,
        ((p, lambda p=p: invert(RationalMap.from_state(p), budget)) for p in nucleus.states),
    )

    # ProdNuc
    pairs = [(p, q) for p in nucleus.states for q in nucleus.states if q.target == p.node]
    verdicts["ProdNuc"] = _closure_axiom(
        "ProdNuc", members,
        ((p, lambda p=p, q=q: compose(RationalMap.from_state(p), RationalMap.from_state(q), budget)) for p, q in pairs),
    )

    for v in verdicts.values():
        logger.info("%s: %s%s", v.axiom, "PASS" if v.passed else "FAIL", f" ({v.detail})" if v.detail else "")
    nucleus.certificate = verdicts
    return verdicts


def _closure_axiom(name: str, members: set[StateMap], jobs) -> AxiomVerdict:
    for source, build in jobs:
        try:
            produced = nucleus_of(build())
        except WorkbenchError as exc:
            return AxiomVerdict(name, False, source, f"closure computation failed: {exc}")
        outside = [s for s in produced.states if s not in members]
        if outside:
            return AxiomVerdict(name, False, outside[0], "nucleus of the result leaves the set")
    return AxiomVerdict(name, True)


def nucleus_dot(nucleus: NucleusSet, name: str = "nucleus") -> str:
    """State graph of the nucleus; one edge per input edge, labelled ``input/output``."""
    g = nucleus.graph
    dot = Digraph(name, graph_attr=dict(rankdir="LR"), node_attr=dict(fontname="Monospace", fontsize="10"))
    for s in nucleus.states:
        dot.node(nucleus.label(s), shape="doublecircle" if s.is_identity() else "circle")
    for s in nucleus.states:
        for e, (out, nxt) in zip(g.out_edges(s.node), s.trans[0]):
            word = ".".join(g.edge_names[x] for x in out.edges) or "ε"
            dot.edge(nucleus.label(s), nucleus.label(s.rebased(nxt)), label=f"{g.edge_names[e]}/{word}")
    return dot.source
