# src/transducer/state.py
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from src.errors import BudgetExceeded, DegenerateMapError, DomainError
from src.shift.graph import DirectedGraph
from src.shift.paths import NULL, Path, extend, gcp

logger = logging.getLogger(__name__)


def empty_output(target: Optional[int]) -> Path:
    """The empty output at an output position (null when unconstrained)."""
    return NULL if target is None else Path.node_path(target)


# ==========================================================
# Mutable builder
# ==========================================================
@dataclass
class RawMachine:
    """
    Scratch transducer used while building.

    State ``q`` reads edges leaving ``nodes[q]``; ``targets[q]`` is the node
    where its next output starts (None while nothing has been output).
    ``trans[q][e] = (output, next_state)``.
    """

    graph: DirectedGraph
    nodes: list[int] = field(default_factory=list)
    targets: list[Optional[int]] = field(default_factory=list)
    trans: list[dict[int, tuple[Path, int]]] = field(default_factory=list)

    def add_state(self, node: int, target: Optional[int]) -> int:
        self.nodes.append(node)
        self.targets.append(target)
        self.trans.append({})
        return len(self.nodes) - 1

    def set_transition(self, q: int, e: int, out: Path, nxt: int) -> None:
        if self.graph.origin(e) != self.nodes[q]:
            raise DomainError(f"Edge {self.graph.edge_names[e]!r} does not leave the node of state {q}.")
        self.trans[q][e] = (out, nxt)

    def embed(self, sm: "StateMap") -> int:
        """Copy a canonical machine in; returns the index of its root."""
        offset = len(self.nodes)
        for node, target in zip(sm.nodes, sm.targets):
            self.add_state(node, target)
        for q, row in enumerate(sm.trans):
            for e, (out, nxt) in zip(self.graph.out_edges(sm.nodes[q]), row):
                self.trans[offset + q][e] = (out, offset + nxt)
        return offset

    def __len__(self) -> int:
        return len(self.nodes)


def _reachable(raw: RawMachine, root: int) -> list[int]:
    seen = {root}
    order = [root]
    queue = deque([root])
    g = raw.graph
    while queue:
        q = queue.popleft()
        for e in g.out_edges(raw.nodes[q]):
            if e not in raw.trans[q]:
                raise DomainError(f"State {q} has no transition on edge {g.edge_names[e]!r}.")
            nxt = raw.trans[q][e][1]
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return order


def _meet(graph: DirectedGraph, a: tuple[Path, bool], b: tuple[Path, bool]) -> tuple[Path, bool]:
    (pa, oa), (pb, ob) = a, b
    if pa == pb:
        return pa, oa and ob
    if pa.is_prefix_of(pb):
        return (pb, ob) if oa else (pa, False)
    if pb.is_prefix_of(pa):
        return (pa, oa) if ob else (pb, False)
    return gcp(graph, pa, pb), False


def _image_prefixes(raw: RawMachine, states: list[int]) -> dict[int, Path]:
    """Greatest common prefix of every state's image, as a greatest fixpoint."""
    g = raw.graph
    val = {q: (empty_output(raw.targets[q]), True) for q in states}
    n = len(states)
    limit = n * n + 2 * n + 8
    for _ in range(limit):
        new = {}
        for q in states:
            acc = None
            for e in g.out_edges(raw.nodes[q]):
                out, nxt = raw.trans[q][e]
                p, o = val[nxt]
                cand = (out.concat(p), o)
                acc = cand if acc is None else _meet(g, acc, cand)
            new[q] = acc
        if new == val:
            break
        val = new
    open_states = [q for q in states if val[q][1]]
    if open_states:
        raise DegenerateMapError(f"States {open_states} define constant maps.")
    return {q: val[q][0] for q in states}


def _minimize(raw: RawMachine, states: list[int], root: int) -> tuple[dict[int, int], list[int]]:
    """Moore partition refinement; returns state->block and a BFS order of blocks."""
    g = raw.graph
    block = {}
    keys: dict = {}
    for q in states:
        k = (raw.nodes[q], raw.targets[q])
        block[q] = keys.setdefault(k, len(keys))
    n_blocks = len(keys)
    while True:
        keys = {}
        new_block = {}
        for q in states:
            sig = (block[q],) + tuple(
                (raw.trans[q][e][0], block[raw.trans[q][e][1]]) for e in g.out_edges(raw.nodes[q])
            )
            new_block[q] = keys.setdefault(sig, len(keys))
        block = new_block
        if len(keys) == n_blocks:
            break
        n_blocks = len(keys)

    rep: dict[int, int] = {}
    for q in states:
        rep.setdefault(block[q], q)
    order = []
    seen = {block[root]}
    queue = deque([block[root]])
    while queue:
        b = queue.popleft()
        order.append(b)
        q = rep[b]
        for e in g.out_edges(raw.nodes[q]):
            nb = block[raw.trans[q][e][1]]
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return block, [rep[b] for b in order]


def canonicalize(raw: RawMachine, root: int) -> tuple[Path, "StateMap"]:
    """
    Reduce, minimize and renumber the machine below ``root``.

    Returns
    -------
    (prefix, state) with ``raw_root(w) == prefix . state(w)`` and ``state``
    in canonical form.
    """
    g = raw.graph
    states = _reachable(raw, root)
    prefix = _image_prefixes(raw, states)

    pushed = RawMachine(g)
    idx = {}
    for q in states:
        lq = prefix[q]
        idx[q] = pushed.add_state(raw.nodes[q], None if lq.is_null else lq.terminus)
    for q in states:
        lq = prefix[q]
        for e in g.out_edges(raw.nodes[q]):
            out, nxt = raw.trans[q][e]
            pushed.trans[idx[q]][e] = (lq.strip(out.concat(prefix[nxt])), idx[nxt])

    block, order = _minimize(pushed, list(idx.values()), idx[root])
    pos = {block[q]: i for i, q in enumerate(order)}
    nodes, targets, trans = [], [], []
    for q in order:
        nodes.append(pushed.nodes[q])
        targets.append(pushed.targets[q])
        trans.append(tuple(
            (pushed.trans[q][e][0], pos[block[pushed.trans[q][e][1]]]) for e in g.out_edges(pushed.nodes[q])
        ))
    return prefix[root], StateMap(g, tuple(nodes), tuple(targets), tuple(trans))


# ==========================================================
# Canonical state machines
# ==========================================================
@dataclass(frozen=True)
class StateMap:
    """
    A canonical asynchronous transducer state: a map from the cone of
    ``node`` into the cone of ``target``.

    State 0 is the root. Rows of ``trans`` follow ``graph.out_edges`` of the
    state's node. Two StateMaps are extensionally equal iff they are ``==``.
    """

    graph: DirectedGraph
    nodes: tuple[int, ...]
    targets: tuple[Optional[int], ...]
    trans: tuple[tuple[tuple[Path, int], ...], ...]

    @property
    def node(self) -> int:
        return self.nodes[0]

    @property
    def target(self) -> Optional[int]:
        return self.targets[0]

    @property
    def n_states(self) -> int:
        return len(self.nodes)

    @property
    def max_output(self) -> int:
        return max((len(out) for row in self.trans for out, _ in row), default=0)

    @property
    def sort_key(self) -> tuple:
        return (
            self.node,
            -1 if self.target is None else self.target,
            self.n_states,
            tuple(tuple((out.sort_key, nxt) for out, nxt in row) for row in self.trans),
        )

    def __lt__(self, other: "StateMap") -> bool:
        return self.sort_key < other.sort_key

    @classmethod
    def identity(cls, graph: DirectedGraph, v: int) -> "StateMap":
        return _identity(graph, v)

    def is_identity(self) -> bool:
        return self.target == self.node and self == _identity(self.graph, self.node)

    def rebased(self, q: int) -> "StateMap":
        return _rebase(self, q) if q else self

    def states(self) -> list["StateMap"]:
        """Every state of the machine as its own canonical StateMap."""
        return [self.rebased(q) for q in range(self.n_states)]

    # -------------------------
    # running
    # -------------------------
    def _row_index(self, q: int, e: int) -> int:
        try:
            return self.graph.out_edges(self.nodes[q]).index(e)
        except ValueError:
            raise DomainError(
                f"Edge {self.graph.edge_names[e]!r} does not leave node {self.graph.node_names[self.nodes[q]]!r}."
            ) from None

    def step(self, e: int) -> tuple[Path, "StateMap"]:
        out, nxt = self.trans[0][self._row_index(0, e)]
        return out, self.rebased(nxt)

    def run_index(self, edges: Iterable[int], q: int = 0) -> tuple[Path, int]:
        acc = empty_output(self.targets[q])
        for e in edges:
            out, q = self.trans[q][self._row_index(q, e)]
            acc = acc.concat(out)
        return acc, q

    def run(self, path: Path) -> tuple[Path, "StateMap"]:
        """
        Output determined by reading ``path`` and the residual state.

        ``path`` is a node path or an edge path starting at ``node``.
        """
        if path.is_null or path.origin != self.node:
            raise DomainError(f"Input {path} does not start at the state's node {self.node}.")
        out, q = self.run_index(path.edges)
        return out, self.rebased(q)

    def distinguishing_word(self, other: "StateMap", max_depth: int | None = None) -> Optional[Path]:
        """Shortest input on which the determined outputs differ; None if equal."""
        if self == other:
            return None
        if self.node != other.node:
            return Path.node_path(self.node)
        if self.target != other.target:
            return Path.node_path(self.node)
        g = self.graph
        depth = max_depth or (self.n_states * other.n_states + 1)
        queue = deque([(Path.node_path(self.node), 0, 0)])
        seen = {(0, 0)}
        while queue:
            path, p, q = queue.popleft()
            if len(path) >= depth:
                continue
            for e in g.out_edges(self.nodes[p]):
                o1, p2 = self.trans[p][self._row_index(p, e)]
                o2, q2 = other.trans[q][other._row_index(q, e)]
                nxt = extend(g, path, e)
                if o1 != o2:
                    return nxt
                if (p2, q2) not in seen:
                    seen.add((p2, q2))
                    queue.append((nxt, p2, q2))
        return None


@lru_cache(maxsize=4096)
def _rebase(sm: StateMap, q: int) -> StateMap:
    raw = RawMachine(sm.graph)
    root = raw.embed(sm) + q
    prefix, out = canonicalize(raw, root)
    if prefix != empty_output(sm.targets[q]):
        raise DegenerateMapError("Rebasing a canonical machine produced a nonempty prefix.")
    return out


@lru_cache(maxsize=256)
def _identity(graph: DirectedGraph, v: int) -> StateMap:
    raw = RawMachine(graph)
    index: dict[int, int] = {}
    queue = deque([v])
    index[v] = raw.add_state(v, v)
    while queue:
        u = queue.popleft()
        for e in graph.out_edges(u):
            w = graph.terminus(e)
            if w not in index:
                index[w] = raw.add_state(w, w)
                queue.append(w)
            raw.set_transition(index[u], e, Path(u, (e,), w), index[w])
    _, sm = canonicalize(raw, index[v])
    return sm


def states_equal(a: StateMap, b: StateMap) -> bool:
    return a == b


def check_budget(name: str, size: int, limit: int, growth: list[int] | None = None) -> None:
    if size > limit:
        raise BudgetExceeded(name, limit, growth)
