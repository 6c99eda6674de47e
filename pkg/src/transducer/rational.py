# src/transducer/rational.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from src.errors import BudgetExceeded, DomainError
from src.shift.clopen import ClopenSet
from src.shift.graph import DirectedGraph
from src.shift.paths import NULL, Path, children, gcp_all
from src.transducer.state import RawMachine, StateMap, canonicalize, empty_output

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Entry:
    """One row of the initial table: on the cone of ``cone`` the map is ``prefix . state``."""

    cone: Path
    prefix: Path
    state: StateMap


@dataclass(frozen=True)
class RationalMap:
    """
    A rational map on a clopen subset of the edge shift.

    ``entries`` is sorted by cone and the cones form a code of ``domain``.
    """

    graph: DirectedGraph
    entries: tuple[Entry, ...]

    # -------------------------
    # construction
    # -------------------------
    @classmethod
    def build(cls, graph: DirectedGraph, entries: Iterable[tuple[Path, Path, StateMap]]) -> "RationalMap":
        rows = []
        for cone, prefix, state in entries:
            if cone.is_null:
                raise DomainError("Entry cones must be node or edge paths.")
            if cone.terminus != state.node:
                raise DomainError(f"Entry cone {cone} ends at {cone.terminus}, state reads node {state.node}.")
            rows.append(Entry(cone, prefix, state))
        rows.sort(key=lambda r: r.cone.sort_key)
        for a, b in zip(rows, rows[1:]):
            if a.cone.comparable(b.cone):
                raise DomainError(f"Entry cones {a.cone} and {b.cone} overlap.")
        return cls(graph, tuple(rows))

    @classmethod
    def from_state(cls, state: StateMap, cone: Optional[Path] = None, prefix: Optional[Path] = None) -> "RationalMap":
        cone = Path.node_path(state.node) if cone is None else cone
        prefix = empty_output(state.target) if prefix is None else prefix
        return cls.build(state.graph, [(cone, prefix, state)])

    @classmethod
    def identity(cls, graph: DirectedGraph, domain: Optional[ClopenSet] = None) -> "RationalMap":
        domain = ClopenSet.everything(graph) if domain is None else domain
        return cls.build(graph, [(p, p, StateMap.identity(graph, p.terminus)) for p in domain.expanded()])

    @property
    def domain(self) -> ClopenSet:
        return ClopenSet.of(self.graph, [r.cone for r in self.entries])

    @property
    def states(self) -> list[StateMap]:
        return [r.state for r in self.entries]

    def union(self, other: "RationalMap") -> "RationalMap":
        if not self.domain.disjoint(other.domain):
            raise DomainError("union needs maps with disjoint domains.")
        return RationalMap.build(
            self.graph, [(r.cone, r.prefix, r.state) for r in self.entries + other.entries]
        )

    def restrict(self, cone: Path) -> "RationalMap":
        """The map on a single cone inside the domain, as a one-entry map."""
        out, state = local_action(self, cone)
        return RationalMap.build(self.graph, [(cone, out, state)])

    def refined(self, depth: int = 1) -> "RationalMap":
        """Same map with every entry split ``depth`` levels."""
        rows = []
        for r in self.entries:
            layer = [(r.cone, r.prefix, r.state)]
            for _ in range(depth):
                nxt = []
                for cone, prefix, state in layer:
                    for child in children(self.graph, cone):
                        out, st = state.step(child.edges[-1])
                        nxt.append((child, prefix.concat(out), st))
                layer = nxt
            rows.extend(layer)
        return RationalMap.build(self.graph, rows)

    def max_states(self) -> int:
        return max((r.state.n_states for r in self.entries), default=0)

    def max_output(self) -> int:
        return max((r.state.max_output for r in self.entries), default=0)


# ==========================================================
# local actions
# ==========================================================
def _entry_for(f: RationalMap, alpha: Path) -> Optional[Entry]:
    for r in f.entries:
        if r.cone.is_prefix_of(alpha):
            return r
    return None


def _tree_action(f: RationalMap, alpha: Path) -> tuple[Path, StateMap]:
    """Local action at a path lying strictly above several entry cones."""
    g = f.graph
    below = [r for r in f.entries if alpha.is_prefix_of(r.cone)]
    if not below or not f.domain.contains_path(alpha):
        raise DomainError(f"Cone {alpha} is not contained in the domain.")
    raw = RawMachine(g)
    embedded = {r.cone: raw.embed(r.state) for r in below}
    prefixes = {r.cone: r.prefix for r in below}

    def build(path: Path) -> int:
        q = raw.add_state(path.terminus, None)
        for child in children(g, path):
            e = child.edges[-1]
            if child in embedded:
                raw.set_transition(q, e, prefixes[child], embedded[child])
            else:
                raw.set_transition(q, e, NULL, build(child))
        return q

    root = build(alpha)
    return canonicalize(raw, root)


def local_action(f: RationalMap, alpha: Path) -> tuple[Path, Union[StateMap, RationalMap]]:
    """
    ``(f̄(α), f|_α)`` for a cone inside the domain.

    For the null path the second component is the whole map with the common
    prefix removed (a RationalMap); otherwise it is a canonical StateMap.

    Raises
    ------
    DomainError
        If the cone of ``alpha`` is not contained in the domain.
    """
    if alpha.is_null:
        images = [r.prefix for r in f.entries]
        common = gcp_all(f.graph, images)
        stripped = RationalMap.build(
            f.graph, [(r.cone, common.strip(r.prefix), r.state) for r in f.entries]
        )
        return common, stripped
    hit = _entry_for(f, alpha)
    if hit is not None:
        out, state = hit.state.run(hit.cone.strip(alpha))
        return hit.prefix.concat(out), state
    return _tree_action(f, alpha)


def evaluate(f: RationalMap, path: Path, fuel: int = 10_000) -> tuple[Path, StateMap]:
    """
    Longest output determined by ``path`` and the residual state.

    Raises
    ------
    BudgetExceeded
        If the input is longer than ``fuel`` transitions.
    """
    if len(path) > fuel:
        raise BudgetExceeded("fuel", fuel)
    if path.is_null:
        raise DomainError("evaluate needs a node or edge path.")
    out, state = local_action(f, path)
    return out, state  # type: ignore[return-value]


def local_actions_at(f: RationalMap, paths: Iterable[Path]) -> list[tuple[Path, StateMap]]:
    return [local_action(f, p) for p in paths]  # type: ignore[misc]


def maps_equal(f: RationalMap, g: RationalMap) -> bool:
    """Extensional equality: same domain and same local action on every domain code path."""
    if f.graph != g.graph or f.domain != g.domain:
        return False
    cones = sorted({r.cone for r in f.entries} | {r.cone for r in g.entries})
    probes = [c for c in cones if not any(d != c and c.is_prefix_of(d) for d in cones)]
    return all(local_action(f, c) == local_action(g, c) for c in probes)


def is_identity(f: RationalMap) -> bool:
    return maps_equal(f, RationalMap.identity(f.graph, f.domain))
