# src/hyperbolic/boundary.py
"""
The action of the group on the address tree, and the finite-state
presentation of that action read off from the type graph.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from src.cayley.oracle import IDENTITY, Word
from src.cayley.types import AddressSystem
from src.errors import BudgetExceeded, DomainError
from src.shift.paths import Path, descendants, extend, make_path
from src.transducer.nucleus import NucleusSet, recurrent_states
from src.transducer.state import RawMachine, StateMap, canonicalize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryAction:
    """
    ``g`` near the address ``alpha``: the image address of ``A_alpha`` and,
    for every suffix ``ζ`` down to ``depth``, the image address of
    ``A_{alpha·ζ}``.
    """

    g: Word
    alpha: Path
    image: Path
    depth: int
    table: dict = field(compare=False)

    def local(self, zeta: Path) -> Optional[Path]:
        """Image of ``zeta`` under the local action ``g|_alpha``, or None if it leaves the image cone."""
        out = self.table[zeta]
        if not self.image.is_prefix_of(out):
            return None
        return self.image.strip(out)

    def is_identity_at(self, graph, zeta: Path) -> bool:
        """``g|_{alpha·zeta}`` is a canonical similarity on the next level."""
        here = self.table[zeta]
        if here.terminus != zeta.terminus:
            return False
        for e in graph.out_edges(zeta.terminus):
            below = extend(graph, zeta, e)
            if below not in self.table:
                return True
            if self.table[below] != extend(graph, here, e):
                return False
        return True

    def identity_below(self, graph, level: int = 1) -> bool:
        return all(self.is_identity_at(graph, z) for z in self.table if len(z) >= level and len(z) < self.depth)


def _image_address(phi: AddressSystem, g: Word, alpha: Path) -> Path:
    atom, _ = phi.atom(alpha)
    o = phi.oracle
    return phi.smallest_containing([o.multiply(g, x) for x in atom.witnesses])


def boundary_local_action(g: Word, alpha: Path, phi: AddressSystem, depth: int = 2) -> BoundaryAction:
    """
    Translate ``A_{alpha·ζ}`` by ``g`` for every ``ζ`` of length ``<= depth``
    and re-identify the image with the deepest address containing it.
    """
    if alpha.is_null or alpha.origin != phi.root:
        raise DomainError("Boundary actions are taken at addresses below the root node.")
    o = phi.oracle
    g = o.normal_form(g)
    graph = phi.graph
    table: dict[Path, Path] = {}
    start = Path.node_path(alpha.terminus)
    for d in range(depth + 1):
        for zeta in descendants(graph, start, d):
            table[zeta] = _image_address(phi, g, alpha.concat(zeta))
    image = table[start]
    logger.debug("boundary_local_action: %s at depth %d, %d table entries", o.word_str(g), len(alpha), len(table))
    return BoundaryAction(g, alpha, image, depth, table)


# ==========================================================
# nucleus extraction
# ==========================================================
# A state is (v, h, w): the local action at an address of type v, written in
# the frames of the representatives of v and of the target type w.
State = tuple[int, Word, int]


def _descend(phi: AddressSystem, w: int, points: list[Word]) -> tuple[list[int], Word, int]:
    """Walk down from the representative of ``w`` while one child atom holds every point."""
    o = phi.oracle
    types = phi.types
    u = w
    m = IDENTITY
    atom = types.reps[phi.graph.node_names[w]]
    out: list[int] = []
    while True:
        nxt = None
        for e in phi.graph.out_edges(u):
            _, ce = types.edge_info(e)
            child = phi.tree.atom_of(o.multiply(m, ce.child.base), atom.level + 1)
            if all(phi.tree.contains(child, x) for x in points):
                nxt = (e, ce, child)
                break
        if nxt is None:
            return out, m, u
        e, ce, atom = nxt
        out.append(e)
        m = o.multiply(m, ce.morphism)
        u = phi.graph.terminus(e)


def nucleus_extract(
    phi: AddressSystem, generators: Optional[Sequence[Word]] = None, budget: int = 10_000
) -> tuple[NucleusSet, dict[str, StateMap]]:
    """
    Build the transducer of every generator on the root cone and keep the
    states that recur.

    Returns the nucleus over the type graph and the generator machines
    keyed by generator name.

    Raises
    ------
    BudgetExceeded
        When more than ``budget`` triples are explored; the growth curve is
        attached.
    """
    o = phi.oracle
    graph = phi.graph
    types = phi.types
    gens = [o.normal_form(g) for g in (generators if generators is not None else [(s,) for s in o.letters])]

    raw = RawMachine(graph)
    index: dict[State, int] = {}
    growth: list[int] = []
    queue: deque[State] = deque()

    def visit(state: State) -> int:
        if state not in index:
            index[state] = raw.add_state(state[0], state[2])
            queue.append(state)
            if len(index) > budget:
                raise BudgetExceeded("nucleus-states", budget, growth)
        return index[state]

    roots = {g: visit((phi.root, g, phi.root)) for g in gens}
    while queue:
        v, h, w = queue.popleft()
        q = index[(v, h, w)]
        for e in graph.out_edges(v):
            _, ce = types.edge_info(e)
            moved = [o.multiply(h, x) for x in ce.child.witnesses]
            pi, m, u = _descend(phi, w, moved)
            nxt = (graph.terminus(e), o.multiply(o.multiply(o.inverse(m), h), ce.morphism), u)
            out = make_path(graph, pi) if pi else Path.node_path(w)
            raw.set_transition(q, e, out, visit(nxt))
        growth.append(len(index))
    logger.info("nucleus_extract: %d triples explored for %d generators", len(index), len(gens))

    machines: dict[str, StateMap] = {}
    for g, r in roots.items():
        _, sm = canonicalize(raw, r)
        machines[o.word_str(g)] = sm
    recurrent = recurrent_states(machines.values())
    nucleus = NucleusSet(graph, tuple(recurrent))
    logger.info("nucleus_extract: nucleus of %d states", len(nucleus))
    return nucleus, machines
