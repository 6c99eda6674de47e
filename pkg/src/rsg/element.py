# src/rsg/element.py
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from src.errors import CertificateError, DegenerateMapError, DomainError
from src.shift.clopen import ClopenSet
from src.shift.graph import DirectedGraph
from src.shift.paths import Path, children
from src.shift.points import RationalPoint
from src.thompson.flexibility import match_clopen
from src.thompson.points import transposition_product
from src.thompson.velement import VElement
from src.transducer.algebra import compose, image, invert, is_injective
from src.transducer.catalog import identity_nucleus
from src.transducer.nucleus import NucleusSet
from src.transducer.rational import RationalMap, is_identity, local_action
from src.transducer.state import StateMap

logger = logging.getLogger(__name__)

Row = tuple[Path, Path, StateMap]


def require_certified(nucleus: NucleusSet) -> None:
    if not nucleus.certified:
        raise CertificateError("nucleus", "The operation needs a nucleus that passed all six axioms.")


@dataclass(frozen=True)
class RsgElement:
    """
    A homeomorphism of ``ambient`` given on a complete code: on the cone of
    ``dom`` it is ``ω ↦ out . state(ω)`` with ``state`` in the nucleus.
    """

    graph: DirectedGraph
    ambient: ClopenSet
    entries: tuple[Row, ...]
    nucleus: NucleusSet = field(compare=False, hash=False, repr=False)

    @classmethod
    def build(cls, nucleus: NucleusSet, ambient: ClopenSet, rows: Iterable[Row]) -> "RsgElement":
        rows = tuple(sorted(rows, key=lambda r: r[0].sort_key))
        members = set(nucleus.states)
        for dom, out, state in rows:
            if dom.terminus != state.node:
                raise DomainError(f"Entry {dom} ends at {dom.terminus}; its state reads node {state.node}.")
            if state not in members:
                raise DomainError(f"State at {dom} is not in the nucleus.")
        if ClopenSet.of(ambient.graph, [r[0] for r in rows]) != ambient:
            raise DomainError("Entry cones do not form a complete code of the ambient set.")
        return cls(ambient.graph, ambient, rows, nucleus)

    @classmethod
    def from_v(cls, v: VElement, nucleus: NucleusSet) -> "RsgElement":
        if v.source != v.target:
            raise DomainError("from_v needs an element with equal source and target.")
        rows = [(a, b, StateMap.identity(v.graph, a.terminus)) for a, b in v.pairs]
        return cls.build(nucleus, v.source, rows)

    @classmethod
    def identity(cls, nucleus: NucleusSet, ambient: Optional[ClopenSet] = None) -> "RsgElement":
        ambient = ClopenSet.everything(nucleus.graph) if ambient is None else ambient
        return cls.from_v(VElement.identity(nucleus.graph, ambient), nucleus)

    def to_rational(self) -> RationalMap:
        return RationalMap.build(self.graph, self.entries)

    def evaluate(self, path: Path) -> Path:
        out, _ = local_action(self.to_rational(), path)
        return out

    def states(self) -> list[StateMap]:
        return [r[2] for r in self.entries]

    def nuclear_rows(self) -> list[Row]:
        return [r for r in self.entries if not r[2].is_identity()]

    def support(self) -> ClopenSet:
        """Union of entry cones where the element is not the identity."""
        moved = [dom for dom, out, state in self.entries if not (dom == out and state.is_identity())]
        return ClopenSet.of(self.graph, moved)


# ==========================================================
# membership and arithmetic
# ==========================================================
def _partition(h: RationalMap, members: set[StateMap], depth_limit: int) -> Optional[list[Row]]:
    rows: list[Row] = []
    work = deque((r.cone, r.prefix, r.state, 0) for r in h.entries)
    deepest = 0
    while work:
        cone, prefix, state, depth = work.popleft()
        deepest = max(deepest, depth)
        if state in members:
            rows.append((cone, prefix, state))
            continue
        if depth >= depth_limit:
            logger.info("Partition not found: %s still outside the nucleus at depth %d", cone, depth)
            return None
        for child in children(h.graph, cone):
            out, nxt = state.step(child.edges[-1])
            work.append((child, prefix.concat(out), nxt, depth + 1))
    logger.debug("Partition found with %d cones, depth %d", len(rows), deepest)
    return rows


def rsg_membership(
    h: RationalMap, nucleus: NucleusSet, depth_limit: int = 12, check_bijective: bool = True
) -> Optional[RsgElement]:
    """
    Partition the domain of ``h`` into cones whose local actions all lie in
    the nucleus; None when no such partition exists by ``depth_limit``.

    Raises
    ------
    CertificateError
        If the nucleus is not certified.
    DegenerateMapError
        If ``h`` is not a homeomorphism of its domain.
    """
    require_certified(nucleus)
    if check_bijective and (image(h) != h.domain or not is_injective(h)):
        raise DegenerateMapError("rsg_membership needs a homeomorphism of the domain.")
    rows = _partition(h, set(nucleus.states), depth_limit)
    if rows is None:
        return None
    return RsgElement.build(nucleus, h.domain, rows)


def partition_element(h: RationalMap, nucleus: NucleusSet, depth_limit: int, what: str) -> RsgElement:
    rows = _partition(h, set(nucleus.states), depth_limit)
    if rows is None:
        raise CertificateError(what, "A local action stayed outside the nucleus; the certificate is inconsistent.")
    return RsgElement.build(nucleus, h.domain, rows)


def rsg_compose(a: RsgElement, b: RsgElement, depth_limit: int = 32) -> RsgElement:
    """``a ∘ b`` (apply ``b`` first)."""
    require_certified(a.nucleus)
    if a.ambient != b.ambient:
        raise DomainError("rsg_compose needs elements of the same ambient set.")
    return partition_element(compose(a.to_rational(), b.to_rational()), a.nucleus, depth_limit, "compose")


def rsg_invert(a: RsgElement, depth_limit: int = 32) -> RsgElement:
    require_certified(a.nucleus)
    return partition_element(invert(a.to_rational(), check=False), a.nucleus, depth_limit, "invert")


def rsg_is_identity(a: RsgElement) -> bool:
    return is_identity(a.to_rational())


def rsg_equal(a: RsgElement, b: RsgElement) -> bool:
    return rsg_is_identity(rsg_compose(rsg_invert(a), b))


def rsg_power(a: RsgElement, k: int) -> RsgElement:
    base = a if k >= 0 else rsg_invert(a)
    acc = RsgElement.identity(a.nucleus, a.ambient)
    for _ in range(abs(k)):
        acc = rsg_compose(base, acc)
    return acc


# ==========================================================
# elements built from single nucleus states
# ==========================================================
def classification_element(
    q: StateMap, alpha: Path, beta: Path, nucleus: NucleusSet, ambient: Optional[ClopenSet] = None
) -> RsgElement:
    """
    Apply ``q`` on the cone of ``alpha`` into the cone of ``beta``, the inverse
    on the image, and the identity elsewhere. The two cones must be disjoint
    and ``q`` must have image inside its target cone with ``t(β) = q.target``.
    """
    ambient = ClopenSet.everything(nucleus.graph) if ambient is None else ambient
    g = nucleus.graph
    if alpha.comparable(beta):
        raise DomainError("classification_element needs disjoint cones.")
    if alpha.terminus != q.node or beta.terminus != q.target:
        raise DomainError("Cone termini do not match the state's nodes.")
    forward = RationalMap.build(g, [(alpha, beta, q)])
    backward = invert(forward, check=False)
    moved = ClopenSet.of(g, [alpha]) | image(forward)
    rest = ambient - moved
    rows = [(r.cone, r.prefix, r.state) for r in forward.entries + backward.entries]
    rows += [(p, p, StateMap.identity(g, p.terminus)) for p in rest.expanded()]
    h = RationalMap.build(g, rows)
    element = _partition(h, set(nucleus.states), 32)
    if element is None:
        raise CertificateError("classification", "Inverse local actions left the nucleus.")
    return RsgElement.build(nucleus, ambient, element)


def witness_tuple_map(
    graph: DirectedGraph,
    sources: Sequence[RationalPoint],
    targets: Sequence[RationalPoint],
    ambient: Optional[ClopenSet] = None,
    max_periods: int = 16,
) -> RsgElement:
    """
    An element of the full group sending ``sources[i]`` to ``targets[i]``,
    as a product of swaps of small disjoint cones around the points. Its
    local actions are identities, so it lives over the identity nucleus.
    """
    v = transposition_product(graph, sources, targets, ambient, max_periods)
    return RsgElement.from_v(v, identity_nucleus(graph))


def nucleus_extension(
    q: StateMap,
    alpha: Path,
    nucleus: NucleusSet,
    ambient: Optional[ClopenSet] = None,
    depth_limit: int = 12,
) -> RsgElement:
    """
    Apply ``q`` on the cone of ``alpha`` and complete it by a prefix
    exchange of the complement. If ``q`` fixes ω then the result fixes α.ω.

    Raises
    ------
    ClassObstruction
        If the complement of the image has a different class (``∂₁ q ≠ 0``).
    """
    ambient = ClopenSet.everything(nucleus.graph) if ambient is None else ambient
    g = nucleus.graph
    if alpha.terminus != q.node or q.target != q.node:
        raise DomainError("nucleus_extension needs a state from the node of alpha to itself.")
    forward = RationalMap.build(g, [(alpha, alpha, q)])
    rest = match_clopen(ambient - ClopenSet.of(g, [alpha]), ambient - image(forward), depth_limit)
    rows = [(alpha, alpha, q)] + [(a, b, StateMap.identity(g, a.terminus)) for a, b in rest]
    return RsgElement.build(nucleus, ambient, rows)
