# src/thompson/velement.py
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from src.errors import DomainError, PathError
from src.shift.clopen import ClopenSet
from src.shift.graph import DirectedGraph
from src.shift.paths import Path, children, extend, parent
from src.shift.points import RationalPoint
from src.transducer.nucleus import recurrent_states
from src.transducer.rational import RationalMap, local_action
from src.transducer.state import StateMap

logger = logging.getLogger(__name__)

Pair = tuple[Path, Path]


def _expand_null(graph: DirectedGraph, pairs: Iterable[Pair]) -> list[Pair]:
    out = []
    for a, b in pairs:
        if a.is_null or b.is_null:
            if not (a.is_null and b.is_null):
                raise DomainError("The null path can only be paired with itself.")
            out.extend((c, c) for c in children(graph, a))
        else:
            out.append((a, b))
    return out


def _check_code(paths: Sequence[Path], what: str) -> None:
    ps = sorted(paths)
    for i, p in enumerate(ps):
        for q in ps[i + 1:]:
            if p.comparable(q):
                raise DomainError(f"{what} cones {p} and {q} overlap.")


def reduce_pairs(graph: DirectedGraph, pairs: Iterable[Pair]) -> tuple[Pair, ...]:
    """
    Merge sibling families mapped as a whole by one canonical similarity,
    until nothing changes. Null parents are never formed.
    """
    table = dict(pairs)
    changed = True
    while changed:
        changed = False
        by_parent: dict[Path, list[Path]] = {}
        for a in table:
            par = parent(graph, a)
            if par is not None and not par.is_null:
                by_parent.setdefault(par, []).append(a)
        for par in sorted(by_parent):
            family = children(graph, par)
            if not all(c in table for c in family):
                continue
            images = [table[c] for c in family]
            if any(not img.edges for img in images):
                continue
            tops = {parent(graph, img) for img in images}
            if len(tops) != 1:
                continue
            top = tops.pop()
            if top.is_null or any(img.edges[-1] != c.edges[-1] for img, c in zip(images, family)):
                continue
            for c in family:
                del table[c]
            table[par] = top
            changed = True
            break
    return tuple(sorted(table.items()))


@dataclass(frozen=True)
class VElement:
    """
    A prefix-exchange map: ``domain[i] . ω  ↦  range[i] . ω``.

    ``source`` and ``target`` are the clopen sets covered by the two codes;
    elements of the Thompson group have ``source == target``. Instances are
    always reduced, so ``==`` is extensional equality.
    """

    graph: DirectedGraph
    source: ClopenSet
    target: ClopenSet
    domain: tuple[Path, ...]
    range: tuple[Path, ...]

    @classmethod
    def make(
        cls,
        graph: DirectedGraph,
        pairs: Iterable[Pair],
        source: Optional[ClopenSet] = None,
        target: Optional[ClopenSet] = None,
    ) -> "VElement":
        rows = _expand_null(graph, pairs)
        for a, b in rows:
            if a.terminus != b.terminus:
                raise PathError(f"Paired cones {a} and {b} end at different nodes.")
        _check_code([a for a, _ in rows], "Domain")
        _check_code([b for _, b in rows], "Range")
        dom = ClopenSet.of(graph, [a for a, _ in rows])
        rng = ClopenSet.of(graph, [b for _, b in rows])
        source = dom if source is None else source
        target = rng if target is None else target
        if dom != source:
            raise DomainError("The domain code does not cover the source set.")
        if rng != target:
            raise DomainError("The range code does not cover the target set.")
        reduced = reduce_pairs(graph, rows)
        return cls(graph, source, target, tuple(a for a, _ in reduced), tuple(b for _, b in reduced))

    @classmethod
    def identity(cls, graph: DirectedGraph, ambient: Optional[ClopenSet] = None) -> "VElement":
        ambient = ClopenSet.everything(graph) if ambient is None else ambient
        return cls.make(graph, [(p, p) for p in ambient.expanded()], ambient, ambient)

    @property
    def pairs(self) -> tuple[Pair, ...]:
        return tuple(zip(self.domain, self.range))

    @property
    def perm(self) -> tuple[int, ...]:
        """Position of each image cone in the sorted range code."""
        order = sorted(self.range)
        return tuple(order.index(b) for b in self.range)

    @property
    def size(self) -> int:
        return len(self.domain)

    def is_identity(self) -> bool:
        return self.source == self.target and all(a == b for a, b in self.pairs)

    def __repr__(self) -> str:
        return f"VElement({self.size} cones)"


# ==========================================================
# arithmetic
# ==========================================================
def _find(pairs: Sequence[Pair], path: Path) -> Optional[Pair]:
    for a, b in pairs:
        if a.is_prefix_of(path):
            return a, b
    return None


def v_compose(f: VElement, g: VElement) -> VElement:
    """``f ∘ g`` (apply ``g`` first)."""
    if f.graph != g.graph or g.target != f.source:
        raise DomainError("v_compose needs the target of g to be the source of f.")
    graph = f.graph
    out: list[Pair] = []
    work = deque(g.pairs)
    while work:
        a, b = work.popleft()
        hit = _find(f.pairs, b)
        if hit is not None:
            gamma, delta = hit
            out.append((a, delta.concat(gamma.strip(b))))
            continue
        for e in graph.out_edges(a.terminus):
            work.append((extend(graph, a, e), extend(graph, b, e)))
    return VElement.make(graph, out, g.source, f.target)


def v_invert(f: VElement) -> VElement:
    return VElement.make(f.graph, [(b, a) for a, b in f.pairs], f.target, f.source)


def v_equal(f: VElement, g: VElement) -> bool:
    return f == g


def v_as_rational(f: VElement) -> RationalMap:
    """The same map as a transducer whose states are all identities."""
    return RationalMap.build(f.graph, [(a, b, StateMap.identity(f.graph, a.terminus)) for a, b in f.pairs])


def v_evaluate(f: VElement, path: Path) -> Path:
    """Longest output determined by a finite input path."""
    hit = _find(f.pairs, path)
    if hit is not None:
        a, b = hit
        return b.concat(a.strip(path))
    out, _ = local_action(v_as_rational(f), path)
    return out


def v_apply_point(f: VElement, point: RationalPoint) -> RationalPoint:
    graph = f.graph
    for a, b in f.pairs:
        if point.in_cone(graph, a):
            tail = point.shifted(graph, a)
            return RationalPoint.make(graph, b.concat(tail.prefix), tail.period)
    raise DomainError("Point lies outside the source set.")


# ==========================================================
# recognition
# ==========================================================
def is_v_like(f: RationalMap) -> bool:
    """True iff every local action occurring infinitely often is an identity."""
    return all(s.is_identity() for s in recurrent_states(f.states))


def velement_from_map(f: RationalMap, depth_limit: int = 32) -> VElement:
    """
    Read a rational map whose deep local actions are identities as a VElement.

    Raises
    ------
    DomainError
        If some branch still has a non-identity state ``depth_limit`` levels
        below its entry cone.
    """
    graph = f.graph
    pairs: list[Pair] = []
    work = deque((r.cone, r.prefix, r.state, 0) for r in f.entries)
    while work:
        cone, prefix, state, depth = work.popleft()
        if state.is_identity():
            pairs.append((cone, prefix))
            continue
        if depth >= depth_limit:
            raise DomainError(f"Map is not Thompson-like below {cone} within depth {depth_limit}.")
        for child in children(graph, cone):
            out, nxt = state.step(child.edges[-1])
            work.append((child, prefix.concat(out), nxt, depth + 1))
    logger.debug("velement_from_map: %d pairs", len(pairs))
    return VElement.make(graph, pairs, f.domain)
