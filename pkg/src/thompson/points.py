# src/thompson/points.py
from __future__ import annotations

import logging
from typing import Optional, Sequence

from src.errors import BudgetExceeded, DomainError
from src.shift.clopen import ClopenSet
from src.shift.graph import DirectedGraph
from src.shift.paths import Path, make_path
from src.shift.points import RationalPoint
from src.thompson.flexibility import map_cones_v
from src.thompson.velement import Pair, VElement, v_compose

logger = logging.getLogger(__name__)


def _power(graph: DirectedGraph, start: Path, word: tuple[int, ...], k: int) -> Path:
    edges = start.edges + word * k
    if not edges:
        return start
    return make_path(graph, edges)


def _rotation(u: tuple[int, ...], w: tuple[int, ...]) -> Optional[int]:
    """r with ``w == u[r:] + u[:r]``, or None."""
    if len(u) != len(w):
        return None
    for r in range(len(u)):
        if u[r:] + u[:r] == w:
            return r
    return None


def _disjoint(paths: Sequence[Path]) -> bool:
    return all(not p.comparable(q) for i, p in enumerate(paths) for q in paths[i + 1:])


def _admissible(ambient: ClopenSet, pairs: Sequence[Pair]) -> bool:
    alphas = [a for a, _ in pairs]
    betas = [b for _, b in pairs]
    if not (_disjoint(alphas) and _disjoint(betas)):
        return False
    if any(a.is_node or b.is_node for a, b in pairs):
        return False
    g = ambient.graph
    return ClopenSet.of(g, alphas) != ambient and ClopenSet.of(g, betas) != ambient


def stabilizer_contraction(
    graph: DirectedGraph,
    points: Sequence[RationalPoint],
    ambient: Optional[ClopenSet] = None,
    max_periods: int = 16,
    depth_limit: int = 12,
) -> VElement:
    """
    An element mapping each cone of ``σ_i`` onto the cone of ``σ_i τ_i`` by
    the canonical similarity, where ``σ_i τ_i^∞`` are the given points.

    It fixes every point and contracts a neighbourhood of each towards it.
    """
    ambient = ClopenSet.everything(graph) if ambient is None else ambient
    if len(set(points)) != len(points):
        raise DomainError("stabilizer_contraction needs distinct points.")
    for k in range(max_periods):
        pairs = []
        for pt in points:
            sigma = _power(graph, pt.prefix, pt.period, k)
            pairs.append((sigma, _power(graph, sigma, pt.period, 1)))
        if _admissible(ambient, pairs):
            logger.debug("stabilizer_contraction: prefixes extended by %d periods", k)
            return map_cones_v(graph, pairs, ambient, depth_limit)
    raise BudgetExceeded("periods", max_periods, detail="Points could not be separated.")


def cone_swap(graph: DirectedGraph, a: Path, b: Path, ambient: ClopenSet) -> VElement:
    """Exchange the disjoint cones of ``a`` and ``b`` by canonical similarities; identity elsewhere."""
    rest = ambient - ClopenSet.of(graph, [a, b])
    return VElement.make(graph, [(a, b), (b, a)] + [(q, q) for q in rest.expanded()], ambient, ambient)


def _aligned_prefixes(
    graph: DirectedGraph, points: Sequence[RationalPoint], max_periods: int
) -> tuple[list[Path], list[int]]:
    """
    Prefixes ``σ_i`` with ``points[i] = σ_i·u^∞``, one period ``u`` per orbit,
    extended by whole periods until their cones are pairwise disjoint, and
    the orbit index of each point.
    """
    periods: list[tuple[int, ...]] = []
    heads = []
    orbit = []
    for pt in points:
        for i, u in enumerate(periods):
            r = _rotation(pt.period, u)
            if r is not None:
                break
        else:
            i, u, r = len(periods), pt.period, 0
            periods.append(u)
        heads.append((_power(graph, pt.prefix, pt.period[:r], 1), u))
        orbit.append(i)
    for k in range(max_periods):
        prefixes = [_power(graph, s, u, k) for s, u in heads]
        if _disjoint(prefixes):
            logger.debug("aligned prefixes: separated after %d periods", k)
            return prefixes, orbit
    raise BudgetExceeded("periods", max_periods, detail="Points could not be separated.")


def transposition_product(
    graph: DirectedGraph,
    sources: Sequence[RationalPoint],
    targets: Sequence[RationalPoint],
    ambient: Optional[ClopenSet] = None,
    max_periods: int = 16,
) -> VElement:
    """
    A product of cone swaps sending ``sources[i]`` to ``targets[i]``.

    Every point involved gets a small cone, all cones pairwise disjoint, such
    that the canonical similarity between two cones of one orbit carries
    point onto point. The required permutation of the points is realized by
    swapping cones one pair at a time. Points in neither list stay fixed
    when they lie outside every cone.

    Raises
    ------
    DomainError
        If a pair lies in different orbits, a list repeats a point, or a
        cone leaves the ambient set.
    BudgetExceeded
        If the points are not separated after ``max_periods`` periods.
    """
    ambient = ClopenSet.everything(graph) if ambient is None else ambient
    if len(sources) != len(targets):
        raise DomainError("The source and target lists must have equal length.")
    if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
        raise DomainError("Source and target points must be distinct.")
    identity = VElement.identity(graph, ambient)
    if list(sources) == list(targets):
        return identity

    points = list(sources) + [t for t in targets if t not in sources]
    index = {pt: i for i, pt in enumerate(points)}
    prefixes, orbit = _aligned_prefixes(graph, points, max_periods)
    for s, t in zip(sources, targets):
        if orbit[index[s]] != orbit[index[t]]:
            raise DomainError(f"Points {s} and {t} lie in different orbits.")
    outside = [sigma for sigma in prefixes if not ambient.contains_path(sigma)]
    if outside:
        raise DomainError(f"The cone of {outside[0]} leaves the ambient set.")

    # complete to a permutation of the points, orbit by orbit
    perm = {index[s]: index[t] for s, t in zip(sources, targets)}
    free = [i for i in range(len(points)) if i not in perm.values()]
    for i in range(len(points)):
        if i not in perm:
            j = next(j for j in free if orbit[j] == orbit[i])
            free.remove(j)
            perm[i] = j

    # where[i]: location of point i; occupant is the inverse
    where = list(range(len(points)))
    occupant = list(range(len(points)))
    element = identity
    swaps = 0
    for i in range(len(points)):
        here, there = where[i], perm[i]
        if here == there:
            continue
        element = v_compose(cone_swap(graph, prefixes[here], prefixes[there], ambient), element)
        swaps += 1
        other = occupant[there]
        where[i], where[other] = there, here
        occupant[here], occupant[there] = other, i
    logger.debug("transposition_product: %d points, %d swaps", len(points), swaps)
    return element
