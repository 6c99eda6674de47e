# src/rsg/germs.py
"""
Germs of stabilizers at rational points: the map sending an element that
fixes ``σ·τ^∞`` to the eventually constant local action along the ray.
"""
from __future__ import annotations

import logging
from math import lcm
from typing import Optional

from src.errors import DegenerateMapError, DomainError
from src.rsg.element import RsgElement, require_certified, rsg_compose, rsg_invert
from src.shift.paths import Path, make_path
from src.shift.points import RationalPoint, is_proper_power
from src.thompson.points import stabilizer_contraction
from src.transducer.algebra import evaluate_point
from src.transducer.nucleus import NucleusSet
from src.transducer.rational import local_action
from src.transducer.state import StateMap

logger = logging.getLogger(__name__)


def _ray(graph, sigma: Path, tau: tuple[int, ...], k: int) -> Path:
    edges = sigma.edges + tau * k
    return make_path(graph, edges) if edges else sigma


def periodic_states(nucleus: NucleusSet, tau: tuple[int, ...]) -> dict[StateMap, int]:
    """
    Periodic points of ``p ↦ p|_τ`` on the nucleus states at the origin of
    ``τ``, with their periods.
    """
    graph = nucleus.graph
    loop = make_path(graph, tau)
    step = {}
    for p in nucleus.states:
        if p.node != loop.origin:
            continue
        _, q = p.run(loop)
        if q not in nucleus:
            raise DomainError("The nucleus is not closed under restriction along the period.")
        step[p] = q
    periods = {}
    for p in step:
        q, k = step[p], 1
        while q != p and k <= len(step):
            q, k = step[q], k + 1
        if q == p:
            periods[p] = k
    return periods


def fixes_point(h: RsgElement, point: RationalPoint) -> bool:
    try:
        return evaluate_point(h.to_rational(), point) == point
    except (DomainError, DegenerateMapError):
        return False


def lambda_map(h: RsgElement, sigma: Path, tau: tuple[int, ...], max_iterations: int = 64) -> StateMap:
    """
    The eventually constant value of ``i ↦ h|_{σ·τ^{iM}}`` where ``M`` is
    the lcm of the periods of restriction along ``τ``.

    Raises
    ------
    DomainError
        If ``τ`` is a proper power or ``h`` does not fix ``σ·τ^∞``.
    """
    nucleus = h.nucleus
    require_certified(nucleus)
    graph = h.graph
    tau = tuple(tau)
    if is_proper_power(tau):
        raise DomainError(f"Period {tau} is a proper power.")
    point = RationalPoint.make(graph, sigma, tau)
    if not fixes_point(h, point):
        raise DomainError("The element does not fix the point.")

    periods = periodic_states(nucleus, tau)
    m = lcm(*periods.values()) if periods else 1
    rational = h.to_rational()
    previous = None
    for i in range(max_iterations):
        _, state = local_action(rational, _ray(graph, sigma, tau, i * m))
        if state == previous and state in periods:
            logger.debug("lambda_map: stable after %d blocks of %d periods", i, m)
            return state
        previous = state
    raise DomainError(f"Local actions along the ray did not settle within {max_iterations} steps.")


def germs_agree(h: RsgElement, k: RsgElement, point: RationalPoint, depth: int = 12) -> bool:
    """True iff ``h`` and ``k`` agree on some cone containing ``point`` of depth ``≤ depth`` past its prefix."""
    graph = h.graph
    rh, rk = h.to_rational(), k.to_rational()
    start = len(point.prefix)
    for n in range(start, start + depth + 1):
        alpha = point.truncated(graph, n)
        if local_action(rh, alpha) == local_action(rk, alpha):
            return True
    return False


def coset_exponent(
    h: RsgElement, k: RsgElement, point: RationalPoint, max_power: int = 12, depth: int = 12
) -> Optional[int]:
    """
    Smallest ``|e| ≤ max_power`` with ``f^e·h`` agreeing with ``k`` near
    ``point``, where ``f`` is the stabilizer contraction at the point.
    """
    contraction = RsgElement.from_v(stabilizer_contraction(h.graph, [point], h.ambient), h.nucleus)
    inverse = rsg_invert(contraction)
    up, down = h, h
    if germs_agree(h, k, point, depth):
        return 0
    for e in range(1, max_power + 1):
        up = rsg_compose(contraction, up)
        if germs_agree(up, k, point, depth):
            return e
        down = rsg_compose(inverse, down)
        if germs_agree(down, k, point, depth):
            return -e
    logger.info("coset_exponent: no exponent up to %d", max_power)
    return None
