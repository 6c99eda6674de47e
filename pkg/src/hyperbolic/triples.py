# src/hyperbolic/triples.py
"""
Contracting constants, mapping triples and their signatures.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Union

import numpy as np

from src.cayley.atoms import Atom, AtomTree, nearest, nhat
from src.cayley.morphisms import morphism_check
from src.cayley.oracle import GroupOracle, Word
from src.errors import DomainError

logger = logging.getLogger(__name__)


def _delta(oracle: GroupOracle) -> float:
    if oracle.delta is None:
        raise DomainError(f"The {oracle.kind} oracle has no hyperbolicity constant.")
    return oracle.delta


def contracting_threshold(g_length: int, delta: float) -> float:
    """Levels strictly above ``2|g| + 39δ + 13`` admit mapping triples."""
    return 2 * g_length + 39 * delta + 13


def neighborhood_radius(delta: float) -> float:
    return 18 * delta + 6


def signature_diameter(delta: float) -> float:
    return 30 * delta + 10


def default_cone_depth(g_length: int, delta: float) -> int:
    return int(2 * contracting_threshold(g_length, delta))


def constants(oracle: GroupOracle, g_length: int = 1) -> dict:
    delta = _delta(oracle)
    return {
        "delta": delta,
        "threshold": contracting_threshold(g_length, delta),
        "neighborhood_radius": neighborhood_radius(delta),
        "signature_diameter": signature_diameter(delta),
        "cone_depth": default_cone_depth(g_length, delta),
        "g_length": g_length,
    }


def norm_s(f: Union[Mapping, Callable], points: Iterable) -> float:
    """Half the spread of ``f`` over ``points``."""
    points = list(points)
    if not points:
        raise DomainError("norm_S needs a nonempty point set.")
    values = np.array([f[p] if isinstance(f, Mapping) else f(p) for p in points], dtype=float)
    return float(values.max() - values.min()) / 2


def _set_distance(oracle: GroupOracle, xs: list[Word], ys: list[Word]) -> int:
    """Largest distance from a point of ``xs`` to the set ``ys``."""
    return max(min(oracle.distance(x, y) for y in ys) for x in xs)


# ==========================================================
# mapping triples
# ==========================================================
@dataclass(frozen=True)
class MappingTriple:
    g: Word
    alpha: Atom
    beta: Atom
    # largest distance from N(beta) to g·N(alpha)
    distance: int
    depth: int

    @classmethod
    def make(cls, tree: AtomTree, g: Word, alpha: Atom, beta: Atom, depth: Optional[int] = None) -> "MappingTriple":
        """
        Validate ``(g, alpha, beta)``: level threshold, containment of the
        sampled witnesses and the neighbourhood radius.
        """
        o = tree.oracle
        delta = _delta(o)
        g = o.normal_form(g)
        threshold = contracting_threshold(o.length(g), delta)
        if not alpha.level > threshold:
            raise DomainError(f"Level {alpha.level} is not above the contracting threshold {threshold:g}.")
        if not alpha.infinite or not beta.infinite:
            raise DomainError("Mapping triples need infinite atoms.")
        outside = [x for x in alpha.witnesses if not tree.contains(beta, o.multiply(g, x))]
        if outside:
            raise DomainError(f"g·A_alpha leaves A_beta at {o.word_str(o.multiply(g, outside[0]))}.")
        moved = [o.multiply(g, p) for p in nearest(tree, alpha)]
        dist = _set_distance(o, nearest(tree, beta), moved)
        if dist > neighborhood_radius(delta):
            raise DomainError(f"N(A_beta) is {dist} away from g·N(A_alpha), above {neighborhood_radius(delta):g}.")
        k = default_cone_depth(o.length(g), delta) if depth is None else depth
        return cls(g, alpha, beta, dist, k)


def mapping_triple(tree: AtomTree, g: Word, alpha: Atom, depth: Optional[int] = None) -> MappingTriple:
    """
    The deepest atom ``A_beta`` containing ``g·A_alpha`` whose nearest set
    lies near ``g·N(A_alpha)``. Levels are searched downwards from
    ``level(alpha) + |g|``.
    """
    o = tree.oracle
    g = o.normal_form(g)
    threshold = contracting_threshold(o.length(g), _delta(o))
    if not alpha.level > threshold:
        raise DomainError(f"Level {alpha.level} is not above the contracting threshold {threshold:g}.")
    image = o.multiply(g, alpha.base)
    top = min(alpha.level + o.length(g), o.length(image))
    last: Optional[DomainError] = None
    for level in range(top, -1, -1):
        beta = tree.atom_of(image, level)
        if not beta.infinite:
            continue
        try:
            triple = MappingTriple.make(tree, g, alpha, beta, depth)
        except DomainError as exc:
            last = exc
            continue
        logger.debug("mapping_triple: %s at level %d lands at level %d", o.word_str(g), alpha.level, level)
        return triple
    raise DomainError(f"No mapping triple for {o.word_str(g)} at level {alpha.level}. {last or ''}".strip())


# ==========================================================
# signatures
# ==========================================================
@dataclass(frozen=True)
class Signature:
    moved: tuple[Word, ...]
    target: tuple[Word, ...]
    diameter: int
    bound: float
    profile: tuple

    @property
    def within_bound(self) -> bool:
        return self.diameter <= self.bound


def _points_profile(oracle: GroupOracle, atom: Atom, points: list[Word]) -> tuple:
    """Distances from the farthest witness of ``atom`` to ``points``, normalized."""
    x = max(atom.witnesses, key=oracle.length)
    dist = [oracle.distance(x, p) for p in points]
    low = min(dist)
    return tuple(d - low for d in dist)


def signature(tree: AtomTree, triple: MappingTriple, radius: Optional[int] = None) -> Signature:
    o = tree.oracle
    delta = _delta(o)
    moved = sorted({o.multiply(triple.g, p) for p in nhat(tree, triple.alpha, radius)}, key=o.sort_key)
    target = sorted(nhat(tree, triple.beta, radius), key=o.sort_key)
    both = moved + target
    diam = max(o.distance(p, q) for p in both for q in both)
    if diam > signature_diameter(delta):
        logger.warning("signature diameter %d exceeds %g", diam, signature_diameter(delta))
    return Signature(tuple(moved), tuple(target), diam, signature_diameter(delta), _points_profile(o, triple.beta, target))


def signature_equivalent(
    tree: AtomTree, t1: MappingTriple, t2: MappingTriple, depth: int = 2, radius: Optional[int] = None
) -> Optional[Word]:
    """
    Find ``ℓ`` with ``ℓ·g1·N̂(A_α1) = g2·N̂(A_α2)``, ``ℓ·N̂(A_β1) = N̂(A_β2)``,
    agreeing distance data, ``ℓ`` a morphism ``A_β1 → A_β2`` and
    ``g2⁻¹ℓg1`` a morphism ``A_α1 → A_α2``. None when no candidate works.
    """
    o = tree.oracle
    s1, s2 = signature(tree, t1, radius), signature(tree, t2, radius)
    if len(s1.target) != len(s2.target) or len(s1.moved) != len(s2.moved):
        return None
    if s1.profile != s2.profile:
        return None
    anchor = o.inverse(s1.target[0])
    moved2, target2 = set(s2.moved), set(s2.target)
    for q in s2.target:
        ell = o.multiply(q, anchor)
        if {o.multiply(ell, p) for p in s1.target} != target2:
            continue
        if {o.multiply(ell, p) for p in s1.moved} != moved2:
            continue
        if not morphism_check(tree, ell, t1.beta, t2.beta, depth).certified:
            continue
        k = o.multiply(o.multiply(o.inverse(t2.g), ell), t1.g)
        if not morphism_check(tree, k, t1.alpha, t2.alpha, depth).certified:
            continue
        logger.debug("signature_equivalent: witness %s", o.word_str(ell))
        return ell
    return None
