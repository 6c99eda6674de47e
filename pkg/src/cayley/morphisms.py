# src/cayley/morphisms.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.cayley.atoms import Atom, AtomTree, nearest, nhat
from src.cayley.oracle import IDENTITY, Word
from src.errors import DomainError

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MorphismResult:
    verdict: Verdict
    g: Word
    condition: str = ""
    detail: str = ""
    # None when never evaluated
    condition_ii: Optional[bool] = None

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED


def _maps_onto(tree: AtomTree, g: Word, a1: Atom, a2: Atom) -> Optional[str]:
    """None if ``g`` sends every sampled witness of ``a1`` into ``a2`` and back; else a reason."""
    o = tree.oracle
    gi = o.inverse(g)
    for x in a1.witnesses:
        if not tree.contains(a2, o.multiply(g, x)):
            return f"{o.word_str(g)}·{o.word_str(x)} leaves the target atom"
    for y in a2.witnesses:
        if not tree.contains(a1, o.multiply(gi, y)):
            return f"{o.word_str(gi)}·{o.word_str(y)} leaves the source atom"
    return None


def _levels_shift(tree: AtomTree, g: Word, a1: Atom, a2: Atom) -> bool:
    o = tree.oracle
    shift = a2.level - a1.level
    return all(o.length(o.multiply(g, x)) == o.length(x) + shift for x in a1.witnesses)


def _children_match(tree: AtomTree, g: Word, a1: Atom, a2: Atom, depth: int) -> Optional[str]:
    if depth <= 0:
        return None
    o = tree.oracle
    kids1, kids2 = tree.children(a1), tree.children(a2)
    if len(kids1) != len(kids2):
        return f"children counts differ ({len(kids1)} vs {len(kids2)}) at level {a1.level + 1}"
    used = set()
    for c in kids1:
        image = o.multiply(g, c.base)
        match = next((d for d in kids2 if tree.contains(d, image)), None)
        if match is None or match in used:
            return f"child with base {o.word_str(c.base)} has no partner"
        used.add(match)
        reason = _maps_onto(tree, g, c, match)
        if reason is None:
            reason = _children_match(tree, g, c, match, depth - 1)
        if reason is not None:
            return reason
    return None


def _neighbourhood_criterion(tree: AtomTree, g: Word, a1: Atom, a2: Atom, depth: int) -> Optional[str]:
    """
    None if ``g`` matches ``N̂(a1)`` onto ``N̂(a2)``, carries the normalized
    distance function of ``a1`` onto that of ``a2`` there, and sends the cone
    of each point of ``N̂(a1)`` onto the cone of its image up to ``depth``.
    """
    o = tree.oracle
    b = tree.ball(max(a1.level, a2.level))
    src, dst = nhat(tree, a1), nhat(tree, a2)
    moved = {b.find(o.multiply(g, x)) for x in src}
    if moved != {b.find(y) for y in dst}:
        return f"{o.word_str(g)} does not carry N̂ onto N̂"
    gi = o.inverse(g)
    for y in dst:
        if a1.key[b.find(o.multiply(gi, y))] != a2.key[b.find(y)]:
            return f"distance functions disagree at {o.word_str(y)}"
    near = tree.ball(depth)
    steps = [(u, n) for u, n in zip(near.elements, near.layers) if n <= depth]
    for x in src:
        gx = o.multiply(g, x)
        lx, lgx = o.length(x), o.length(gx)
        for u, n in steps:
            if (o.length(o.multiply(x, u)) == lx + n) != (o.length(o.multiply(gx, u)) == lgx + n):
                return f"cone of {o.word_str(x)} is not carried onto the cone of its image at {o.word_str(u)}"
    return None


def morphism_check(tree: AtomTree, g: Word, a1: Atom, a2: Atom, depth: int = 2) -> MorphismResult:
    """
    Test whether ``g`` is a morphism from ``a1`` to ``a2``.

    Conditions (i) ``g·a1 = a2``, (iii) children correspondence to ``depth``
    levels and (ii) the uniform shift of word length by the level difference
    are tested on the sampled witnesses, in that order; a failure refutes.

    In cone mode the cone type of ``w·s`` depends only on ``s``, so one level
    of children fixes every deeper one and the check certifies. In profile
    mode agreement on samples certifies only when the neighbourhood
    criterion holds as well: ``g·N̂(a1) = N̂(a2)``, matching distance
    functions on ``N̂(a2)`` and ``g·C(x) = C(gx)`` for ``x`` in ``N̂(a1)``
    to ``depth``. Otherwise the verdict is inconclusive.
    """
    o = tree.oracle
    g = o.normal_form(g)
    if not (a1.infinite and a2.infinite):
        return MorphismResult(Verdict.INCONCLUSIVE, g, "", "finite atoms have no morphisms")
    if not a1.witnesses or not a2.witnesses:
        return MorphismResult(Verdict.INCONCLUSIVE, g, "", "missing witnesses")
    reason = _maps_onto(tree, g, a1, a2)
    if reason is not None:
        return MorphismResult(Verdict.REFUTED, g, "i", reason)
    checked = min(depth, 1) if tree.mode == "cone" else depth
    reason = _children_match(tree, g, a1, a2, checked)
    if reason is not None:
        return MorphismResult(Verdict.REFUTED, g, "iii", reason)
    if not _levels_shift(tree, g, a1, a2):
        logger.info(
            "Condition (ii) fails for %s from level %d to level %d while (i) and (iii) hold",
            o.word_str(g), a1.level, a2.level,
        )
        return MorphismResult(
            Verdict.REFUTED, g, "ii", f"word length does not shift by {a2.level - a1.level}", False
        )
    if tree.mode == "cone":
        detail = f"children matched to depth {checked}; cone types fix the deeper levels"
        return MorphismResult(Verdict.CERTIFIED, g, "", detail, True)
    if o.delta is None:
        return MorphismResult(Verdict.INCONCLUSIVE, g, "", "sampled conditions hold; no hyperbolicity constant", True)
    reason = _neighbourhood_criterion(tree, g, a1, a2, depth)
    if reason is not None:
        return MorphismResult(Verdict.INCONCLUSIVE, g, "", f"sampled conditions hold; {reason}", True)
    return MorphismResult(Verdict.CERTIFIED, g, "", f"neighbourhood criterion holds to depth {depth}", True)


def bases(tree: AtomTree, atom: Atom) -> list[Word]:
    """Witnesses of minimal length."""
    o = tree.oracle
    low = min(o.length(x) for x in atom.witnesses)
    return [x for x in atom.witnesses if o.length(x) == low]


def candidate_morphisms(tree: AtomTree, a1: Atom, a2: Atom) -> list[Word]:
    """Elements sending a shortest witness of ``a1`` to one of ``a2``."""
    o = tree.oracle
    src = bases(tree, a1)[0]
    out = {o.multiply(y, o.inverse(src)) for y in bases(tree, a2)}
    return sorted(out, key=o.sort_key)


def subtree_equivalent(res: MorphismResult) -> bool:
    """True when (i) and (iii) held, whatever became of (ii) and the certificate."""
    return res.verdict is not Verdict.REFUTED or res.condition == "ii"


def find_morphism(
    tree: AtomTree, a1: Atom, a2: Atom, depth: int = 2, strict: bool = True
) -> Optional[MorphismResult]:
    """
    First certified candidate. With ``strict=False`` a candidate that is only
    subtree-equivalent is returned when none certifies.
    """
    fallback = None
    for g in candidate_morphisms(tree, a1, a2):
        res = morphism_check(tree, g, a1, a2, depth)
        if res.certified:
            return res
        if fallback is None and not strict and subtree_equivalent(res):
            fallback = res
    return fallback


@dataclass(frozen=True)
class MorphismGroup:
    atom: Atom
    elements: tuple[Word, ...]
    closed: bool


def morphism_group(tree: AtomTree, atom: Atom, depth: int = 2) -> MorphismGroup:
    """
    Certified morphisms of ``atom`` to itself among the elements permuting
    its nearest set, with a check that the set is closed under products and
    inverses.
    """
    o = tree.oracle
    near = nearest(tree, atom)
    p = near[0]
    found: list[Word] = []
    for q in near:
        g = o.multiply(q, o.inverse(p))
        res = morphism_check(tree, g, atom, atom, depth)
        if res.certified:
            found.append(res.g)
    keys = set(found)
    closed = IDENTITY in keys and all(o.inverse(g) in keys for g in found) and all(
        o.multiply(g, h) in keys for g in found for h in found
    )
    found.sort(key=o.sort_key)
    logger.info("morphism_group: %d morphisms, closed=%s", len(found), closed)
    return MorphismGroup(atom, tuple(found), closed)


# ==========================================================
@dataclass(frozen=True)
class ConeCheck:
    word: Word
    is_atom: bool
    splits: bool

    @property
    def ok(self) -> bool:
        return self.is_atom and self.splits


def free_product_cone_check(tree: AtomTree, w: Word, split_depth: int = 2) -> ConeCheck:
    """
    For ``w`` ending in the letter of a ℤ factor, check that the cone ``C(w)``
    is exactly the atom of ``w`` at level ``|w|`` within the profile window,
    and that it contains two disjoint infinite atoms within ``split_depth``
    levels.
    """
    o = tree.oracle
    orders = getattr(o, "orders", None)
    if orders is None:
        raise DomainError("free_product_cone_check needs a free product oracle.")
    w = o.normal_form(w)
    zletters = {a for a, m in zip("stuvwxyz", orders) if m == 0}
    zletters |= {a.upper() for a in zletters}
    if not w or w[-1] not in zletters:
        raise DomainError(f"{o.word_str(w)} does not end in the letter of a Z factor.")
    n = len(w)
    atom = tree.atom_of(w, n)
    if tree.mode == "cone":
        is_atom = atom.key == w
    else:
        window = tree.ball(n + tree.horizon)
        cone = {x for x, k in zip(window.elements, window.layers) if k >= n and o.in_cone(w, x)}
        is_atom = set(atom.witnesses) == cone
    frontier = [atom]
    splits = False
    for _ in range(split_depth):
        frontier = [c for a in frontier for c in tree.children(a)]
        if len(frontier) >= 2:
            splits = True
            break
    logger.debug("cone check %s: atom=%s, splits=%s", o.word_str(w), is_atom, splits)
    return ConeCheck(w, is_atom, splits)
