# src/cayley/atoms.py
"""
Atoms of ``B_n``: classes of group elements whose distance functions agree
on ``B_n`` up to a constant, and the tree they form under containment.

Two modes share one interface:

- profile mode computes normalized distance profiles on an explicit ball
  and flags an atom infinite when it is witnessed on the outer sphere of
  the search window (a heuristic for every kind but trees);
- cone mode is used when the Cayley graph is a tree. Atoms there are
  exactly the cones ``C(w)``, so they are keyed by the word ``w`` and no
  ball is needed; levels far past explicit reach are available.
"""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Optional

from src.cayley.ball import Ball, ball
from src.cayley.oracle import IDENTITY, GroupOracle, Word
from src.errors import DomainError

logger = logging.getLogger(__name__)

CERTIFIED = "certified"
FINITE = "finite"


def heuristic_flag(horizon: int) -> str:
    return f"heuristic({horizon})"


@dataclass(frozen=True)
class Atom:
    """
    An atom of ``B_level``. ``key`` is the normalized profile on the ball
    (profile mode) or the cone word (cone mode).
    """

    level: int
    key: tuple
    witnesses: tuple[Word, ...] = field(compare=False, hash=False)
    flag: str = field(default=FINITE, compare=False, hash=False)
    mode: str = field(default="profile", compare=False, hash=False)

    @property
    def infinite(self) -> bool:
        return self.flag != FINITE

    @property
    def base(self) -> Word:
        """First witness in shortlex order."""
        return self.witnesses[0]

    @property
    def profile_hash(self) -> str:
        return hashlib.sha1(repr((self.level, self.key)).encode()).hexdigest()[:12]


class AtomTree:
    """
    Cached atoms per level with containment, children and witnesses.

    Parameters
    ----------
    oracle : GroupOracle
    horizon : int
        Profile mode looks for witnesses out to ``B_{n+horizon}``.
    mode : {"auto", "profile", "cone"}
        ``auto`` picks cone mode for tree oracles.
    sample_depth : int
        Cone mode samples witnesses ``w·u`` with ``|u| <= sample_depth``.
    cap : int
        Ball size budget.
    """

    def __init__(
        self,
        oracle: GroupOracle,
        horizon: int = 6,
        mode: str = "auto",
        sample_depth: int = 2,
        cap: int = 1_000_000,
    ):
        if horizon < 1:
            raise DomainError("Horizon must be at least 1.")
        if mode == "auto":
            mode = "cone" if oracle.is_tree else "profile"
        if mode == "cone" and not oracle.is_tree:
            raise DomainError("Cone mode needs an oracle whose Cayley graph is a tree.")
        if mode not in ("cone", "profile"):
            raise DomainError(f"Unknown atom mode {mode!r}.")
        self.oracle = oracle
        self.horizon = horizon
        self.mode = mode
        self.sample_depth = sample_depth
        self.cap = cap
        self._ball: Optional[Ball] = None
        self._levels: dict[int, list[Atom]] = {}
        self._profiles: dict[tuple[Word, int], tuple] = {}
        self._children: dict[Atom, list[Atom]] = {}
        self._inner: dict[int, list[Word]] = {}

    # -------------------------
    # balls and profiles
    # -------------------------
    def ball(self, radius: int) -> Ball:
        if self._ball is None or self._ball.radius < radius:
            self._ball = ball(self.oracle, radius, self.cap)
            logger.debug("AtomTree: ball of radius %d with %d elements", radius, len(self._ball))
        return self._ball

    def inner(self, level: int) -> list[Word]:
        """Elements of ``B_level`` in ball order."""
        if level not in self._inner:
            self._inner[level] = self.ball(level).within(level)
        return self._inner[level]

    def profile(self, x: Word, level: int) -> tuple:
        """``d(x, ·) − min`` on ``B_level`` in ball order."""
        x = self.oracle.normal_form(x)
        key = (x, level)
        if key not in self._profiles:
            dist = [self.oracle.distance(x, b) for b in self.inner(level)]
            low = min(dist)
            self._profiles[key] = tuple(d - low for d in dist)
        return self._profiles[key]

    # -------------------------
    # cone mode helpers
    # -------------------------
    def _cone(self, w: Word) -> Atom:
        o = self.oracle
        samples = [w]
        frontier = [w]
        for _ in range(self.sample_depth):
            frontier = [u + (s,) for u in frontier for s in o.letters if o.extends(u, s)]
            samples += frontier
        samples.sort(key=o.sort_key)
        return Atom(len(w), w, tuple(samples), CERTIFIED, "cone")

    def _cone_children(self, w: Word) -> list[Atom]:
        return [self._cone(w + (s,)) for s in self.oracle.letters if self.oracle.extends(w, s)]

    # -------------------------
    # atoms per level
    # -------------------------
    def atoms(self, level: int) -> list[Atom]:
        """All atoms found for ``B_level``, infinite ones first."""
        if level < 0:
            raise DomainError("Atom level must be nonnegative.")
        if level in self._levels:
            return self._levels[level]
        if self.mode == "cone":
            found = [self._cone(IDENTITY)]
            for _ in range(level):
                found = [c for a in found for c in self._cone_children(a.key)]
            self._levels[level] = found
            return found

        radius = level + self.horizon
        b = self.ball(radius)
        groups: dict[tuple, list[Word]] = {}
        outer: set[tuple] = set()
        for x, n in zip(b.elements, b.layers):
            if n < level:
                continue
            p = self.profile(x, level)
            groups.setdefault(p, []).append(x)
            if n == radius:
                outer.add(p)
        out = []
        for p, xs in groups.items():
            flag = heuristic_flag(self.horizon) if p in outer else FINITE
            out.append(Atom(level, p, tuple(sorted(xs, key=self.oracle.sort_key)), flag, "profile"))
        out.sort(key=lambda a: (not a.infinite, self.oracle.sort_key(a.base)))
        logger.debug("atoms: level %d has %d atoms, %d infinite", level, len(out), sum(a.infinite for a in out))
        self._levels[level] = out
        return out

    def infinite_atoms(self, level: int) -> list[Atom]:
        return [a for a in self.atoms(level) if a.infinite]

    def contains(self, atom: Atom, x: Word) -> bool:
        x = self.oracle.normal_form(x)
        if self.mode == "cone":
            return self.oracle.in_cone(atom.key, x)
        if self.oracle.length(x) < atom.level:
            return False
        return self.profile(x, atom.level) == atom.key

    def atom_of(self, x: Word, level: int) -> Atom:
        """The atom of ``B_level`` containing ``x``."""
        x = self.oracle.normal_form(x)
        if self.mode == "cone":
            if self.oracle.length(x) < level:
                raise DomainError(f"{self.oracle.word_str(x)} is inside B_{level - 1}; it lies in no cone of that level.")
            return self._cone(x[:level])
        p = self.profile(x, level)
        for a in self.atoms(level):
            if a.key == p:
                return a
        return Atom(level, p, (x,), FINITE, "profile")

    def children(self, atom: Atom) -> list[Atom]:
        """Infinite atoms of the next level inside ``atom``, ordered by base."""
        if atom in self._children:
            return self._children[atom]
        if self.mode == "cone":
            kids = self._cone_children(atom.key)
        else:
            kids = [c for c in self.infinite_atoms(atom.level + 1) if self.contains(atom, c.base)]
        kids.sort(key=lambda c: self.oracle.sort_key(c.base))
        self._children[atom] = kids
        return kids

    def root(self) -> Atom:
        return self.atoms(0)[0]

    def witnesses(self, atom: Atom) -> tuple[Word, ...]:
        return atom.witnesses


def atoms(oracle: GroupOracle, n: int, horizon: int = 6, tree: Optional[AtomTree] = None) -> list[Atom]:
    tree = tree or AtomTree(oracle, horizon)
    return tree.atoms(n)


# ==========================================================
# nearest, visible and extended nearest sets
# ==========================================================
def _require_infinite(atom: Atom) -> None:
    if not atom.infinite or not atom.witnesses:
        raise DomainError("The atom has no witnesses of an infinite class.")


def nearest(tree: AtomTree, atom: Atom) -> list[Word]:
    """``N(A)``: points of ``B_n`` where the distance function is minimal."""
    _require_infinite(atom)
    if atom.mode == "cone":
        return [atom.key]
    b = tree.ball(atom.level).within(atom.level)
    return [p for p, v in zip(b, atom.key) if v == 0]


def visible(tree: AtomTree, atom: Atom) -> list[Word]:
    """``V(A)``: points ``p`` of ``B_n`` such that no geodesic from ``p`` to a witness re-enters ``B_n``."""
    _require_infinite(atom)
    if atom.mode == "cone":
        return [atom.key]
    o = tree.oracle
    x = max(atom.witnesses, key=o.length)
    b = tree.ball(atom.level).within(atom.level)
    dx = {p: o.distance(p, x) for p in b}
    out = []
    for p in b:
        if not any(z != p and o.distance(p, z) + dx[z] == dx[p] for z in b):
            out.append(p)
    return out


def nhat(tree: AtomTree, atom: Atom, radius: Optional[int] = None) -> list[Word]:
    """``N̂(A)``: sphere points within ``4δ+2`` of the nearest set."""
    _require_infinite(atom)
    o = tree.oracle
    if o.delta is None and radius is None:
        raise DomainError("N̂ needs a hyperbolicity constant or an explicit radius.")
    r = int(4 * o.delta + 2) if radius is None else radius
    centres = nearest(tree, atom)
    if atom.mode == "cone":
        found = set(centres)
        frontier = list(centres)
        for _ in range(r):
            frontier = [v for u in frontier for v in o.neighbours(u) if v not in found]
            found.update(frontier)
        return sorted((p for p in found if len(p) == atom.level), key=o.sort_key)
    sphere = tree.ball(atom.level).sphere(atom.level)
    return [p for p in sphere if any(o.distance(p, c) <= r for c in centres)]
