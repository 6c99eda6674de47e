# src/cayley/ball.py
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from src.cayley.oracle import IDENTITY, GroupOracle, Word
from src.errors import BudgetExceeded, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ball:
    """The ``radius``-ball around the identity, elements listed layer by layer."""

    oracle: GroupOracle = field(repr=False)
    radius: int
    elements: tuple[Word, ...]
    layers: tuple[int, ...]
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.oracle.canonical:
            self._index.update({w: i for i, w in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: Word) -> bool:
        return self.find(x) is not None

    def find(self, x: Word) -> int | None:
        """Position of ``x`` in the ball, or None."""
        x = self.oracle.normal_form(x)
        if self.oracle.canonical:
            return self._index.get(x)
        for i, w in enumerate(self.elements):
            if self.oracle.equal(w, x):
                return i
        return None

    def layer_of(self, x: Word) -> int:
        i = self.find(x)
        if i is None:
            raise DomainError(f"{self.oracle.word_str(x)} lies outside the {self.radius}-ball.")
        return self.layers[i]

    def sphere(self, k: int) -> list[Word]:
        return [w for w, n in zip(self.elements, self.layers) if n == k]

    def within(self, k: int) -> list[Word]:
        """Elements of the ``k``-ball, ``k <= radius``, in ball order."""
        if k > self.radius:
            raise DomainError(f"Sub-ball radius {k} exceeds {self.radius}.")
        return [w for w, n in zip(self.elements, self.layers) if n <= k]

    def sizes(self) -> list[int]:
        return [len(self.within(k)) for k in range(self.radius + 1)]


def ball(oracle: GroupOracle, n: int, cap: int = 1_000_000) -> Ball:
    """
    Breadth-first enumeration of ``B_n``.

    Raises
    ------
    BudgetExceeded
        If more than ``cap`` elements are generated.
    """
    if n < 0:
        raise DomainError("Ball radius must be nonnegative.")
    elements: list[Word] = [IDENTITY]
    layers: list[int] = [0]
    seen: dict[Word, int] = {IDENTITY: 0}
    frontier = [IDENTITY]
    growth = [1]
    for k in range(1, n + 1):
        nxt: list[Word] = []
        for w in frontier:
            for s in oracle.letters:
                v = oracle.multiply(w, (s,))
                if oracle.canonical:
                    if v in seen:
                        continue
                else:
                    lo = max(0, k - 2)
                    if any(oracle.equal(u, v) for u, m in zip(elements, layers) if m >= lo) or any(
                        oracle.equal(u, v) for u in nxt
                    ):
                        continue
                seen[v] = k
                nxt.append(v)
        nxt.sort(key=oracle.sort_key)
        elements += nxt
        layers += [k] * len(nxt)
        growth.append(len(elements))
        if len(elements) > cap:
            raise BudgetExceeded("ball", cap, growth)
        frontier = nxt
        logger.debug("ball: layer %d has %d elements", k, len(nxt))
        if not nxt:
            break
    return Ball(oracle, n, tuple(elements), tuple(layers))
