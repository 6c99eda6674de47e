# src/cayley/oracle.py
"""
Group oracles: normal forms, products and the word metric for the groups
whose Cayley graphs the atom machinery walks.

Elements are words, i.e. tuples of generator letters. Every letter has an
inverse letter in the generator list (a letter of order two is its own
inverse), so the generator list is symmetric.
"""
from __future__ import annotations

import logging
import string
from typing import Optional, Sequence

from src.errors import BudgetExceeded, DomainError

logger = logging.getLogger(__name__)

Word = tuple[str, ...]

IDENTITY: Word = ()


class GroupOracle:
    """
    Base class for group oracles.

    Subclasses implement :meth:`normal_form`; everything else is derived
    from it. ``canonical`` is True when equal elements have equal normal
    forms, so words can be used as dictionary keys.
    """

    kind = "group"
    canonical = True

    def __init__(self, letters: Sequence[str], inverses: dict[str, str], delta: Optional[float]):
        self.letters = tuple(letters)
        self.inverses = dict(inverses)
        self.delta = delta
        self._order = {a: i for i, a in enumerate(self.letters)}
        missing = [a for a in self.letters if self.inverses.get(a) not in self._order]
        if missing:
            raise DomainError(f"Generators without inverse in the list: {missing}")

    # -------------------------
    # subclass hooks
    # -------------------------
    def normal_form(self, word: Sequence[str]) -> Word:
        raise NotImplementedError

    @property
    def is_tree(self) -> bool:
        return False

    def to_json(self) -> dict:
        raise NotImplementedError

    # -------------------------
    # derived arithmetic
    # -------------------------
    def check(self, word: Sequence[str]) -> Word:
        bad = [a for a in word if a not in self._order]
        if bad:
            raise DomainError(f"Unknown generator(s) {bad} for a {self.kind} oracle.")
        return tuple(word)

    def parse(self, text: str) -> Word:
        return self.normal_form(self.check(tuple(text.strip())))

    def multiply(self, a: Word, b: Word) -> Word:
        return self.normal_form(a + b)

    def inverse(self, a: Word) -> Word:
        return self.normal_form(tuple(self.inverses[x] for x in reversed(a)))

    def equal(self, a: Word, b: Word) -> bool:
        return self.normal_form(self.inverse(a) + b) == IDENTITY

    def length(self, a: Word) -> int:
        """Word metric ``|a|``; the normal forms of the built-in kinds are geodesic."""
        return len(self.normal_form(a))

    def distance(self, a: Word, b: Word) -> int:
        return self.length(self.inverse(a) + b)

    def neighbours(self, a: Word) -> list[Word]:
        return [self.multiply(a, (s,)) for s in self.letters]

    def extends(self, w: Word, s: str) -> bool:
        """True iff ``w·s`` is geodesic, i.e. one letter longer than ``w``."""
        return self.length(w + (s,)) == self.length(w) + 1

    def in_cone(self, w: Word, x: Word) -> bool:
        """``x`` lies on the cone ``C(w)``: some geodesic from 1 to ``x`` passes ``w``."""
        return self.length(w) + self.distance(w, x) == self.length(x)

    def sort_key(self, a: Word) -> tuple:
        return (len(a), tuple(self._order[x] for x in a))

    def word_str(self, a: Word) -> str:
        return "".join(a) if a else "1"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_json()})"


# ==========================================================
# free groups
# ==========================================================
def _free_reduce(word: Sequence[str], inverses: dict[str, str]) -> Word:
    out: list[str] = []
    for a in word:
        if out and inverses[out[-1]] == a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


class FreeGroupOracle(GroupOracle):
    """Free group on ``a, b, c, ...`` with inverses ``A, B, C, ...``."""

    kind = "free"

    def __init__(self, rank: int):
        if not 1 <= rank <= 13:
            raise DomainError(f"Free group rank must be in 1..13, got {rank}.")
        self.rank = rank
        base = string.ascii_lowercase[:rank]
        letters = [x for a in base for x in (a, a.upper())]
        inverses = {a: a.swapcase() for a in letters}
        super().__init__(letters, inverses, 0.0)

    @property
    def is_tree(self) -> bool:
        return True

    def normal_form(self, word: Sequence[str]) -> Word:
        return _free_reduce(word, self.inverses)

    def to_json(self) -> dict:
        return {"kind": "free", "rank": self.rank}


# ==========================================================
# free abelian groups
# ==========================================================
class FreeAbelianOracle(GroupOracle):
    """ℤⁿ with the standard basis ``x, y, z, w`` and inverses in upper case."""

    kind = "zn"

    def __init__(self, n: int):
        if not 1 <= n <= 4:
            raise DomainError(f"zn oracle supports 1 <= n <= 4, got {n}.")
        self.n = n
        base = "xyzw"[:n]
        letters = [x for a in base for x in (a, a.upper())]
        inverses = {a: a.swapcase() for a in letters}
        # Z is a tree; higher rank is not hyperbolic
        super().__init__(letters, inverses, 0.0 if n == 1 else None)
        self._base = base

    @property
    def is_tree(self) -> bool:
        return self.n == 1

    def exponents(self, word: Sequence[str]) -> tuple[int, ...]:
        exps = [0] * self.n
        for a in word:
            i = self._base.index(a.lower())
            exps[i] += 1 if a.islower() else -1
        return tuple(exps)

    def from_exponents(self, exps: Sequence[int]) -> Word:
        out: list[str] = []
        for a, e in zip(self._base, exps):
            out += [a if e > 0 else a.upper()] * abs(e)
        return tuple(out)

    def normal_form(self, word: Sequence[str]) -> Word:
        return self.from_exponents(self.exponents(word))

    def to_json(self) -> dict:
        return {"kind": "zn", "n": self.n}


# ==========================================================
# free products of cyclic groups
# ==========================================================
class FreeProductOracle(GroupOracle):
    """
    Free product of cyclic factors; ``orders[i] == 0`` is a ℤ factor.

    Factor ``i`` is generated by letter ``s, t, u, ...``; factors of order
    two use one self-inverse letter, the others a letter and its upper-case
    inverse. Syllable exponents are reduced into ``(-m/2, m/2]``.
    """

    kind = "free_product"

    def __init__(self, orders: Sequence[int]):
        orders = [int(m) for m in orders]
        if not orders or len(orders) > 8:
            raise DomainError("A free product needs between one and eight factors.")
        if any(m == 1 or m < 0 for m in orders):
            raise DomainError(f"Factor orders must be 0 (for Z) or at least 2, got {orders}.")
        self.orders = tuple(orders)
        self._names = "stuvwxyz"[: len(orders)]
        letters: list[str] = []
        inverses: dict[str, str] = {}
        for a, m in zip(self._names, orders):
            if m == 2:
                letters.append(a)
                inverses[a] = a
            else:
                letters += [a, a.upper()]
                inverses[a], inverses[a.upper()] = a.upper(), a
        bigger = [m // 2 for m in orders if m >= 3]
        super().__init__(letters, inverses, float(max(bigger)) if bigger else 0.0)

    @property
    def is_tree(self) -> bool:
        return all(m in (0, 2) for m in self.orders)

    def _reduce(self, i: int, e: int) -> int:
        m = self.orders[i]
        if not m:
            return e
        e %= m
        return e - m if e > m // 2 else e

    def normal_form(self, word: Sequence[str]) -> Word:
        syllables: list[list[int]] = []
        for a in word:
            i = self._names.index(a.lower())
            step = 1 if (a.islower() or self.orders[i] == 2) else -1
            if syllables and syllables[-1][0] == i:
                syllables[-1][1] = self._reduce(i, syllables[-1][1] + step)
                if syllables[-1][1] == 0:
                    syllables.pop()
            else:
                syllables.append([i, self._reduce(i, step)])
        out: list[str] = []
        for i, e in syllables:
            a = self._names[i]
            out += [a if e > 0 else a.upper()] * abs(e)
        return tuple(out)

    def to_json(self) -> dict:
        return {"kind": "free_product", "factors": list(self.orders)}


# ==========================================================
# Dehn presentations
# ==========================================================
class DehnOracle(GroupOracle):
    """
    A group given by a Dehn presentation and an asserted hyperbolicity
    constant. Normal forms are Dehn-reduced words; they decide the word
    problem but are not unique, so ``canonical`` is False.
    """

    kind = "dehn"
    canonical = False

    def __init__(self, gens: Sequence[str], rels: Sequence[str], delta: float, search_limit: int = 200_000):
        gens = list(gens)
        if any(len(a) != 1 or not a.islower() for a in gens):
            raise DomainError("Dehn generators must be single lower-case letters.")
        letters = [x for a in gens for x in (a, a.upper())]
        inverses = {a: a.swapcase() for a in letters}
        super().__init__(letters, inverses, float(delta))
        self.gens = tuple(gens)
        self.rels = tuple(rels)
        self.search_limit = search_limit
        self._pieces = self._symmetrize([self.check(tuple(r)) for r in rels])
        logger.debug("DehnOracle: %d symmetrized relators", len(self._pieces))

    def _symmetrize(self, rels: list[Word]) -> list[Word]:
        out = set()
        for r in rels:
            r = _free_reduce(r, self.inverses)
            for w in (r, tuple(self.inverses[a] for a in reversed(r))):
                for k in range(len(w)):
                    out.add(w[k:] + w[:k])
        return sorted(out, key=lambda w: (len(w), w))

    def normal_form(self, word: Sequence[str]) -> Word:
        w = _free_reduce(word, self.inverses)
        changed = True
        while changed:
            changed = False
            for r in self._pieces:
                half = len(r) // 2 + 1
                for k in range(len(r), half - 1, -1):
                    piece = r[:k]
                    for i in range(len(w) - k + 1):
                        if w[i:i + k] == piece:
                            rest = tuple(self.inverses[a] for a in reversed(r[k:]))
                            w = _free_reduce(w[:i] + rest + w[i + k:], self.inverses)
                            changed = True
                            break
                    if changed:
                        break
                if changed:
                    break
        return w

    def length(self, a: Word) -> int:
        """Breadth-first search for the shortest word equal to ``a``."""
        target = self.normal_form(a)
        if not target:
            return 0
        frontier: list[Word] = [IDENTITY]
        seen = 0
        for n in range(1, len(target) + 1):
            nxt: dict[Word, None] = {}
            for w in frontier:
                for s in self.letters:
                    v = self.normal_form(w + (s,))
                    if self.equal(v, target):
                        return n
                    nxt.setdefault(v, None)
            seen += len(nxt)
            if seen > self.search_limit:
                raise BudgetExceeded("word-search", self.search_limit)
            frontier = list(nxt)
        return len(target)

    def to_json(self) -> dict:
        return {"kind": "dehn", "gens": list(self.gens), "rels": list(self.rels), "delta": self.delta}


def make_oracle(spec: dict) -> GroupOracle:
    """Build an oracle from its JSON form."""
    kind = spec.get("kind")
    if kind == "free":
        return FreeGroupOracle(int(spec.get("rank", 2)))
    if kind == "zn":
        return FreeAbelianOracle(int(spec.get("n", 2)))
    if kind == "free_product":
        return FreeProductOracle(spec.get("factors", []))
    if kind == "dehn":
        return DehnOracle(spec.get("gens", []), spec.get("rels", []), float(spec.get("delta", 0)))
    raise DomainError(f"Unknown oracle kind {kind!r}.")
