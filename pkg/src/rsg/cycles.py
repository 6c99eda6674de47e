# src/rsg/cycles.py
"""
Formal sums of nucleus states, the class-difference map on them, and a
Hilbert basis of its kernel.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from src.errors import BudgetExceeded, DomainError
from src.shift.classes import ClassElement, ClassesGroup, class_of
from src.transducer.algebra import state_image
from src.transducer.nucleus import NucleusSet
from src.transducer.state import StateMap

logger = logging.getLogger(__name__)


def state_class_change(p: StateMap, group: ClassesGroup) -> ClassElement:
    """``class(p(𝔠_v)) − class(𝔠_v)``."""
    names = p.graph.node_names
    gens = set(group.generators)
    if names[p.node] not in gens or p.target is None or names[p.target] not in gens:
        raise DomainError("The state does not map between core cones.")
    return class_of(state_image(p), group) - group.node_class(names[p.node])


@dataclass(frozen=True)
class CycleMultiset:
    """A formal sum of nucleus states with its stored class change."""

    items: tuple[tuple[StateMap, int], ...]
    value: ClassElement
    labels: tuple[str, ...] = field(default=(), compare=False)
    nucleus: Optional[NucleusSet] = field(default=None, compare=False, hash=False, repr=False)

    @classmethod
    def of(
        cls, counts: Mapping[StateMap, int], group: ClassesGroup, nucleus: Optional[NucleusSet] = None
    ) -> "CycleMultiset":
        items = tuple(sorted(((s, k) for s, k in counts.items() if k), key=lambda sk: sk[0].sort_key))
        value = group.zero()
        for s, k in items:
            value = value + k * state_class_change(s, group)
        labels = tuple(f"{k}*{nucleus.label(s)}" if k > 1 else nucleus.label(s) for s, k in items) if nucleus is not None else ()
        return cls(items, value, labels, nucleus)

    @property
    def counts(self) -> Counter:
        return Counter(dict(self.items))

    @property
    def size(self) -> int:
        return sum(k for _, k in self.items)

    @property
    def is_cycle(self) -> bool:
        return self.value.is_zero()

    def summands(self) -> list[StateMap]:
        return [s for s, k in self.items for _ in range(k)]

    def recompute(self, group: ClassesGroup) -> ClassElement:
        return del1(self.counts, group)

    def __str__(self) -> str:
        return " + ".join(self.labels) if self.labels else f"<{self.size} states>"


def del1(counts: Mapping[StateMap, int] | Iterable[StateMap], group: ClassesGroup) -> ClassElement:
    """Sum over summands of class(image) − class(domain)."""
    if not isinstance(counts, Mapping):
        counts = Counter(counts)
    value = group.zero()
    for s, k in counts.items():
        value = value + k * state_class_change(s, group)
    return value


# ==========================================================
# Hilbert basis
# ==========================================================
def _constraint_matrix(states: list[StateMap], group: ClassesGroup) -> tuple[np.ndarray, int]:
    """
    Rows are class coordinates; columns are states followed by one slack per
    torsion coordinate, so that cycles are the nonnegative kernel.
    """
    changes = [state_class_change(s, group).coords for s in states]
    moduli = group.moduli
    torsion = [i for i, d in enumerate(moduli) if d]
    a = np.zeros((len(moduli), len(states) + len(torsion)), dtype=object)
    for j, coords in enumerate(changes):
        for i, c in enumerate(coords):
            a[i, j] = int(c)
    for k, i in enumerate(torsion):
        a[i, len(states) + k] = -moduli[i]
    return a, len(torsion)


def hilbert_basis(a: np.ndarray, max_degree: int = 64, budget: int = 200_000) -> list[tuple[int, ...]]:
    """
    Minimal nonzero solutions of ``a x = 0`` over the naturals, by the
    completion procedure that grows candidates along directions of negative
    inner product with their defect.
    """
    n = a.shape[1]
    if a.shape[0] == 0:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    units = [np.array([int(i == j) for i in range(n)], dtype=object) for j in range(n)]
    defects = [a.dot(u) for u in units]
    basis: list[np.ndarray] = []
    frontier = [(u.copy(), d.copy()) for u, d in zip(units, defects)]
    seen = 0
    for degree in range(1, max_degree + 1):
        nxt: dict[tuple, tuple] = {}
        for x, d in frontier:
            if any(all(b <= x) for b in basis):
                continue
            if not any(d):
                basis.append(x)
                continue
            for j in range(n):
                if d.dot(defects[j]) < 0:
                    y = x + units[j]
                    if any(all(b <= y) for b in basis):
                        continue
                    key = tuple(int(v) for v in y)
                    if key not in nxt:
                        nxt[key] = (y, d + defects[j])
                        seen += 1
                        if seen > budget:
                            raise BudgetExceeded("hilbert-candidates", budget)
        frontier = list(nxt.values())
        logger.debug("hilbert_basis: degree %d, %d candidates, %d generators", degree, len(frontier), len(basis))
        if not frontier:
            break
    else:
        raise BudgetExceeded("hilbert-degree", max_degree)
    return sorted(tuple(int(v) for v in b) for b in basis)


@dataclass(frozen=True)
class KernelBasis:
    generators: tuple[CycleMultiset, ...]
    degree: int

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)


def ker_del1_generators(nucleus: NucleusSet, group: ClassesGroup, max_degree: int = 64) -> KernelBasis:
    """
    Hilbert basis of the cycles over ``nucleus``; ``degree`` is the largest
    size of a generator.
    """
    states = list(nucleus.states)
    a, _ = _constraint_matrix(states, group)
    basis = hilbert_basis(a, max_degree)
    gens = []
    for vec in basis:
        counts = {s: vec[i] for i, s in enumerate(states) if vec[i]}
        if counts:
            gens.append(CycleMultiset.of(counts, group, nucleus))
    gens.sort(key=lambda c: (c.size, [s.sort_key for s in c.summands()]))
    degree = max((c.size for c in gens), default=0)
    logger.info("ker_del1: %d generators, degree %d", len(gens), degree)
    return KernelBasis(tuple(gens), degree)


def decompose(cycle: Mapping[StateMap, int], basis: Iterable[CycleMultiset]) -> Optional[list[CycleMultiset]]:
    """Write a cycle as a sum of basis elements (depth-first, basis order)."""
    basis = list(basis)
    target = Counter({s: k for s, k in cycle.items() if k})

    def search(rest: Counter, start: int) -> Optional[list[CycleMultiset]]:
        if not +rest:
            return []
        for i in range(start, len(basis)):
            c = basis[i].counts
            if all(rest[s] >= k for s, k in c.items()):
                tail = search(rest - c, i)
                if tail is not None:
                    return [basis[i]] + tail
        return None

    return search(target, 0)
