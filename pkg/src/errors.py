# src/errors.py
from __future__ import annotations

from typing import Optional, Sequence


class WorkbenchError(ValueError):
    """Base class for every error raised by the workbench."""


class GraphError(WorkbenchError):
    pass


class PathError(WorkbenchError):
    pass


class DomainError(WorkbenchError):
    pass


class DegenerateMapError(WorkbenchError):
    pass


class BudgetExceeded(WorkbenchError):
    """
    A fuel, state, depth or memory budget ran out.

    Parameters
    ----------
    budget : str
        Name of the exhausted budget (``"states"``, ``"depth"``, ...).
    limit : int
        The configured limit.
    growth : sequence of int, optional
        Sizes observed before giving up, reported as evidence.
    """

    def __init__(self, budget: str, limit: int, growth: Optional[Sequence[int]] = None, detail: str = ""):
        self.budget = budget
        self.limit = limit
        self.growth = list(growth or [])
        msg = f"Budget '{budget}' exceeded (limit={limit})."
        if detail:
            msg += f" {detail}"
        if self.growth:
            msg += f" Growth: {self.growth[-8:]}"
        super().__init__(msg)


class ClassObstruction(WorkbenchError):
    def __init__(self, left, right, detail: str = ""):
        self.left = left
        self.right = right
        msg = f"Class obstruction: {left} != {right}."
        if detail:
            msg += f" {detail}"
        super().__init__(msg)


class CertificateError(WorkbenchError):
    def __init__(self, stage: str, detail: str = ""):
        self.stage = stage
        super().__init__(f"Certification failed at stage '{stage}'. {detail}".strip())
