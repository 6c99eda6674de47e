# src/data_core/config.py
from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

OUT_ENV = "RSG_WORKBENCH_OUT"


def find_project_root(start: Optional[Path] = None) -> Path:
    """
    Walk upwards looking for common project markers.
    Falls back to current working directory if not found.
    """
    markers = ("requirements.txt", "pyproject.toml", ".git")
    p = (start or Path(__file__).resolve().parent).resolve()
    for parent in [p] + list(p.parents):
        for m in markers:
            if (parent / m).exists():
                return parent
    return Path.cwd().resolve()


def default_out_dir() -> Path:
    env = os.environ.get(OUT_ENV)
    if env:
        return Path(env).expanduser().resolve()
    return find_project_root() / "output"


class RunConfig(BaseModel):
    """Budgets and paths shared by every command."""

    model_config = ConfigDict(validate_assignment=True)

    input: Optional[Path] = None
    out: Path = Field(default_factory=default_out_dir)
    depth: int = 12
    horizon: int = 6
    budget_states: int = 10_000
    ball_cap: int = 1_000_000
    jobs: int = 1
    seed: int = 0

    @field_validator("depth", "horizon", "budget_states", "ball_cap", "jobs")
    @classmethod
    def _positive(cls, v: int, info) -> int:
        if v < 1:
            raise ValueError(f"{info.field_name} must be positive, got {v}.")
        return v

    @field_validator("seed")
    @classmethod
    def _nonnegative(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"seed must be nonnegative, got {v}.")
        return v

    def budgets(self) -> dict:
        return self.model_dump(include={"depth", "horizon", "budget_states", "ball_cap", "jobs"})
