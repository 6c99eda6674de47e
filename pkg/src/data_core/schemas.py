# src/data_core/schemas.py
"""
pydantic models for every JSON payload the workbench reads or writes.

Paths inside payloads use the string-id form of ``src.shift.paths``:
a list of edge ids, ``{"node": v}`` for a node path and
``{"null": true}`` for the null path.
"""
from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

SCHEMA_VERSION = "v1"

PathValue = Union[list[str], dict]


class _Payload(BaseModel):
    model_config = ConfigDict(extra="ignore")


# -------------------------
# shift
# -------------------------
class EdgeModel(_Payload):
    id: str
    src: str
    dst: str


class GraphModel(_Payload):
    nodes: list[str]
    edges: list[EdgeModel]

    @field_validator("nodes")
    @classmethod
    def _nonempty(cls, v: list[str]) -> list[str]:
        if not v:
            raise ValueError("A graph needs at least one node.")
        return v


# -------------------------
# transducers
# -------------------------
class TransitionModel(_Payload):
    edge: str
    out: PathValue
    next: str


class StateModel(_Payload):
    id: str
    node: str
    target: Optional[str] = None
    trans: list[TransitionModel]


class EntryModel(_Payload):
    cone: PathValue
    out: PathValue
    state: str


class TransducerModel(_Payload):
    """A rational map: initial table over a pool of states."""

    domain: Optional[list[PathValue]] = None
    initial: list[EntryModel]
    states: list[StateModel]


class NucleusModel(_Payload):
    """Named members over one pool of states; ``members`` maps a label to a state id."""

    members: dict[str, str]
    states: list[StateModel]


# -------------------------
# thompson and rsg
# -------------------------
class VElementModel(_Payload):
    domain: list[PathValue]
    range: list[PathValue]
    perm: list[int]

    @field_validator("perm")
    @classmethod
    def _is_permutation(cls, v: list[int]) -> list[int]:
        if sorted(v) != list(range(len(v))):
            raise ValueError(f"perm must be a permutation of 0..{len(v) - 1}, got {v}.")
        return v


class PointModel(_Payload):
    prefix: PathValue
    period: list[str]


class RsgEntryModel(_Payload):
    dom: PathValue
    out: PathValue
    state: str


class RsgElementModel(_Payload):
    entries: list[RsgEntryModel]
    nucleus: Optional[str] = None


# -------------------------
# groups
# -------------------------
class OracleModel(_Payload):
    kind: Literal["free", "zn", "free_product", "dehn"]
    rank: Optional[int] = Field(default=None, ge=1)
    n: Optional[int] = Field(default=None, ge=1, le=4)
    factors: Optional[list[int]] = None
    gens: Optional[list[str]] = None
    rels: Optional[list[str]] = None
    delta: Optional[float] = Field(default=None, ge=0)

    def spec(self) -> dict:
        return self.model_dump(exclude_none=True)


# -------------------------
# input bundle
# -------------------------
class WorkbenchInput(_Payload):
    """
    One input file may carry a graph with nuclei, maps, V elements, RSG
    elements and points, or an oracle. Every section is optional.
    """

    graph: Optional[GraphModel] = None
    nuclei: dict[str, NucleusModel] = Field(default_factory=dict)
    maps: dict[str, TransducerModel] = Field(default_factory=dict)
    velements: dict[str, VElementModel] = Field(default_factory=dict)
    elements: dict[str, RsgElementModel] = Field(default_factory=dict)
    points: dict[str, PointModel] = Field(default_factory=dict)
    clopens: dict[str, list[PathValue]] = Field(default_factory=dict)
    oracle: Optional[OracleModel] = None
