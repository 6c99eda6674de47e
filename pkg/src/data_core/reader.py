# src/data_core/reader.py
from __future__ import annotations

import json
import logging
import os
from typing import Optional

from pydantic import ValidationError

from src.cayley.oracle import GroupOracle, make_oracle
from src.data_core.schemas import (
    GraphModel,
    NucleusModel,
    OracleModel,
    PathValue,
    PointModel,
    RsgElementModel,
    StateModel,
    TransducerModel,
    VElementModel,
    WorkbenchInput,
)
from src.errors import DomainError, GraphError
from src.rsg.element import RsgElement
from src.shift.clopen import ClopenSet
from src.shift.graph import DirectedGraph
from src.shift.paths import Path, path_from_json
from src.shift.points import RationalPoint
from src.thompson.velement import VElement
from src.transducer.nucleus import NucleusSet
from src.transducer.rational import RationalMap
from src.transducer.state import RawMachine, canonicalize

logger = logging.getLogger(__name__)


# ==========================================================
# payload -> domain objects
# ==========================================================
def graph_from_model(model: GraphModel) -> DirectedGraph:
    return DirectedGraph.from_spec(model.nodes, [(e.id, e.src, e.dst) for e in model.edges])


def _pool(graph: DirectedGraph, states: list[StateModel]) -> tuple[RawMachine, dict[str, int]]:
    """Load a pool of named states into one raw machine."""
    raw = RawMachine(graph)
    index: dict[str, int] = {}
    for s in states:
        if s.id in index:
            raise DomainError(f"Duplicate state id {s.id!r}.")
        index[s.id] = raw.add_state(graph.node(s.node), None if s.target is None else graph.node(s.target))
    for s in states:
        q = index[s.id]
        given = {t.edge for t in s.trans}
        needed = {graph.edge_names[e] for e in graph.out_edges(graph.node(s.node))}
        if given != needed:
            raise DomainError(f"State {s.id!r} must have one transition per edge of {s.node}: missing "
                              f"{sorted(needed - given)}, unexpected {sorted(given - needed)}.")
        for t in s.trans:
            if t.next not in index:
                raise DomainError(f"State {s.id!r} moves to unknown state {t.next!r}.")
            raw.set_transition(q, graph.edge(t.edge), path_from_json(graph, t.out), index[t.next])
    return raw, index


def nucleus_from_model(graph: DirectedGraph, model: NucleusModel) -> NucleusSet:
    raw, index = _pool(graph, model.states)
    states, labels = [], {}
    for label, sid in model.members.items():
        if sid not in index:
            raise DomainError(f"Nucleus member {label!r} refers to unknown state {sid!r}.")
        prefix, sm = canonicalize(raw, index[sid])
        if prefix.edges:
            raise DomainError(f"Nucleus member {label!r} has a common output prefix; nucleus states must not.")
        states.append(sm)
        labels[sm] = label
    return NucleusSet(graph, tuple(states), labels)


def rational_from_model(graph: DirectedGraph, model: TransducerModel) -> RationalMap:
    raw, index = _pool(graph, model.states)
    rows = []
    for entry in model.initial:
        if entry.state not in index:
            raise DomainError(f"Initial entry refers to unknown state {entry.state!r}.")
        prefix, sm = canonicalize(raw, index[entry.state])
        rows.append((path_from_json(graph, entry.cone), path_from_json(graph, entry.out).concat(prefix), sm))
    f = RationalMap.build(graph, rows)
    if model.domain is not None and clopen_from_paths(graph, model.domain) != f.domain:
        raise DomainError("The declared domain differs from the union of the entry cones.")
    return f


def clopen_from_paths(graph: DirectedGraph, paths: list[PathValue]) -> ClopenSet:
    return ClopenSet.of(graph, [path_from_json(graph, p) for p in paths])


def velement_from_model(graph: DirectedGraph, model: VElementModel) -> VElement:
    if not (len(model.domain) == len(model.range) == len(model.perm)):
        raise DomainError("domain, range and perm must have equal lengths.")
    dom = [path_from_json(graph, p) for p in model.domain]
    rng = [path_from_json(graph, p) for p in model.range]
    return VElement.make(graph, [(dom[i], rng[model.perm[i]]) for i in range(len(dom))])


def point_from_model(graph: DirectedGraph, model: PointModel) -> RationalPoint:
    return RationalPoint.make(graph, path_from_json(graph, model.prefix), tuple(graph.edge(e) for e in model.period))


def rsg_from_model(nucleus: NucleusSet, model: RsgElementModel, ambient: Optional[ClopenSet] = None) -> RsgElement:
    g = nucleus.graph
    rows = []
    for entry in model.entries:
        try:
            state = nucleus.find(entry.state)
        except KeyError as exc:
            raise DomainError(str(exc)) from None
        rows.append((path_from_json(g, entry.dom), path_from_json(g, entry.out), state))
    if ambient is None:
        ambient = ClopenSet.of(g, [r[0] for r in rows])
    return RsgElement.build(nucleus, ambient, rows)


def oracle_from_model(model: OracleModel) -> GroupOracle:
    return make_oracle(model.spec())


# ==========================================================
# file reader
# ==========================================================
class DataReader:
    """
    Responsibility: read one workbench JSON file, validate it against the
    schemas and hand out domain objects by name.

    Sections that are not present raise DomainError when requested.
    """

    def __init__(self, file_path: str):
        self.file_path = file_path
        self.file_extension = os.path.splitext(file_path)[1].lower()
        self.payload: Optional[WorkbenchInput] = None
        self._graph: Optional[DirectedGraph] = None
        self._nuclei: dict[str, NucleusSet] = {}

    def read_data(self) -> WorkbenchInput:
        if self.file_extension != ".json":
            raise DomainError(f"Unsupported file type: {self.file_extension}. Only JSON inputs are accepted.")
        try:
            with open(self.file_path, "r", encoding="utf-8") as f:
                raw = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise DomainError(f"Could not read {self.file_path}: {e}") from e
        try:
            self.payload = WorkbenchInput.model_validate(raw)
        except ValidationError as e:
            raise DomainError(f"{self.file_path} does not match the input schema:\n{e}") from e
        logger.debug("DataReader: loaded %s", self.file_path)
        return self.payload

    def _data(self) -> WorkbenchInput:
        return self.payload if self.payload is not None else self.read_data()

    # -------------------------
    # sections
    # -------------------------
    def graph(self) -> DirectedGraph:
        if self._graph is None:
            model = self._data().graph
            if model is None:
                raise GraphError(f"{self.file_path} has no 'graph' section.")
            self._graph = graph_from_model(model)
        return self._graph

    def _section(self, section: str, name: Optional[str]):
        table = getattr(self._data(), section)
        if not table:
            raise DomainError(f"{self.file_path} has no '{section}' section.")
        if name is None:
            if len(table) != 1:
                raise DomainError(f"Choose one of {sorted(table)} from '{section}'.")
            name = next(iter(table))
        if name not in table:
            raise DomainError(f"No entry {name!r} in '{section}'; available: {sorted(table)}.")
        return name, table[name]

    def nucleus(self, name: Optional[str] = None) -> NucleusSet:
        name, model = self._section("nuclei", name)
        if name not in self._nuclei:
            self._nuclei[name] = nucleus_from_model(self.graph(), model)
        return self._nuclei[name]

    def rational_map(self, name: Optional[str] = None) -> RationalMap:
        _, model = self._section("maps", name)
        return rational_from_model(self.graph(), model)

    def velement(self, name: Optional[str] = None) -> VElement:
        _, model = self._section("velements", name)
        return velement_from_model(self.graph(), model)

    def point(self, name: Optional[str] = None) -> RationalPoint:
        _, model = self._section("points", name)
        return point_from_model(self.graph(), model)

    def clopen(self, name: Optional[str] = None) -> ClopenSet:
        _, paths = self._section("clopens", name)
        return clopen_from_paths(self.graph(), paths)

    def rsg_element(self, name: Optional[str] = None) -> RsgElement:
        _, model = self._section("elements", name)
        nucleus = self.nucleus(model.nucleus)
        return rsg_from_model(nucleus, model)

    def oracle(self) -> GroupOracle:
        model = self._data().oracle
        if model is None:
            raise DomainError(f"{self.file_path} has no 'oracle' section.")
        return oracle_from_model(model)

    def path(self, value: PathValue) -> Path:
        return path_from_json(self.graph(), value)


def read_input(file_path: str) -> DataReader:
    """Open and validate ``file_path``; raises a WorkbenchError subclass on bad input."""
    reader = DataReader(file_path)
    reader.read_data()
    return reader
