# src/data_core/writer.py
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import pandas as pd

from src.data_core.config import default_out_dir
from src.data_core.schemas import SCHEMA_VERSION
from src.errors import DomainError
from src.rsg.element import RsgElement
from src.shift.clopen import ClopenSet
from src.shift.graph import DirectedGraph
from src.shift.paths import path_to_json
from src.shift.points import RationalPoint
from src.thompson.velement import VElement
from src.transducer.nucleus import NucleusSet
from src.transducer.rational import RationalMap
from src.transducer.state import StateMap

logger = logging.getLogger(__name__)


# ==========================================================
# domain objects -> payloads
# ==========================================================
def graph_payload(graph: DirectedGraph) -> dict:
    return {
        "nodes": list(graph.node_names),
        "edges": [
            {"id": name, "src": graph.node_names[s], "dst": graph.node_names[d]}
            for name, s, d in zip(graph.edge_names, graph.edge_src, graph.edge_dst)
        ],
    }


def _states_payload(machines: list[tuple[str, StateMap]]) -> tuple[list[dict], dict[str, str]]:
    """Pool the states of several machines, naming shared states once."""
    pool: dict[StateMap, str] = {}
    out: list[dict] = []
    roots: dict[str, str] = {}

    def name_of(sm: StateMap) -> str:
        if sm not in pool:
            pool[sm] = f"s{len(pool)}"
        return pool[sm]

    for label, root in machines:
        roots[label] = name_of(root)
    done: set[StateMap] = set()
    queue = [root for _, root in machines]
    while queue:
        sm = queue.pop(0)
        if sm in done:
            continue
        done.add(sm)
        g = sm.graph
        trans = []
        for e, (o, nxt) in zip(g.out_edges(sm.node), sm.trans[0]):
            child = sm.rebased(nxt)
            trans.append({"edge": g.edge_names[e], "out": path_to_json(g, o), "next": name_of(child)})
            queue.append(child)
        out.append({
            "id": name_of(sm),
            "node": g.node_names[sm.node],
            "target": None if sm.target is None else g.node_names[sm.target],
            "trans": trans,
        })
    out.sort(key=lambda s: int(s["id"][1:]))
    return out, roots


def nucleus_payload(nucleus: NucleusSet) -> dict:
    states, members = _states_payload([(nucleus.label(s), s) for s in nucleus.states])
    return {"members": members, "states": states}


def rational_payload(f: RationalMap) -> dict:
    g = f.graph
    states, roots = _states_payload([(str(i), r.state) for i, r in enumerate(f.entries)])
    return {
        "domain": [path_to_json(g, p) for p in f.domain.paths],
        "initial": [
            {"cone": path_to_json(g, r.cone), "out": path_to_json(g, r.prefix), "state": roots[str(i)]}
            for i, r in enumerate(f.entries)
        ],
        "states": states,
    }


def clopen_payload(c: ClopenSet) -> list:
    return [path_to_json(c.graph, p) for p in c.paths]


def velement_payload(v: VElement) -> dict:
    g = v.graph
    return {
        "domain": [path_to_json(g, p) for p in v.domain],
        "range": [path_to_json(g, p) for p in sorted(v.range)],
        "perm": list(v.perm),
    }


def point_payload(graph: DirectedGraph, p: RationalPoint) -> dict:
    return {"prefix": path_to_json(graph, p.prefix), "period": [graph.edge_names[e] for e in p.period]}


def rsg_payload(h: RsgElement, nucleus_ref: Optional[str] = None) -> dict:
    g = h.graph
    return {
        "entries": [
            {"dom": path_to_json(g, dom), "out": path_to_json(g, out), "state": h.nucleus.label(state)}
            for dom, out, state in h.entries
        ],
        "nucleus": nucleus_ref,
    }


# ==========================================================
# artifact files
# ==========================================================
@dataclass
class ArtifactWriter:
    """
    Save artifacts into the output directory.

    - User provides ONLY base name (no extension).
    - JSON artifacts are stamped with the schema version and the seed and
      written with sorted keys; the timestamp goes to ``<name>.meta.json``.
    - Always overwrites existing files.
    """

    output_dir: Path = field(default_factory=default_out_dir)
    seed: int = 0

    def __post_init__(self):
        self.output_dir = Path(self.output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def _validate_user_filename(name: str) -> None:
        """Only validate to prevent writing outside the output directory."""
        if not name:
            raise DomainError("Filename cannot be empty.")
        if "/" in name or "\\" in name or ".." in name:
            raise DomainError(f"Filename {name!r} must not contain '/', '\\\\' or '..'.")
        if name.lower().endswith((".json", ".dot", ".csv")):
            raise DomainError("Please enter filename WITHOUT extension.")

    @staticmethod
    def dumps(payload: dict) -> str:
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def stamp(self, payload: dict) -> dict:
        return {**payload, "schema": SCHEMA_VERSION, "seed": self.seed}

    def save_json(self, payload: dict, name: str) -> Path:
        self._validate_user_filename(name)
        out_path = self.output_dir / f"{name}.json"
        out_path.write_text(self.dumps(self.stamp(payload)), encoding="utf-8")
        meta = {"artifact": out_path.name, "written_at": datetime.now(timezone.utc).isoformat()}
        (self.output_dir / f"{name}.meta.json").write_text(self.dumps(meta), encoding="utf-8")
        logger.info("wrote %s", out_path)
        return out_path

    def save_dot(self, source: str, name: str) -> Path:
        self._validate_user_filename(name)
        out_path = self.output_dir / f"{name}.dot"
        out_path.write_text(source, encoding="utf-8")
        logger.info("wrote %s", out_path)
        return out_path

    def save_csv(self, table: pd.DataFrame, name: str, *, index: bool = False) -> Path:
        self._validate_user_filename(name)
        out_path = self.output_dir / f"{name}.csv"
        table.to_csv(out_path, index=index)
        logger.info("wrote %s", out_path)
        return out_path
