# src/hyperbolic/certificate.py
"""
End-to-end certification that the boundary action of a group presents a
full contracting RSG: hyperbolicity gate, type graph, irreducible core,
addresses, nucleus extraction, nucleus axioms and a faithfulness check.
"""
from __future__ import annotations

import logging
from typing import Optional

from src.cayley.atoms import AtomTree
from src.cayley.ball import ball
from src.cayley.oracle import GroupOracle
from src.cayley.types import AddressSystem, address_system, type_graph, type_graph_dot
from src.data_core.writer import nucleus_payload, rational_payload
from src.errors import CertificateError, GraphError, WorkbenchError
from src.hyperbolic.boundary import boundary_local_action, nucleus_extract
from src.hyperbolic.triples import constants
from src.shift.graph import DirectedGraph, core_nodes
from src.transducer.nucleus import nucleus_dot, verify_nucleus_of_injections
from src.transducer.rational import RationalMap

logger = logging.getLogger(__name__)

STAGES = ("hyperbolicity", "types", "core", "addresses", "nucleus", "axioms", "faithfulness")


def require_core(graph: DirectedGraph) -> frozenset[int]:
    """Node set of the irreducible core; CertificateError('core') otherwise."""
    try:
        core = core_nodes(graph)
    except GraphError as exc:
        raise CertificateError("core", str(exc)) from exc
    if core is None:
        raise CertificateError("core", "the graph has no irreducible core")
    return core


def faithfulness_check(phi: AddressSystem, radius: int = 2) -> dict:
    """
    Every nontrivial element of ``B_radius`` moves some address of length
    ``radius + 1``, and distinct elements act differently there.
    """
    o = phi.oracle
    depth = radius + 1
    root = phi.root_path()
    seen: dict[tuple, str] = {}
    trivial: list[str] = []
    clashes: list[tuple[str, str]] = []
    for g in ball(o, radius).elements:
        action = boundary_local_action(g, root, phi, depth)
        key = tuple(sorted((z.sort_key, action.table[z].sort_key) for z in action.table if len(z) == depth))
        name = o.word_str(g)
        if g and all(action.table[z] == z for z in action.table if len(z) == depth):
            trivial.append(name)
        if key in seen:
            clashes.append((seen[key], name))
        else:
            seen[key] = name
    ok = not trivial and not clashes
    logger.info("faithfulness: %d elements, trivial=%d, clashes=%d", len(seen) + len(clashes), len(trivial), len(clashes))
    return {"passed": ok, "radius": radius, "trivial": trivial, "clashes": clashes}


def certify_full_contracting_rsg(
    oracle: GroupOracle,
    max_level: int = 3,
    depth: int = 2,
    horizon: int = 6,
    budget: int = 10_000,
    radius: int = 2,
    tree: Optional[AtomTree] = None,
) -> dict:
    """
    Run every stage in order and return the certificate.

    Raises
    ------
    CertificateError
        Naming the first stage that fails.
    """
    messages: list[str] = []
    stages: list[dict] = []

    def passed(stage: str, detail: str) -> None:
        stages.append({"stage": stage, "status": "pass", "detail": detail})
        messages.append(f"{stage}: {detail}")
        logger.info("certify: %s passed (%s)", stage, detail)

    # hyperbolicity
    if oracle.delta is None:
        raise CertificateError("hyperbolicity", f"the {oracle.kind} oracle carries no hyperbolicity constant")
    passed("hyperbolicity", f"delta={oracle.delta:g} asserted by the {oracle.kind} oracle")

    tree = tree or AtomTree(oracle, horizon)
    level = "certified" if tree.mode == "cone" else f"heuristic({tree.horizon})"

    # types
    types = type_graph(oracle, max_level, depth, horizon, tree)
    if not types.stabilized:
        raise CertificateError("types", f"no stabilization: {types.report['new_types_per_level']}")
    unproven = len(types.report["condition_ii_divergences"]) + len(types.report["uncertified_merges"])
    if unproven:
        level = f"heuristic({tree.horizon})"
    passed(
        "types",
        f"{len(types.reps)} types, new per level {types.report['new_types_per_level']}, {unproven} uncertified merges",
    )

    # core
    core = require_core(types.graph)
    passed("core", f"{len(core)} core types: {sorted(types.graph.node_names[v] for v in core)}")

    # addresses
    phi = address_system(types, tree)
    passed("addresses", f"root type {types.root}")

    # nucleus
    try:
        nucleus, machines = nucleus_extract(phi, budget=budget)
    except WorkbenchError as exc:
        raise CertificateError("nucleus", str(exc)) from exc
    passed("nucleus", f"{len(nucleus)} states from {len(machines)} generators")

    # axioms
    verdicts = verify_nucleus_of_injections(nucleus, budget)
    failed = [v.axiom for v in verdicts.values() if not v.passed]
    if failed:
        raise CertificateError("axioms", f"failed: {failed}")
    passed("axioms", "all six axioms pass")

    # faithfulness
    faithful = faithfulness_check(phi, radius)
    if not faithful["passed"]:
        raise CertificateError("faithfulness", f"trivial={faithful['trivial']}, clashes={faithful['clashes'][:4]}")
    passed("faithfulness", f"distinct nontrivial actions on B_{radius}")

    return {
        "oracle": oracle.to_json(),
        "level": level,
        "full": level == "certified",
        "stages": stages,
        "messages": messages,
        "budgets": {"max_level": max_level, "depth": depth, "horizon": horizon, "states": budget, "radius": radius},
        "constants": constants(oracle),
        "type_graph": type_graph_dot(types),
        "nucleus": {
            "size": len(nucleus),
            "identities": sum(s.is_identity() for s in nucleus),
            "transducer": nucleus_payload(nucleus),
            "generators": {name: rational_payload(RationalMap.from_state(sm)) for name, sm in machines.items()},
        },
        "nucleus_dot": nucleus_dot(nucleus),
    }
