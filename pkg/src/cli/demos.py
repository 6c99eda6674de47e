# src/cli/demos.py
"""
Worked examples, each run end to end and reported as a summary dict.

Every demo returns ``{"demo": name, ..., "messages": [...]}``; the
``messages`` list is what ``demo <name>`` prints, the rest goes into the
JSON artifact.
"""
from __future__ import annotations

import logging
from typing import Callable, Optional

import numpy as np

from src.cayley.atoms import AtomTree
from src.cayley.ball import ball
from src.cayley.oracle import FreeAbelianOracle, FreeGroupOracle, FreeProductOracle
from src.cayley.types import type_graph
from src.data_core.config import RunConfig
from src.data_core.writer import velement_payload
from src.errors import ClassObstruction
from src.hyperbolic.certificate import certify_full_contracting_rsg
from src.rsg.cycles import del1, ker_del1_generators
from src.rsg.element import RsgElement, nucleus_extension, rsg_compose
from src.rsg.germs import germs_agree, lambda_map
from src.shift.classes import class_of, classes_group
from src.shift.clopen import ClopenSet
from src.shift.paths import Path, format_path, parse_path
from src.shift.points import RationalPoint
from src.thompson.flexibility import comparison_group, map_cones_v
from src.thompson.velement import VElement
from src.transducer.algebra import compose, image
from src.transducer.catalog import (
    binary_f,
    binary_nucleus,
    counterexample_graph,
    full_shift,
    ternary_f,
    ternary_nucleus,
    two_node_graph,
    wreath_nucleus,
)
from src.transducer.nucleus import verify_nucleus_of_injections
from src.transducer.rational import RationalMap, evaluate, maps_equal
from src.transducer.state import StateMap

logger = logging.getLogger(__name__)

Demo = Callable[[RunConfig, Optional[int]], dict]


def _clopen_str(c: ClopenSet) -> str:
    return " ∪ ".join(format_path(c.graph, p) for p in c.paths) or "∅"


def _axiom_lines(verdicts: dict) -> list[str]:
    return [f"{name}: {'pass' if v.passed else 'FAIL'}{' (' + v.detail + ')' if v.detail else ''}"
            for name, v in verdicts.items()]


# ==========================================================
# shifts and transducers
# ==========================================================
def higman_classes(cfg: RunConfig, n: Optional[int] = None) -> dict:
    n = n or 3
    group = classes_group(full_shift(n))
    two = classes_group(two_node_graph())
    return {
        "demo": "higman-classes",
        "n": n,
        "group": group.describe(),
        "two_node": two.describe(),
        "messages": [
            f"one node with {n} loops: classes group {group.describe()}",
            f"two-node graph: classes group {two.describe()}",
        ],
    }


def ternary(cfg: RunConfig, n: Optional[int] = None) -> dict:
    f_state = ternary_f()
    graph = f_state.graph
    f = RationalMap.from_state(f_state)
    img = image(f)
    nucleus = ternary_nucleus()
    verdicts = verify_nucleus_of_injections(nucleus, cfg.budget_states)
    group = classes_group(graph)
    change = del1([f_state], group)
    basis = ker_del1_generators(nucleus, group)
    square = compose(f, f, cfg.budget_states)
    zero_prefix = RationalMap.build(graph, [(Path.node_path(0), parse_path(graph, "0"), StateMap.identity(graph, 0))])
    samples = {text: format_path(graph, evaluate(f, parse_path(graph, text))[0]) for text in ("1", "2", "0001")}
    gens = [str(c) for c in basis]
    return {
        "demo": "ternary",
        "image": _clopen_str(img),
        "del1_f": str(change),
        "classes": group.describe(),
        "kernel_basis": gens,
        "axioms": {k: v.passed for k, v in verdicts.items()},
        "f_squared_is_zero_prefix": maps_equal(square, zero_prefix),
        "samples": samples,
        "messages": [
            f"image of f: {_clopen_str(img)}",
            f"del1(f) = {change} in {group.describe()}",
            f"kernel generators: {', '.join(gens)}",
            *(f"f({k}) = {v}" for k, v in samples.items()),
            *_axiom_lines(verdicts),
        ],
    }


def binary(cfg: RunConfig, n: Optional[int] = None) -> dict:
    f_state = binary_f()
    graph = f_state.graph
    img = image(RationalMap.from_state(f_state))
    nucleus = binary_nucleus(closed=True)
    verdicts = verify_nucleus_of_injections(nucleus, cfg.budget_states)
    group = classes_group(graph)
    basis = ker_del1_generators(nucleus, group)
    gens = [str(c) for c in basis]
    return {
        "demo": "binary",
        "image": _clopen_str(img),
        "classes": group.describe(),
        "nucleus": sorted(nucleus.label(s) for s in nucleus),
        "kernel_basis": gens,
        "axioms": {k: v.passed for k, v in verdicts.items()},
        "messages": [
            f"image of f: {_clopen_str(img)}",
            f"nucleus {{{', '.join(sorted(nucleus.label(s) for s in nucleus))}}}, classes group {group.describe()}",
            f"kernel generators: {', '.join(gens)}",
            *_axiom_lines(verdicts),
        ],
    }


def wreath(cfg: RunConfig, n: Optional[int] = None) -> dict:
    verdicts = verify_nucleus_of_injections(wreath_nucleus(), cfg.budget_states)
    return {
        "demo": "wreath",
        "axioms": {k: v.passed for k, v in verdicts.items()},
        "messages": _axiom_lines(verdicts),
    }


# ==========================================================
# Thompson elements
# ==========================================================
def counterexample(cfg: RunConfig, n: Optional[int] = None) -> dict:
    graph = counterexample_graph()
    a, aa = parse_path(graph, "a"), parse_path(graph, "a.a")
    ambient = ClopenSet.cone(graph, Path.node_path(graph.node("v")))
    messages = []
    try:
        map_cones_v(graph, [(a, aa)], ambient, cfg.depth, cfg.budget_states)
        obstructed = False
        messages.append("cone a mapped onto cone aa (unexpected)")
    except ClassObstruction as exc:
        obstructed = True
        messages.append(f"no element maps cone a onto cone aa: {exc}")
    x = ClopenSet.of(graph, [parse_path(graph, "x")])
    group = comparison_group(graph, x)
    both = x | ClopenSet.of(graph, [parse_path(graph, "a.x")])
    messages.append(f"classes on {{w}}: {group.describe()}; [x] = {class_of(x, group)}, [x ∪ ax] = {class_of(both, group)}")

    shift = full_shift(2)
    v = map_cones_v(shift, [(parse_path(shift, "0"), parse_path(shift, "00"))], None, cfg.depth, cfg.budget_states)
    messages.append(f"full 2-shift: cone 0 mapped onto cone 00 with {v.size} cones")
    return {
        "demo": "counterexample",
        "obstructed": obstructed,
        "comparison_group": group.describe(),
        "binary_map": velement_payload(v),
        "messages": messages,
    }


# ==========================================================
# groups
# ==========================================================
def z2_atoms(cfg: RunConfig, n: Optional[int] = None) -> dict:
    n = n or 3
    oracle = FreeAbelianOracle(2)
    tree = AtomTree(oracle, cfg.horizon)
    inf = tree.infinite_atoms(n)
    branching = sum(1 for a in inf if len(tree.children(a)) == 3)
    sizes = ball(oracle, n).sizes()
    return {
        "demo": "z2-atoms",
        "n": n,
        "ball_size": sizes[-1],
        "infinite_atoms": len(inf),
        "three_children": branching,
        "flag": inf[0].flag if inf else None,
        "messages": [
            f"|B_{n}| = {sizes[-1]}",
            f"{len(inf)} infinite atoms; {branching} with 3 children",
        ],
    }


def _types_summary(name: str, oracle, cfg: RunConfig) -> dict:
    types = type_graph(oracle, max_level=3, depth=2, horizon=cfg.horizon)
    return {
        "demo": name,
        "types": sorted(types.reps),
        "new_types_per_level": types.report["new_types_per_level"],
        "stabilized": types.stabilized,
        "messages": [
            f"{len(types.reps)} types: {', '.join(sorted(types.reps))}",
            f"new types per level: {types.report['new_types_per_level']}",
            "stabilized" if types.stabilized else "not stabilized",
        ],
    }


def f2_types(cfg: RunConfig, n: Optional[int] = None) -> dict:
    return _types_summary("f2-types", FreeGroupOracle(2), cfg)


def free_product_types(cfg: RunConfig, n: Optional[int] = None) -> dict:
    return _types_summary("free-product-types", FreeProductOracle([2, 0]), cfg)


def f2_certify(cfg: RunConfig, n: Optional[int] = None) -> dict:
    cert = certify_full_contracting_rsg(FreeGroupOracle(2), horizon=cfg.horizon, budget=cfg.budget_states)
    return {"demo": "f2-certify", "certificate": cert, "messages": cert["messages"] + [f"level: {cert['level']}"]}


# ==========================================================
# germs
# ==========================================================
def _random_v_on(graph, cone: Path, rng: np.random.Generator) -> list[tuple[Path, Path]]:
    """Random permutation of the depth-d descendants of ``cone``, d in {1, 2}."""
    depth = int(rng.integers(1, 3))
    code = ClopenSet.cone(graph, cone).paths_at_depth(depth)
    perm = rng.permutation(len(code))
    return [(code[i], code[int(j)]) for i, j in enumerate(perm)]


def binary_germ(cfg: RunConfig, n: Optional[int] = None) -> dict:
    nucleus = binary_nucleus(closed=True)
    verify_nucleus_of_injections(nucleus, cfg.budget_states)
    graph = nucleus.graph
    f = nucleus.find("f")
    zero = parse_path(graph, "0")
    h = nucleus_extension(f, zero, nucleus, depth_limit=cfg.depth)
    tau = (graph.edge("0"),)
    germ = lambda_map(h, Path.node_path(0), tau)
    point = RationalPoint.make(graph, Path.node_path(0), tau)

    # perturb h away from 0^∞ and check the germ survives
    rng = np.random.default_rng(cfg.seed)
    trials = n or 3
    agree = 0
    for _ in range(trials):
        pairs = [(zero, zero)] + _random_v_on(graph, parse_path(graph, "1"), rng)
        v = RsgElement.from_v(VElement.make(graph, pairs), nucleus)
        k = rsg_compose(h, v)
        if lambda_map(k, Path.node_path(0), tau) == germ and germs_agree(h, k, point):
            agree += 1
    label = nucleus.label(germ)
    return {
        "demo": "binary-germ",
        "germ": label,
        "trials": trials,
        "agreeing": agree,
        "messages": [
            f"germ of the extension at 0^∞: {label}",
            f"{agree}/{trials} random perturbations off cone 0 keep the germ",
        ],
    }


DEMOS: dict[str, Demo] = {
    "higman-classes": higman_classes,
    "ternary": ternary,
    "binary": binary,
    "wreath": wreath,
    "counterexample": counterexample,
    "z2-atoms": z2_atoms,
    "f2-types": f2_types,
    "f2-certify": f2_certify,
    "free-product-types": free_product_types,
    "binary-germ": binary_germ,
}


def run_demo(name: str, cfg: RunConfig, n: Optional[int] = None) -> dict:
    if name not in DEMOS:
        raise KeyError(f"Unknown demo {name!r}; choose one of {sorted(DEMOS)}.")
    logger.info("demo %s (n=%s)", name, n)
    return DEMOS[name](cfg, n)
