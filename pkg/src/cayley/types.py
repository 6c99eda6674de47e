# src/cayley/types.py
"""
Types of atoms, the type graph, and the system of addresses it induces.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import pandas as pd
from graphviz import Digraph

from src.cayley.atoms import Atom, AtomTree
from src.cayley.morphisms import find_morphism
from src.cayley.oracle import IDENTITY, GroupOracle, Word
from src.errors import BudgetExceeded, DomainError, GraphError
from src.shift.graph import DirectedGraph, core_nodes
from src.shift.paths import Path, extend, make_path

logger = logging.getLogger(__name__)

ROOT = "r"


@dataclass(frozen=True)
class ChildEdge:
    edge: str
    index: int
    child_type: str
    child: Atom
    # morphism from the representative of child_type onto ``child``
    morphism: Word


@dataclass
class TypeGraph:
    graph: DirectedGraph
    root: str
    reps: dict[str, Atom]
    out: dict[str, list[ChildEdge]]
    report: dict = field(default_factory=dict)

    @property
    def stabilized(self) -> bool:
        return bool(self.report.get("stabilized"))

    def edge_info(self, e: int) -> tuple[str, ChildEdge]:
        name = self.graph.edge_names[e]
        src = self.graph.node_names[self.graph.edge_src[e]]
        return src, next(c for c in self.out[src] if c.edge == name)

    def frame(self, oracle: GroupOracle) -> pd.DataFrame:
        rows = []
        for name, rep in self.reps.items():
            rows.append(
                {
                    "type": name,
                    "level": rep.level,
                    "representative": oracle.word_str(rep.base),
                    "children": len(self.out[name]),
                    "child_types": " ".join(c.child_type for c in self.out[name]),
                }
            )
        return pd.DataFrame(rows)


def _classify(
    tree: AtomTree, atom: Atom, types: list[tuple[str, Atom]], depth: int, strict: bool, unproven: dict
) -> Optional[tuple[str, Word]]:
    for name, rep in types:
        if rep.level > atom.level:
            continue
        res = find_morphism(tree, rep, atom, depth, strict)
        if res is not None:
            if not res.certified:
                key = "condition_ii" if res.condition == "ii" else "inconclusive"
                unproven[key].append((name, atom.level, tree.oracle.word_str(res.g)))
            return name, res.g
    return None


def type_graph(
    oracle: GroupOracle,
    max_level: int = 3,
    depth: int = 2,
    horizon: int = 6,
    tree: Optional[AtomTree] = None,
    max_types: int = 256,
    strict: bool = False,
) -> TypeGraph:
    """
    Classify the infinite atoms up to ``max_level`` by morphism search, then
    close the set of types under taking children of representatives.

    With ``strict=True`` only certified morphisms merge two atoms. Otherwise
    atoms also merge when a candidate carries one subtree of descendants onto
    the other, conditions (i) and (iii), even though condition (ii) fails or
    no certificate is available; such merges are listed in the report. In
    ℤ² the quadrant atoms only merge this way.

    The report says whether no new type appeared on the last two scanned
    levels nor during the closure; that is evidence, not proof.
    """
    tree = tree or AtomTree(oracle, horizon)
    types: list[tuple[str, Atom]] = []
    unproven: dict[str, list] = {"condition_ii": [], "inconclusive": []}
    new_per_level: list[int] = []
    consistent = True
    seen_children: dict[str, int] = {}

    for level in range(max_level + 1):
        found = 0
        for atom in tree.infinite_atoms(level):
            hit = _classify(tree, atom, types, depth, strict, unproven)
            if hit is None:
                name = ROOT if level == 0 else f"t{len(types)}"
                types.append((name, atom))
                found += 1
                if len(types) > max_types:
                    raise BudgetExceeded("types", max_types, new_per_level)
                hit = (name, IDENTITY)
            n_kids = len(tree.children(atom)) if level < max_level else None
            if n_kids is not None:
                if seen_children.setdefault(hit[0], n_kids) != n_kids:
                    consistent = False
        new_per_level.append(found)
        logger.info("type_graph: level %d, %d new types, %d total", level, found, len(types))

    # close under children of representatives
    out: dict[str, list[ChildEdge]] = {}
    added_in_closure = 0
    queue = list(types)
    while queue:
        name, rep = queue.pop(0)
        edges = []
        for i, child in enumerate(tree.children(rep)):
            hit = _classify(tree, child, types, depth, strict, unproven)
            if hit is None:
                child_name = f"t{len(types)}"
                types.append((child_name, child))
                queue.append((child_name, child))
                added_in_closure += 1
                if len(types) > max_types:
                    raise BudgetExceeded("types", max_types, new_per_level)
                hit = (child_name, IDENTITY)
            edges.append(ChildEdge(f"{name}:{i}", i, hit[0], child, hit[1]))
        out[name] = edges

    reps = dict(types)
    graph = DirectedGraph.from_spec(
        list(reps), [(c.edge, name, c.child_type) for name, edges in out.items() for c in edges]
    )
    stabilized = (
        len(new_per_level) >= 2 and new_per_level[-1] == 0 and new_per_level[-2] == 0 and added_in_closure == 0
    )
    report = {
        "stabilized": stabilized,
        "new_types_per_level": new_per_level,
        "added_in_closure": added_in_closure,
        "consistent_children": consistent,
        "strict": strict,
        "condition_ii_divergences": unproven["condition_ii"],
        "uncertified_merges": unproven["inconclusive"],
        "mode": tree.mode,
    }
    if unproven["condition_ii"]:
        logger.warning("type_graph: %d merges where condition (ii) fails", len(unproven["condition_ii"]))
    if unproven["inconclusive"]:
        logger.info("type_graph: %d merges without a certificate", len(unproven["inconclusive"]))
    logger.info("type_graph: %d types, stabilized=%s", len(reps), stabilized)
    tg = TypeGraph(graph, ROOT, reps, out, report)
    return tg


# ==========================================================
# addresses
# ==========================================================
class AddressSystem:
    """
    Identifies paths from the root node of the type graph with atoms.

    ``atom(α)`` returns ``A_α`` together with the canonical morphism from
    the representative of ``t(α)`` onto ``A_α``; canonical morphisms compose
    along the chosen child witnesses.
    """

    def __init__(self, types: TypeGraph, tree: AtomTree):
        self.types = types
        self.tree = tree
        self.oracle = tree.oracle
        self.graph = types.graph
        self.root = self.graph.node(types.root)
        self._cache: dict[Path, tuple[Atom, Word]] = {}

    def root_path(self) -> Path:
        return Path.node_path(self.root)

    def path(self, edges: list[str]) -> Path:
        if not edges:
            return self.root_path()
        return make_path(self.graph, [self.graph.edge(e) for e in edges])

    def atom(self, alpha: Path) -> tuple[Atom, Word]:
        if alpha.origin != self.root:
            raise DomainError("Addresses start at the root node.")
        if alpha in self._cache:
            return self._cache[alpha]
        o = self.oracle
        atom, m = self.types.reps[self.types.root], IDENTITY
        for e in alpha.edges:
            _, ce = self.types.edge_info(e)
            atom = self.tree.atom_of(o.multiply(m, ce.child.base), atom.level + 1)
            m = o.multiply(m, ce.morphism)
        self._cache[alpha] = (atom, m)
        return atom, m

    def canonical_morphism(self, alpha: Path, beta: Path) -> Word:
        if alpha.terminus != beta.terminus:
            raise DomainError("Canonical morphisms need addresses with the same terminus.")
        _, ma = self.atom(alpha)
        _, mb = self.atom(beta)
        return self.oracle.multiply(mb, self.oracle.inverse(ma))

    def step(self, alpha: Path, x: Word) -> Optional[Path]:
        """The child address of ``alpha`` whose atom contains ``x``, if any."""
        for e in self.graph.out_edges(alpha.terminus):
            child = extend(self.graph, alpha, e)
            if self.tree.contains(self.atom(child)[0], x):
                return child
        return None

    def address_of(self, x: Word, depth: int) -> Path:
        """Deepest address of length ``<= depth`` whose atom contains ``x``."""
        alpha = self.root_path()
        for _ in range(depth):
            nxt = self.step(alpha, x)
            if nxt is None:
                break
            alpha = nxt
        return alpha

    def smallest_containing(self, xs: list[Word], start: Optional[Path] = None, max_depth: int = 64) -> Path:
        """Deepest address below ``start`` whose atom contains every point of ``xs``."""
        alpha = self.root_path() if start is None else start
        for _ in range(max_depth):
            nxt = self.step(alpha, xs[0])
            if nxt is None or not all(self.tree.contains(self.atom(nxt)[0], x) for x in xs[1:]):
                break
            alpha = nxt
        return alpha


def address_system(types: TypeGraph, tree: AtomTree) -> AddressSystem:
    if not types.stabilized:
        raise DomainError("address_system needs a stabilized type graph.")
    return AddressSystem(types, tree)


# ==========================================================
# tables and views
# ==========================================================
def _level_rows(tree: AtomTree, n: int) -> list[dict]:
    return [
        {
            "level": n,
            "profile_hash": a.profile_hash,
            "witnesses": len(a.witnesses),
            "children": len(tree.children(a)) if a.infinite else 0,
            "flag": a.flag,
            "base": tree.oracle.word_str(a.base),
        }
        for a in tree.atoms(n)
    ]


def atoms_frame(tree: AtomTree, levels: range, jobs: int = 1) -> pd.DataFrame:
    """
    One row per atom: level, profile hash, witness count, children, flag.

    With ``jobs > 1`` levels are computed by a thread pool, each worker on a
    fresh tree with the same settings; rows keep level order.
    """
    if jobs > 1 and len(levels) > 1:
        def fresh() -> AtomTree:
            return AtomTree(tree.oracle, tree.horizon, tree.mode, tree.sample_depth, tree.cap)

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(lambda n: _level_rows(fresh(), n), levels))
        logger.debug("atoms_frame: %d levels on %d workers", len(levels), jobs)
    else:
        chunks = [_level_rows(tree, n) for n in levels]
    rows = [r for chunk in chunks for r in chunk]
    return pd.DataFrame(rows, columns=["level", "profile_hash", "witnesses", "children", "flag", "base"])


def atom_tree_dot(tree: AtomTree, max_level: int, name: str = "atoms") -> str:
    g = Digraph(name, graph_attr=dict(rankdir="TB"), node_attr=dict(fontname="Monospace", fontsize="9"))
    frontier = [tree.root()]
    g.node(frontier[0].profile_hash, label="G")
    for _ in range(max_level):
        nxt = []
        for a in frontier:
            for c in tree.children(a):
                g.node(c.profile_hash, label=tree.oracle.word_str(c.base))
                g.edge(a.profile_hash, c.profile_hash)
                nxt.append(c)
        frontier = nxt
    return g.source


def type_graph_dot(types: TypeGraph) -> str:
    try:
        core = core_nodes(types.graph) or ()
    except GraphError:
        core = ()
    return types.graph.to_dot(core=core, name="types")
