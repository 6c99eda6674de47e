# src/cli/main.py
"""
Command tree of the workbench.

    python app.py [global options] <group> <command> [options]

Exit codes: 0 success, 1 negative result (class obstruction, failed axioms,
failed certificate, degenerate map), 2 usage or budget error.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import click
import pandas as pd
from pydantic import ValidationError

from src.cayley.atoms import AtomTree
from src.cayley.oracle import IDENTITY, GroupOracle, Word, make_oracle
from src.cayley.types import address_system, atom_tree_dot, atoms_frame, type_graph, type_graph_dot
from src.cli.demos import DEMOS, run_demo
from src.data_core.config import RunConfig
from src.data_core.reader import DataReader, read_input
from src.data_core.writer import (
    ArtifactWriter,
    graph_payload,
    nucleus_payload,
    point_payload,
    rational_payload,
    rsg_payload,
    velement_payload,
)
from src.errors import BudgetExceeded, CertificateError, ClassObstruction, DegenerateMapError, WorkbenchError
from src.hyperbolic.boundary import nucleus_extract
from src.hyperbolic.certificate import certify_full_contracting_rsg
from src.hyperbolic.triples import constants, mapping_triple, signature
from src.rsg.cycles import ker_del1_generators
from src.rsg.element import RsgElement, rsg_compose, rsg_membership
from src.rsg.generators import normalish_form, recognize_normalish
from src.rsg.germs import lambda_map
from src.shift.classes import classes_group, relative_classes_group
from src.shift.clopen import ClopenSet
from src.shift.graph import DirectedGraph, check_subshift, core_nodes, irreducible, irreducible_core
from src.shift.paths import format_path, parse_path, paths_from
from src.thompson.flexibility import map_cones_v, push_into_core
from src.thompson.velement import VElement, v_compose
from src.transducer.algebra import compose, evaluate_point, invert
from src.transducer.catalog import (
    complete_minus_self,
    counterexample_graph,
    cycle_graph,
    full_shift,
    houghton_graph,
    two_node_graph,
)
from src.transducer.nucleus import NucleusSet, nucleus_dot, nucleus_of, verify_nucleus_of_injections
from src.transducer.rational import RationalMap, evaluate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

NEGATIVE = (ClassObstruction, CertificateError, DegenerateMapError)

# name -> (takes a size argument, builder)
GRAPHS: dict[str, tuple[bool, Callable[..., DirectedGraph]]] = {
    "full": (True, full_shift),
    "two-node": (False, two_node_graph),
    "houghton": (True, houghton_graph),
    "counterexample": (False, counterexample_graph),
    "cycle": (True, cycle_graph),
    "complete": (True, complete_minus_self),
}


# ==========================================================
# helpers
# ==========================================================
def catalog_graph(spec: str) -> DirectedGraph:
    """``full:3``, ``two-node``, ``houghton:2``, ``counterexample``, ``cycle:4``, ``complete:3``."""
    name, _, arg = spec.partition(":")
    if name not in GRAPHS:
        raise click.BadParameter(f"unknown graph {name!r}; choose one of {sorted(GRAPHS)}", param_hint="--catalog")
    sized, build = GRAPHS[name]
    if sized != bool(arg):
        raise click.BadParameter(f"{name!r} {'needs' if sized else 'takes no'} size argument", param_hint="--catalog")
    try:
        return build(int(arg)) if sized else build()
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--catalog") from exc


def catalog_oracle(spec: str) -> GroupOracle:
    """``free:2``, ``zn:2`` or ``free_product:2,0``."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "free":
            return make_oracle({"kind": "free", "rank": int(arg or 2)})
        if kind == "zn":
            return make_oracle({"kind": "zn", "n": int(arg or 2)})
        if kind == "free_product":
            return make_oracle({"kind": "free_product", "factors": [int(x) for x in arg.split(",")]})
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--group") from exc
    raise click.BadParameter(f"unknown group {spec!r}", param_hint="--group")


def parse_word(oracle: GroupOracle, text: str) -> Word:
    text = text.strip()
    return IDENTITY if text in ("", "1") else oracle.parse(text)


def echo_table(rows) -> None:
    df = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(rows)
    click.echo(df.to_markdown(index=False) if not df.empty else "(empty)")


@dataclass
class Session:
    """Per-invocation state: the run config and the lazily opened input file."""

    cfg: RunConfig
    _reader: Optional[DataReader] = field(default=None, repr=False)

    def reader(self) -> DataReader:
        if self.cfg.input is None:
            raise click.UsageError("This command needs --input FILE.")
        if self._reader is None:
            self._reader = read_input(str(self.cfg.input))
        return self._reader

    def graph(self, catalog: Optional[str]) -> DirectedGraph:
        return catalog_graph(catalog) if catalog else self.reader().graph()

    def oracle(self, group: Optional[str]) -> GroupOracle:
        return catalog_oracle(group) if group else self.reader().oracle()

    def tree(self, oracle: GroupOracle) -> AtomTree:
        return AtomTree(oracle, self.cfg.horizon, cap=self.cfg.ball_cap)

    def certify(self, nucleus: NucleusSet) -> NucleusSet:
        if not nucleus.certified:
            verdicts = verify_nucleus_of_injections(nucleus, self.cfg.budget_states)
            failed = [v.axiom for v in verdicts.values() if not v.passed]
            if failed:
                raise CertificateError("axioms", f"failed: {failed}")
        return nucleus

    def writer(self) -> ArtifactWriter:
        return ArtifactWriter(self.cfg.out, self.cfg.seed)

    def save(self, payload: dict, name: Optional[str]) -> None:
        if name:
            path = self.writer().save_json({**payload, "budgets": self.cfg.budgets()}, name)
            click.echo(f"saved {path}")

    def save_dot(self, source: str, name: Optional[str]) -> None:
        if name:
            click.echo(f"saved {self.writer().save_dot(source, name)}")


pass_session = click.make_pass_decorator(Session)

catalog_option = click.option("--catalog", default=None, help="Built-in graph, e.g. full:3, two-node, houghton:2.")
group_option = click.option("--group", "group_spec", default=None, help="Built-in group: free:2, zn:2, free_product:2,0.")
save_option = click.option("--save", default=None, help="Artifact base name (no extension) under --out.")
dot_option = click.option("--dot", "dot_name", default=None, help="DOT view base name (no extension) under --out.")


# ==========================================================
# root
# ==========================================================
@click.group()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Workbench JSON file.")
@click.option("-o", "--out", type=click.Path(file_okay=False), default=None, help="Output directory.")
@click.option("--depth", type=int, default=None, help="Refinement depth limit.")
@click.option("--horizon", type=int, default=None, help="Atom witness horizon.")
@click.option("--budget-states", type=int, default=None, help="Transducer state budget.")
@click.option("--jobs", type=int, default=None, help="Worker threads for atom tables.")
@click.option("--seed", type=int, default=None, help="Seed for randomized checks.")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
@click.pass_context
def cli(ctx, input_path, out, depth, horizon, budget_states, jobs, seed, verbose):
    """Rational similarity groups, Thompson elements and atoms of Cayley graphs."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    given = dict(input=input_path, out=out, depth=depth, horizon=horizon,
                 budget_states=budget_states, jobs=jobs, seed=seed)
    try:
        cfg = RunConfig(**{k: v for k, v in given.items() if v is not None})
    except ValidationError as exc:
        raise click.UsageError(str(exc)) from exc
    logger.debug("run config: %s", cfg)
    ctx.obj = Session(cfg)


# ==========================================================
# graph
# ==========================================================
@cli.group()
def graph():
    """Directed graphs and their edge shifts."""


@graph.command("check")
@catalog_option
@save_option
@pass_session
def graph_check(session: Session, catalog, save):
    g = session.graph(catalog)
    report = check_subshift(g)
    echo_table([
        {"property": "nodes", "value": g.n_nodes},
        {"property": "edges", "value": g.n_edges},
        {"property": "no isolated points", "value": report.no_isolated_points},
        {"property": "no empty cones", "value": report.no_empty_cones},
        {"property": "irreducible", "value": irreducible(g)},
    ])
    session.save({"graph": graph_payload(g), "ok": report.ok}, save)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


@graph.command("core")
@catalog_option
@dot_option
@pass_session
def graph_core(session: Session, catalog, dot_name):
    g = session.graph(catalog)
    core = core_nodes(g)
    if core is None:
        click.echo("no irreducible core")
        return EXIT_NEGATIVE
    click.echo("core: " + " ".join(sorted(g.node_names[v] for v in core)))
    click.echo(f"longest path into the core: {g.longest_noncore_path(core)}")
    session.save_dot(g.to_dot(core), dot_name)
    return EXIT_OK


@graph.command("classes")
@catalog_option
@pass_session
def graph_classes(session: Session, catalog):
    g = session.graph(catalog)
    core = irreducible_core(g)
    if core is None:
        click.echo("no irreducible core")
        return EXIT_NEGATIVE
    group = classes_group(core)
    click.echo(group.describe())
    echo_table([{"node": name, "class": str(group.node_class(name))} for name in core.node_names])
    return EXIT_OK


# ==========================================================
# trans
# ==========================================================
@cli.group()
def trans():
    """Rational maps and nuclei."""


@trans.command("eval")
@click.option("--map", "map_name", default=None)
@click.option("--path", "path_text", default=None, help="Input path: a.b.c, <v> or a string of one-letter edges.")
@click.option("--point", "point_name", default=None, help="Rational point from the input file.")
@pass_session
def trans_eval(session: Session, map_name, path_text, point_name):
    reader = session.reader()
    f = reader.rational_map(map_name)
    g = f.graph
    if (path_text is None) == (point_name is None):
        raise click.UsageError("Give exactly one of --path or --point.")
    if path_text is not None:
        out, state = evaluate(f, parse_path(g, path_text), fuel=session.cfg.budget_states)
        click.echo(format_path(g, out))
        logger.debug("residual state with %d states", state.n_states)
    else:
        image = evaluate_point(f, reader.point(point_name))
        payload = point_payload(g, image)
        click.echo(f"{format_path(g, image.prefix)} ({'.'.join(payload['period'])})^∞")
    return EXIT_OK


def _describe_map(f: RationalMap) -> None:
    g = f.graph
    echo_table([
        {"cone": format_path(g, r.cone), "prefix": format_path(g, r.prefix), "states": r.state.n_states}
        for r in f.entries
    ])


@trans.command("compose")
@click.option("--left", required=True, help="Applied second.")
@click.option("--right", required=True, help="Applied first.")
@save_option
@pass_session
def trans_compose(session: Session, left, right, save):
    reader = session.reader()
    h = compose(reader.rational_map(left), reader.rational_map(right), session.cfg.budget_states)
    _describe_map(h)
    session.save(rational_payload(h), save)
    return EXIT_OK


@trans.command("invert")
@click.option("--map", "map_name", default=None)
@save_option
@pass_session
def trans_invert(session: Session, map_name, save):
    inv = invert(session.reader().rational_map(map_name), session.cfg.budget_states)
    _describe_map(inv)
    session.save(rational_payload(inv), save)
    return EXIT_OK


@trans.command("nucleus")
@click.option("--map", "map_name", default=None)
@save_option
@dot_option
@pass_session
def trans_nucleus(session: Session, map_name, save, dot_name):
    nucleus = nucleus_of(session.reader().rational_map(map_name))
    g = nucleus.graph
    click.echo(f"nucleus of {len(nucleus)} states")
    echo_table([
        {"state": nucleus.label(s), "node": g.node_names[s.node], "identity": s.is_identity(), "size": s.n_states}
        for s in nucleus
    ])
    session.save(nucleus_payload(nucleus), save)
    session.save_dot(nucleus_dot(nucleus), dot_name)
    return EXIT_OK


@trans.command("verify-nucleus")
@click.option("--nucleus", "nucleus_name", default=None)
@save_option
@pass_session
def trans_verify_nucleus(session: Session, nucleus_name, save):
    nucleus = session.reader().nucleus(nucleus_name)
    verdicts = verify_nucleus_of_injections(nucleus, session.cfg.budget_states)
    echo_table([
        {"axiom": v.axiom, "verdict": "PASS" if v.passed else "FAIL",
         "witness": "" if v.witness is None else nucleus.label(v.witness), "detail": v.detail}
        for v in verdicts.values()
    ])
    session.save({"axioms": {k: v.passed for k, v in verdicts.items()}, "nucleus": nucleus_payload(nucleus)}, save)
    return EXIT_OK if nucleus.certified else EXIT_NEGATIVE


# ==========================================================
# v
# ==========================================================
@cli.group("v")
def v_group():
    """Elements of Thompson groups of edge shifts."""


def _describe_v(f: VElement) -> None:
    g = f.graph
    echo_table([{"domain": format_path(g, a), "range": format_path(g, b)} for a, b in f.pairs])


@v_group.command("compose")
@click.option("--left", required=True, help="Applied second.")
@click.option("--right", required=True, help="Applied first.")
@save_option
@pass_session
def v_compose_cmd(session: Session, left, right, save):
    reader = session.reader()
    h = v_compose(reader.velement(left), reader.velement(right))
    _describe_v(h)
    session.save(velement_payload(h), save)
    return EXIT_OK


@v_group.command("map-cones")
@catalog_option
@click.option("--pair", "pairs", multiple=True, required=True, help="SOURCE:TARGET paths, repeatable.")
@click.option("--ambient", default=None, help="Clopen set from the input file; the whole space by default.")
@save_option
@pass_session
def v_map_cones(session: Session, catalog, pairs, ambient, save):
    if ambient and catalog:
        raise click.UsageError("--ambient reads the input file graph; drop --catalog.")
    g = session.graph(catalog)
    parsed = []
    for text in pairs:
        src, sep, dst = text.partition(":")
        if not sep:
            raise click.BadParameter(f"{text!r} is not SOURCE:TARGET", param_hint="--pair")
        parsed.append((parse_path(g, src), parse_path(g, dst)))
    amb = session.reader().clopen(ambient) if ambient else None
    h = map_cones_v(g, parsed, amb, session.cfg.depth, session.cfg.budget_states)
    _describe_v(h)
    session.save(velement_payload(h), save)
    return EXIT_OK


@v_group.command("push-core")
@catalog_option
@click.option("--clopen", "clopen_name", default=None, help="Clopen set from the input file; the whole space by default.")
@save_option
@pass_session
def v_push_core(session: Session, catalog, clopen_name, save):
    if clopen_name and catalog:
        raise click.UsageError("--clopen reads the input file graph; drop --catalog.")
    g = session.graph(catalog)
    source = session.reader().clopen(clopen_name) if clopen_name else ClopenSet.everything(g)
    push = push_into_core(g, source)
    click.echo(f"reach {push.reach}; target " + " ∪ ".join(format_path(g, p) for p in push.target.paths))
    _describe_v(push.h)
    session.save({"reach": push.reach, "h": velement_payload(push.h)}, save)
    return EXIT_OK


# ==========================================================
# rsg
# ==========================================================
@cli.group()
def rsg():
    """Rational similarity groups over a certified nucleus."""


def _describe_rsg(h: RsgElement) -> None:
    g = h.graph
    echo_table([
        {"cone": format_path(g, dom), "image": format_path(g, out), "state": h.nucleus.label(state)}
        for dom, out, state in h.entries
    ])


def _element(session: Session, name: str) -> RsgElement:
    h = session.reader().rsg_element(name)
    session.certify(h.nucleus)
    return h


def _core_group(nucleus: NucleusSet):
    core = core_nodes(nucleus.graph)
    if core is None:
        raise CertificateError("core", "the graph has no irreducible core")
    return relative_classes_group(nucleus.graph, core)


@rsg.command("member")
@click.option("--map", "map_name", default=None)
@click.option("--nucleus", "nucleus_name", default=None)
@save_option
@pass_session
def rsg_member(session: Session, map_name, nucleus_name, save):
    reader = session.reader()
    nucleus = session.certify(reader.nucleus(nucleus_name))
    h = rsg_membership(reader.rational_map(map_name), nucleus, session.cfg.depth)
    if h is None:
        click.echo(f"not a member: no nuclear partition by depth {session.cfg.depth}")
        return EXIT_NEGATIVE
    _describe_rsg(h)
    session.save(rsg_payload(h, nucleus_name), save)
    return EXIT_OK


@rsg.command("compose")
@click.option("--left", required=True, help="Applied second.")
@click.option("--right", required=True, help="Applied first.")
@save_option
@pass_session
def rsg_compose_cmd(session: Session, left, right, save):
    a, b = _element(session, left), _element(session, right)
    h = rsg_compose(a, b, session.cfg.depth)
    _describe_rsg(h)
    session.save(rsg_payload(h), save)
    return EXIT_OK


@rsg.command("ker-del1")
@click.option("--nucleus", "nucleus_name", default=None)
@pass_session
def rsg_ker_del1(session: Session, nucleus_name):
    nucleus = session.reader().nucleus(nucleus_name)
    group = _core_group(nucleus)
    basis = ker_del1_generators(nucleus, group)
    click.echo(f"classes group {group.describe()}; {len(basis)} generators of degree at most {basis.degree}")
    echo_table([{"generator": str(c), "size": c.size} for c in basis])
    return EXIT_OK


@rsg.command("normalish")
@click.option("--element", "element_name", default=None)
@pass_session
def rsg_normalish(session: Session, element_name):
    g = _element(session, element_name)
    basis = ker_del1_generators(g.nucleus, _core_group(g.nucleus))
    form = normalish_form(g, basis, depth_limit=session.cfg.depth)
    ok = recognize_normalish(g, form)
    click.echo(f"{len(form.factors)} nuclear generators; Thompson part on {form.f.size} cones")
    graph_ = g.graph
    echo_table([
        {"generator": str(h.cycle), "code": " ".join(format_path(graph_, a) for a in h.code)}
        for h in form.factors
    ])
    click.echo("recognized" if ok else "NOT recognized")
    return EXIT_OK if ok else EXIT_NEGATIVE


@rsg.command("germ")
@click.option("--element", "element_name", default=None)
@click.option("--point", "point_name", default=None)
@pass_session
def rsg_germ(session: Session, element_name, point_name):
    h = _element(session, element_name)
    pt = session.reader().point(point_name)
    state = lambda_map(h, pt.prefix, pt.period)
    click.echo(h.nucleus.label(state))
    return EXIT_OK


# ==========================================================
# atoms
# ==========================================================
@cli.group()
def atoms():
    """Atoms of the horofunction boundary and their types."""


@atoms.command("build")
@group_option
@click.option("--level", type=click.IntRange(min=0), default=3)
@save_option
@dot_option
@pass_session
def atoms_build(session: Session, group_spec, level, save, dot_name):
    oracle = session.oracle(group_spec)
    tree = session.tree(oracle)
    frame = atoms_frame(tree, range(level + 1), session.cfg.jobs)
    summary = frame.groupby("level").agg(atoms=("base", "size"), infinite=("children", lambda c: int((c > 0).sum())))
    echo_table(summary.reset_index())
    infinite = tree.infinite_atoms(level)
    branching = sum(1 for a in infinite if len(tree.children(a)) == 3)
    click.echo(f"{len(infinite)} infinite atoms; {branching} with 3 children")
    if save:
        click.echo(f"saved {session.writer().save_csv(frame, save)}")
    session.save_dot(atom_tree_dot(tree, level), dot_name)
    return EXIT_OK


def _types(session: Session, oracle: GroupOracle, tree: AtomTree, max_level: int, depth: int, strict: bool = False):
    return type_graph(oracle, max_level, depth, session.cfg.horizon, tree, strict=strict)


@atoms.command("types")
@group_option
@click.option("--max-level", type=click.IntRange(min=1), default=3)
@click.option("--match-depth", type=click.IntRange(min=1), default=2, help="Child-matching depth for morphisms.")
@click.option("--strict", is_flag=True, help="Merge atoms on certified morphisms only.")
@save_option
@dot_option
@pass_session
def atoms_types(session: Session, group_spec, max_level, match_depth, strict, save, dot_name):
    oracle = session.oracle(group_spec)
    types = _types(session, oracle, session.tree(oracle), max_level, match_depth, strict)
    frame = types.frame(oracle)
    echo_table(frame)
    click.echo(f"new types per level: {types.report['new_types_per_level']}")
    click.echo("stabilized" if types.stabilized else "not stabilized")
    unproven = len(types.report["condition_ii_divergences"]) + len(types.report["uncertified_merges"])
    if unproven:
        click.echo(f"{unproven} merges without a certified morphism")
    session.save({"oracle": oracle.to_json(), "report": types.report, "types": frame.to_dict("records")}, save)
    session.save_dot(type_graph_dot(types), dot_name)
    return EXIT_OK if types.stabilized else EXIT_NEGATIVE


@atoms.command("addresses")
@group_option
@click.option("--max-level", type=click.IntRange(min=1), default=3)
@click.option("--length", type=click.IntRange(min=0), default=2, help="Longest address listed.")
@pass_session
def atoms_addresses(session: Session, group_spec, max_level, length):
    oracle = session.oracle(group_spec)
    tree = session.tree(oracle)
    phi = address_system(_types(session, oracle, tree, max_level, 2), tree)
    g = phi.graph
    rows = []
    for n in range(length + 1):
        for alpha in paths_from(g, phi.root, n):
            atom, m = phi.atom(alpha)
            rows.append({
                "address": format_path(g, alpha),
                "type": g.node_names[alpha.terminus],
                "level": atom.level,
                "base": oracle.word_str(atom.base),
                "morphism": oracle.word_str(m),
            })
    echo_table(rows)
    return EXIT_OK


# ==========================================================
# hyp
# ==========================================================
@cli.group()
def hyp():
    """Contracting boundary actions of hyperbolic groups."""


@hyp.command("triple")
@group_option
@click.option("--g", "g_text", required=True, help="Group element, e.g. aB.")
@click.option("--at", "at_text", required=True, help="Element whose atom is A_alpha.")
@click.option("--level", type=click.IntRange(min=0), required=True)
@save_option
@pass_session
def hyp_triple(session: Session, group_spec, g_text, at_text, level, save):
    oracle = session.oracle(group_spec)
    tree = session.tree(oracle)
    g = parse_word(oracle, g_text)
    alpha = tree.atom_of(parse_word(oracle, at_text), level)
    triple = mapping_triple(tree, g, alpha)
    sig = signature(tree, triple)
    row = {
        "g": oracle.word_str(triple.g),
        "alpha": f"{oracle.word_str(alpha.base)} @ {alpha.level}",
        "beta": f"{oracle.word_str(triple.beta.base)} @ {triple.beta.level}",
        "distance": triple.distance,
        "cone depth": triple.depth,
        "signature diameter": sig.diameter,
        "bound": sig.bound,
    }
    echo_table([row])
    session.save({**row, "constants": constants(oracle, oracle.length(g)), "flag": alpha.flag}, save)
    return EXIT_OK if sig.within_bound else EXIT_NEGATIVE


@hyp.command("nucleus")
@group_option
@click.option("--max-level", type=click.IntRange(min=1), default=3)
@save_option
@dot_option
@pass_session
def hyp_nucleus(session: Session, group_spec, max_level, save, dot_name):
    oracle = session.oracle(group_spec)
    tree = session.tree(oracle)
    phi = address_system(_types(session, oracle, tree, max_level, 2), tree)
    nucleus, machines = nucleus_extract(phi, budget=session.cfg.budget_states)
    click.echo(f"nucleus of {len(nucleus)} states, {sum(s.is_identity() for s in nucleus)} identities")
    echo_table([{"generator": name, "states": sm.n_states} for name, sm in machines.items()])
    session.save({"oracle": oracle.to_json(), "constants": constants(oracle), "nucleus": nucleus_payload(nucleus)}, save)
    session.save_dot(nucleus_dot(nucleus), dot_name)
    return EXIT_OK


@hyp.command("certify")
@group_option
@click.option("--max-level", type=click.IntRange(min=1), default=3)
@click.option("--radius", type=click.IntRange(min=1), default=2, help="Ball radius of the faithfulness check.")
@save_option
@pass_session
def hyp_certify(session: Session, group_spec, max_level, radius, save):
    oracle = session.oracle(group_spec)
    cert = certify_full_contracting_rsg(
        oracle, max_level, 2, session.cfg.horizon, session.cfg.budget_states, radius, session.tree(oracle)
    )
    echo_table(cert["stages"])
    click.echo(f"level: {cert['level']}")
    session.save(cert, save)
    return EXIT_OK


# ==========================================================
# demos
# ==========================================================
@cli.command("demo")
@click.argument("name", type=click.Choice(sorted(DEMOS)))
@click.option("--n", type=click.IntRange(min=1), default=None, help="Size parameter of the demo.")
@save_option
@pass_session
def demo(session: Session, name, n, save):
    """Run a worked example."""
    summary = run_demo(name, session.cfg, n)
    for line in summary["messages"]:
        click.echo(line)
    session.save(summary, save)
    return EXIT_OK


# ==========================================================
# entry point
# ==========================================================
def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command tree and map the outcome onto an exit code."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="rsg-workbench", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted.", err=True)
        return EXIT_USAGE
    except NEGATIVE as exc:
        logger.debug("negative result", exc_info=True)
        click.echo(f"negative: {exc}", err=True)
        return EXIT_NEGATIVE
    except (BudgetExceeded, WorkbenchError) as exc:
        logger.debug("run failed", exc_info=True)
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK
