# src/transducer/algebra.py
from __future__ import annotations

import logging
from collections import deque
from typing import Optional

import networkx as nx

from src.errors import BudgetExceeded, DegenerateMapError, DomainError
from src.shift.clopen import ClopenSet
from src.shift.paths import Path, children, extend, gcp_all
from src.shift.points import RationalPoint
from src.transducer.rational import RationalMap, _entry_for
from src.transducer.state import RawMachine, StateMap, canonicalize, check_budget, empty_output

logger = logging.getLogger(__name__)


def _total_states(f: RationalMap) -> int:
    return sum(r.state.n_states for r in f.entries)


def default_budget(f: RationalMap, g: RationalMap) -> int:
    maxout = max(1, f.max_output(), g.max_output())
    return 4 * maxout * max(1, _total_states(f)) * max(1, _total_states(g))


# ==========================================================
# composition
# ==========================================================
def _product(fs: StateMap, p0: int, gs: StateMap, budget: int) -> tuple[Path, StateMap]:
    raw = RawMachine(fs.graph)
    index: dict[tuple[int, int], int] = {}
    queue: deque = deque()

    def get(p: int, q: int) -> int:
        key = (p, q)
        if key not in index:
            index[key] = raw.add_state(gs.nodes[q], fs.targets[p])
            queue.append(key)
            check_budget("states", len(index), budget)
        return index[key]

    root = get(p0, 0)
    while queue:
        p, q = queue.popleft()
        me = index[(p, q)]
        for i, e in enumerate(fs.graph.out_edges(gs.nodes[q])):
            og, q2 = gs.trans[q][i]
            of, p2 = fs.run_index(og.edges, p)
            raw.set_transition(me, e, of, get(p2, q2))
    return canonicalize(raw, root)


def compose(f: RationalMap, g: RationalMap, state_budget: Optional[int] = None) -> RationalMap:
    """
    ``f ∘ g`` (apply ``g`` first).

    Raises
    ------
    DomainError
        If the image of ``g`` leaves the domain of ``f``.
    BudgetExceeded
        If the product machine or the entry splitting outgrows the budget.
    """
    if f.graph != g.graph:
        raise DomainError("compose needs maps over the same graph.")
    budget = state_budget or default_budget(f, g)
    rows = []
    work = deque((r.cone, r.prefix, r.state) for r in g.entries)
    splits = 0
    while work:
        cone, prefix, q = work.popleft()
        hit = None if prefix.is_null else _entry_for(f, prefix)
        if hit is not None:
            out0, p0 = hit.state.run_index(hit.cone.strip(prefix).edges)
            lead, sm = _product(hit.state, p0, q, budget)
            rows.append((cone, hit.prefix.concat(out0).concat(lead), sm))
            continue
        if not any(prefix.is_prefix_of(r.cone) for r in f.entries):
            raise DomainError(f"Image of cone {cone} (prefix {prefix}) is outside the domain of f.")
        splits += 1
        check_budget("splits", splits, budget)
        for child in children(f.graph, cone):
            out, q2 = q.step(child.edges[-1])
            work.append((child, prefix.concat(out), q2))
    logger.debug("compose: %d entries, %d splits", len(rows), splits)
    return RationalMap.build(f.graph, rows)


# ==========================================================
# image
# ==========================================================
def _prefixed(graph, prefix: Path, clopen: ClopenSet) -> list[Path]:
    return [prefix.concat(p) for p in clopen.paths]


def state_image(sm: StateMap, max_rounds: Optional[int] = None) -> ClopenSet:
    """Image of the cone of ``sm.node`` under ``sm``."""
    g = sm.graph
    images = [ClopenSet.of(g, [empty_output(t)]) for t in sm.targets]
    rounds = max_rounds or 4 * sm.n_states * (sm.max_output + 1) + 10
    for _ in range(rounds):
        new = []
        for q in range(sm.n_states):
            paths: list[Path] = []
            for out, nxt in sm.trans[q]:
                paths.extend(_prefixed(g, out, images[nxt]))
            new.append(ClopenSet.of(g, paths))
        if new == images:
            return images[0]
        images = new
    raise BudgetExceeded("image-rounds", rounds, detail="Image did not stabilize; the image may not be clopen.")


def image(f: RationalMap) -> ClopenSet:
    paths: list[Path] = []
    for r in f.entries:
        paths.extend(_prefixed(f.graph, r.prefix, state_image(r.state)))
    return ClopenSet.of(f.graph, paths)


# ==========================================================
# injectivity
# ==========================================================
def is_injective(f: RationalMap, budget: int = 200_000) -> bool:
    """
    Search for two distinct inputs with equal outputs.

    Configurations pair two runs with the output lag between them; a cycle
    among reachable configurations is an infinite pair of runs with equal
    outputs. Lags beyond a bound are treated as diverged.
    """
    machines = [r.state for r in f.entries]
    lag_limit = 2 * max(1, f.max_output()) * max(1, _total_states(f)) + 2
    cfg_graph = nx.DiGraph()
    queue: deque = deque()

    def comparable(a: tuple, b: tuple) -> bool:
        n = min(len(a), len(b))
        return a[:n] == b[:n]

    def config(a, b, wa: tuple, wb: tuple):
        # a produced wa, b produced wb beyond the common part
        if not comparable(wa, wb):
            return None
        if len(wa) >= len(wb):
            lead, lag, rest = a, b, wa[len(wb):]
        else:
            lead, lag, rest = b, a, wb[len(wa):]
        if len(rest) > lag_limit:
            return None
        if not rest and lag < lead:
            lead, lag = lag, lead
        return (lead, lag, rest)

    def push(src, cfg):
        if cfg is None:
            return
        if cfg not in cfg_graph:
            cfg_graph.add_node(cfg)
            queue.append(cfg)
            check_budget("injectivity-configs", cfg_graph.number_of_nodes(), budget)
        if src is not None:
            cfg_graph.add_edge(src, cfg)

    for i, ri in enumerate(f.entries):
        for j in range(i + 1, len(f.entries)):
            rj = f.entries[j]
            if ri.prefix.is_null or rj.prefix.is_null or ri.prefix.origin == rj.prefix.origin:
                push(None, config((i, 0), (j, 0), ri.prefix.edges, rj.prefix.edges))
    for i, sm in enumerate(machines):
        for s in range(sm.n_states):
            row = sm.trans[s]
            for x in range(len(row)):
                for y in range(x + 1, len(row)):
                    push(None, config((i, row[x][1]), (i, row[y][1]), row[x][0].edges, row[y][0].edges))

    while queue:
        cfg = queue.popleft()
        lead, lag, rest = cfg
        li, ls = lag
        lag_row = machines[li].trans[ls]
        if rest:
            for out, nxt in lag_row:
                push(cfg, config(lead, (li, nxt), rest, out.edges))
        else:
            di, ds = lead
            for o1, n1 in machines[di].trans[ds]:
                for o2, n2 in lag_row:
                    push(cfg, config((di, n1), (li, n2), o1.edges, o2.edges))

    if not nx.is_directed_acyclic_graph(cfg_graph):
        logger.debug("is_injective: found a cycle among %d configurations", cfg_graph.number_of_nodes())
        return False
    return True


# ==========================================================
# inversion
# ==========================================================
Hyp = tuple  # (gamma: Path, entry: int, state: int, pending: tuple[int, ...])


def invert(f: RationalMap, budget: Optional[int] = None, check: bool = True) -> RationalMap:
    """
    Inverse of an injective rational map, defined on ``image(f)``.

    The inverse state after reading an output word is the set of input
    hypotheses consistent with it; the common prefix of their inputs is
    emitted and stripped.

    Raises
    ------
    DegenerateMapError
        If ``f`` is not injective.
    BudgetExceeded
        If the hypothesis automaton outgrows ``budget``.
    """
    g = f.graph
    if check and not is_injective(f):
        raise DegenerateMapError("invert needs an injective map.")
    machines = [r.state for r in f.entries]
    limit = budget or max(64, 8 * _total_states(f) ** 2 * max(1, f.max_output()))
    expand_limit = 4 * limit

    def position(h: Hyp) -> Optional[int]:
        gamma, i, s, pend = h
        return g.origin(pend[0]) if pend else machines[i].targets[s]

    def expand(h: Hyp) -> list[Hyp]:
        gamma, i, s, _ = h
        sm = machines[i]
        return [
            (extend(g, gamma, e), i, nxt, out.edges)
            for e, (out, nxt) in zip(g.out_edges(sm.nodes[s]), sm.trans[s])
        ]

    def at_node(hyps, v: int) -> frozenset:
        out, stack, count = set(), list(hyps), 0
        while stack:
            h = stack.pop()
            pos = position(h)
            if pos is None:
                count += 1
                if count > expand_limit:
                    raise DegenerateMapError("Unbounded run of empty outputs.")
                stack.extend(expand(h))
            elif pos == v:
                out.add(h)
        return frozenset(out)

    def advance(hyps, e: int) -> frozenset:
        out, stack, count = set(), list(hyps), 0
        while stack:
            h = stack.pop()
            gamma, i, s, pend = h
            if pend:
                if pend[0] == e:
                    out.add((gamma, i, s, pend[1:]))
                continue
            count += 1
            if count > expand_limit:
                raise DegenerateMapError("Unbounded run of empty outputs.")
            stack.extend(expand(h))
        return frozenset(out)

    def emit(hyps: frozenset) -> tuple[Path, frozenset]:
        lead = gcp_all(g, [h[0] for h in hyps])
        return lead, frozenset((lead.strip(h[0]), h[1], h[2], h[3]) for h in hyps)

    raw = RawMachine(g)
    index: dict = {}
    queue: deque = deque()

    def get(node: int, target: Optional[int], hyps: frozenset) -> int:
        key = (node, hyps)
        if key not in index:
            index[key] = raw.add_state(node, target)
            queue.append((key, target))
            check_budget("inverse-states", len(index), limit)
        return index[key]

    initial = frozenset((r.cone, i, 0, r.prefix.edges) for i, r in enumerate(f.entries))
    rows = []
    for beta in image(f).expanded():
        hyps = at_node(initial, beta.origin)
        for e in beta.edges:
            hyps = advance(hyps, e)
        if not hyps:
            raise DomainError(f"Image cone {beta} has no preimage.")
        lead, hyps = emit(hyps)
        root = get(beta.terminus, None if lead.is_null else lead.terminus, hyps)
        rows.append((beta, lead, root))

    while queue:
        (node, hyps), target = queue.popleft()
        me = index[(node, hyps)]
        for e in g.out_edges(node):
            nxt = advance(hyps, e)
            if not nxt:
                raise DegenerateMapError("Inverse reached an output outside the image; the image is not clopen.")
            lead, nxt = emit(nxt)
            new_target = target if lead.is_null else lead.terminus
            raw.set_transition(me, e, lead, get(g.terminus(e), new_target, nxt))

    entries = []
    for beta, lead, root in rows:
        tail, sm = canonicalize(raw, root)
        entries.append((beta, lead.concat(tail), sm))
    logger.debug("invert: %d hypothesis states", len(index))
    return RationalMap.build(g, entries)


# ==========================================================
# points
# ==========================================================
def evaluate_point(f: RationalMap, point: RationalPoint, max_periods: int = 10_000) -> RationalPoint:
    """Exact image of an eventually periodic point."""
    g = f.graph
    n_needed = max(len(r.cone) for r in f.entries)
    probe = point.truncated(g, max(n_needed, len(point.prefix)))
    hit = _entry_for(f, probe)
    if hit is None:
        raise DomainError("Point lies outside the domain.")
    # consume the point up to the end of its prefix (and at least the cone)
    start = max(len(hit.cone), len(point.prefix))
    head = point.truncated(g, start)
    out, q = hit.state.run_index(hit.cone.strip(head).edges)
    acc = hit.prefix.concat(out)
    # align to a period boundary
    k = (start - len(point.prefix)) % len(point.period)
    period = point.period[k:] + point.period[:k]
    seen: dict[int, tuple[int, Path]] = {}
    outs: list[Path] = []
    for i in range(max_periods):
        if q in seen:
            j, _ = seen[q]
            loop = empty_output(hit.state.targets[q])
            for o in outs[j:]:
                loop = loop.concat(o)
            if not loop.edges:
                raise DegenerateMapError("Periodic input produced no output.")
            pre = acc
            for o in outs[:j]:
                pre = pre.concat(o)
            return RationalPoint.make(g, pre, loop.edges)
        seen[q] = (i, acc)
        o, q = hit.state.run_index(period, q)
        outs.append(o)
    raise BudgetExceeded("periods", max_periods)
