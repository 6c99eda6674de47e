# src/rsg/generators.py
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from src.errors import CertificateError, DegenerateMapError, DomainError
from src.rsg.cycles import CycleMultiset, KernelBasis, decompose
from src.rsg.element import (
    Row,
    RsgElement,
    partition_element,
    require_certified,
    rsg_compose,
    rsg_is_identity,
)
from src.shift.clopen import ClopenSet
from src.shift.paths import Path, children
from src.thompson.flexibility import exchange, map_cones_v
from src.thompson.velement import (
    VElement,
    is_v_like,
    v_as_rational,
    v_compose,
    v_evaluate,
    v_invert,
    velement_from_map,
)
from src.transducer.algebra import compose, image, invert
from src.transducer.rational import RationalMap, local_action
from src.transducer.state import StateMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NuclearGenerator:
    """
    ``c h_P c⁻¹`` for a model nuclear generator ``h_P``.

    ``code[i]`` carries nuclear state ``states[i]``; ``rectifier`` is a
    Thompson element with ``(rectifier ∘ element)|_code[i] == states[i]``.
    """

    element: RsgElement
    cycle: CycleMultiset
    code: tuple[Path, ...]
    states: tuple[StateMap, ...]
    support: ClopenSet
    rectifier: VElement
    conjugator: VElement

    def is_trivial(self) -> bool:
        return rsg_is_identity(self.element)


# ==========================================================
# model generators
# ==========================================================
def _choose_code(ambient: ClopenSet, termini: Sequence[int], max_level: int = 16) -> list[Path]:
    """First paths of the shallowest level holding the termini with room to spare."""
    for level in range(max_level + 1):
        layer = list(ambient.paths_at_depth(level))
        picked: list[Path] = []
        for v in termini:
            p = next((p for p in layer if p.terminus == v and p not in picked), None)
            if p is None:
                break
            picked.append(p)
        if len(picked) == len(termini) and len(layer) > len(picked):
            return picked
    raise DomainError(f"No incomplete code with termini {list(termini)} within {max_level} levels.")


def rectifier_holds(gen: NuclearGenerator) -> bool:
    rectified = compose(v_as_rational(gen.rectifier), gen.element.to_rational())
    return all(local_action(rectified, a)[1] == p for a, p in zip(gen.code, gen.states))


def model_nuclear_generator(
    cycle: CycleMultiset, ambient: Optional[ClopenSet] = None, depth_limit: int = 12
) -> NuclearGenerator:
    """
    Build ``h_P``: the states of ``cycle`` sent from a domain code into a
    range code, then moved back onto the domain code by a Thompson element
    ``s``. The identity is kept off the domain code; the rectifier is ``s⁻¹``.

    Raises
    ------
    DomainError
        If ``cycle`` has nonzero class change or no nucleus attached.
    """
    if not cycle.is_cycle:
        raise DomainError(f"{cycle} is not a cycle: class change {cycle.value}.")
    if cycle.nucleus is None:
        raise DomainError("The cycle carries no nucleus.")
    summands = cycle.summands()
    if not summands:
        raise DomainError("The empty sum has no model generator.")
    nucleus = cycle.nucleus
    graph = nucleus.graph
    ambient = ClopenSet.everything(graph) if ambient is None else ambient

    nu = _choose_code(ambient, [p.node for p in summands])
    xi = _choose_code(ambient, [p.target for p in summands])
    g = RationalMap.build(graph, [(n, x, p) for n, x, p in zip(nu, xi, summands)])
    dom = ClopenSet.of(graph, nu)
    s = exchange(image(g), dom, ambient, depth_limit)

    moved = compose(v_as_rational(s), g)
    rows = [(r.cone, r.prefix, r.state) for r in moved.entries]
    rows += [(p, p, StateMap.identity(graph, p.terminus)) for p in (ambient - dom).expanded()]
    element = partition_element(RationalMap.build(graph, rows), nucleus, 32, "model-generator")
    gen = NuclearGenerator(
        element=element,
        cycle=cycle,
        code=tuple(nu),
        states=tuple(summands),
        support=dom,
        rectifier=v_invert(s),
        conjugator=VElement.identity(graph, ambient),
    )
    if not rectifier_holds(gen):
        raise CertificateError("rectifier", f"Rectified local actions of the model for {cycle} differ.")
    logger.info("model generator for %s: %d cones of support", cycle, len(nu))
    return gen


def conjugate_generator(gen: NuclearGenerator, c: VElement) -> NuclearGenerator:
    """``c h c⁻¹``; ``c`` must map each code cone by the canonical similarity."""
    nucleus = gen.element.nucleus
    require_certified(nucleus)
    cv = RsgElement.from_v(c, nucleus)
    ci = RsgElement.from_v(v_invert(c), nucleus)
    element = rsg_compose(cv, rsg_compose(gen.element, ci))
    code = tuple(v_evaluate(c, a) for a in gen.code)
    return NuclearGenerator(
        element=element,
        cycle=gen.cycle,
        code=code,
        states=gen.states,
        support=ClopenSet.of(c.graph, code),
        rectifier=v_compose(gen.rectifier, v_invert(c)),
        conjugator=v_compose(c, gen.conjugator),
    )


# ==========================================================
# normalish forms
# ==========================================================
@dataclass(frozen=True)
class NormalishForm:
    """``f h_1 ⋯ h_n`` with ``f`` a Thompson element and disjointly supported factors."""

    f: VElement
    factors: tuple[NuclearGenerator, ...]

    @property
    def code(self) -> tuple[Path, ...]:
        return tuple(a for h in self.factors for a in h.code)

    @property
    def states(self) -> tuple[StateMap, ...]:
        return tuple(p for h in self.factors for p in h.states)

    def supports_disjoint(self) -> bool:
        sup = [h.support for h in self.factors]
        return all(a.disjoint(b) for i, a in enumerate(sup) for b in sup[i + 1:])

    def element(self, nucleus) -> RsgElement:
        acc = RsgElement.from_v(self.f, nucleus)
        for h in self.factors:
            acc = rsg_compose(acc, h.element)
        return acc


def _refine_row(graph, row: Row) -> list[Row]:
    dom, out, state = row
    rows = []
    for child in children(graph, dom):
        o, nxt = state.step(child.edges[-1])
        rows.append((child, out.concat(o), nxt))
    return rows


def _is_single_generator(counts: Counter, basis: KernelBasis) -> bool:
    return any(+gen.counts == +counts for gen in basis)


def normalish_form(
    g: RsgElement,
    basis: KernelBasis,
    models: Optional[dict] = None,
    depth_limit: int = 12,
) -> NormalishForm:
    """
    A normalish form for ``g`` whose nuclear code is a refinement of its
    entry code.

    The entry code is refined until the sum of its local actions is not a
    single listed generator; the sum is split into generators depth-first,
    each block realized by a conjugated model generator, and ``f`` is read
    off ``g h⁻¹``.
    """
    nucleus = g.nucleus
    require_certified(nucleus)
    graph = g.graph
    models = {} if models is None else models
    if all(r[2].is_identity() for r in g.entries):
        f = VElement.make(graph, [(a, b) for a, b, _ in g.entries], g.ambient, g.ambient)
        return NormalishForm(f, ())

    rows = list(g.entries)
    while _is_single_generator(Counter(r[2] for r in rows), basis):
        i = next(k for k, r in enumerate(rows) if not r[2].is_identity())
        rows[i:i + 1] = _refine_row(graph, rows[i])
        logger.debug("normalish_form: refined to %d cones", len(rows))

    blocks = decompose(Counter(r[2] for r in rows), basis)
    if blocks is None:
        raise DegenerateMapError("The local actions of g do not sum to a cycle.")

    unused = list(rows)
    factors = []
    for block in blocks:
        if block not in models:
            models[block] = model_nuclear_generator(block, g.ambient, depth_limit)
        model = models[block]
        pairs = []
        for nu, p in zip(model.code, model.states):
            row = next(r for r in unused if r[2] == p)
            unused.remove(row)
            pairs.append((nu, row[0]))
        if all(p.is_identity() for p in model.states):
            continue
        c = map_cones_v(graph, pairs, g.ambient, depth_limit)
        factors.append(conjugate_generator(model, c))

    h = RsgElement.identity(nucleus, g.ambient)
    for factor in factors:
        h = rsg_compose(h, factor.element)
    f_map = compose(g.to_rational(), invert(h.to_rational(), check=False))
    f = velement_from_map(f_map, depth_limit=4 * depth_limit)
    logger.info("normalish_form: %d factors, f on %d cones", len(factors), f.size)
    return NormalishForm(f, tuple(factors))


def recognize_normalish(g: RsgElement, form: NormalishForm) -> bool:
    """
    True iff each rectified local action of ``g`` on the nuclear code equals
    the nuclear state up to a Thompson element, and ``g`` is Thompson-like
    off the nuclear code.
    """
    if not form.supports_disjoint():
        return False
    graph = g.graph
    rg = g.to_rational()
    for alpha, p in zip(form.code, form.states):
        try:
            _, q = local_action(rg, alpha)
            if q.node != p.node:
                return False
            quotient = compose(RationalMap.from_state(q), invert(RationalMap.from_state(p), check=False))
        except (DomainError, DegenerateMapError) as exc:
            logger.debug("recognize_normalish: %s", exc)
            return False
        if not is_v_like(quotient):
            return False
    rest = g.ambient - ClopenSet.of(graph, list(form.code))
    if rest.is_empty():
        return True
    off = RationalMap.build(graph, [(p,) + tuple(local_action(rg, p)) for p in rest.expanded()])
    return is_v_like(off)
