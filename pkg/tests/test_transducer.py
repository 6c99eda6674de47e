import pytest

from src.errors import DegenerateMapError, DomainError
from src.shift.clopen import ClopenSet
from src.shift.paths import Path, children, format_path, parse_path
from src.shift.points import RationalPoint
from src.transducer import catalog
from src.transducer.algebra import compose, evaluate_point, image, invert, is_injective, state_image
from src.transducer.nucleus import AXIOMS, NucleusSet, nucleus_dot, nucleus_of, recurrent_states, verify_nucleus_of_injections
from src.transducer.rational import RationalMap, evaluate, is_identity, local_action, maps_equal
from src.transducer.state import StateMap


def p(graph, text):
    return parse_path(graph, text)


def out_of(f, graph, text):
    return format_path(graph, evaluate(f, p(graph, text))[0])


# -------------------------
# states
# -------------------------
def test_identity_state(full2):
    one = StateMap.identity(full2, 0)
    assert one.is_identity()
    out, nxt = one.step(full2.edge("1"))
    assert out == p(full2, "1")
    assert nxt == one


def test_canonical_form_strips_common_prefix(full2):
    table = {
        "g": ("v", "v", {"0": ("00", "1"), "1": ("01", "1")}),
        "1": ("v", "v", {"0": ("0", "1"), "1": ("1", "1")}),
    }
    prefix, sm = catalog.machine(full2, table, "g")
    assert prefix == p(full2, "0")
    assert sm.is_identity()
    with pytest.raises(DomainError):
        catalog.state(full2, table, "g")


def test_equal_machines_are_equal_states(ternary_f):
    assert catalog.ternary_f() == ternary_f
    assert hash(catalog.ternary_f()) == hash(ternary_f)


def test_distinguishing_word(ternary_f):
    one = StateMap.identity(ternary_f.graph, 0)
    word = ternary_f.distinguishing_word(one)
    assert word is not None
    assert ternary_f.run(word)[0] != one.run(word)[0]


# -------------------------
# evaluation
# -------------------------
@pytest.mark.parametrize("text, expected", [("1", "0.2"), ("2", "1"), ("0001", "0.0.0.0.2"), ("0", "0")])
def test_ternary_outputs(ternary_f, text, expected):
    f = RationalMap.from_state(ternary_f)
    assert out_of(f, ternary_f.graph, text) == expected


def test_local_action_of_ternary(ternary_f):
    g = ternary_f.graph
    f = RationalMap.from_state(ternary_f)
    out, state = local_action(f, p(g, "1"))
    assert out == p(g, "02")
    assert state.is_identity()
    out, state = local_action(f, p(g, "00"))
    assert out == p(g, "00")
    assert state == ternary_f


def test_local_action_outside_domain(full2):
    f = RationalMap.build(full2, [(p(full2, "0"), p(full2, "0"), StateMap.identity(full2, 0))])
    with pytest.raises(DomainError):
        local_action(f, p(full2, "1"))


def test_overlapping_entries_rejected(full2):
    one = StateMap.identity(full2, 0)
    with pytest.raises(DomainError):
        RationalMap.build(full2, [(p(full2, "0"), p(full2, "0"), one), (p(full2, "01"), p(full2, "1"), one)])


def test_evaluate_point(ternary_f):
    g = ternary_f.graph
    f = RationalMap.from_state(ternary_f)
    zero = g.edge("0")
    image_point = evaluate_point(f, RationalPoint.make(g, p(g, "1"), (zero,)))
    assert image_point == RationalPoint.make(g, p(g, "02"), (zero,))


def test_refined_map_is_the_same_map(ternary_f):
    f = RationalMap.from_state(ternary_f)
    assert maps_equal(f, f.refined(2))


# -------------------------
# images, composition, inverses
# -------------------------
def test_ternary_image(ternary_f):
    g = ternary_f.graph
    expected = ClopenSet.of(g, [p(g, "0"), p(g, "1")])
    assert image(RationalMap.from_state(ternary_f)) == expected
    assert state_image(ternary_f) == expected


def test_binary_image(binary_f):
    g = binary_f.graph
    assert image(RationalMap.from_state(binary_f)) == ClopenSet.of(g, [p(g, "0"), p(g, "10")])


def test_ternary_square_is_prefix_map(ternary_f):
    g = ternary_f.graph
    f = RationalMap.from_state(ternary_f)
    square = compose(f, f)
    expected = RationalMap.build(g, [(Path.node_path(0), p(g, "0"), StateMap.identity(g, 0))])
    assert maps_equal(square, expected)


def test_inverse_composes_to_identity(binary_f):
    f = RationalMap.from_state(binary_f)
    inv = invert(f)
    assert inv.domain == image(f)
    assert is_identity(compose(inv, f))
    assert is_identity(compose(f, inv))


def test_non_injective_map(full2):
    one = StateMap.identity(full2, 0)
    f = RationalMap.build(full2, [(p(full2, "0"), p(full2, "0"), one), (p(full2, "1"), p(full2, "0"), one)])
    assert not is_injective(f)
    with pytest.raises(DegenerateMapError):
        invert(f)


def test_composition_is_associative(ternary_f):
    f = RationalMap.from_state(ternary_f)
    left = compose(compose(f, f), f)
    right = compose(f, compose(f, f))
    assert maps_equal(left, right)


# -------------------------
# nuclei
# -------------------------
def test_nucleus_of_ternary(ternary_f):
    n = nucleus_of(RationalMap.from_state(ternary_f))
    assert len(n) == 2
    assert ternary_f in n
    assert recurrent_states([ternary_f]) == set(n.states)


def test_ternary_nucleus_passes_all_axioms(ternary_nucleus):
    verdicts = verify_nucleus_of_injections(ternary_nucleus)
    assert set(verdicts) == set(AXIOMS)
    assert all(v.passed for v in verdicts.values())
    assert ternary_nucleus.certified


def test_binary_closed_nucleus(binary_nucleus):
    assert sorted(binary_nucleus.label(s) for s in binary_nucleus) == ["1", "f", "s"]
    verdicts = verify_nucleus_of_injections(binary_nucleus)
    assert all(v.passed for v in verdicts.values())


def test_binary_pair_is_not_restriction_closed():
    verdicts = verify_nucleus_of_injections(catalog.binary_nucleus(closed=False))
    assert not verdicts["LocNuc"].passed
    assert verdicts["LocNuc"].witness is not None


def test_wreath_pair_fails_products():
    verdicts = verify_nucleus_of_injections(catalog.wreath_nucleus())
    assert not verdicts["ProdNuc"].passed
    assert not verdicts["IdNuc"].passed


def test_closure_adds_restrictions(binary_f):
    base = NucleusSet(binary_f.graph, (binary_f,))
    assert len(base.closure()) == 3


def test_labels_and_find(binary_nucleus):
    s = binary_nucleus.find("s")
    assert binary_nucleus.label(s) == "s"
    with pytest.raises(KeyError):
        binary_nucleus.find("nope")


def test_nucleus_dot(ternary_nucleus):
    src = nucleus_dot(ternary_nucleus)
    assert src.startswith("digraph")
    assert "0/0" in src


# -------------------------
# seeded properties
# -------------------------
def _word(rng, low, high, k=2):
    return "".join(str(int(d)) for d in rng.integers(0, k, size=int(rng.integers(low, high + 1))))


def _random_map(graph, rng, max_states=4):
    """A random full-shift machine whose every transition writes one or two letters."""
    n = int(rng.integers(1, max_states + 1))
    names = [f"q{i}" for i in range(n)]
    table = {
        name: ("v", "v", {e: (_word(rng, 1, 2), names[int(rng.integers(n))]) for e in "01"})
        for name in names
    }
    prefix, sm = catalog.machine(graph, table, "q0")
    return RationalMap.build(graph, [(Path.node_path(0), prefix, sm)])


def _random_point(graph, rng, max_prefix=3, k=2):
    head = _word(rng, 0, max_prefix, k)
    prefix = p(graph, head) if head else Path.node_path(0)
    return RationalPoint.make(graph, prefix, tuple(graph.edge(a) for a in _word(rng, 1, 2, k)))


def _random_v(graph, rng, splits):
    """A prefix exchange between two random complete codes of the same size."""
    codes = []
    for _ in range(2):
        leaves = [Path.node_path(0)]
        for _ in range(splits):
            leaves.extend(children(graph, leaves.pop(int(rng.integers(len(leaves))))))
        codes.append(leaves)
    order = rng.permutation(len(codes[1]))
    one = StateMap.identity(graph, 0)
    return RationalMap.build(graph, [(a, codes[1][int(i)], one) for a, i in zip(codes[0], order)])


def _cone_exchange(ternary_f):
    """f from cone 1 onto 20 and 21, its inverse back, identity on 0 and 22."""
    g = ternary_f.graph
    forward = RationalMap.from_state(ternary_f, p(g, "1"), p(g, "2"))
    rest = RationalMap.identity(g, ClopenSet.of(g, [p(g, "0"), p(g, "22")]))
    return forward.union(invert(forward)).union(rest)


def test_restriction_is_transitive(full2, rng):
    for _ in range(100):
        f = _random_map(full2, rng)
        a, b = _word(rng, 1, 3), _word(rng, 1, 3)
        out_a, state_a = local_action(f, p(full2, a))
        out_b, state_b = state_a.run(p(full2, b))
        assert local_action(f, p(full2, a + b)) == (out_a.concat(out_b), state_b)
        assert f.restrict(p(full2, a)).restrict(p(full2, a + b)) == f.restrict(p(full2, a + b))


def test_composition_acts_pointwise(full2, rng):
    for _ in range(100):
        f, g = _random_map(full2, rng), _random_map(full2, rng)
        x = _random_point(full2, rng)
        assert evaluate_point(compose(g, f), x) == evaluate_point(g, evaluate_point(f, x))


def test_double_inverse_of_homeomorphisms(ternary_f, rng):
    g = ternary_f.graph
    swap = _cone_exchange(ternary_f)
    assert is_identity(compose(swap, swap))
    for _ in range(50):
        h = compose(_random_v(g, rng, int(rng.integers(0, 3))), compose(swap, _random_v(g, rng, int(rng.integers(0, 3)))))
        inv = invert(h)
        assert inv.domain == ClopenSet.everything(g)
        assert maps_equal(invert(inv), h)
