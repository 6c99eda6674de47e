import pytest

from src.errors import ClassObstruction, DomainError, GraphError, PathError
from src.shift.clopen import ClopenSet
from src.shift.graph import DirectedGraph
from src.shift.paths import Path, parse_path
from src.shift.points import RationalPoint
from src.thompson.flexibility import (
    check_same_class,
    comparison_group,
    exchange,
    map_cones_v,
    match_clopen,
    push_into_core,
)
from src.thompson.points import cone_swap, stabilizer_contraction, transposition_product
from src.thompson.velement import (
    VElement,
    is_v_like,
    v_apply_point,
    v_as_rational,
    v_compose,
    v_evaluate,
    v_invert,
    velement_from_map,
)
from src.transducer.rational import RationalMap


def p(graph, text):
    return parse_path(graph, text)


@pytest.fixture
def swap(full2):
    """Exchanges the cones 0 and 10."""
    return VElement.make(full2, [(p(full2, "0"), p(full2, "10")), (p(full2, "10"), p(full2, "0")), (p(full2, "11"), p(full2, "11"))])


@pytest.fixture
def transient():
    return DirectedGraph.from_spec(
        ["s", "v"], [("i", "s", "v"), ("j", "s", "v"), ("a", "v", "v"), ("b", "v", "v")]
    )


# -------------------------
# elements
# -------------------------
def test_make_reduces_sibling_families(full2):
    v = VElement.make(full2, [(p(full2, "00"), p(full2, "00")), (p(full2, "01"), p(full2, "01")), (p(full2, "1"), p(full2, "1"))])
    assert v.is_identity()
    assert v == VElement.identity(full2)
    assert v.size == 1


def test_swap_is_an_involution(swap, full2):
    assert swap.size == 3
    assert not swap.is_identity()
    assert v_invert(swap) == swap
    square = v_compose(swap, swap)
    assert square.is_identity()
    assert square == VElement.identity(full2)


def test_paired_cones_must_share_terminus(counterexample):
    g = counterexample
    with pytest.raises(PathError):
        VElement.make(g, [(p(g, "a"), p(g, "x"))])


def test_overlapping_domain_rejected(full2):
    with pytest.raises(DomainError):
        VElement.make(full2, [(p(full2, "0"), p(full2, "0")), (p(full2, "01"), p(full2, "1"))])


def test_evaluate(swap, full2):
    assert v_evaluate(swap, p(full2, "011")) == p(full2, "1011")
    assert v_evaluate(swap, p(full2, "11")) == p(full2, "11")


def test_apply_point(swap, full2):
    zero = full2.edge("0")
    origin = RationalPoint.make(full2, Path.node_path(0), (zero,))
    assert v_apply_point(swap, origin) == RationalPoint.make(full2, p(full2, "10"), (zero,))


def test_rational_view_round_trip(swap):
    f = v_as_rational(swap)
    assert is_v_like(f)
    assert velement_from_map(f) == swap


def test_ternary_f_is_not_v_like(ternary_f):
    assert not is_v_like(RationalMap.from_state(ternary_f))


# -------------------------
# flexibility
# -------------------------
def test_map_cones_on_full_shift(full2):
    v = map_cones_v(full2, [(p(full2, "0"), p(full2, "00"))])
    everything = ClopenSet.everything(full2)
    assert v.source == everything
    assert v.target == everything
    assert v_evaluate(v, p(full2, "01")) == p(full2, "001")


def test_map_cones_obstructed_in_counterexample(counterexample):
    g = counterexample
    ambient = ClopenSet.cone(g, Path.node_path(g.node("v")))
    with pytest.raises(ClassObstruction):
        map_cones_v(g, [(p(g, "a"), p(g, "aa"))], ambient)


def test_comparison_group_on_w(counterexample):
    g = counterexample
    x = ClopenSet.cone(g, p(g, "x"))
    group = comparison_group(g, x)
    assert group.describe() == "Z/2"
    with pytest.raises(ClassObstruction):
        check_same_class(x, x | ClopenSet.cone(g, p(g, "ax")), group)


def test_empty_against_nonempty(full2):
    with pytest.raises(ClassObstruction):
        check_same_class(ClopenSet.empty(full2), ClopenSet.everything(full2))


def test_match_clopen_pairs_equal_termini(full3):
    a = ClopenSet.cone(full3, p(full3, "0"))
    b = ClopenSet.of(full3, [p(full3, "10"), p(full3, "11"), p(full3, "12")])
    pairs = match_clopen(a, b)
    assert ClopenSet.of(full3, [x for x, _ in pairs]) == a
    assert ClopenSet.of(full3, [y for _, y in pairs]) == b


def test_map_cones_rejects_overlapping_sources(full2):
    with pytest.raises(DomainError):
        map_cones_v(full2, [(p(full2, "0"), p(full2, "10")), (p(full2, "01"), p(full2, "11"))])


def test_exchange(full2):
    v = exchange(ClopenSet.cone(full2, p(full2, "0")), ClopenSet.cone(full2, p(full2, "10")), ClopenSet.everything(full2))
    assert v_evaluate(v, p(full2, "0")) == p(full2, "10")
    assert v.source == v.target


# -------------------------
# core
# -------------------------
def test_push_into_core(transient):
    g = transient
    push = push_into_core(g, ClopenSet.everything(g))
    assert push.reach == 1
    assert push.target.is_subset(ClopenSet.cone(g, Path.node_path(g.node("v"))))
    assert push.in_core(VElement.identity(g, push.target))
    assert push.conjugate(VElement.identity(g, push.source)).is_identity()
    assert push.core_set().graph.node_names == ("v",)


def test_push_inside_core_is_identity(full2):
    push = push_into_core(full2, ClopenSet.cone(full2, p(full2, "0")))
    assert push.h.is_identity()


def test_push_needs_core(counterexample):
    with pytest.raises(GraphError):
        push_into_core(counterexample, ClopenSet.everything(counterexample))


# -------------------------
# points
# -------------------------
def test_stabilizer_contraction_fixes_point(full2):
    zero = full2.edge("0")
    origin = RationalPoint.make(full2, Path.node_path(0), (zero,))
    v = stabilizer_contraction(full2, [origin])
    assert v_apply_point(v, origin) == origin
    assert v_evaluate(v, p(full2, "0")) == p(full2, "00")


def test_cone_swap(full2):
    swap = cone_swap(full2, p(full2, "0"), p(full2, "10"), ClopenSet.everything(full2))
    assert v_evaluate(swap, p(full2, "01")) == p(full2, "101")
    assert v_evaluate(swap, p(full2, "100")) == p(full2, "00")
    assert v_evaluate(swap, p(full2, "11")) == p(full2, "11")


def test_transposition_product_cycles_points(full2):
    zero = full2.edge("0")
    a = RationalPoint.make(full2, Path.node_path(0), (zero,))
    b = RationalPoint.make(full2, p(full2, "1"), (zero,))
    c = RationalPoint.make(full2, p(full2, "11"), (zero,))
    v = transposition_product(full2, [a, b, c], [b, c, a])
    assert [v_apply_point(v, x) for x in (a, b, c)] == [b, c, a]


def test_transposition_product_completes_permutation(full2):
    zero = full2.edge("0")
    src = RationalPoint.make(full2, Path.node_path(0), (zero,))
    dst = RationalPoint.make(full2, p(full2, "1"), (zero,))
    v = transposition_product(full2, [src], [dst])
    assert v_apply_point(v, src) == dst
    assert v_apply_point(v, dst) == src


def test_transposition_product_of_fixed_points(full2):
    origin = RationalPoint.make(full2, Path.node_path(0), (full2.edge("0"),))
    assert transposition_product(full2, [origin], [origin]).is_identity()


def test_transposition_product_needs_same_orbit(full2):
    src = RationalPoint.make(full2, Path.node_path(0), (full2.edge("0"),))
    dst = RationalPoint.make(full2, Path.node_path(0), (full2.edge("1"),))
    with pytest.raises(DomainError, match="different orbits"):
        transposition_product(full2, [src], [dst])


def test_transposition_product_stays_in_ambient(full2):
    zero = full2.edge("0")
    src = RationalPoint.make(full2, Path.node_path(0), (zero,))
    dst = RationalPoint.make(full2, p(full2, "1"), (zero,))
    with pytest.raises(DomainError, match="ambient"):
        transposition_product(full2, [src], [dst], ClopenSet.cone(full2, p(full2, "1")))
