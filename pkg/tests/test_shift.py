import pytest
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import invariant_factors

from src.errors import DomainError, GraphError, PathError
from src.shift.classes import class_of, classes_group, matmul, relative_classes_group, smith_normal_form
from src.shift.clopen import ClopenSet, Code, common_refinement
from src.shift.graph import DirectedGraph, check_subshift, core_nodes, irreducible, irreducible_core
from src.shift.paths import (
    NULL,
    Path,
    children,
    descendants,
    format_path,
    gcp,
    make_path,
    parent,
    parse_path,
    path_from_json,
    path_to_json,
)
from src.shift.points import RationalPoint, is_proper_power, primitive_root
from src.transducer import catalog


def p(graph, text):
    return parse_path(graph, text)


# -------------------------
# graphs
# -------------------------
def test_from_spec_rejects_unknown_endpoint():
    with pytest.raises(GraphError):
        DirectedGraph.from_spec(["v"], [("a", "v", "w")])


def test_duplicate_edge_ids_rejected():
    with pytest.raises(GraphError):
        DirectedGraph.from_spec(["v"], [("a", "v", "v"), ("a", "v", "v")])


@pytest.mark.parametrize(
    "graph, ok",
    [
        (catalog.full_shift(2), True),
        (catalog.two_node_graph(), True),
        (catalog.counterexample_graph(), True),
        (catalog.cycle_graph(3), False),
        (DirectedGraph.from_spec(["v", "w"], [("a", "v", "v"), ("b", "v", "w")]), False),
    ],
)
def test_check_subshift(graph, ok):
    assert check_subshift(graph).ok is ok


def test_dead_end_node_reports_empty_cone():
    g = DirectedGraph.from_spec(["v", "w"], [("a", "v", "v"), ("b", "v", "w")])
    report = check_subshift(g)
    assert report.no_empty_cones is False


def test_irreducible():
    assert irreducible(catalog.full_shift(2))
    assert irreducible(catalog.two_node_graph())
    assert irreducible(catalog.complete_minus_self(3))
    assert not irreducible(catalog.cycle_graph(3))
    assert not irreducible(catalog.counterexample_graph())


def test_core_of_irreducible_graph_is_everything(two_node):
    assert core_nodes(two_node) == frozenset({0, 1})


def test_core_with_transient_node():
    g = DirectedGraph.from_spec(
        ["s", "v"], [("i", "s", "v"), ("j", "s", "v"), ("a", "v", "v"), ("b", "v", "v")]
    )
    assert core_nodes(g) == frozenset({g.node("v")})
    assert g.longest_noncore_path(core_nodes(g)) == 1
    assert irreducible_core(g).node_names == ("v",)


def test_counterexample_has_no_core(counterexample):
    assert core_nodes(counterexample) is None


def test_houghton_violates_subshift_precondition():
    with pytest.raises(GraphError):
        core_nodes(catalog.houghton_graph(2))


def test_to_dot_marks_core(two_node):
    src = two_node.to_dot(core=core_nodes(two_node))
    assert "doublecircle" in src
    assert "digraph" in src


# -------------------------
# paths
# -------------------------
def test_concat_and_strip(full2):
    a, b = p(full2, "01"), p(full2, "10")
    ab = a.concat(b)
    assert format_path(full2, ab) == "0.1.1.0"
    assert a.is_prefix_of(ab)
    assert a.strip(ab) == b
    assert NULL.concat(a) == a


def test_concat_of_nonadjacent_paths(counterexample):
    with pytest.raises(PathError):
        p(counterexample, "x").concat(p(counterexample, "a"))


def test_make_path_checks_adjacency(counterexample):
    g = counterexample
    with pytest.raises(PathError):
        make_path(g, [g.edge("b1"), g.edge("a")])


def test_gcp(full2):
    assert gcp(full2, p(full2, "0110"), p(full2, "0100")) == p(full2, "01")


def test_parent_children(full2):
    kids = children(full2, p(full2, "0"))
    assert kids == [p(full2, "00"), p(full2, "01")]
    assert parent(full2, p(full2, "01")) == p(full2, "0")
    assert len(descendants(full2, Path.node_path(0), 3)) == 8


def test_parse_path_forms(two_node):
    g = two_node
    assert parse_path(g, "<w>") == Path.node_path(g.node("w"))
    assert parse_path(g, "∅") == NULL
    assert parse_path(g, "a.x.c") == parse_path(g, "axc")
    with pytest.raises(PathError):
        parse_path(g, "")


def test_path_json(two_node):
    g = two_node
    for path in (NULL, Path.node_path(1), p(g, "axy")):
        assert path_from_json(g, path_to_json(g, path)) == path


def test_truncate(full3):
    path = p(full3, "0120")
    assert path.truncate(full3, 2) == p(full3, "01")
    assert path.truncate(full3, 0) == Path.node_path(0)


# -------------------------
# clopen sets
# -------------------------
def test_siblings_merge(full2):
    c = ClopenSet.of(full2, [p(full2, "00"), p(full2, "01")])
    assert c.paths == (p(full2, "0"),)
    assert ClopenSet.of(full2, [p(full2, "0"), p(full2, "1")]) == ClopenSet.everything(full2)


def test_set_algebra(full2):
    everything = ClopenSet.everything(full2)
    zero = ClopenSet.cone(full2, p(full2, "0"))
    one = zero.complement(everything)
    assert one.paths == (p(full2, "1"),)
    assert (zero | one) == everything
    assert (zero & one).is_empty()
    assert zero.disjoint(one)
    assert ClopenSet.cone(full2, p(full2, "01")).is_subset(zero)
    assert zero.contains_path(p(full2, "011"))
    assert not zero.contains_path(p(full2, "1"))


def test_difference_splits_cone(full2):
    rest = ClopenSet.cone(full2, p(full2, "0")) - ClopenSet.cone(full2, p(full2, "011"))
    assert rest.paths == (p(full2, "00"), p(full2, "010"))


def test_paths_at_depth_is_complete_code(full3):
    code = ClopenSet.everything(full3).paths_at_depth(2)
    assert len(code) == 9
    assert ClopenSet.of(full3, code) == ClopenSet.everything(full3)


def test_common_refinement(full2):
    everything = ClopenSet.everything(full2)
    a = Code((p(full2, "0"), p(full2, "10"), p(full2, "11")), everything)
    b = Code((p(full2, "00"), p(full2, "01"), p(full2, "1")), everything)
    c = common_refinement(a, b)
    assert c.paths == (p(full2, "00"), p(full2, "01"), p(full2, "10"), p(full2, "11"))
    assert c.complete


def test_code_rejects_overlap(full2):
    with pytest.raises(PathError):
        Code((p(full2, "0"), p(full2, "01")), ClopenSet.everything(full2))


# -------------------------
# Smith normal form and classes
# -------------------------
@pytest.mark.parametrize(
    "matrix",
    [
        [[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]],
        [[2, 4], [6, 8]],
        [[3, 0], [0, 5]],
        [[1, -1], [-1, 1]],
        [[0, 0], [0, 0]],
    ],
)
def test_smith_normal_form_matches_sympy(matrix):
    d, left, right = smith_normal_form(matrix)
    assert matmul(matmul(left, matrix), right) == d
    ours = [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]
    theirs = [int(x) for x in invariant_factors(DM(matrix, ZZ)) if x]
    assert ours == theirs
    assert all(b % a == 0 for a, b in zip(ours, ours[1:]))


@pytest.mark.parametrize("n, expected", [(2, "0"), (3, "Z/2"), (4, "Z/3"), (5, "Z/4")])
def test_full_shift_classes(n, expected):
    group = classes_group(catalog.full_shift(n))
    assert group.describe() == expected
    assert group.verify()


def test_two_node_classes(two_node):
    assert classes_group(two_node).describe() == "Z"


def test_classes_group_needs_irreducible():
    with pytest.raises(GraphError):
        classes_group(catalog.cycle_graph(3))


def test_class_of_cones(full3):
    group = classes_group(full3)
    whole = class_of(ClopenSet.everything(full3), group)
    one_cone = class_of(ClopenSet.cone(full3, p(full3, "0")), group)
    two_cones = class_of(ClopenSet.of(full3, [p(full3, "0"), p(full3, "1")]), group)
    assert whole == one_cone
    assert not one_cone.is_zero()
    assert two_cones.is_zero()
    assert (one_cone + one_cone) == two_cones


def test_counterexample_relative_classes(counterexample):
    g = counterexample
    group = relative_classes_group(g, [g.node("w")])
    assert group.describe() == "Z/2"
    x = ClopenSet.cone(g, p(g, "x"))
    assert not class_of(x, group).is_zero()
    assert class_of(x | ClopenSet.cone(g, p(g, "ax")), group).is_zero()


def test_relative_group_needs_successor_closed(counterexample):
    with pytest.raises(GraphError):
        relative_classes_group(counterexample, [counterexample.node("v")])


def test_class_of_empty_set(full2):
    with pytest.raises(DomainError):
        class_of(ClopenSet.empty(full2), classes_group(full2))


# -------------------------
# rational points
# -------------------------
def test_primitive_root():
    assert primitive_root((0, 1, 0, 1)) == (0, 1)
    assert is_proper_power((2, 2))
    assert not is_proper_power((0, 1))


def test_point_is_canonical(full2):
    zero = full2.edge("0")
    one = full2.edge("1")
    a = RationalPoint.make(full2, p(full2, "10"), (zero, zero))
    b = RationalPoint.make(full2, p(full2, "1"), (zero,))
    assert a == b
    c = RationalPoint.make(full2, p(full2, "0"), (one, zero, one, zero))
    assert c.prefix == Path.node_path(0)
    assert c.period == (zero, one)


def test_point_needs_cycle(counterexample):
    g = counterexample
    with pytest.raises(PathError):
        RationalPoint.make(g, Path.node_path(g.node("v")), (g.edge("x"),))
