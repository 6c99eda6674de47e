import pytest

from src.cayley.atoms import CERTIFIED, AtomTree, nearest, nhat, visible
from src.cayley.ball import ball
from src.cayley.morphisms import (
    Verdict,
    find_morphism,
    free_product_cone_check,
    morphism_check,
    morphism_group,
)
from src.cayley.oracle import (
    IDENTITY,
    DehnOracle,
    FreeAbelianOracle,
    FreeGroupOracle,
    FreeProductOracle,
    make_oracle,
)
from src.cayley.types import atom_tree_dot, atoms_frame, type_graph, type_graph_dot
from src.errors import BudgetExceeded, DomainError


@pytest.fixture(scope="module")
def z2_tree(z2):
    return AtomTree(z2, horizon=6)


@pytest.fixture(scope="module")
def f2_profile(f2):
    return AtomTree(f2, horizon=3, mode="profile")


@pytest.fixture(scope="module")
def free_product():
    return FreeProductOracle([2, 0])


# -------------------------
# oracles
# -------------------------
def test_free_group_arithmetic(f2):
    assert f2.normal_form(tuple("aAb")) == ("b",)
    assert f2.inverse(("a", "b")) == ("B", "A")
    assert f2.distance(("a",), ("b",)) == 2
    assert f2.parse("abBA") == IDENTITY
    assert f2.is_tree


def test_free_abelian_normal_form(z2):
    assert z2.normal_form(tuple("yxX")) == ("y",)
    assert z2.normal_form(tuple("yx")) == ("x", "y")
    assert z2.length(tuple("xyXY")) == 0
    assert not z2.is_tree
    assert z2.delta is None


def test_free_product_normal_form(free_product):
    assert free_product.letters == ("s", "t", "T")
    assert free_product.normal_form(tuple("ss")) == IDENTITY
    assert free_product.normal_form(tuple("tsst")) == ("t", "t")
    assert free_product.is_tree
    assert FreeProductOracle([3, 0]).delta == 1.0
    assert not FreeProductOracle([3, 0]).is_tree


def test_dehn_oracle_reduces_relator():
    o = DehnOracle(["a"], ["aaa"], delta=1.0)
    assert o.normal_form(tuple("aa")) == ("A",)
    assert o.equal(("a", "a"), ("A",))
    assert len(ball(o, 2)) == 3


@pytest.mark.parametrize(
    "spec, kind",
    [
        ({"kind": "free", "rank": 2}, FreeGroupOracle),
        ({"kind": "zn", "n": 2}, FreeAbelianOracle),
        ({"kind": "free_product", "factors": [2, 0]}, FreeProductOracle),
    ],
)
def test_make_oracle(spec, kind):
    o = make_oracle(spec)
    assert isinstance(o, kind)
    assert o.to_json()["kind"] == spec["kind"]


@pytest.mark.parametrize("spec", [{"kind": "braid"}, {"kind": "free", "rank": 0}, {"kind": "zn", "n": 7}])
def test_make_oracle_rejects(spec):
    with pytest.raises(DomainError):
        make_oracle(spec)


def test_unknown_letter(f2):
    with pytest.raises(DomainError):
        f2.parse("ax")


# -------------------------
# balls
# -------------------------
def test_free_group_ball_sizes(f2):
    assert ball(f2, 3).sizes() == [2 * 3 ** n - 1 for n in range(4)]


def test_z2_ball_sizes(z2):
    assert ball(z2, 4).sizes() == [2 * n * n + 2 * n + 1 for n in range(5)]


def test_ball_layers(f2):
    b = ball(f2, 2)
    assert b.layer_of(("a", "b")) == 2
    assert len(b.sphere(1)) == 4
    with pytest.raises(DomainError):
        b.layer_of(("a", "b", "a"))


def test_ball_cap(f2):
    with pytest.raises(BudgetExceeded):
        ball(f2, 3, cap=10)


# -------------------------
# atoms
# -------------------------
def test_cone_mode_atoms(f2_tree):
    assert f2_tree.mode == "cone"
    level1 = f2_tree.atoms(1)
    assert [a.key for a in level1] == [("a",), ("A",), ("b",), ("B",)]
    assert all(a.flag == CERTIFIED for a in level1)
    assert len(f2_tree.children(level1[0])) == 3
    assert f2_tree.atom_of(("a", "b"), 1).key == ("a",)


def test_cone_mode_rejects_short_words(f2_tree):
    with pytest.raises(DomainError):
        f2_tree.atom_of(("a",), 2)


def test_tree_settings_are_checked(z2):
    with pytest.raises(DomainError):
        AtomTree(z2, mode="cone")
    with pytest.raises(DomainError):
        AtomTree(z2, horizon=0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_z2_infinite_atoms(z2_tree, n):
    inf = z2_tree.infinite_atoms(n)
    assert len(inf) == 8 * n
    assert sum(1 for a in inf if len(z2_tree.children(a)) == 3) == 4
    assert all(len(z2_tree.children(a)) == 1 for a in inf if len(z2_tree.children(a)) != 3)
    assert all(a.flag.startswith("heuristic") for a in inf)


def test_z2_corner_atom(z2, z2_tree):
    corner = z2_tree.atom_of(z2.from_exponents((5, 5)), 3)
    assert corner.infinite
    assert len(z2_tree.children(corner)) == 3
    assert len(nearest(z2_tree, corner)) == 4
    assert set(nearest(z2_tree, corner)) <= set(visible(z2_tree, corner))
    with pytest.raises(DomainError):
        nhat(z2_tree, corner)
    assert nhat(z2_tree, corner, radius=0) == nearest(z2_tree, corner)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_f2_profile_atoms_are_cones(f2, f2_profile, f2_tree, n):
    found = f2_profile.atoms(n)
    assert len(found) == 4 * 3 ** (n - 1)
    assert all(a.infinite for a in found)
    window = f2_profile.ball(n + f2_profile.horizon)
    for a in found:
        cone = {x for x, k in zip(window.elements, window.layers) if k >= n and f2.in_cone(a.base, x)}
        assert set(a.witnesses) == cone
    assert {a.base for a in found} == {c.key for c in f2_tree.atoms(n)}


def test_nhat_in_cone_mode(f2_tree):
    a = f2_tree.atoms(1)[0]
    assert nhat(f2_tree, a) == [("a",), ("A",), ("b",), ("B",)]


def test_atoms_frame(f2_tree):
    frame = atoms_frame(f2_tree, range(3))
    assert list(frame.columns) == ["level", "profile_hash", "witnesses", "children", "flag", "base"]
    assert len(frame) == 1 + 4 + 12
    assert frame.groupby("level").size().tolist() == [1, 4, 12]


def test_atoms_frame_with_threads(f2_tree):
    serial = atoms_frame(f2_tree, range(3))
    threaded = atoms_frame(f2_tree, range(3), jobs=2)
    assert threaded.equals(serial)


def test_atom_tree_dot(f2_tree):
    src = atom_tree_dot(f2_tree, 1)
    assert src.startswith("digraph")
    assert "label=G" in src


# -------------------------
# morphisms
# -------------------------
def test_find_morphism(f2_tree):
    a = f2_tree.atom_of(("a",), 1)
    aa = f2_tree.atom_of(("a", "a"), 2)
    res = find_morphism(f2_tree, a, aa)
    assert res is not None
    assert res.certified
    assert res.g == ("a",)
    assert res.condition_ii is True


def test_wrong_element_is_refuted(f2_tree):
    a = f2_tree.atom_of(("a",), 1)
    aa = f2_tree.atom_of(("a", "a"), 2)
    res = morphism_check(f2_tree, ("b",), a, aa)
    assert res.verdict is Verdict.REFUTED
    assert res.condition == "i"


def test_inverse_cones_are_not_morphic(f2_tree):
    a = f2_tree.atom_of(("a",), 1)
    big_a = f2_tree.atom_of(("A",), 1)
    assert find_morphism(f2_tree, a, big_a) is None


def test_cone_mode_certificate_names_depth(f2_tree):
    a = f2_tree.atom_of(("a",), 1)
    res = morphism_check(f2_tree, IDENTITY, a, a, depth=5)
    assert res.certified
    assert res.detail == "children matched to depth 1; cone types fix the deeper levels"


def test_z2_quadrant_translation_fails_condition_ii(z2, z2_tree):
    q1 = z2_tree.atom_of(z2.from_exponents((1, 1)), 1)
    q2 = z2_tree.atom_of(z2.from_exponents((2, 2)), 2)
    g = z2.from_exponents((1, 1))
    res = morphism_check(z2_tree, g, q1, q2)
    assert res.verdict is Verdict.REFUTED
    assert res.condition == "ii"
    assert res.condition_ii is False
    assert find_morphism(z2_tree, q1, q2) is None
    loose = find_morphism(z2_tree, q1, q2, strict=False)
    assert loose.g == ("x", "y")
    assert loose.condition == "ii"


def test_z2_half_row_translation_is_inconclusive(z2, z2_tree):
    row1 = z2_tree.atom_of(z2.from_exponents((1, 0)), 1)
    row2 = z2_tree.atom_of(z2.from_exponents((2, 0)), 2)
    res = morphism_check(z2_tree, ("x",), row1, row2)
    assert res.verdict is Verdict.INCONCLUSIVE
    assert res.condition_ii is True
    assert "no hyperbolicity constant" in res.detail


def test_z2_never_certifies(z2_tree):
    pool = z2_tree.infinite_atoms(1) + z2_tree.infinite_atoms(2)
    moves = z2_tree.ball(1).within(1)
    results = [morphism_check(z2_tree, g, a1, a2) for a1 in pool for a2 in pool for g in moves]
    assert not any(r.certified for r in results)
    assert all(r.verdict is Verdict.REFUTED for r in results if r.condition_ii is False)
    assert any(r.verdict is Verdict.INCONCLUSIVE for r in results)


def test_profile_mode_identity_is_certified(f2_profile):
    ab = f2_profile.atom_of(("a", "b"), 2)
    res = morphism_check(f2_profile, IDENTITY, ab, ab, depth=1)
    assert res.certified
    assert res.detail == "neighbourhood criterion holds to depth 1"


def test_profile_mode_without_neighbourhood_match(f2_profile):
    a = f2_profile.atom_of(("a",), 1)
    aa = f2_profile.atom_of(("a", "a"), 2)
    res = morphism_check(f2_profile, ("a",), a, aa, depth=1)
    assert res.verdict is Verdict.INCONCLUSIVE
    assert "N̂" in res.detail


def test_morphism_group_of_root(f2_tree):
    group = morphism_group(f2_tree, f2_tree.root())
    assert group.elements == (IDENTITY,)
    assert group.closed


def test_free_product_cone_check(free_product):
    tree = AtomTree(free_product, horizon=4)
    check = free_product_cone_check(tree, ("t",))
    assert check.ok
    with pytest.raises(DomainError):
        free_product_cone_check(tree, ("s",))


# -------------------------
# types and addresses
# -------------------------
def test_f2_types(f2_types):
    assert sorted(f2_types.reps) == ["r", "t1", "t2", "t3", "t4"]
    assert f2_types.report["new_types_per_level"] == [1, 4, 0, 0]
    assert f2_types.stabilized
    assert [c.child_type for c in f2_types.out["r"]] == ["t1", "t2", "t3", "t4"]
    assert [c.child_type for c in f2_types.out["t1"]] == ["t1", "t3", "t4"]


def test_f2_type_frame(f2_types, f2):
    frame = f2_types.frame(f2)
    assert frame.set_index("type").loc["t1", "children"] == 3
    assert frame.set_index("type").loc["r", "children"] == 4


def test_free_product_types(free_product):
    types = type_graph(free_product, max_level=3, depth=2, horizon=4)
    assert len(types.reps) == 4
    assert types.stabilized


def test_f2_strict_types_match(f2, f2_tree, f2_types):
    strict = type_graph(f2, max_level=3, depth=2, horizon=6, tree=f2_tree, strict=True)
    assert sorted(strict.reps) == sorted(f2_types.reps)
    assert strict.report["condition_ii_divergences"] == []
    assert strict.report["uncertified_merges"] == []


def test_z2_nine_types(z2, z2_tree):
    types = type_graph(z2, max_level=4, depth=2, horizon=6, tree=z2_tree)
    assert len(types.reps) == 9
    assert types.report["new_types_per_level"] == [1, 8, 0, 0, 0]
    assert types.stabilized
    assert sorted(len(edges) for edges in types.out.values()) == [1, 1, 1, 1, 3, 3, 3, 3, 8]
    # nested quadrants only merge with condition (ii) failing
    assert types.report["condition_ii_divergences"]
    assert types.report["uncertified_merges"]


def test_z2_strict_types_do_not_close(z2, z2_tree):
    with pytest.raises(BudgetExceeded):
        type_graph(z2, max_level=2, depth=2, horizon=6, tree=z2_tree, strict=True, max_types=30)


def test_type_graph_dot(f2_types):
    assert "t1" in type_graph_dot(f2_types)


def test_addresses(f2_phi):
    alpha = f2_phi.path(["r:0", "t1:1"])
    atom, m = f2_phi.atom(alpha)
    assert atom.key == ("a", "b")
    assert m == ("a",)
    assert f2_phi.address_of(("a", "b", "b"), 2) == alpha
    assert f2_phi.canonical_morphism(f2_phi.path(["r:2"]), alpha) == ("a",)


def test_smallest_containing(f2_phi):
    found = f2_phi.smallest_containing([("a", "b"), ("a", "B")])
    assert found == f2_phi.path(["r:0"])


def test_addresses_need_root(f2_phi):
    with pytest.raises(DomainError):
        f2_phi.atom(f2_phi.path(["t1:0"]))
