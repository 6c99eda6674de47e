import pytest

from src.cayley.atoms import AtomTree
from src.cayley.ball import ball
from src.cayley.oracle import FreeProductOracle
from src.cayley.types import address_system, type_graph
from src.errors import CertificateError, DomainError
from src.hyperbolic.boundary import boundary_local_action, nucleus_extract
from src.hyperbolic.certificate import STAGES, certify_full_contracting_rsg, faithfulness_check, require_core
from src.hyperbolic.triples import (
    MappingTriple,
    constants,
    mapping_triple,
    norm_s,
    signature,
    signature_equivalent,
)
from src.transducer import catalog


def cone(tree, word):
    return tree.atom_of(tuple(word), len(word))


# -------------------------
# constants
# -------------------------
def test_constants_for_trees(f2):
    c = constants(f2)
    assert c["delta"] == 0.0
    assert c["threshold"] == 15
    assert c["neighborhood_radius"] == 6
    assert c["signature_diameter"] == 10


def test_constants_need_delta(z2):
    with pytest.raises(DomainError):
        constants(z2)


def test_norm_s():
    assert norm_s({"x": 0, "y": 4, "z": 1}, ["x", "y", "z"]) == 2.0
    assert norm_s(len, ["ab", "abcd"]) == 1.0
    with pytest.raises(DomainError):
        norm_s(len, [])


# -------------------------
# mapping triples and signatures
# -------------------------
def test_mapping_triple_lands_one_level_down(f2_tree):
    t = mapping_triple(f2_tree, ("a",), cone(f2_tree, "b" * 16))
    assert t.beta.key == ("a",) + ("b",) * 16
    assert t.beta.level == 17
    assert t.distance == 0


def test_contracting_triples_over_small_ball(f2, f2_tree, rng):
    radius = constants(f2)["neighborhood_radius"]
    for g in ball(f2, 2).elements[1:]:
        level = 2 * len(g) + 14
        for _ in range(5):
            word = [str(rng.choice(f2.letters))]
            while len(word) < level:
                word.append(str(rng.choice([a for a in f2.letters if a != f2.inverses[word[-1]]])))
            t = mapping_triple(f2_tree, g, cone(f2_tree, word))
            assert t.beta.infinite
            assert t.distance <= radius


def test_mapping_triple_below_threshold(f2_tree):
    with pytest.raises(DomainError):
        mapping_triple(f2_tree, ("a",), cone(f2_tree, "b" * 15))


def test_make_rejects_escaping_image(f2_tree):
    with pytest.raises(DomainError):
        MappingTriple.make(f2_tree, ("a",), cone(f2_tree, "b" * 16), cone(f2_tree, "b" * 16))


def test_signature(f2_tree):
    t = mapping_triple(f2_tree, ("a",), cone(f2_tree, "b" * 16))
    s = signature(f2_tree, t)
    assert len(s.target) == 3
    assert s.within_bound


def test_signature_equivalent(f2_tree):
    t1 = mapping_triple(f2_tree, ("a",), cone(f2_tree, "b" * 16))
    t2 = mapping_triple(f2_tree, ("a",), cone(f2_tree, "a" + "b" * 15))
    assert t2.beta.key == ("a", "a") + ("b",) * 15
    assert signature_equivalent(f2_tree, t1, t2) == ("a", "a", "B", "A")


def test_signature_inequivalent(f2_tree):
    t1 = mapping_triple(f2_tree, ("a",), cone(f2_tree, "b" * 16))
    t3 = MappingTriple.make(f2_tree, ("a",), cone(f2_tree, "b" * 16), cone(f2_tree, "a" + "b" * 15))
    assert signature_equivalent(f2_tree, t1, t3) is None


# -------------------------
# boundary actions
# -------------------------
def test_boundary_action_moves_cone(f2_phi):
    action = boundary_local_action(("a",), f2_phi.path(["r:2"]), f2_phi)
    assert action.image == f2_phi.path(["r:0", "t1:1"])
    assert action.identity_below(f2_phi.graph, 0)


def test_boundary_action_onto_root(f2_phi):
    action = boundary_local_action(("a",), f2_phi.path(["r:1"]), f2_phi)
    assert action.image == f2_phi.root_path()
    assert action.identity_below(f2_phi.graph, 1)


def test_boundary_action_needs_address(f2_phi):
    with pytest.raises(DomainError):
        boundary_local_action(("a",), f2_phi.path(["t1:0"]), f2_phi)


def test_f2_nucleus(f2_phi):
    nucleus, machines = nucleus_extract(f2_phi)
    assert sorted(machines) == ["A", "B", "a", "b"]
    assert len(nucleus) == 4
    assert all(s.is_identity() for s in nucleus)


def test_free_product_nucleus():
    o = FreeProductOracle([2, 0])
    tree = AtomTree(o, horizon=4)
    phi = address_system(type_graph(o, max_level=3, depth=2, horizon=4, tree=tree), tree)
    nucleus, _ = nucleus_extract(phi)
    assert len(nucleus) == 3
    assert all(s.is_identity() for s in nucleus)


def test_faithfulness(f2_phi):
    report = faithfulness_check(f2_phi, radius=1)
    assert report["passed"]
    assert report["trivial"] == []


# -------------------------
# certification
# -------------------------
def test_certify_free_group(f2, f2_tree):
    cert = certify_full_contracting_rsg(f2, tree=f2_tree)
    assert cert["level"] == "certified"
    assert cert["full"]
    assert [s["stage"] for s in cert["stages"]] == list(STAGES)
    assert cert["nucleus"]["size"] == cert["nucleus"]["identities"] == 4
    assert cert["nucleus_dot"].startswith("digraph")


def test_certify_rejects_z2(z2):
    with pytest.raises(CertificateError) as info:
        certify_full_contracting_rsg(z2)
    assert info.value.stage == "hyperbolicity"


def test_require_core_on_houghton():
    with pytest.raises(CertificateError) as info:
        require_core(catalog.houghton_graph(2))
    assert info.value.stage == "core"


def test_require_core_without_core(counterexample):
    with pytest.raises(CertificateError):
        require_core(counterexample)
