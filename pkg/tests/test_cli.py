import json

import pytest

from src.cli.main import EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, run
from src.data_core.writer import clopen_payload, graph_payload, nucleus_payload, rational_payload
from src.shift.clopen import ClopenSet
from src.shift.paths import Path
from src.transducer import catalog
from src.transducer.rational import RationalMap


def write_input(tmp_path, payload, name="input.json"):
    target = tmp_path / name
    target.write_text(json.dumps(payload), encoding="utf-8")
    return str(target)


@pytest.fixture
def ternary_file(tmp_path):
    nucleus = catalog.ternary_nucleus()
    payload = {
        "graph": graph_payload(nucleus.graph),
        "nuclei": {"ternary": nucleus_payload(nucleus)},
        "maps": {"f": rational_payload(RationalMap.from_state(nucleus.find("f")))},
    }
    return write_input(tmp_path, payload, "ternary.json")


@pytest.fixture
def wreath_file(tmp_path):
    nucleus = catalog.wreath_nucleus()
    payload = {"graph": graph_payload(nucleus.graph), "nuclei": {"wreath": nucleus_payload(nucleus)}}
    return write_input(tmp_path, payload, "wreath.json")


@pytest.fixture
def counterexample_file(tmp_path):
    g = catalog.counterexample_graph()
    payload = {
        "graph": graph_payload(g),
        "clopens": {"left": clopen_payload(ClopenSet.cone(g, Path.node_path(g.node("v"))))},
    }
    return write_input(tmp_path, payload, "counterexample.json")


# -------------------------
# graph
# -------------------------
def test_graph_classes(capsys):
    assert run(["graph", "classes", "--catalog", "full:3"]) == EXIT_OK
    assert "Z/2" in capsys.readouterr().out


def test_graph_check(capsys):
    assert run(["graph", "check", "--catalog", "two-node"]) == EXIT_OK
    assert "irreducible" in capsys.readouterr().out


def test_graph_core_missing(capsys):
    assert run(["graph", "core", "--catalog", "counterexample"]) == EXIT_NEGATIVE
    assert "no irreducible core" in capsys.readouterr().out


@pytest.mark.parametrize("spec", ["moebius", "full", "two-node:3", "full:x"])
def test_bad_catalog_is_usage_error(spec):
    assert run(["graph", "classes", "--catalog", spec]) == EXIT_USAGE


def test_bad_budget_is_usage_error():
    assert run(["--depth", "0", "graph", "classes", "--catalog", "full:2"]) == EXIT_USAGE


def test_missing_input_is_usage_error():
    assert run(["trans", "verify-nucleus"]) == EXIT_USAGE


# -------------------------
# trans
# -------------------------
def test_trans_eval(ternary_file, capsys):
    assert run(["--input", ternary_file, "trans", "eval", "--map", "f", "--path", "1"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "0.2"


def test_trans_eval_needs_one_input(ternary_file):
    assert run(["--input", ternary_file, "trans", "eval", "--map", "f"]) == EXIT_USAGE


def test_verify_nucleus_passes(ternary_file, capsys):
    assert run(["--input", ternary_file, "trans", "verify-nucleus"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS" in out
    assert "FAIL" not in out


def test_verify_nucleus_fails(wreath_file, capsys):
    assert run(["--input", wreath_file, "trans", "verify-nucleus"]) == EXIT_NEGATIVE
    assert "FAIL" in capsys.readouterr().out


def test_trans_nucleus_saves_artifacts(ternary_file, tmp_path, capsys):
    out_dir = tmp_path / "out"
    code = run(["--input", ternary_file, "-o", str(out_dir), "trans", "nucleus", "--map", "f",
                "--save", "nucleus", "--dot", "nucleus_view"])
    assert code == EXIT_OK
    assert "nucleus of 2 states" in capsys.readouterr().out
    saved = json.loads((out_dir / "nucleus.json").read_text(encoding="utf-8"))
    assert saved["budgets"]["depth"] == 12
    assert len(saved["members"]) == 2
    assert (out_dir / "nucleus_view.dot").exists()


def test_membership_of_non_surjection(ternary_file, capsys):
    assert run(["--input", ternary_file, "rsg", "member", "--map", "f"]) == EXIT_NEGATIVE
    assert "negative" in capsys.readouterr().err


def test_ker_del1(ternary_file, capsys):
    assert run(["--input", ternary_file, "rsg", "ker-del1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "2 generators of degree at most 2" in out


# -------------------------
# v
# -------------------------
def test_map_cones_on_full_shift(capsys):
    assert run(["v", "map-cones", "--catalog", "full:2", "--pair", "0:00"]) == EXIT_OK
    assert "domain" in capsys.readouterr().out


def test_map_cones_obstructed(counterexample_file, capsys):
    code = run(["--input", counterexample_file, "v", "map-cones", "--pair", "a:a.a", "--ambient", "left"])
    assert code == EXIT_NEGATIVE
    assert "negative" in capsys.readouterr().err


def test_map_cones_needs_separator():
    assert run(["v", "map-cones", "--catalog", "full:2", "--pair", "000"]) == EXIT_USAGE


# -------------------------
# groups
# -------------------------
def test_atom_types_stabilize(capsys):
    assert run(["atoms", "types", "--group", "free:2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "new types per level: [1, 4, 0, 0]" in out
    assert "stabilized" in out


def test_certify_rejects_z2(capsys):
    assert run(["hyp", "certify", "--group", "zn:2"]) == EXIT_NEGATIVE
    assert "negative" in capsys.readouterr().err


def test_unknown_group():
    assert run(["atoms", "build", "--group", "braid:3"]) == EXIT_USAGE


# -------------------------
# demos
# -------------------------
def test_demo_z2_atoms(capsys):
    assert run(["demo", "z2-atoms", "--n", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "|B_3| = 25" in out
    assert "24 infinite atoms; 4 with 3 children" in out


def test_demo_ternary(capsys):
    assert run(["demo", "ternary"]) == EXIT_OK
    assert "kernel generators: 1, 2*f" in capsys.readouterr().out


def test_unknown_demo():
    assert run(["demo", "nope"]) == EXIT_USAGE
