import json
from pathlib import Path as FilePath

import pandas as pd
import pytest
from pydantic import ValidationError

from src.data_core.config import OUT_ENV, RunConfig, default_out_dir
from src.data_core.reader import DataReader, read_input
from src.data_core.schemas import SCHEMA_VERSION, VElementModel
from src.data_core.writer import (
    ArtifactWriter,
    clopen_payload,
    graph_payload,
    nucleus_payload,
    point_payload,
    rational_payload,
    rsg_payload,
    velement_payload,
)
from src.errors import DomainError, GraphError
from src.rsg.element import classification_element, rsg_equal
from src.shift.clopen import ClopenSet
from src.shift.paths import Path, parse_path
from src.shift.points import RationalPoint
from src.thompson.velement import VElement
from src.transducer.nucleus import verify_nucleus_of_injections
from src.transducer.rational import RationalMap


DATA = FilePath(__file__).resolve().parents[1] / "data"


def p(graph, text):
    return parse_path(graph, text)


def write_input(tmp_path, payload, name="input.json"):
    target = tmp_path / name
    target.write_text(json.dumps(payload), encoding="utf-8")
    return str(target)


@pytest.fixture
def ternary_bundle(tmp_path, ternary_nucleus):
    g = ternary_nucleus.graph
    f = ternary_nucleus.find("f")
    verify_nucleus_of_injections(ternary_nucleus)
    swap = VElement.make(g, [(p(g, "0"), p(g, "1")), (p(g, "1"), p(g, "0")), (p(g, "2"), p(g, "2"))])
    element = classification_element(f, p(g, "1"), p(g, "2"), ternary_nucleus)
    payload = {
        "graph": graph_payload(g),
        "nuclei": {"ternary": nucleus_payload(ternary_nucleus)},
        "maps": {"f": rational_payload(RationalMap.from_state(f))},
        "velements": {"swap": velement_payload(swap)},
        "elements": {"h": rsg_payload(element, "ternary")},
        "points": {"origin": point_payload(g, RationalPoint.make(g, Path.node_path(0), (g.edge("0"),)))},
        "clopens": {"low": clopen_payload(ClopenSet.of(g, [p(g, "0"), p(g, "10")]))},
    }
    return write_input(tmp_path, payload), swap, element


# -------------------------
# config
# -------------------------
def test_run_config_defaults(run_config, tmp_path):
    assert run_config.out == tmp_path / "out"
    assert run_config.budgets() == {
        "depth": 12,
        "horizon": 6,
        "budget_states": 10_000,
        "ball_cap": 1_000_000,
        "jobs": 1,
    }
    assert run_config.seed == 0


@pytest.mark.parametrize("field", ["depth", "horizon", "budget_states", "ball_cap", "jobs"])
def test_run_config_rejects_zero_budgets(field):
    with pytest.raises(ValidationError, match="must be positive"):
        RunConfig(**{field: 0})


def test_run_config_checks_assignment(run_config):
    with pytest.raises(ValidationError):
        run_config.jobs = 0
    with pytest.raises(ValidationError):
        run_config.seed = -1
    run_config.depth = 3
    assert run_config.budgets()["depth"] == 3


def test_out_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(OUT_ENV, str(tmp_path / "artifacts"))
    assert default_out_dir() == (tmp_path / "artifacts").resolve()
    assert RunConfig().out == (tmp_path / "artifacts").resolve()


# -------------------------
# writer
# -------------------------
def test_graph_payload(two_node):
    payload = graph_payload(two_node)
    assert payload["nodes"] == ["v", "w"]
    assert {"id": "x", "src": "v", "dst": "w"} in payload["edges"]
    assert len(payload["edges"]) == 6


def test_nucleus_payload_pools_states(ternary_nucleus):
    payload = nucleus_payload(ternary_nucleus)
    assert sorted(payload["members"]) == ["1", "f"]
    # f and the identity share the identity state
    assert len(payload["states"]) == 2


def test_save_json_is_stamped(tmp_path, full2):
    writer = ArtifactWriter(tmp_path / "out", seed=7)
    target = writer.save_json({"graph": graph_payload(full2)}, "full2")
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["schema"] == SCHEMA_VERSION
    assert data["seed"] == 7
    assert data["graph"]["nodes"] == ["v"]
    meta = json.loads((tmp_path / "out" / "full2.meta.json").read_text(encoding="utf-8"))
    assert meta["artifact"] == "full2.json"
    assert "written_at" in meta


def test_save_dot_and_csv(tmp_path):
    writer = ArtifactWriter(tmp_path)
    dot = writer.save_dot("digraph G {}\n", "tree")
    assert dot.read_text(encoding="utf-8").startswith("digraph")
    table = pd.DataFrame({"level": [0, 1], "atoms": [1, 4]})
    csv = writer.save_csv(table, "atoms")
    assert pd.read_csv(csv).equals(table)


@pytest.mark.parametrize("name", ["", "../up", "a/b", "report.json", "tree.DOT"])
def test_writer_rejects_bad_names(tmp_path, name):
    with pytest.raises(DomainError):
        ArtifactWriter(tmp_path).save_json({}, name)


# -------------------------
# reader
# -------------------------
def test_read_bundle(ternary_bundle, ternary_nucleus):
    path, swap, element = ternary_bundle
    reader = read_input(path)
    g = reader.graph()
    assert g == ternary_nucleus.graph

    nucleus = reader.nucleus()
    assert set(nucleus.states) == set(ternary_nucleus.states)
    assert nucleus.find("f") == ternary_nucleus.find("f")

    f = reader.rational_map("f")
    assert f.states == [ternary_nucleus.find("f")]
    assert reader.velement() == swap
    assert reader.point("origin").period == (g.edge("0"),)
    assert reader.clopen("low") == ClopenSet.of(g, [p(g, "0"), p(g, "10")])
    assert reader.path(["1", "2"]) == p(g, "12")


def test_read_rsg_element(ternary_bundle):
    path, _, element = ternary_bundle
    reader = read_input(path)
    h = reader.rsg_element("h")
    verify_nucleus_of_injections(h.nucleus)
    assert rsg_equal(h, element)


def test_sample_input():
    reader = read_input(str(DATA / "ternary.json"))
    nucleus = reader.nucleus("ternary")
    verify_nucleus_of_injections(nucleus)
    assert nucleus.certified
    g = reader.graph()
    h = reader.rsg_element("h")
    assert h.evaluate(p(g, "12")) == p(g, "11")
    assert h.evaluate(p(g, "21")) == p(g, "202")
    assert h.evaluate(p(g, "01")) == p(g, "12")
    f = reader.rational_map("f")
    assert f.states == [nucleus.find("f")]


def test_missing_sections(tmp_path, full2):
    reader = read_input(write_input(tmp_path, {"graph": graph_payload(full2)}))
    with pytest.raises(DomainError, match="no 'nuclei' section"):
        reader.nucleus()
    with pytest.raises(DomainError, match="no 'oracle' section"):
        reader.oracle()
    empty = read_input(write_input(tmp_path, {}, "empty.json"))
    with pytest.raises(GraphError):
        empty.graph()


def test_unknown_entry_name(ternary_bundle):
    reader = read_input(ternary_bundle[0])
    with pytest.raises(DomainError, match="available"):
        reader.velement("rotation")


def test_reader_rejects_bad_files(tmp_path):
    bad = tmp_path / "input.yaml"
    bad.write_text("graph: {}", encoding="utf-8")
    with pytest.raises(DomainError, match="Only JSON"):
        DataReader(str(bad)).read_data()
    with pytest.raises(DomainError, match="Could not read"):
        read_input(str(tmp_path / "missing.json"))
    broken = write_input(tmp_path, {"graph": {"nodes": [], "edges": []}}, "broken.json")
    with pytest.raises(DomainError, match="input schema"):
        read_input(broken)


def test_state_needs_every_edge(tmp_path, full2):
    payload = {
        "graph": graph_payload(full2),
        "nuclei": {
            "n": {
                "members": {"1": "s0"},
                "states": [{"id": "s0", "node": "v", "trans": [{"edge": "0", "out": ["0"], "next": "s0"}]}],
            }
        },
    }
    reader = read_input(write_input(tmp_path, payload))
    with pytest.raises(DomainError, match="missing"):
        reader.nucleus()


def test_oracle_section(tmp_path):
    reader = read_input(write_input(tmp_path, {"oracle": {"kind": "free", "rank": 2}}))
    oracle = reader.oracle()
    assert oracle.letters == ("a", "A", "b", "B")


def test_velement_perm_must_be_permutation():
    with pytest.raises(ValidationError):
        VElementModel(domain=[["0"], ["1"]], range=[["0"], ["1"]], perm=[0, 0])
