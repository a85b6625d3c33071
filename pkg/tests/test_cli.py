"""Command-line driver: exit codes, artifact payloads, byte determinism."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from tailgraph.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_VERIFY,
    main,
)


@pytest.fixture(scope="module")
def configs(pytestconfig):
    return pytestconfig.rootpath / "configs"


def run(*args):
    return CliRunner().invoke(main, list(args))


def payload(result):
    return json.loads(result.output)


# ------------------------------------------------------------------ graph


def test_graph_reports_chordal_structure(configs):
    res = run("graph", "--config", str(configs / "goldner_harary.json"))
    assert res.exit_code == EXIT_OK
    doc = payload(res)
    assert doc["chordal"] is True and doc["connected"] is True
    cliques = [tuple(c) for c in doc["ordering"]["cliques"]]
    assert len(cliques) == 8
    assert all(len(c) == 4 for c in cliques)
    assert sum(1 for c in cliques if 2 in c) == 6
    assert len(doc["junction_tree"]["edges"]) == 7
    assert len(doc["config_hash"]) == 64


def test_graph_non_chordal_witness(configs):
    res = run("graph", "--config", str(configs / "non_chordal.json"))
    assert res.exit_code == EXIT_PRECONDITION
    doc = payload(res)
    assert doc["error"]["type"] == "NotChordal"
    witness = doc["error"]["witness"]
    assert len(witness) >= 4  # a chordless cycle
    assert set(witness) <= {1, 2, 3, 4}


def test_graph_out_dir_mirrors_stdout(configs, tmp_path):
    out = tmp_path / "artifacts"
    res = run("graph", "--config", str(configs / "goldner_harary.json"),
              "--out", str(out))
    assert res.exit_code == EXIT_OK
    assert (out / "graph.json").read_text() == res.output


def test_graph_missing_config_file(tmp_path):
    res = run("graph", "--config", str(tmp_path / "nope.json"))
    assert res.exit_code == EXIT_CONFIG
    assert payload(res)["error"]["type"] == "ConfigError"


# ----------------------------------------------------------------- derive


def test_derive_single_vertex_recursion_route(configs):
    res = run("derive", "--config", str(configs / "hr_chain.json"))
    assert res.exit_code == EXIT_OK
    doc = payload(res)
    assert doc["verdict"]["kind"] == "theorem_1"
    assert doc["v"] == 1
    normings = doc["tail_model"]["normings"]
    assert normings["2"]["a_power"] == "1" and normings["2"]["b_power"] == "0"
    assert "limit_moments" in doc and "conventions" in doc


def test_derive_tail_noise_route(configs):
    res = run("derive", "--config", str(configs / "mixed_tree.json"))
    assert res.exit_code == EXIT_OK
    doc = payload(res)
    assert doc["verdict"]["kind"] == "tail_noise_required"
    assert doc["verdict"]["witness_clique"] == [1, 2]
    assert len(doc["tail_noise"]["blocks"]) == 2


def test_derive_requires_a_conditioning_vertex(configs):
    res = run("derive", "--config", str(configs / "goldner_harary.json"))
    assert res.exit_code == EXIT_CONFIG
    assert payload(res)["error"]["type"] == "ConfigError"


# ----------------------------------------------------------------- verify


def test_verify_passes_and_writes_tables(configs, tmp_path):
    out = tmp_path / "run"
    res = run("verify", "--config", str(configs / "gaussian_short_chain.json"),
              "--n", "20000", "--out", str(out))
    assert res.exit_code == EXIT_OK
    doc = payload(res)
    assert doc["pass"] is True
    assert doc["checks"] == {"ks_trend": True, "remainders": True}
    assert (out / "summary.json").read_text() == res.output
    ks_lines = (out / "ks_table.csv").read_text().splitlines()
    assert ks_lines[0] == "t,vertex,ks,n,threshold,pass"
    assert len(ks_lines) == 1 + 2 * 3  # two levels, three vertices
    assert (out / "moment_gaps.csv").exists()
    assert (out / "remainders.csv").exists()


def test_verify_detects_remainder_growth(configs, tmp_path):
    # reversing the analytic remainder ladder must trip the gate: the
    # error at t=10 cannot be smaller than at t=1000
    base = json.loads((configs / "gaussian_short_chain.json").read_text())
    base["tolerances"] = {"remainder_grid": [1000.0, 10.0]}
    bad = tmp_path / "reversed.json"
    bad.write_text(json.dumps(base))
    res = run("verify", "--config", str(bad), "--n", "20000")
    assert res.exit_code == EXIT_VERIFY
    doc = payload(res)
    assert doc["pass"] is False
    assert doc["checks"]["remainders"] is False
    assert doc["checks"]["ks_trend"] is True


def test_verify_byte_identical_across_workers(configs, tmp_path):
    outs = []
    for label, workers in (("a", "1"), ("b", "3")):
        out = tmp_path / label
        res = run("verify", "--config",
                  str(configs / "gaussian_short_chain.json"),
                  "--n", "20000", "--workers", workers, "--out", str(out))
        assert res.exit_code == EXIT_OK
        outs.append((out, res.output))
    (out_a, stdout_a), (out_b, stdout_b) = outs
    assert stdout_a == stdout_b
    files_a = sorted(p.name for p in out_a.iterdir())
    files_b = sorted(p.name for p in out_b.iterdir())
    assert files_a == files_b and files_a
    for name in files_a:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_verify_flag_validation(configs):
    cfg = str(configs / "gaussian_short_chain.json")
    res = run("verify", "--config", cfg, "--t-levels", "8,4")
    assert res.exit_code == EXIT_CONFIG
    res = run("verify", "--config", cfg, "--t-levels", "a,b")
    assert res.exit_code == EXIT_CONFIG
    res = run("verify", "--config", cfg, "--n", "0")
    assert res.exit_code == EXIT_CONFIG
    res = run("verify", "--config", cfg, "--workers", "0")
    assert res.exit_code == EXIT_CONFIG
    res = run("verify")
    assert res.exit_code == 2  # click usage error: --config is required
