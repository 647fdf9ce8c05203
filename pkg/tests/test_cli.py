import json

import pytest

from gramwalk import parse_grammar, parse_triples, validate_grammar
from gramwalk.cli import main
from gramwalk.fixtures import EXAMPLES


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name in ("toy3", "toy2x2", "coaut", "coaut-prime", "fig10"):
        p = tmp_path / f"{name}.nt"
        p.write_text(EXAMPLES[name]())
        paths[name] = str(p)
    return paths


def test_gen_example_outputs_parse_and_validate(tmp_path):
    grammars = {"coaut", "coaut-prime", "psi-empty", "fig10-grammar"}
    for name, build in EXAMPLES.items():
        net = parse_triples(build())
        if name in grammars:
            g = parse_grammar(net)
            assert [d for d in validate_grammar(g) if d.severity == "error"] == []


def test_gen_example_unknown_name(capsys):
    assert main(["gen-example", "no-such-fixture"]) == 2
    assert "unknown example" in capsys.readouterr().err


def test_run_deterministic(files, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        rc = main([
            "run", "--graph", files["toy3"], "--grammar", files["coaut"],
            "--seed", "7", "--epsilon", "0.001", "--out", str(out),
        ])
        assert rc == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert set(doc) == {"counts", "normalized", "steps", "submits", "converged"}
    assert doc["converged"] is True


def test_run_csv_rank_order(files, tmp_path):
    out = tmp_path / "r.json"
    csv = tmp_path / "r.csv"
    main([
        "run", "--graph", files["toy3"], "--grammar", files["coaut"],
        "--seed", "7", "--out", str(out), "--csv", str(csv),
    ])
    lines = csv.read_text().strip().split("\n")
    assert lines[0] == "vertex,count,normalized"
    scores = [float(line.split(",")[2]) for line in lines[1:]]
    assert scores == sorted(scores, reverse=True)


def test_seed_env_fallback(files, tmp_path, monkeypatch):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    monkeypatch.setenv("GRAMWALK_SEED", "13")
    main(["run", "--graph", files["toy3"], "--grammar", files["coaut"], "--out", str(out1)])
    monkeypatch.delenv("GRAMWALK_SEED")
    main([
        "run", "--graph", files["toy3"], "--grammar", files["coaut"],
        "--seed", "13", "--out", str(out2),
    ])
    assert out1.read_bytes() == out2.read_bytes()


def test_oracle_and_compare_pipeline(files, tmp_path):
    run_out = tmp_path / "walker.json"
    oracle_out = tmp_path / "oracle.json"
    cmp_out = tmp_path / "cmp.json"
    assert main([
        "run", "--graph", files["toy3"], "--grammar", files["coaut"],
        "--seed", "7", "--epsilon", "0.0005", "--out", str(run_out),
    ]) == 0
    assert main([
        "oracle", "--graph", files["toy3"], "--grammar", files["coaut"],
        "--out", str(oracle_out),
    ]) == 0
    doc = json.loads(oracle_out.read_text())
    assert doc["strongly_connected"] is True
    assert set(doc) == {"normalized", "strongly_connected", "aperiodic", "states"}
    assert main([
        "compare", str(run_out), str(oracle_out), "--tie-tol", "0.02",
        "--out", str(cmp_out),
    ]) == 0
    metrics = json.loads(cmp_out.read_text())
    assert metrics["l1"] <= 0.02
    assert metrics["rank_agreement"] is True


def test_oracle_delta_blend(files, tmp_path):
    out = tmp_path / "o.json"
    assert main([
        "oracle", "--graph", files["toy2x2"], "--grammar", files["coaut"],
        "--delta", "0.85", "--out", str(out),
    ]) == 0
    doc = json.loads(out.read_text())
    for v in doc["normalized"].values():
        assert abs(v - 0.2) < 1e-9


def test_oracle_rejects_halting_grammar(files, tmp_path, capsys):
    halty = tmp_path / "halty.nt"
    halty.write_text(EXAMPLES["halty"]())
    rc = main(["oracle", "--graph", str(halty), "--grammar", files["coaut"]])
    assert rc == 1
    assert "dead end" in capsys.readouterr().err


def test_validate_ok_and_broken(files, tmp_path, capsys):
    assert main(["validate", "--graph", files["toy3"], "--grammar", files["coaut"]]) == 0
    broken = tmp_path / "broken.nt"
    broken.write_text(
        EXAMPLES["coaut"]().replace("<urn:rwr:EntryContext>", "<urn:rwr:Context>")
    )
    rc = main(["validate", "--graph", files["toy3"], "--grammar", str(broken)])
    assert rc == 1
    assert "no entry context" in capsys.readouterr().out


def test_parse_error_exit_code(tmp_path, files, capsys):
    bad = tmp_path / "bad.nt"
    bad.write_text("<http://a/s> <http://a/p> <http://a/o>\n")
    rc = main(["run", "--graph", str(bad), "--grammar", files["coaut"]])
    assert rc == 2
    assert "line 1" in capsys.readouterr().err


def test_missing_file_exit_code(files, capsys):
    rc = main(["run", "--graph", "/nonexistent.nt", "--grammar", files["coaut"]])
    assert rc == 2


def test_compare_rejects_non_result_file(tmp_path, capsys):
    bad = tmp_path / "x.json"
    bad.write_text("{}")
    assert main(["compare", str(bad), str(bad)]) == 2
    assert "normalized" in capsys.readouterr().err
