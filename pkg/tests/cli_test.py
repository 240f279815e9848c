# Fixtures are automatically loaded from conftest.py

import io
import json

import pytest

from pricing_cover.cli import EXIT_ASSERTION, EXIT_ERROR, EXIT_OK, main
from pricing_cover.model import Instance, SetSystem, load_instance


def run_cli(*argv: str) -> tuple[int, str, str]:
    stdout, stderr = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


def test_gen_greedy_killer():
    code, out, _ = run_cli("gen", "--kind", "greedy-killer", "--n", "3", "--epsilon", "1/2")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["sets"][3] == {"id": 3, "cost": "3/2", "elements": [0, 1, 2]}
    assert data["requests"] == [0, 1, 2]


def test_gen_binary_to_file(tmp_path):
    path = tmp_path / "binary.json"
    code, out, _ = run_cli("gen", "--kind", "binary", "--k", "3", "--out", str(path))
    assert code == EXIT_OK
    assert out == ""
    assert load_instance(path).system.universe_size == 7


def test_gen_random_is_seeded():
    _, first, _ = run_cli("gen", "--n", "6", "--m", "4", "--seed", "11")
    _, second, _ = run_cli("gen", "--n", "6", "--m", "4", "--seed", "11")
    assert first == second


def test_run_prints_transcript_and_summary(killer_instance: Instance, write_instance):
    code, out, _ = run_cli("run", "--instance", write_instance(killer_instance), "--alg", "greedy")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 4
    assert json.loads(lines[0]) == {"request": 0, "action": {"buy": 0, "price": "1/1"}}
    summary = json.loads(lines[3])["summary"]
    assert summary["cost"] == "3/1"
    assert summary["opt"] == "3/2"
    assert summary["ratio"] == "2/1"


def test_run_priced_to_file(killer_instance: Instance, write_instance, tmp_path):
    out_path = tmp_path / "transcript.jsonl"
    code, out, _ = run_cli(
        "run", "--instance", write_instance(killer_instance), "--engine", "priced", "--out", str(out_path)
    )
    assert code == EXIT_OK
    assert out == ""
    lines = out_path.read_text().splitlines()
    assert json.loads(lines[2]) == {"request": 2, "action": "noop"}
    assert json.loads(lines[-1])["summary"]["engine"] == "priced"


def test_run_missing_instance(tmp_path):
    code, _, err = run_cli("run", "--instance", str(tmp_path / "missing.json"))
    assert code == EXIT_ERROR
    assert "error: cannot read instance file" in err


def test_opt(killer_instance: Instance, write_instance):
    code, out, _ = run_cli("opt", "--instance", write_instance(killer_instance))
    assert code == EXIT_OK
    assert json.loads(out) == {"cost": "3/2", "witness": [3]}


def test_price_table(killer_instance: Instance, write_instance):
    code, out, _ = run_cli("price-table", "--instance", write_instance(killer_instance), "--alg", "greedy")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "set_id,cost,label,surcharge,price"
    assert lines[1] == "0,1/1,0,1/2,3/2"
    assert lines[4] == "3,3/2,1,1/1,5/2"


def test_price_table_refuses_cycle(twin_system: SetSystem, write_instance):
    path = write_instance(Instance(system=twin_system, requests=(0,)))
    code, out, err = run_cli("price-table", "--instance", path, "--alg", "alternating")
    assert code == EXIT_ERROR
    assert out == ""
    assert "witness cycle: [0, 1, 0]" in err


def test_graph_reports_witness(twin_system: SetSystem, write_instance):
    path = write_instance(Instance(system=twin_system, requests=(0,)))
    code, out, _ = run_cli("graph", "--instance", path, "--alg", "alternating")
    assert code == EXIT_OK
    assert json.loads(out) == {"vertices": [0, 1], "edges": [[0, 1], [1, 0]], "witness": [0, 1, 0]}


def test_adversary():
    code, out, _ = run_cli("adversary", "--k", "3", "--alg", "greedy")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["cost"] == "3/1"
    assert data["opt"] == "1/1"
    assert data["ratio"] == "3/1"
    assert len(data["requests"]) == 3


def test_fuzz_passes(tmp_path):
    code, out, _ = run_cli("fuzz", "--trials", "20", "--n", "6", "--m", "6", "--f-max", "3", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert out == "passed 20/20\n"


def test_fuzz_trials_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("PRICING_COVER_TRIALS", "5")
    code, out, _ = run_cli("fuzz", "--n", "4", "--m", "4", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert out == "passed 5/5\n"


def test_fuzz_negative_control(tmp_path):
    code, out, _ = run_cli("fuzz", "--trials", "50", "--alg", "alternating", "--out", str(tmp_path))
    assert code == EXIT_ASSERTION
    assert "witness cycle:" in out
    assert "counterexample written to" in out
    assert len(list(tmp_path.glob("counterexample-*.json"))) == 1


def test_killer_sweep():
    code, out, _ = run_cli("killer", "--n", "10", "100", "--epsilon", "1/100")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "n,greedy_cost,opt,frequency,ratio,ratio_decimal"
    assert lines[1] == "10,10/1,101/100,2,1000/101,9.900990"
    assert lines[2].startswith("100,100/1,101/100,2,10000/101,")


def test_unknown_algorithm_exits():
    with pytest.raises(SystemExit):
        run_cli("adversary", "--k", "2", "--alg", "random")


def test_epsilon_parses_as_fraction():
    _, out, _ = run_cli("gen", "--kind", "greedy-killer", "--n", "1", "--epsilon", "0.25")
    assert json.loads(out)["sets"][1]["cost"] == "5/4"
