import json
import pytest
from click.testing import CliRunner
from matroidlib.cli import main, CACHE_ENV, EXIT_CHECK_FAILED, EXIT_PARSE, EXIT_PRECONDITION
from matroidlib.record import InvariantCache
from matroidlib.matroid import canonical_key, uniform


@pytest.fixture
def runner():
	return CliRunner()

def records(result) -> list[dict]:
	return [json.loads(line) for line in result.stdout.splitlines() if line.strip()]


# compute

def test_compute_uniform(runner):
	result = runner.invoke(main, ["compute", "--uniform", "2,3"])
	assert result.exit_code == 0, result.output
	(record,) = records(result)
	assert record["input"] == "uniform(2,3)"
	assert record["key"] == "3:2:***"
	assert record["charPoly"] == [2, -3, 1]
	assert record["c"] == -3
	assert record["m"] == 1
	assert record["eu"] == 0

def test_compute_boolean(runner):
	result = runner.invoke(main, ["compute", "--boolean", "2", "--which", "eu,c,m"])
	assert result.exit_code == 0, result.output
	(record,) = records(result)
	assert (record["eu"], record["c"], record["m"]) == (1, -1, 0)
	assert "klPoly" not in record

def test_compute_fano(runner):
	result = runner.invoke(main, ["compute", "--fano", "--which", "c,eu"])
	assert result.exit_code == 0, result.output
	(record,) = records(result)
	assert (record["c"], record["eu"]) == (21, 0)

def test_compute_keeps_input_order(runner):
	result = runner.invoke(main, ["compute", "--boolean", "1", "--uniform", "2,4", "--builtin", "graphic(K4)", "--which", "charpoly"])
	assert result.exit_code == 0, result.output
	assert [r["input"] for r in records(result)] == ["graphic(K4)", "uniform(2,4)", "boolean(1)"]

def test_compute_csv(runner):
	result = runner.invoke(main, ["compute", "--uniform", "2,3", "--format", "csv"])
	assert result.exit_code == 0, result.output
	header, row = result.stdout.splitlines()
	assert header.startswith("input,key,n,rank,charPoly")
	# the label holds a comma so it is quoted
	assert row.startswith("\"uniform(2,3)\",3:2:***,3,2,2 -3 1,")

def test_compute_graph_and_matrix_files(runner, tmp_path):
	graph = tmp_path / "k3.json"
	graph.write_text(json.dumps({"vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]}))
	matrix = tmp_path / "m.json"
	matrix.write_text(json.dumps([["1", "0", "1"], ["0", "1", "1"]]))
	result = runner.invoke(main, ["compute", "--graph", str(graph), "--matrix", str(matrix), "--which", "c"])
	assert result.exit_code == 0, result.output
	assert [r["key"] for r in records(result)] == ["3:2:***", "3:2:***"]

def test_compute_with_cache(runner, tmp_path):
	path = tmp_path / "cache.jsonl"
	first = runner.invoke(main, ["compute", "--uniform", "2,4", "--cache", str(path)])
	assert first.exit_code == 0, first.output
	assert InvariantCache(path).get(canonical_key(uniform(2, 4))) is not None
	second = runner.invoke(main, ["compute", "--uniform", "2,4", "--cache", str(path)])
	assert second.stdout == first.stdout
	assert len(path.read_text().splitlines()) == 1

def test_cache_environment_wins(runner, tmp_path):
	option, env = tmp_path / "option.jsonl", tmp_path / "env.jsonl"
	result = runner.invoke(main, ["compute", "--uniform", "2,3", "--cache", str(option)], env={CACHE_ENV: str(env)})
	assert result.exit_code == 0, result.output
	assert env.exists()
	assert not option.exists()


# Exit codes

def test_loops_exit_3(runner, tmp_path):
	path = tmp_path / "loopy.json"
	path.write_text(json.dumps({"n": 2, "bases": [[0]]}))
	result = runner.invoke(main, ["compute", "--json", str(path)])
	assert result.exit_code == EXIT_PRECONDITION
	assert "input 0" in result.output

def test_parse_errors_exit_2(runner, tmp_path):
	path = tmp_path / "bad.txt"
	path.write_text("3 2 **\n")
	assert runner.invoke(main, ["compute", "--revlex", str(path)]).exit_code == EXIT_PARSE
	path.write_text("{not json")
	assert runner.invoke(main, ["compute", "--json", str(path)]).exit_code == EXIT_PARSE
	assert runner.invoke(main, ["compute", "--uniform", "3,2"]).exit_code == EXIT_PARSE
	assert runner.invoke(main, ["compute", "--uniform", "3"]).exit_code == EXIT_PARSE
	assert runner.invoke(main, ["compute", "--builtin", "nothing"]).exit_code == EXIT_PARSE

def test_no_input_is_a_usage_error(runner):
	assert runner.invoke(main, ["compute"]).exit_code == 2

def test_unknown_invariant(runner):
	assert runner.invoke(main, ["compute", "--uniform", "2,3", "--which", "nope"]).exit_code == 2


# verify

def test_verify_enumeration(runner):
	result = runner.invoke(main, ["verify", "--enumerate", "4", "--up-to"])
	assert result.exit_code == 0, result.output
	assert result.stdout.strip().endswith("pass")
	assert "FAIL" not in result.stdout

def test_verify_fano_routes(runner):
	result = runner.invoke(main, ["verify", "--fano", "--nonfano", "--checks", "routes,multiplicativity,classifiers"])
	assert result.exit_code == 0, result.output

def test_verify_unknown_check(runner):
	assert runner.invoke(main, ["verify", "--fano", "--checks", "nope"]).exit_code == 2

def test_verify_loops(runner, tmp_path):
	path = tmp_path / "loopy.txt"
	path.write_text("2 1 *0\n")
	assert runner.invoke(main, ["verify", "--revlex", str(path)]).exit_code == EXIT_PRECONDITION

def test_exit_code_constants():
	assert (EXIT_CHECK_FAILED, EXIT_PARSE, EXIT_PRECONDITION) == (1, 2, 3)


# sweep

def test_sweep_enumeration(runner):
	result = runner.invoke(main, ["sweep", "--enumerate", "2"])
	assert result.exit_code == 0, result.output
	summary = json.loads(result.stdout)
	assert summary["total"] == 2
	assert summary["conjectureHeld"] is True
	assert summary["violations"] == []
	assert len(summary["zeros"]) == 2

def test_sweep_out_is_deterministic(runner, tmp_path):
	first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
	assert runner.invoke(main, ["sweep", "--enumerate", "3", "--out", str(first)]).exit_code == 0
	assert runner.invoke(main, ["sweep", "--enumerate", "3", "--out", str(second), "--jobs", "2"]).exit_code == 0
	assert first.read_bytes() == second.read_bytes()
	assert (tmp_path / "a.summary.json").exists()

def test_sweep_catalog_file(runner, tmp_path):
	path = tmp_path / "two.txt"
	path.write_text("3 2 ***\n2 2 *\n")
	result = runner.invoke(main, ["sweep", "--catalog", str(path)])
	assert result.exit_code == 0, result.output
	assert json.loads(result.stdout)["total"] == 2

def test_sweep_needs_input(runner):
	assert runner.invoke(main, ["sweep"]).exit_code == 2


# catalog and canonicalize

def test_catalog_list(runner):
	result = runner.invoke(main, ["catalog", "list"])
	assert result.exit_code == 0, result.output
	assert "uniform(r,n)" in result.stdout
	assert "fano\tn=7\trank=3\t" in result.stdout

def test_canonicalize(runner):
	result = runner.invoke(main, ["canonicalize", "--builtin", "uniform(2,3)"])
	assert result.exit_code == 0, result.output
	assert result.stdout == "uniform(2,3)\t3:2:***\n"

def test_canonicalize_accepts_loops(runner, tmp_path):
	path = tmp_path / "loopy.txt"
	path.write_text("2 1 *0\n")
	result = runner.invoke(main, ["canonicalize", "--revlex", str(path)])
	assert result.exit_code == 0, result.output
	assert result.stdout == "loopy.txt:1\t2:1:*0\n"
