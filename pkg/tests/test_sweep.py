import functools, json, logging
import pytest
from hypothesis import given, settings, strategies as st
from matroidlib import HasLoops
from matroidlib.matroid import Matroid, canonical_key, uniform, direct_sum
from matroidlib.record import InvariantRecord, InvariantCache
from matroidlib import catalog
from matroidlib.sweep import CheckFailure, SweepReport, CHECKS, check_matroid, check_pair, verify, sweep, summary_path, write_sweep
from conftest import SMALL, U11, U12, U23, B2, B3


def test_checks_pass_on_small_matroids():
	assert verify(list(SMALL.values()), CHECKS) == []

def test_checks_pass_on_enumeration():
	matroids = [m for n in range(1, 5) for m in catalog.enumerate_matroids(n, loopless_only=True)]
	assert verify(matroids, CHECKS) == []

def test_checks_pass_on_named(fano, nonfano):
	assert check_matroid(fano, CHECKS) == []
	assert check_matroid(nonfano, CHECKS) == []

def test_pair_checks():
	assert check_pair(U23, B2) == []
	assert check_pair(SMALL["K4"], U12) == []

def test_verify_rejects_bad_input():
	with pytest.raises(ValueError):
		verify([U23], ["nope"])
	with pytest.raises(HasLoops):
		verify([Matroid(2, frozenset({1}))])

def test_check_failure_text():
	failure = CheckFailure("3:2:***", "routes", "c_closed=-3 c_recursive=-2")
	assert str(failure) == "3:2:*** routes: c_closed=-3 c_recursive=-2"
	assert failure.to_json() == {"key": "3:2:***", "check": "routes", "detail": "c_closed=-3 c_recursive=-2"}

def test_parallel_verify_matches_serial():
	matroids = list(catalog.enumerate_matroids(4, loopless_only=True))
	assert verify(matroids, jobs=2) == verify(matroids, jobs=1) == []

@functools.lru_cache(maxsize=None)
def _loopless_catalog(max_n:int) -> tuple[Matroid,...]:
	return tuple(m for n in range(1, max_n + 1) for m in catalog.enumerate_matroids(n, loopless_only=True))

@pytest.mark.slow
def test_routes_and_identities_through_six():
	matroids = _loopless_catalog(6)
	assert len(matroids) == 1 + 2 + 4 + 9 + 21 + 60
	assert verify(matroids, ["routes", "identityA", "identityB"]) == []

@pytest.mark.slow
def test_classifiers_on_simple_classes_through_seven():
	matroids = [m for n in range(1, 8) for m in catalog.enumerate_matroids(n, simple_only=True)]
	assert len(matroids) == 1 + 1 + 2 + 4 + 9 + 26 + 101
	assert all(m.is_simple for m in matroids)
	assert verify(matroids, ["classifiers"]) == []

@pytest.mark.slow
@settings(max_examples=200, deadline=None)
@given(st.data())
def test_pairs_from_catalog_through_five(data):
	pool = st.sampled_from(_loopless_catalog(5))
	assert check_pair(data.draw(pool), data.draw(pool)) == []

def test_memo_stats_logged_after_runs(caplog):
	with caplog.at_level(logging.DEBUG, logger="matroidlib.memo"):
		verify([U23, B2], ["routes"])
	assert "Memo table c:" in caplog.text
	caplog.clear()
	with caplog.at_level(logging.DEBUG, logger="matroidlib.memo"):
		sweep([U12])
	assert "Memo table" in caplog.text


# Sweep

def test_sweep_on_two_elements():
	records, report = sweep(catalog.enumerate_matroids(2, loopless_only=True))
	assert [r.key for r in records] == sorted(r.key for r in records)
	assert report.total == 2
	assert sorted(report.zeros) == sorted([str(canonical_key(B2)), str(canonical_key(U12))])
	assert report.violations == []
	assert report.conjecture_held
	assert report.min_m == 0
	assert report.interpretation_mismatches == {"coloopInM": [str(canonical_key(U12))], "coloopInSimplification": []}

def test_sweep_collapses_isomorphic_inputs():
	records, report = sweep([U23, uniform(2, 3), direct_sum(U11, U12), direct_sum(U12, U11)])
	assert report.total == 2
	assert len(records) == 2

def test_sweep_on_builtins():
	matroids = [catalog.builtin(name).matroid for name in catalog.DEFAULT_BUILTINS]
	records, report = sweep(matroids)
	assert report.conjecture_held
	for d in (1, 2, 3, 4):
		assert str(canonical_key(catalog.builtin(f"boolean({d})").matroid)) in report.zeros
	assert str(canonical_key(U23)) not in report.zeros

def test_rank_two_uniform_readings():
	_, report = sweep([uniform(2, k) for k in range(3, 7)])
	assert [entry["k"] for entry in report.rank_two_uniform] == [3, 4, 5, 6]
	for entry in report.rank_two_uniform:
		assert entry["oracle"] == 3 - entry["k"]
		assert entry["matches"] == "3-k"

def test_report_json():
	_, report = sweep([U23, B2])
	data = report.to_json()
	assert set(data) == {"total", "minM", "minMKey", "zeros", "violations", "interpretationMismatches", "rankTwoUniform", "conjectureHeld", "wallTime"}
	assert isinstance(data["wallTime"], str)
	assert data["minMKey"] == str(canonical_key(B2))

def test_empty_report():
	report = SweepReport.from_records([])
	assert report.total == 0
	assert report.min_m is None
	assert report.conjecture_held

def test_negative_m_is_a_violation():
	record = InvariantRecord.from_matroid(U23)
	forged = InvariantRecord(record.key, record.n, record.rank, m_function={**record.m_function, 0: -1}, m=-1, flags=record.flags)
	report = SweepReport.from_records([forged])
	assert report.violations == [str(record.key)]
	assert not report.conjecture_held


# Determinism and caching

def test_sweep_is_deterministic(tmp_path):
	matroids = list(catalog.enumerate_matroids(3, loopless_only=True))
	first, second = tmp_path / "first.jsonl", tmp_path / "second.jsonl"
	records, report = sweep(matroids)
	write_sweep(first, records, report)
	records, report = sweep(list(reversed(matroids)), jobs=2)
	write_sweep(second, records, report)
	assert first.read_bytes() == second.read_bytes()
	summary = json.loads(summary_path(first).read_text())
	assert summary["total"] == 4

def test_summary_path():
	assert summary_path("out/run.jsonl").name == "run.summary.json"

def test_sweep_uses_cache(tmp_path):
	cache = InvariantCache(tmp_path / "cache.jsonl")
	records, _ = sweep([U23, B3], cache=cache)
	assert len(cache) == 2
	again, _ = sweep([U23, B3], cache=InvariantCache(tmp_path / "cache.jsonl"))
	assert again == records
	assert len((tmp_path / "cache.jsonl").read_text().splitlines()) == 2
