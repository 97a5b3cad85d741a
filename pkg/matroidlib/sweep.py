"""Verification checks and the nonnegativity sweep

`verify` runs the named checks on each matroid and collects a `CheckFailure` for every
disagreement. `sweep` computes a full `InvariantRecord` for every isomorphism class in
scope and reduces the records into a `SweepReport`. Work is spread over a process pool
when more than one job is requested; results are always reassembled in canonical-key
order, so output never depends on scheduling.
"""

import dataclasses, typing, time, json, logging
from pathlib import Path
from concurrent.futures import ProcessPoolExecutor
from tqdm import tqdm
from matroidlib import MatroidError, ProofIdentityViolated
from matroidlib.matroid import Matroid, CanonicalKey, canonical_key, canonical_form, direct_sum, simplify
from matroidlib.lattice import char_poly
from matroidlib.kl import kl_poly, kl_residual
from matroidlib import microlocal
from matroidlib.record import InvariantRecord, InvariantCache
from matroidlib.memo import default_store

logger = logging.getLogger(__name__)

CHECKS = ("routes", "identityA", "identityB", "multiplicativity", "functionalEq", "classifiers")
"""Check names accepted by `verify`"""

DEFAULT_CHECKS = ("routes", "identityA", "identityB", "functionalEq")


@dataclasses.dataclass(frozen=True)
class CheckFailure:
	"""One failed check on one matroid (or one pair, for multiplicativity)"""

	key:str
	"""Canonical key of the matroid, or both keys joined by ``+``"""

	check:str
	"""Name of the failed check"""

	detail:str
	"""The disagreeing values"""

	def to_json(self) -> dict:
		return {"key": self.key, "check": self.check, "detail": self.detail}

	def __str__(self) -> str:
		return f"{self.key} {self.check}: {self.detail}"


def _agree(key:str, check:str, **values) -> list[CheckFailure]:
	if len(set(values.values())) <= 1:
		return []
	return [CheckFailure(key, check, " ".join(f"{name}={value}" for name, value in values.items()))]

def _route_checks(m:Matroid, key:str) -> list[CheckFailure]:
	failures = []
	c_routes = {"c_closed": microlocal.c_closed(m), "c_recursive": microlocal.c_recursive(m)}
	if m.rank:
		c_routes["c_flag_sum"] = microlocal.c_flag_sum(m)
		c_routes["c_from_csm"] = microlocal.c_from_csm(m)
	failures += _agree(key, "routes", **c_routes)

	eu_function = microlocal.eu_function(m)
	failures += _agree(key, "routes", eu_closed=microlocal.eu_closed(m), eu_recursive=microlocal.eu_recursive(m), eu_function=eu_function[0])

	m_function = microlocal.m_linear_system(m)
	failures += _agree(key, "routes", m_closed=microlocal.m_closed(m), m_linear_system=m_function[0])
	residual = {f: v for f, v in microlocal.m_residual(m, m_function).items() if v}
	if residual:
		failures.append(CheckFailure(key, "routes", f"defining system residual {residual}"))

	try:
		microlocal.chern_mather_coeffs(m)
	except ProofIdentityViolated as e:
		failures.append(CheckFailure(key, "routes", str(e)))
	return failures

def _functional_eq_checks(m:Matroid, key:str) -> list[CheckFailure]:
	failures = []
	residual = kl_residual(m)
	if not residual.is_zero:
		failures.append(CheckFailure(key, "functionalEq", f"residual={residual}"))
	p = kl_poly(m)
	if m.rank and 2*p.degree >= m.rank:
		failures.append(CheckFailure(key, "functionalEq", f"degree of {p} is not below rank/2 = {m.rank}/2"))
	if any(c < 0 for c in p.coeffs):
		failures.append(CheckFailure(key, "functionalEq", f"negative coefficient in {p}"))
	return failures

def _classifier_checks(m:Matroid, key:str) -> list[CheckFailure]:
	failures = []
	if m.is_simple:
		failures += _agree(key, "classifiers", eu_everywhere_positive=microlocal.eu_everywhere_positive(m), is_boolean=microlocal.is_boolean(m))
	failures += _agree(key, "classifiers", cc_irreducible=microlocal.cc_irreducible(m), simplification_is_boolean=simplify(m).is_boolean)
	return failures

def check_matroid(m:Matroid, checks:typing.Iterable[str]=DEFAULT_CHECKS) -> list[CheckFailure]:
	"""Run every single-matroid check in `checks` on a loopless matroid"""
	m.require_loopless()
	key = str(canonical_key(m))
	checks = set(checks)
	failures = []
	try:
		if "routes" in checks:
			failures += _route_checks(m, key)
		if "identityA" in checks and m.n and not microlocal.check_identity_A(m):
			failures.append(CheckFailure(key, "identityA", "reduced characteristic polynomial convolution fails"))
		if "identityB" in checks and m.n and not microlocal.check_identity_B(m):
			failures.append(CheckFailure(key, "identityB", "characteristic polynomial convolution is not zero"))
		if "functionalEq" in checks:
			failures += _functional_eq_checks(m, key)
		if "classifiers" in checks:
			failures += _classifier_checks(m, key)
	except ArithmeticError as e:
		if not isinstance(e, MatroidError):
			raise
		failures.append(CheckFailure(key, type(e).__name__, str(e)))
	return failures

def check_pair(m1:Matroid, m2:Matroid) -> list[CheckFailure]:
	"""Product formulas on the direct sum of two loopless matroids"""
	key = f"{canonical_key(m1)}+{canonical_key(m2)}"
	both = direct_sum(m1, m2)
	failures = []
	failures += _agree(key, "multiplicativity", c_sum=microlocal.c_closed(both), c_product=-microlocal.c_closed(m1)*microlocal.c_closed(m2))
	failures += _agree(key, "multiplicativity", eu_sum=microlocal.eu_closed(both), eu_product=microlocal.eu_closed(m1)*microlocal.eu_closed(m2))
	failures += _agree(key, "multiplicativity", m_sum=microlocal.m_closed(both), m_product=microlocal.m_closed(m1)*microlocal.m_closed(m2))
	failures += _agree(key, "multiplicativity", chi_sum=char_poly(both), chi_product=char_poly(m1)*char_poly(m2))
	failures += _agree(key, "multiplicativity", kl_sum=kl_poly(both), kl_product=kl_poly(m1)*kl_poly(m2))
	return failures


def _run_checks(item:tuple[Matroid,typing.Optional[Matroid],tuple[str,...]]) -> list[CheckFailure]:
	m, partner, checks = item
	failures = check_matroid(m, checks)
	if partner is not None:
		failures += check_pair(m, partner)
	return failures

def _parallel_map(func:typing.Callable, items:list, jobs:int, progress:bool, desc:str) -> list:
	"""`func` over `items` in input order, in a process pool when `jobs` > 1"""
	bar = dict(total=len(items), desc=desc, disable=not progress, leave=False)
	if jobs <= 1 or len(items) <= 1:
		return [func(item) for item in tqdm(items, **bar)]
	with ProcessPoolExecutor(max_workers=jobs) as executor:
		return list(tqdm(executor.map(func, items, chunksize=max(1, len(items) // (4*jobs))), **bar))

def verify(matroids:typing.Sequence[Matroid], checks:typing.Iterable[str]=DEFAULT_CHECKS, jobs:int=1, progress:bool=False) -> list[CheckFailure]:
	"""All failures of `checks` over `matroids`; multiplicativity pairs each input with the next, cyclically"""
	checks = tuple(checks)
	unknown = set(checks) - set(CHECKS)
	if unknown:
		raise ValueError(f"Unknown checks {sorted(unknown)}; choose from {list(CHECKS)}")
	for m in matroids:
		m.require_loopless()
	pair = "multiplicativity" in checks
	items = [(m, matroids[(i+1) % len(matroids)] if pair else None, checks) for i, m in enumerate(matroids)]
	results = _parallel_map(_run_checks, items, jobs, progress, "verify")
	failures = [failure for result in results for failure in result]
	logger.info("Verified %d matroids against %s: %d failures", len(matroids), ",".join(checks), len(failures))
	default_store().log_stats()
	return failures


# Sweep

READINGS = ("coloopInM", "coloopInSimplification")
"""The two readings of "has a Boolean summand" compared against m = 0"""

@dataclasses.dataclass(frozen=True)
class SweepReport:
	"""Summary of a nonnegativity sweep; `violations` is empty exactly when every m ≥ 0"""

	total:int
	"""Number of isomorphism classes swept"""

	min_m:typing.Optional[int]
	"""Smallest m seen"""

	min_m_key:typing.Optional[str]
	"""A class attaining `min_m`"""

	zeros:list[str]
	"""Classes with m = 0"""

	violations:list[str]
	"""Classes with m < 0"""

	interpretation_mismatches:dict[str,list[str]]
	"""For each reading of "Boolean summand", the classes where it disagrees with m = 0"""

	rank_two_uniform:list[dict]
	"""Classes whose simplification is U_{2,k}, k ≥ 3, with χ(2) next to 2 - k and 3 - k"""

	wall_time:float = 0.0
	"""Seconds spent computing"""

	@property
	def conjecture_held(self) -> bool:
		return not self.violations

	@classmethod
	def from_records(cls, records:typing.Sequence[InvariantRecord], wall_time:float=0.0) -> "SweepReport":
		ordered = sorted(records, key=lambda r: r.key)
		min_record = min(ordered, key=lambda r: r.m, default=None)
		mismatches = {reading: [] for reading in READINGS}
		rank_two = []
		for record in ordered:
			zero = record.m == 0
			if zero != record.flags["hasColoop"]:
				mismatches["coloopInM"].append(str(record.key))
			if zero != record.flags["simplificationHasColoop"]:
				mismatches["coloopInSimplification"].append(str(record.key))
			simple = simplify(record.key.to_matroid())
			if simple.rank == 2 and simple.n >= 3 and simple.is_uniform:
				oracle, two, three = microlocal.rank_two_uniform_eu(simple.n)
				matches = "3-k" if oracle == three else "2-k" if oracle == two else "neither"
				rank_two.append({"key": str(record.key), "k": simple.n, "oracle": oracle, "twoMinusK": two, "threeMinusK": three, "matches": matches})
		return cls(
			total = len(ordered),
			min_m = min_record.m if min_record else None,
			min_m_key = str(min_record.key) if min_record else None,
			zeros = [str(r.key) for r in ordered if r.m == 0],
			violations = [str(r.key) for r in ordered if r.m < 0],
			interpretation_mismatches = mismatches,
			rank_two_uniform = rank_two,
			wall_time = wall_time,
		)

	def to_json(self) -> dict:
		return {
			"total": self.total,
			"minM": self.min_m,
			"minMKey": self.min_m_key,
			"zeros": self.zeros,
			"violations": self.violations,
			"interpretationMismatches": self.interpretation_mismatches,
			"rankTwoUniform": self.rank_two_uniform,
			"conjectureHeld": self.conjecture_held,
			"wallTime": f"{self.wall_time:.3f}",
		}


def _compute_record(m:Matroid) -> InvariantRecord:
	return InvariantRecord.from_matroid(m)

def sweep(matroids:typing.Iterable[Matroid], jobs:int=1, cache:typing.Optional[InvariantCache]=None, progress:bool=False) -> tuple[list[InvariantRecord],SweepReport]:
	"""Full records for every isomorphism class in `matroids`, sorted by key, and their report"""
	started = time.perf_counter()
	classes:dict[CanonicalKey,Matroid] = {}
	for m in matroids:
		m.require_loopless()
		classes.setdefault(canonical_key(m), m)

	records:dict[CanonicalKey,InvariantRecord] = {}
	missing = []
	for key in sorted(classes):
		cached = cache.get(key) if cache is not None else None
		if cached is not None and cached.covers(microlocal.INVARIANTS):
			records[key] = cached
		else:
			missing.append(canonical_form(classes[key]))
	logger.info("Sweeping %d classes, %d from cache", len(classes), len(classes) - len(missing))

	for record in _parallel_map(_compute_record, missing, jobs, progress, "sweep"):
		records[record.key] = record
		if cache is not None:
			cache.put(record)

	ordered = [records[key] for key in sorted(records)]
	report = SweepReport.from_records(ordered, time.perf_counter() - started)
	if report.violations:
		logger.warning("Found m < 0 on %s", ", ".join(report.violations))
	default_store().log_stats()
	return ordered, report

def summary_path(out:typing.Union[str,Path]) -> Path:
	"""Where the summary of a sweep written to `out` goes"""
	out = Path(out)
	return out.with_name(out.stem + ".summary.json")

def write_sweep(out:typing.Union[str,Path], records:typing.Iterable[InvariantRecord], report:SweepReport):
	"""Records as JSON lines at `out`, the report next to it"""
	out = Path(out)
	out.write_text("".join(record.to_line() + "\n" for record in records))
	summary_path(out).write_text(json.dumps(report.to_json(), indent=1, sort_keys=True) + "\n")
