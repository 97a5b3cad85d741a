"""Command-line interface: ``matroidlib compute|verify|sweep|catalog|canonicalize``

Every command reads matroids from the same set of source options. Sources are always
gathered in a fixed order (builtins, fano/nonfano/vamos, uniform, boolean, graph,
matrix, revlex, json, enumerate) whatever order the options were given in.

Exit codes: 0 success, 1 a check failed, 2 unreadable input, 3 an input violates an
invariant's precondition (loops, empty matroid), 4 a sweep found m < 0.
"""

import dataclasses, typing, contextlib, json, csv, os, sys, logging
from pathlib import Path
import click
from matroidlib import MatroidError, HasLoops, EmptyMatroid, KOutOfRange, ParseError
from matroidlib.matroid import Matroid, uniform, boolean, matroid_from_graph, matroid_from_matrix, canonical_key
from matroidlib import catalog
from matroidlib.microlocal import INVARIANTS
from matroidlib.record import InvariantRecord, InvariantCache, CSV_COLUMNS
from matroidlib import sweep as sweeps

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_PARSE, EXIT_PRECONDITION, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3, 4

CACHE_ENV = "MATROID_CACHE"
"""Environment variable naming the invariant cache; wins over ``--cache``"""


class ExitError(click.ClickException):
	"""A reported failure with a specific exit code"""

	def __init__(self, message:str, exit_code:int):
		super().__init__(message)
		self.exit_code = exit_code


@contextlib.contextmanager
def exit_codes(where:str=""):
	"""Translate library errors into the exit-code contract"""
	prefix = f"{where}: " if where else ""
	try:
		yield
	except (HasLoops, EmptyMatroid, KOutOfRange) as e:
		raise ExitError(f"{prefix}{e}", EXIT_PRECONDITION) from e
	except MatroidError as e:
		raise ExitError(f"{prefix}{type(e).__name__}: {e}", EXIT_CHECK_FAILED if isinstance(e, ArithmeticError) else EXIT_PARSE) from e
	except (ValueError, OSError) as e:
		raise ExitError(f"{prefix}{e}", EXIT_PARSE) from e


@dataclasses.dataclass(frozen=True)
class Source:
	"""One input matroid with a label saying where it came from"""

	label:str
	matroid:Matroid


def _pair(ctx, param, values:tuple[str,...]) -> list[tuple[int,int]]:
	out = []
	for value in values:
		try:
			r, n = (int(x) for x in value.split(","))
		except ValueError:
			raise click.BadParameter(f"expected r,n but got {value!r}", ctx, param) from None
		out.append((r, n))
	return out

def _names(ctx, param, value:str) -> tuple[str,...]:
	return tuple(part.strip() for part in value.split(",") if part.strip())

def source_options(func):
	"""The shared matroid-source options"""
	options = [
		click.option("--builtin", "builtins", multiple=True, metavar="NAME", help="Builtin by registry name, e.g. 'uniform(2,4)' (repeatable)"),
		click.option("--fano", is_flag=True, help="The Fano plane"),
		click.option("--nonfano", is_flag=True, help="The non-Fano matroid"),
		click.option("--vamos", is_flag=True, help="The Vámos matroid"),
		click.option("--uniform", "uniforms", multiple=True, metavar="R,N", callback=_pair, help="Uniform matroid U_{r,n} (repeatable)"),
		click.option("--boolean", "booleans", multiple=True, type=int, metavar="D", help="Boolean matroid B_d (repeatable)"),
		click.option("--graph", "graph_file", type=click.Path(dir_okay=False), help="JSON file with a graph {'vertices': k, 'edges': [[u,v],...]} or a list of them"),
		click.option("--matrix", "matrix_file", type=click.Path(dir_okay=False), help="JSON file with a rational matrix {'rows': [...]} or a list of rows"),
		click.option("--revlex", "revlex_file", type=click.Path(dir_okay=False), help="File of 'n r code' lines"),
		click.option("--json", "json_file", type=click.Path(dir_okay=False), help="Matroid JSON objects, one per line or as a list"),
		click.option("--enumerate", "enumerate_n", type=int, metavar="N", help="Every loopless matroid on exactly N elements"),
		click.option("--up-to", is_flag=True, help="With --enumerate, every size from 1 to N"),
		click.option("--simple-only", is_flag=True, help="With --enumerate, simple matroids only"),
	]
	for option in reversed(options):
		func = option(func)
	return func

def _read_json(path:str):
	text = Path(path).read_text()
	return json.loads(text)

def _graph_sources(path:str) -> list[Source]:
	data = _read_json(path)
	graphs = data if isinstance(data, list) else [data]
	out = []
	for i, graph in enumerate(graphs, start=1):
		if not isinstance(graph, dict) or "edges" not in graph:
			raise ParseError(f"{path}: graph {i} needs an 'edges' list")
		out.append(Source(f"{Path(path).name}:{i}", matroid_from_graph(graph["edges"], graph.get("vertices"))))
	return out

def _matrix_sources(path:str) -> list[Source]:
	data = _read_json(path)
	if isinstance(data, dict):
		data = [data]
	elif isinstance(data, list) and data and all(isinstance(row, list) for row in data):
		data = [{"rows": data}]
	out = []
	for i, matrix in enumerate(data, start=1):
		if not isinstance(matrix, dict) or "rows" not in matrix:
			raise ParseError(f"{path}: matrix {i} needs a 'rows' list")
		out.append(Source(f"{Path(path).name}:{i}", matroid_from_matrix(matrix["rows"])))
	return out

def collect_sources(builtins=(), fano=False, nonfano=False, vamos=False, uniforms=(), booleans=(), graph_file=None, matrix_file=None, revlex_file=None, json_file=None, enumerate_n=None, up_to=False, simple_only=False) -> list[Source]:
	"""Every requested matroid, in the fixed source order"""
	sources = []
	for name in builtins:
		entry = catalog.builtin(name)
		sources.append(Source(entry.name, entry.matroid))
	for flag, name in ((fano, "fano"), (nonfano, "nonfano"), (vamos, "vamos")):
		if flag:
			sources.append(Source(name, catalog.builtin(name).matroid))
	for r, n in uniforms:
		sources.append(Source(f"uniform({r},{n})", uniform(r, n)))
	for d in booleans:
		sources.append(Source(f"boolean({d})", boolean(d)))
	if graph_file:
		sources += _graph_sources(graph_file)
	if matrix_file:
		sources += _matrix_sources(matrix_file)
	if revlex_file:
		sources += [Source(entry.name, entry.matroid) for entry in catalog.read_revlex_file(revlex_file)]
	if json_file:
		sources += [Source(entry.name, entry.matroid) for entry in catalog.read_json_catalog(json_file)]
	if enumerate_n is not None:
		sizes = range(1, enumerate_n + 1) if up_to else [enumerate_n]
		for size in sizes:
			for i, m in enumerate(catalog.enumerate_matroids(size, loopless_only=True, simple_only=simple_only), start=1):
				sources.append(Source(f"enumerate({size}):{i}", m))
	return sources

def _gather(**options) -> list[Source]:
	with exit_codes():
		sources = collect_sources(**options)
	if not sources:
		raise click.UsageError("No input matroids; give at least one source option")
	logger.info("Read %d input matroids", len(sources))
	return sources

def _require_loopless(sources:list[Source]):
	for i, source in enumerate(sources):
		with exit_codes(f"input {i} ({source.label})"):
			source.matroid.require_loopless()

def _open_cache(path:typing.Optional[str]) -> typing.Optional[InvariantCache]:
	path = os.environ.get(CACHE_ENV) or path
	if not path:
		return None
	with exit_codes(f"cache {path}"):
		return InvariantCache(path)

def _which(value:str) -> tuple[str,...]:
	names = _names(None, None, value)
	if "all" in names:
		return INVARIANTS
	unknown = set(names) - set(INVARIANTS)
	if unknown:
		raise click.BadParameter(f"unknown invariants {sorted(unknown)}; choose from {', '.join(INVARIANTS)}, all")
	return names


@click.group()
@click.option("-v", "--verbose", count=True, help="Log progress to stderr (twice for debug output)")
def main(verbose:int):
	"""Exact invariants of loopless matroids"""
	level = logging.WARNING if not verbose else logging.INFO if verbose == 1 else logging.DEBUG
	logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@source_options
@click.option("--which", default="all", show_default=True, help=f"Comma-separated invariants from {', '.join(INVARIANTS)}, all")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--cache", type=click.Path(dir_okay=False), help=f"JSON-lines invariant cache (overridden by ${CACHE_ENV})")
def compute(which:str, fmt:str, cache:typing.Optional[str], **options):
	"""Compute invariant records for each input, in input order"""
	names = _which(which)
	sources = _gather(**options)
	_require_loopless(sources)
	store = _open_cache(cache)

	if fmt == "csv":
		writer = csv.writer(sys.stdout, lineterminator="\n")
		writer.writerow(("input",) + CSV_COLUMNS)
	for i, source in enumerate(sources):
		with exit_codes(f"input {i} ({source.label})"):
			record = store.get(canonical_key(source.matroid)) if store is not None else None
			if record is None or not record.covers(names):
				record = InvariantRecord.from_matroid(source.matroid, names)
				if store is not None and record.covers(INVARIANTS):
					store.put(record)
		if fmt == "csv":
			writer.writerow([source.label] + record.to_csv_row())
		else:
			click.echo(json.dumps({"input": source.label, **record.to_json()}, sort_keys=True, separators=(",", ":")))


@main.command()
@source_options
@click.option("--checks", default=",".join(sweeps.DEFAULT_CHECKS), show_default=True, help=f"Comma-separated checks from {', '.join(sweeps.CHECKS)}")
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(min=1), help="Worker processes")
def verify(checks:str, jobs:int, **options):
	"""Run identity and agreement checks; exit 1 if any fails"""
	names = _names(None, None, checks)
	unknown = set(names) - set(sweeps.CHECKS)
	if unknown:
		raise click.BadParameter(f"unknown checks {sorted(unknown)}; choose from {', '.join(sweeps.CHECKS)}", param_hint="--checks")
	sources = _gather(**options)
	_require_loopless(sources)
	with exit_codes():
		failures = sweeps.verify([s.matroid for s in sources], names, jobs=jobs, progress=logger.isEnabledFor(logging.INFO))
	for failure in failures:
		click.echo(f"FAIL {failure}")
	click.echo(f"{len(sources)} matroids, checks {','.join(names)}: {'pass' if not failures else f'{len(failures)} failures'}")
	if failures:
		sys.exit(EXIT_CHECK_FAILED)


@main.command("sweep")
@source_options
@click.option("--catalog", "catalog_name", metavar="builtins|FILE", help="Sweep the default builtins or a revlex/JSON catalog file")
@click.option("--out", type=click.Path(dir_okay=False), help="Write records as JSON lines here and the summary next to it")
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(min=1), help="Worker processes")
@click.option("--cache", type=click.Path(dir_okay=False), help=f"JSON-lines invariant cache (overridden by ${CACHE_ENV})")
def sweep_command(catalog_name:typing.Optional[str], out:typing.Optional[str], jobs:int, cache:typing.Optional[str], **options):
	"""Compute m for every class in scope and report on its sign; exit 4 on m < 0"""
	with exit_codes():
		sources = collect_sources(**options)
		if catalog_name == "builtins":
			sources += [Source(name, catalog.builtin(name).matroid) for name in catalog.DEFAULT_BUILTINS]
		elif catalog_name:
			entries = catalog.read_json_catalog(catalog_name) if catalog_name.endswith((".json", ".jsonl")) else catalog.read_revlex_file(catalog_name)
			sources += [Source(entry.name, entry.matroid) for entry in entries]
	if not sources:
		raise click.UsageError("Nothing to sweep; give --catalog, --enumerate or another source option")
	_require_loopless(sources)
	store = _open_cache(cache)

	with exit_codes():
		records, report = sweeps.sweep([s.matroid for s in sources], jobs=jobs, cache=store, progress=logger.isEnabledFor(logging.INFO))
		if out:
			sweeps.write_sweep(out, records, report)
	click.echo(json.dumps(report.to_json(), indent=1, sort_keys=True))
	if report.violations:
		witnesses = {str(r.key): r for r in records}
		for key in report.violations:
			click.echo(f"Counterexample: {witnesses[key].to_line()}", err=True)
		sys.exit(EXIT_COUNTEREXAMPLE)


@main.group("catalog")
def catalog_group():
	"""Builtin matroid registry"""

@catalog_group.command("list")
def catalog_list():
	"""Registry patterns, then the default builtins with their tags"""
	for pattern in catalog.builtin_names():
		click.echo(pattern)
	click.echo()
	for name in catalog.DEFAULT_BUILTINS:
		entry = catalog.builtin(name)
		click.echo(f"{entry.name}\tn={entry.matroid.n}\trank={entry.matroid.rank}\t{','.join(sorted(entry.tags))}")


@main.command()
@source_options
def canonicalize(**options):
	"""Print the canonical key (n:r:indicator) of each input"""
	for source in _gather(**options):
		click.echo(f"{source.label}\t{canonical_key(source.matroid)}")
