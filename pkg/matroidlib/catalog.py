"""Where matroids come from: named builtins, exhaustive enumeration and database files

Builtins are looked up by registry pattern (``boolean(3)``, ``uniform(2,4)``,
``graphic(K4)``, ``fano``, ...). Enumeration yields one canonical representative per
isomorphism class on a fixed number of elements. Revlex files hold one matroid per
line as ``n r code``, where ``code`` marks each r-subset in revlex order with ``*``
(a basis) or ``0``.
"""

import dataclasses, typing, functools, itertools, math, json, re, logging
from pathlib import Path
import networkx as nx
from matroidlib import UnknownName, TooLarge, BadLength, BadChar, ParseError, bits_to_list, list_to_bits
from matroidlib.matroid import Matroid, uniform, boolean, matroid_from_graph, revlex_subsets, canonical_key, canonical_form, direct_sum, is_connected
from matroidlib.lattice import build_lattice

logger = logging.getLogger(__name__)

MAX_ENUMERATION = 8
"""Largest ground set `enumerate_matroids` will search exhaustively"""


@dataclasses.dataclass(frozen=True)
class CatalogEntry:
	"""A named matroid with descriptive tags"""

	name:str
	"""Registry name, file-derived label or enumeration label"""

	matroid:Matroid
	"""The matroid itself"""

	tags:frozenset[str] = frozenset()
	"""Computed structure tags plus provenance tags such as ``graphic`` or ``non-realizable``"""

	def to_json(self) -> dict:
		return {"name": self.name, "tags": sorted(self.tags), **self.matroid.to_json()}

	@classmethod
	def from_json(cls, data:dict, default_name:str="") -> "CatalogEntry":
		matroid = Matroid.from_json({k: v for k, v in data.items() if k not in ("name", "tags")})
		return cls(
			name = str(data.get("name", default_name)),
			matroid = matroid,
			tags = tags_for(matroid) | frozenset(data.get("tags", ())),
		)


def tags_for(m:Matroid) -> frozenset[str]:
	"""Tags that can be read off the matroid itself"""
	tags = set()
	if m.is_uniform:
		tags.add("uniform")
	if m.is_loopless:
		tags.add("loopless")
		if m.is_boolean:
			tags.add("boolean")
		if is_connected(m):
			tags.add("connected")
	else:
		tags.add("not-loopless")
	if m.is_simple:
		tags.add("simple")
	return frozenset(tags)


# Builtins

FANO_LINES = ((0,1,2), (0,3,4), (0,5,6), (1,3,5), (1,4,6), (2,3,6), (2,4,5))
"""Lines of the Fano plane on points 0..6"""

VAMOS_PAIRS = ((0,1), (2,3), (4,5), (6,7))

def _fano(relaxed:int=0) -> Matroid:
	# relaxing a circuit-hyperplane turns it into a basis
	dependent = {list_to_bits(line) for line in FANO_LINES[:len(FANO_LINES)-relaxed]}
	return Matroid(7, frozenset(list_to_bits(c) for c in itertools.combinations(range(7), 3) if list_to_bits(c) not in dependent))

def fano() -> Matroid:
	"""F_7, realizable only in characteristic 2"""
	return _fano()

def nonfano() -> Matroid:
	"""F_7 with one line relaxed"""
	return _fano(relaxed=1)

def vamos() -> Matroid:
	"""The Vámos matroid: rank 4 on 8 elements, not realizable over any field"""
	pairs = [list_to_bits(p) for p in VAMOS_PAIRS]
	dependent = {a | b for a, b in itertools.combinations(pairs, 2)} - {pairs[2] | pairs[3]}
	return Matroid(8, frozenset(list_to_bits(c) for c in itertools.combinations(range(8), 4) if list_to_bits(c) not in dependent))

def _named_graph(name:str) -> nx.Graph:
	if name == "prism":
		return nx.circular_ladder_graph(3)
	if name == "K33":
		return nx.complete_bipartite_graph(3, 3)
	match = re.fullmatch(r"([KCW])(\d+)", name)
	if not match:
		raise UnknownName(f"Unknown graph {name!r}; expected Kn, Cn, Wn, prism or K33")
	family, size = match.group(1), int(match.group(2))
	if family == "K":
		return nx.complete_graph(size)
	if family == "C":
		if size < 1:
			raise UnknownName(f"Cycle graph needs at least one vertex: {name!r}")
		return nx.cycle_graph(size)
	if size < 3:
		raise UnknownName(f"Wheel graph needs at least three rim vertices: {name!r}")
	return nx.wheel_graph(size + 1)

def graphic(name:str) -> Matroid:
	"""Cycle matroid of a named graph"""
	graph = _named_graph(name)
	return matroid_from_graph(list(graph.edges()), list(graph.nodes()))

_PATTERNS = (
	("boolean(d)", re.compile(r"boolean\((\d+)\)")),
	("uniform(r,n)", re.compile(r"uniform\((\d+),(\d+)\)")),
	("graphic(Kn)", re.compile(r"graphic\((K\d+)\)")),
	("graphic(Cn)", re.compile(r"graphic\((C\d+)\)")),
	("graphic(Wn)", re.compile(r"graphic\((W\d+)\)")),
	("graphic(prism)", re.compile(r"graphic\((prism)\)")),
	("graphic(K33)", re.compile(r"graphic\((K33)\)")),
	("fano", re.compile(r"fano")),
	("nonfano", re.compile(r"nonfano")),
	("vamos", re.compile(r"vamos")),
)

DEFAULT_BUILTINS = (
	"boolean(1)", "boolean(2)", "boolean(3)", "boolean(4)",
	"uniform(1,2)", "uniform(2,3)", "uniform(2,4)", "uniform(3,4)", "uniform(2,5)", "uniform(3,5)",
	"graphic(K3)", "graphic(K4)", "graphic(C4)", "graphic(W4)", "graphic(prism)", "graphic(K5)", "graphic(K33)",
	"fano", "nonfano", "vamos",
)
"""The builtins swept by ``sweep --catalog builtins``"""

def builtin_names() -> list[str]:
	"""Registry patterns accepted by `builtin`"""
	return [pattern for pattern, _ in _PATTERNS]

def builtin(name:str) -> CatalogEntry:
	"""Look up a builtin by registry name"""
	key = name.replace(" ", "")
	for pattern, regex in _PATTERNS:
		match = regex.fullmatch(key)
		if not match:
			continue
		provenance = set()
		if pattern == "boolean(d)":
			matroid = boolean(int(match.group(1)))
			provenance.add("realizable-over-C")
		elif pattern == "uniform(r,n)":
			r, n = int(match.group(1)), int(match.group(2))
			if r > n:
				raise UnknownName(f"uniform(r,n) needs r <= n, got {name!r}")
			matroid = uniform(r, n)
			provenance.add("realizable-over-C")
		elif pattern.startswith("graphic"):
			matroid = graphic(match.group(1))
			provenance |= {"graphic", "realizable-over-C"}
		elif pattern == "fano":
			matroid = fano()
			provenance.add("non-realizable")
		elif pattern == "nonfano":
			matroid = nonfano()
			provenance.add("realizable-over-C")
		else:
			matroid = vamos()
			provenance.add("non-realizable")
		return CatalogEntry(key, matroid, tags_for(matroid) | provenance)
	raise UnknownName(f"No builtin named {name!r}; known patterns: {', '.join(builtin_names())}")


# Enumeration

def _loops(k:int) -> Matroid:
	return Matroid(k, frozenset({0}))

def _modular_cuts(m:Matroid, exclude_below_rank:int) -> typing.Iterator[int]:
	"""Every modular cut of the lattice of flats, as a bitmask over lattice positions

	Cuts containing a flat of rank below `exclude_below_rank` are skipped, along with
	everything generated from them.
	"""
	lattice = build_lattice(m)
	size = len(lattice)
	up = [1 << i | sum(1 << j for j in lattice.above[i]) for i in range(size)]
	modular_pairs = []
	for i, j in itertools.combinations(range(size), 2):
		f, g = lattice.flats[i], lattice.flats[j]
		if not f & ~g or not g & ~f:
			continue
		meet = lattice.index[f & g]
		if lattice.ranks[i] + lattice.ranks[j] == m.rank_of(f | g) + lattice.ranks[meet]:
			modular_pairs.append((1 << i | 1 << j, meet))
	forbidden = sum(1 << i for i in range(size) if lattice.ranks[i] < exclude_below_rank)

	def close(cut:int) -> int:
		while True:
			grown = 0
			for i in range(size):
				if cut >> i & 1:
					grown |= up[i]
			for both, meet in modular_pairs:
				if grown & both == both:
					grown |= 1 << meet
			if grown == cut:
				return cut
			cut = grown

	seen = {0}
	queue = [0]
	while queue:
		cut = queue.pop()
		yield cut
		for i in range(size):
			if cut >> i & 1 or forbidden >> i & 1:
				continue
			grown = close(cut | 1 << i)
			if grown & forbidden or grown in seen:
				continue
			seen.add(grown)
			queue.append(grown)

def single_element_extensions(m:Matroid, exclude_below_rank:int=1) -> typing.Iterator[Matroid]:
	"""Extensions of a loopless matroid by a new element ``n``, one per modular cut"""
	lattice = build_lattice(m)
	p = 1 << m.n
	independent = {b & ~(1 << e) for b in m.bases for e in bits_to_list(b)} if m.rank else set()
	for cut in _modular_cuts(m, exclude_below_rank):
		if not cut:
			yield Matroid(m.n + 1, frozenset(b | p for b in m.bases))
			continue
		extra = {i | p for i in independent if not cut >> lattice.index[m.closure(i)] & 1}
		yield Matroid(m.n + 1, m.bases | frozenset(extra))

@functools.lru_cache(maxsize=None)
def _loopless_classes(n:int, simple:bool, max_rank:typing.Optional[int]) -> tuple[Matroid,...]:
	if n == 0:
		return (Matroid(0, frozenset({0})),)
	found = {}
	for base in _loopless_classes(n - 1, simple, max_rank):
		for ext in single_element_extensions(base, 2 if simple else 1):
			if max_rank is not None and ext.rank > max_rank:
				continue
			key = canonical_key(ext)
			if key not in found:
				found[key] = canonical_form(ext)
	logger.debug("Enumerated %d %s classes on %d elements", len(found), "simple" if simple else "loopless", n)
	return tuple(found[key] for key in sorted(found))

def enumerate_matroids(n:int, loopless_only:bool=False, simple_only:bool=False, max_rank:typing.Optional[int]=None) -> typing.Iterator[Matroid]:
	"""One canonical representative per isomorphism class on `n` elements, sorted by canonical key"""
	if n > MAX_ENUMERATION:
		raise TooLarge(f"Exhaustive enumeration stops at {MAX_ENUMERATION} elements, got {n}")
	if n < 0:
		raise ValueError(f"Ground set size must be non-negative, got {n}")
	if simple_only:
		yield from _loopless_classes(n, True, max_rank)
		return
	if loopless_only:
		yield from _loopless_classes(n, False, max_rank)
		return
	classes = {}
	for loops in range(n + 1):
		for base in _loopless_classes(n - loops, False, max_rank):
			m = canonical_form(direct_sum(base, _loops(loops)))
			classes[canonical_key(m)] = m
	yield from (classes[key] for key in sorted(classes))


# Revlex ingestion

def parse_revlex(n:int, r:int, code:str) -> Matroid:
	"""Matroid from a basis indicator over the r-subsets in revlex order"""
	if not 0 <= r <= n:
		raise ParseError(f"Revlex code needs 0 <= r <= n, got n={n}, r={r}")
	expected = math.comb(n, r)
	if len(code) != expected:
		raise BadLength(f"Revlex code for n={n}, r={r} must have {expected} characters, got {len(code)}")
	bad = set(code) - {"*", "0"}
	if bad:
		raise BadChar(f"Revlex code may only use '*' and '0', found {sorted(bad)}")
	subsets = revlex_subsets(n, r)
	return Matroid.from_bases(n, [s for s, flag in zip(subsets, code) if flag == "*"])

def to_revlex(m:Matroid) -> str:
	"""The basis indicator of `m` as written"""
	return "".join("*" if s in m.bases else "0" for s in revlex_subsets(m.n, m.rank))

def read_revlex_file(path:typing.Union[str,Path]) -> list[CatalogEntry]:
	"""Entries from a file of ``n r code`` lines; blank lines and ``#`` comments are skipped"""
	entries = []
	with open(path) as handle:
		for lineno, line in enumerate(handle, start=1):
			line = line.strip()
			if not line or line.startswith("#"):
				continue
			parts = line.split()
			if len(parts) != 3:
				raise ParseError(f"{path}:{lineno}: expected 'n r code', got {line!r}")
			try:
				n, r = int(parts[0]), int(parts[1])
			except ValueError as e:
				raise ParseError(f"{path}:{lineno}: n and r must be integers") from e
			matroid = parse_revlex(n, r, parts[2])
			entries.append(CatalogEntry(f"{Path(path).name}:{lineno}", matroid, tags_for(matroid)))
	return entries

def read_json_catalog(path:typing.Union[str,Path]) -> list[CatalogEntry]:
	"""Entries from a JSON list of matroid objects or from one object per line"""
	text = Path(path).read_text()
	try:
		stripped = text.lstrip()
		if stripped.startswith("["):
			items = json.loads(text)
		else:
			items = [json.loads(line) for line in text.splitlines() if line.strip()]
	except json.JSONDecodeError as e:
		raise ParseError(f"{path}: {e}") from e
	return [CatalogEntry.from_json(item, f"{Path(path).name}:{i}") for i, item in enumerate(items, start=1)]

def write_json_catalog(path:typing.Union[str,Path], entries:typing.Iterable[CatalogEntry]):
	Path(path).write_text(json.dumps([entry.to_json() for entry in entries], indent=1) + "\n")
