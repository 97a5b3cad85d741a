"""`Matroid` and the operations that build, cut down and identify matroids

A `Matroid` is a basis family on the ground set ``{0, 1, ..., n-1}``. Subsets are
plain integers used as bitsets: bit ``e`` is set when element ``e`` is in the subset.
Every other module asks rank and closure questions through this interface only.

Minors (:func:`localization`, :func:`contraction`, :func:`restriction`) relabel the
surviving elements to ``0..k-1`` keeping their relative order, so the smallest
surviving label always becomes ``0``.

Isomorphism classes are identified by :class:`CanonicalKey`. A connected matroid gets the
smallest basis-indicator string over the labelings that respect its refined element
cells. A disconnected one is laid out component by component in ascending key order,
with any loops last.
"""

import dataclasses, typing, itertools, functools, fractions, math, logging
import networkx as nx
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from matroidlib import MAX_GROUND_SET, EmptyBases, UnequalBasisSizes, ExchangeAxiomViolated, NotAFlat, HasLoops, TooLarge, EmptyMatrix, ParseError
from matroidlib import bit, popcount, bits_to_list, list_to_bits, compress

logger = logging.getLogger(__name__)

Subset = int
"""A subset of the ground set encoded as a bitset"""


@dataclasses.dataclass(frozen=True)
class Matroid:
	"""A matroid on ``{0..n-1}`` given by its bases"""

	n:int
	"""Size of the ground set"""

	bases:frozenset[Subset]
	"""The basis family, each basis a bitset"""

	rank:int = dataclasses.field(init=False, compare=False)
	"""Total rank (the common size of the bases)"""

	_ranks:bytes = dataclasses.field(init=False, compare=False, repr=False)
	# rank of every subset, indexed by bitset; filled once in __post_init__

	def __post_init__(self):
		if self.n < 0:
			raise ValueError(f"Ground set size must be non-negative, got {self.n}")
		if self.n > MAX_GROUND_SET:
			raise TooLarge(f"Ground sets are capped at {MAX_GROUND_SET} elements, got {self.n}")
		object.__setattr__(self, "bases", frozenset(self.bases))
		if not self.bases:
			raise EmptyBases("A matroid needs at least one basis")

		full = (1 << self.n) - 1
		for b in self.bases:
			if b < 0 or b & ~full:
				raise ValueError(f"Basis {bits_to_list(b)} is outside the ground set of size {self.n}")

		sizes = {popcount(b) for b in self.bases}
		if len(sizes) != 1:
			raise UnequalBasisSizes(f"Bases have differing sizes {sorted(sizes)}")
		object.__setattr__(self, "rank", sizes.pop())
		object.__setattr__(self, "_ranks", _rank_table(self.n, self.bases))

	@classmethod
	def from_bases(cls, n:int, bases:typing.Iterable[typing.Union[Subset,typing.Iterable[int]]], validate:bool=True) -> "Matroid":
		"""Build a matroid from bases given as bitsets or element lists, checking the exchange axiom"""
		masks = frozenset(b if isinstance(b, int) else list_to_bits(b) for b in bases)
		m = cls(n, masks)
		if validate:
			m.check_exchange()
		return m

	def check_exchange(self):
		"""Raise `ExchangeAxiomViolated` with a witness if the bases do not form a matroid"""
		for b1 in self.bases:
			for b2 in self.bases:
				only_1 = b1 & ~b2
				only_2 = b2 & ~b1
				for e in bits_to_list(only_1):
					without = b1 & ~bit(e)
					if not any((without | bit(f)) in self.bases for f in bits_to_list(only_2)):
						raise ExchangeAxiomViolated.for_witness(b1, b2, e)

	@property
	def ground_set(self) -> Subset:
		return (1 << self.n) - 1

	def rank_of(self, subset:Subset) -> int:
		"""Matroid rank of a subset: the largest intersection with a basis"""
		return self._ranks[subset]

	def closure(self, subset:Subset) -> Subset:
		"""All elements whose addition does not raise the rank"""
		r = self._ranks[subset]
		out = subset
		for e in range(self.n):
			if not subset >> e & 1 and self._ranks[subset | bit(e)] == r:
				out |= bit(e)
		return out

	def is_flat(self, subset:Subset) -> bool:
		return self.closure(subset) == subset

	@property
	def loops(self) -> Subset:
		"""Elements in no basis, the closure of the empty set"""
		return self.closure(0)

	@property
	def coloops(self) -> Subset:
		"""Elements in every basis"""
		return functools.reduce(lambda a, b: a & b, self.bases, self.ground_set)

	@property
	def is_loopless(self) -> bool:
		return self.loops == 0

	def require_loopless(self):
		"""Raise `HasLoops` unless the matroid is loopless"""
		if self.loops:
			raise HasLoops(f"Matroid has loops {bits_to_list(self.loops)}; invariants need a loopless matroid")

	def parallel_classes(self) -> list[Subset]:
		"""Classes of non-loop elements that are pairwise parallel, ordered by smallest element"""
		classes = []
		seen = self.loops
		for e in range(self.n):
			if seen >> e & 1:
				continue
			cls = bit(e)
			for f in range(e+1, self.n):
				if not seen >> f & 1 and self._ranks[bit(e) | bit(f)] == 1:
					cls |= bit(f)
			seen |= cls
			classes.append(cls)
		return classes

	@property
	def is_simple(self) -> bool:
		return self.is_loopless and all(popcount(c) == 1 for c in self.parallel_classes())

	@property
	def is_boolean(self) -> bool:
		"""Every element is a coloop (the single basis is the ground set)"""
		return self.rank == self.n

	@property
	def is_uniform(self) -> bool:
		return len(self.bases) == math.comb(self.n, self.rank)

	def sorted_bases(self) -> list[list[int]]:
		return sorted(bits_to_list(b) for b in self.bases)

	def to_json(self) -> dict:
		"""The ``{"n": .., "bases": [[..], ..]}`` form with sorted element lists"""
		return {"n": self.n, "bases": self.sorted_bases()}

	@classmethod
	def from_json(cls, data:dict) -> "Matroid":
		"""Parse any accepted matroid JSON form"""
		if not isinstance(data, dict):
			raise ParseError(f"Matroid JSON must be an object, got {type(data).__name__}")
		try:
			if "bases" in data:
				return cls.from_bases(int(data["n"]), [list(b) for b in data["bases"]])
			if "uniform" in data:
				r, n = data["uniform"]
				return uniform(int(r), int(n))
			if "graph" in data:
				graph = data["graph"]
				return matroid_from_graph(graph["edges"], graph.get("vertices"))
			if "matrix" in data:
				return matroid_from_matrix(data["matrix"]["rows"])
			if "revlex" in data:
				from matroidlib.catalog import parse_revlex
				code = data["revlex"]
				return parse_revlex(int(code["n"]), int(code["r"]), str(code["code"]))
		except (KeyError, TypeError) as e:
			raise ParseError(f"Malformed matroid JSON {data!r}: {e}") from e
		raise ParseError(f"Unrecognized matroid JSON keys: {sorted(data)}")

	def __str__(self) -> str:
		return f"Matroid(n={self.n}, rank={self.rank}, bases={len(self.bases)})"


def _rank_table(n:int, bases:frozenset[int]) -> bytes:
	"""Rank of every subset of {0..n-1}"""
	size = 1 << n
	independent = bytearray(size)
	for b in bases:
		independent[b] = 1
	for s in range(size - 1, 0, -1):
		if independent[s]:
			x = s
			while x:
				low = x & -x
				independent[s ^ low] = 1
				x ^= low
	ranks = bytearray(size)
	for s in range(1, size):
		if independent[s]:
			ranks[s] = popcount(s)
		else:
			best = 0
			x = s
			while x:
				low = x & -x
				if ranks[s ^ low] > best:
					best = ranks[s ^ low]
				x ^= low
			ranks[s] = best
	return bytes(ranks)


# Constructions

def empty_matroid() -> Matroid:
	"""The matroid on no elements: rank 0, the single empty basis"""
	return Matroid(0, frozenset({0}))

def uniform(r:int, n:int) -> Matroid:
	"""U_{r,n}: every r-subset is a basis"""
	if not 0 <= r <= n:
		raise ValueError(f"Uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
	return Matroid(n, frozenset(list_to_bits(c) for c in itertools.combinations(range(n), r)))

def boolean(d:int) -> Matroid:
	"""B_d = U_{d,d}"""
	return uniform(d, d)

def matroid_from_bases(n:int, bases:typing.Iterable[typing.Union[Subset,typing.Iterable[int]]]) -> Matroid:
	"""Validated matroid from a basis family"""
	return Matroid.from_bases(n, bases)

def matroid_from_matrix(rows:typing.Sequence[typing.Sequence[typing.Union[int,str,fractions.Fraction]]]) -> Matroid:
	"""Column matroid of an exact rational matrix (entries as ints, Fractions or "p/q" strings)"""
	if not rows or not rows[0]:
		raise EmptyMatrix("Matrix has no rows or no columns")
	width = len(rows[0])
	if any(len(row) != width for row in rows):
		raise EmptyMatrix(f"Ragged matrix: row lengths {[len(row) for row in rows]}")
	try:
		entries = [[fractions.Fraction(x) for x in row] for row in rows]
	except (ValueError, TypeError, ZeroDivisionError) as e:
		raise ParseError(f"Matrix entries must be exact rationals: {e}") from e

	height = len(entries)
	dm = DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in entries], (height, width), QQ)
	r = dm.rank()
	if r == 0:
		return Matroid(width, frozenset({0}))
	all_rows = list(range(height))
	bases = frozenset(
		list_to_bits(cols) for cols in itertools.combinations(range(width), r)
		if dm.extract(all_rows, list(cols)).rank() == r
	)
	return Matroid(width, bases)

def matroid_from_graph(edges:typing.Sequence[typing.Sequence], vertices:typing.Optional[typing.Union[int,typing.Iterable]]=None) -> Matroid:
	"""Cycle matroid of a multigraph; element i is edge i, bases are the spanning forests

	`vertices` is a vertex count (vertices ``0..k-1``) or an iterable of vertex labels;
	by default the endpoints of the edges.
	"""
	edge_list = [tuple(e) for e in edges]
	if any(len(e) != 2 for e in edge_list):
		raise ParseError("Every edge must be a pair of vertices")

	graph = nx.MultiGraph()
	if isinstance(vertices, int):
		graph.add_nodes_from(range(vertices))
	elif vertices is not None:
		graph.add_nodes_from(vertices)
	for u, v in edge_list:
		graph.add_edge(u, v)

	components = nx.number_connected_components(graph) if len(graph) else 0
	r = len(graph) - components
	bases = set()
	for combo in itertools.combinations(range(len(edge_list)), r):
		forest = nx.MultiGraph()
		forest.add_nodes_from(graph.nodes)
		forest.add_edges_from(edge_list[i] for i in combo)
		if nx.number_connected_components(forest) == components:
			bases.add(list_to_bits(combo))
	return Matroid(len(edge_list), frozenset(bases))


# Minors and sums

def restriction(m:Matroid, subset:Subset) -> Matroid:
	"""M|S: delete everything outside `subset`, relabeling the rest in order"""
	r = m.rank_of(subset)
	bases = frozenset(compress(b & subset, subset) for b in m.bases if popcount(b & subset) == r)
	return Matroid(popcount(subset), bases)

def deletion(m:Matroid, subset:Subset) -> Matroid:
	"""M minus `subset`"""
	return restriction(m, m.ground_set & ~subset)

def localization(m:Matroid, flat:Subset) -> Matroid:
	"""M^F, the restriction to a flat"""
	if not m.is_flat(flat):
		raise NotAFlat(f"{bits_to_list(flat)} is not a flat")
	return restriction(m, flat)

def contraction(m:Matroid, flat:Subset) -> Matroid:
	"""M_F, the contraction of a flat; loopless because F is closed"""
	if not m.is_flat(flat):
		raise NotAFlat(f"{bits_to_list(flat)} is not a flat")
	return _contract(m, flat)

def _contract(m:Matroid, subset:Subset) -> Matroid:
	r = m.rank_of(subset)
	rest = m.ground_set & ~subset
	bases = frozenset(compress(b & rest, rest) for b in m.bases if popcount(b & subset) == r)
	return Matroid(popcount(rest), bases)

def minor(m:Matroid, lower:Subset, upper:Subset) -> Matroid:
	"""M^upper_lower: localize to `upper`, then contract `lower`"""
	local = localization(m, upper)
	return contraction(local, compress(lower, upper))

def direct_sum(m1:Matroid, m2:Matroid) -> Matroid:
	"""M1 + M2 with the elements of M2 shifted past those of M1"""
	bases = frozenset(b1 | (b2 << m1.n) for b1 in m1.bases for b2 in m2.bases)
	return Matroid(m1.n + m2.n, bases)

def simplify(m:Matroid) -> Matroid:
	"""Delete loops and keep the smallest element of each parallel class"""
	keep = 0
	for cls in m.parallel_classes():
		keep |= cls & -cls
	return restriction(m, keep)

def component_sets(m:Matroid) -> list[Subset]:
	"""Ground sets of the connected components, ordered by smallest element"""
	m.require_loopless()
	graph = nx.Graph()
	graph.add_nodes_from(range(m.n))
	# e ~ f whenever some basis exchanges e for f: the two share a fundamental circuit
	for b in m.bases:
		outside = bits_to_list(m.ground_set & ~b)
		for e in bits_to_list(b):
			without = b & ~bit(e)
			for f in outside:
				if (without | bit(f)) in m.bases:
					graph.add_edge(e, f)
	return sorted((list_to_bits(c) for c in nx.connected_components(graph)), key=lambda s: s & -s)

def connected_components(m:Matroid) -> list[Matroid]:
	"""The connected components of a loopless matroid as restrictions"""
	return [restriction(m, s) for s in component_sets(m)]

def is_connected(m:Matroid) -> bool:
	return len(component_sets(m)) <= 1

def relabel(m:Matroid, perm:typing.Sequence[int]) -> Matroid:
	"""Send element e to ``perm[e]``"""
	if sorted(perm) != list(range(m.n)):
		raise ValueError(f"{list(perm)} is not a permutation of 0..{m.n-1}")
	return Matroid(m.n, frozenset(_apply(b, perm) for b in m.bases))

def _apply(mask:Subset, perm:typing.Sequence[int]) -> Subset:
	out = 0
	e = 0
	while mask:
		if mask & 1:
			out |= 1 << perm[e]
		mask >>= 1
		e += 1
	return out


# Canonical forms

@dataclasses.dataclass(frozen=True, order=True)
class CanonicalKey:
	"""Isomorphism-class identifier: equal keys if and only if isomorphic matroids"""

	n:int
	"""Size of the ground set"""

	r:int
	"""Rank"""

	indicator:str
	"""Basis indicator over the r-subsets in revlex order, '*' for a basis and '0' otherwise, of the canonical labeling"""

	def __str__(self) -> str:
		return f"{self.n}:{self.r}:{self.indicator}"

	@classmethod
	def from_str(cls, text:str) -> "CanonicalKey":
		try:
			n, r, indicator = text.split(":")
			return cls(int(n), int(r), indicator)
		except ValueError as e:
			raise ParseError(f"Not a canonical key: {text!r}") from e

	def to_matroid(self) -> Matroid:
		"""The canonical representative this key describes"""
		combos = revlex_subsets(self.n, self.r)
		return Matroid(self.n, frozenset(c for c, flag in zip(combos, self.indicator) if flag == "*"))


@functools.lru_cache(maxsize=None)
def revlex_subsets(n:int, r:int) -> tuple[Subset,...]:
	"""All r-subsets of {0..n-1} in revlex order: compared by largest element first"""
	combos = itertools.combinations(range(n), r)
	return tuple(list_to_bits(c) for c in sorted(combos, key=lambda c: tuple(reversed(c))))

@functools.lru_cache(maxsize=None)
def _revlex_weights(n:int, r:int) -> dict[Subset,int]:
	# earlier positions weigh more, so a larger total is a smaller indicator string
	combos = revlex_subsets(n, r)
	top = len(combos) - 1
	return {c: 1 << (top - i) for i, c in enumerate(combos)}

def _refined_cells(m:Matroid) -> list[list[int]]:
	"""Ordered partition of the ground set by iterated isomorphism-invariant element signatures"""
	n = m.n
	degree = [0]*n
	pairs = [[0]*n for _ in range(n)]
	for b in m.bases:
		elements = bits_to_list(b)
		for e in elements:
			degree[e] += 1
			for f in elements:
				pairs[e][f] += 1
	parallel_size = [0]*n
	for cls in m.parallel_classes():
		for e in bits_to_list(cls):
			parallel_size[e] = popcount(cls)

	signature = [(degree[e], parallel_size[e]) for e in range(n)]
	colors = _colors(signature)
	while True:
		signature = [(colors[e], tuple(sorted((colors[f], pairs[e][f]) for f in range(n) if f != e))) for e in range(n)]
		refined = _colors(signature)
		if len(set(refined)) == len(set(colors)):
			break
		colors = refined

	cells = {}
	for e in range(n):
		cells.setdefault(colors[e], []).append(e)
	return [cells[c] for c in sorted(cells)]

def _colors(signature:list) -> list[int]:
	order = {s: i for i, s in enumerate(sorted(set(signature)))}
	return [order[s] for s in signature]

def _swap_is_automorphism(m:Matroid, e:int, f:int) -> bool:
	perm = list(range(m.n))
	perm[e], perm[f] = f, e
	return all(_apply(b, perm) in m.bases for b in m.bases)

def _cell_orderings(m:Matroid, cell:list[int]) -> list[tuple[int,...]]:
	if len(cell) == 1:
		return [tuple(cell)]
	# adjacent transpositions generate Sym(cell); if all are automorphisms any order will do
	if all(_swap_is_automorphism(m, a, b) for a, b in zip(cell, cell[1:])):
		return [tuple(cell)]
	return list(itertools.permutations(cell))

def _indicator(m:Matroid) -> str:
	return "".join("*" if c in m.bases else "0" for c in revlex_subsets(m.n, m.rank))

@functools.lru_cache(maxsize=65536)
def _canonical(n:int, bases:frozenset[Subset]) -> tuple[CanonicalKey,tuple[int,...]]:
	m = Matroid(n, bases)
	loops = m.loops
	core = m.ground_set & ~loops
	core_matroid = restriction(m, core)
	parts = component_sets(core_matroid) if core else []
	if not loops and len(parts) <= 1:
		return _search(m)

	# components in ascending key order, each in its own canonical labeling, then the loops
	elements = bits_to_list(core)
	pieces = []
	for part in parts:
		piece = restriction(core_matroid, part)
		key, perm = _canonical(piece.n, piece.bases)
		pieces.append((key, [elements[e] for e in bits_to_list(part)], perm))
	pieces.sort(key=lambda piece: piece[0])

	labels = [0]*n
	offset = 0
	for _, originals, perm in pieces:
		for e, label in zip(originals, perm):
			labels[e] = offset + label
		offset += len(originals)
	for e in bits_to_list(loops):
		labels[e] = offset
		offset += 1
	form = relabel(m, labels)
	return CanonicalKey(n, form.rank, _indicator(form)), tuple(labels)

def _search(m:Matroid) -> tuple[CanonicalKey,tuple[int,...]]:
	"""Smallest indicator over the labelings that respect the refined cells"""
	n = m.n
	weights = _revlex_weights(n, m.rank)
	cells = _refined_cells(m)
	basis_elements = [bits_to_list(b) for b in m.bases]

	best_weight = -1
	best_perm = None
	searched = 0
	for choice in itertools.product(*(_cell_orderings(m, c) for c in cells)):
		perm = [0]*n
		label = 0
		for ordering in choice:
			for e in ordering:
				perm[e] = label
				label += 1
		weight = 0
		for elements in basis_elements:
			mask = 0
			for e in elements:
				mask |= 1 << perm[e]
			weight += weights[mask]
		searched += 1
		if weight > best_weight:
			best_weight, best_perm = weight, tuple(perm)

	if searched > 1000:
		logger.debug("Canonical search for n=%d r=%d visited %d labelings", n, m.rank, searched)
	combos = revlex_subsets(n, m.rank)
	top = len(combos) - 1
	indicator = "".join("*" if best_weight >> (top - i) & 1 else "0" for i in range(len(combos)))
	return CanonicalKey(n, m.rank, indicator), best_perm

def canonical_key(m:Matroid) -> CanonicalKey:
	"""The isomorphism-class key of a matroid"""
	return _canonical(m.n, m.bases)[0]

def canonical_form(m:Matroid) -> Matroid:
	"""The relabeled copy of `m` whose basis indicator is its canonical key"""
	return relabel(m, _canonical(m.n, m.bases)[1])

def is_isomorphic(m1:Matroid, m2:Matroid) -> bool:
	return canonical_key(m1) == canonical_key(m2)
