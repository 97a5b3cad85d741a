"""The lattice of flats and the invariants read directly off it

`FlatLattice` holds every flat of a loopless matroid in (rank, bitset) order together
with the Möbius values from the bottom. Interval Möbius values are computed on demand
per starting flat and kept for the life of the lattice, so minors M^F_G never need to
be built as matroids to get their characteristic polynomial or beta invariant.
"""

import dataclasses, typing, functools, threading, logging
from matroidlib import EmptyMatroid, NotAFlat, NotComparable, RecursionInconsistent
from matroidlib import low_element, bits_to_list, flat_to_str, str_to_flat
from matroidlib.matroid import Matroid, Subset
from matroidlib.polynomial import IntPoly

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class FlagOfFlats:
	"""A strictly increasing chain of nonempty proper flats; ∅ and E are implied at either end"""

	chain:tuple[Subset,...] = ()
	"""The flats F_1 ⊂ ... ⊂ F_k as bitsets"""

	def __post_init__(self):
		object.__setattr__(self, "chain", tuple(self.chain))
		for lower, upper in zip(self.chain, self.chain[1:]):
			if lower & ~upper or lower == upper:
				raise ValueError(f"Flag is not strictly increasing at {bits_to_list(lower)} ⊄ {bits_to_list(upper)}")

	def __len__(self) -> int:
		return len(self.chain)

	def __iter__(self) -> typing.Iterator[Subset]:
		return iter(self.chain)

	def steps(self, ground:Subset) -> list[tuple[Subset,Subset]]:
		"""Consecutive pairs (F_i, F_{i+1}) of ∅ ⊂ F_1 ⊂ ... ⊂ F_k ⊂ `ground`"""
		full = (0,) + self.chain + (ground,)
		return list(zip(full, full[1:]))

	def is_descending(self) -> bool:
		"""Minima strictly decrease and stay above 0"""
		minima = [low_element(f) for f in self.chain]
		return all(m > 0 for m in minima) and all(a > b for a, b in zip(minima, minima[1:]))

	def to_str(self) -> str:
		"""Flats joined by "/", each as comma-joined labels"""
		return "/".join(flat_to_str(f) for f in self.chain)

	@classmethod
	def from_str(cls, text:str) -> "FlagOfFlats":
		return cls(tuple(str_to_flat(part) for part in text.split("/")) if text else ())

	def __str__(self) -> str:
		return "(" + ", ".join("{" + flat_to_str(f) + "}" for f in self.chain) + ")"


@dataclasses.dataclass(frozen=True, eq=False)
class FlatLattice:
	"""All flats of a loopless matroid, ordered by (rank, bitset), with Möbius values"""

	matroid:Matroid
	"""The matroid the lattice belongs to"""

	flats:tuple[Subset,...]
	"""Every flat, sorted by rank then bitset value"""

	ranks:tuple[int,...]
	"""Rank of each flat, by position"""

	mobius_bottom:tuple[int,...]
	"""μ(∅, F) for each flat, by position"""

	index:dict[Subset,int] = dataclasses.field(repr=False)
	"""Position of each flat"""

	above:tuple[tuple[int,...],...] = dataclasses.field(repr=False)
	"""Positions of the flats strictly containing each flat, ascending"""

	_interval_mobius:dict[int,dict[int,int]] = dataclasses.field(default_factory=dict, repr=False)
	_lock:threading.Lock = dataclasses.field(default_factory=threading.Lock, repr=False)

	def __len__(self) -> int:
		return len(self.flats)

	@property
	def rank(self) -> int:
		return self.ranks[-1]

	@property
	def top(self) -> Subset:
		return self.flats[-1]

	def position(self, flat:Subset) -> int:
		try:
			return self.index[flat]
		except KeyError:
			raise NotAFlat(f"{bits_to_list(flat)} is not a flat") from None

	def rank_of(self, flat:Subset) -> int:
		return self.ranks[self.position(flat)]

	def corank(self, flat:Subset) -> int:
		return self.rank - self.rank_of(flat)

	def flats_of_rank(self, r:int) -> list[Subset]:
		return [f for f, rk in zip(self.flats, self.ranks) if rk == r]

	def proper_flats(self) -> list[Subset]:
		"""Flats other than ∅ and E"""
		return [f for f in self.flats if f and f != self.top]

	def flats_between(self, lower:Subset, upper:Subset) -> list[Subset]:
		"""The interval [lower, upper] in lattice order"""
		self._check_order(lower, upper)
		return [f for f in self.flats if not lower & ~f and not f & ~upper]

	def _check_order(self, lower:Subset, upper:Subset):
		self.position(lower)
		self.position(upper)
		if lower & ~upper:
			raise NotComparable(f"{bits_to_list(lower)} is not below {bits_to_list(upper)}")

	def _mobius_from(self, i:int) -> dict[int,int]:
		if i == 0:
			return dict(enumerate(self.mobius_bottom))
		with self._lock:
			cached = self._interval_mobius.get(i)
		if cached is not None:
			return cached
		values = {i: 1}
		for j in self.above[i]:
			upper = self.flats[j]
			values[j] = -sum(v for k, v in values.items() if not self.flats[k] & ~upper)
		with self._lock:
			self._interval_mobius.setdefault(i, values)
		return values

	def mobius(self, lower:Subset, upper:Subset) -> int:
		"""μ(lower, upper) computed on the interval"""
		self._check_order(lower, upper)
		return self._mobius_from(self.position(lower))[self.position(upper)]

	def lower_char_poly(self, flat:Subset) -> IntPoly:
		"""χ of the localization M^F: Σ_{G ≤ F} μ(∅,G) t^{rk F - rk G}"""
		rk = self.rank_of(flat)
		coeffs = [0]*(rk + 1)
		for g, r, mu in zip(self.flats, self.ranks, self.mobius_bottom):
			if r > rk:
				break
			if not g & ~flat:
				coeffs[rk - r] += mu
		return IntPoly(coeffs)

	def interval_char_poly(self, lower:Subset, upper:Subset) -> IntPoly:
		"""χ of the minor M^upper_lower: Σ_{lower ≤ H ≤ upper} μ(lower,H) t^{rk upper - rk H}"""
		self._check_order(lower, upper)
		rk = self.rank_of(upper)
		coeffs = [0]*(rk - self.rank_of(lower) + 1)
		for j, mu in self._mobius_from(self.position(lower)).items():
			if not self.flats[j] & ~upper:
				coeffs[rk - self.ranks[j]] += mu
		return IntPoly(coeffs)

	def upper_char_poly(self, flat:Subset) -> IntPoly:
		"""χ of the contraction M_F"""
		return self.interval_char_poly(flat, self.top)

	def interval_beta(self, lower:Subset, upper:Subset) -> int:
		"""β of the minor M^upper_lower: (-1)^r Σ μ(lower,H)(rk H - rk lower)"""
		self._check_order(lower, upper)
		if lower == upper:
			raise EmptyMatroid(f"β is undefined on the empty minor at {bits_to_list(lower)}")
		base = self.rank_of(lower)
		total = 0
		for j, mu in self._mobius_from(self.position(lower)).items():
			if not self.flats[j] & ~upper:
				total += mu*(self.ranks[j] - base)
		return -total if (self.rank_of(upper) - base) % 2 else total

	def flags(self, k:int) -> typing.Iterator[FlagOfFlats]:
		"""Every k-step flag of nonempty proper flats, in lexicographic order of positions"""
		candidates = [i for i, f in enumerate(self.flats) if f and f != self.top]
		yield from (FlagOfFlats(tuple(self.flats[i] for i in chain)) for chain in self._chains(candidates, k, lambda prev, nxt: True))

	def descending_flags(self) -> typing.Iterator[FlagOfFlats]:
		"""Flags of nonempty proper flats avoiding 0 whose minima strictly decrease, by length then lexicographically"""
		candidates = [i for i, f in enumerate(self.flats) if f and f != self.top and not f & 1]
		smaller_min = lambda prev, nxt: low_element(self.flats[nxt]) < low_element(self.flats[prev])
		for k in range(self.rank):
			for chain in self._chains(candidates, k, smaller_min):
				yield FlagOfFlats(tuple(self.flats[i] for i in chain))

	def _chains(self, candidates:list[int], k:int, accept:typing.Callable[[int,int],bool]) -> typing.Iterator[tuple[int,...]]:
		allowed = set(candidates)
		def extend(chain:tuple[int,...]) -> typing.Iterator[tuple[int,...]]:
			if len(chain) == k:
				yield chain
				return
			options = candidates if not chain else self.above[chain[-1]]
			for j in options:
				if j in allowed and (not chain or accept(chain[-1], j)):
					yield from extend(chain + (j,))
		yield from extend(())

	def flag_beta_product(self, flag:FlagOfFlats) -> int:
		"""Product of β over the consecutive minors of ∅ ⊂ F_1 ⊂ ... ⊂ F_k ⊂ E"""
		for f in flag:
			self.position(f)
			if not f or f == self.top:
				raise ValueError(f"Flags hold nonempty proper flats only, got {bits_to_list(f)}")
		product = 1
		for lower, upper in flag.steps(self.top):
			product *= self.interval_beta(lower, upper)
			if not product:
				break
		return product

	def check_mobius(self):
		"""Re-check Σ_{G ≤ F} μ(∅,G) = 0 for every flat F ≠ ∅"""
		for i in range(1, len(self.flats)):
			total = sum(mu for g, mu in zip(self.flats, self.mobius_bottom) if not g & ~self.flats[i])
			if total:
				raise RecursionInconsistent(f"Möbius sum below {bits_to_list(self.flats[i])} is {total}")


@functools.lru_cache(maxsize=4096)
def build_lattice(m:Matroid) -> FlatLattice:
	"""Enumerate the flats of a loopless matroid breadth-first from ∅"""
	m.require_loopless()
	seen = {0}
	frontier = [0]
	while frontier:
		nxt = []
		for flat in frontier:
			for e in bits_to_list(m.ground_set & ~flat):
				cover = m.closure(flat | (1 << e))
				if cover not in seen:
					seen.add(cover)
					nxt.append(cover)
		frontier = nxt

	flats = tuple(sorted(seen, key=lambda f: (m.rank_of(f), f)))
	index = {f: i for i, f in enumerate(flats)}
	ranks = tuple(m.rank_of(f) for f in flats)
	above = tuple(tuple(j for j in range(i+1, len(flats)) if not flats[i] & ~flats[j]) for i in range(len(flats)))

	mobius = [0]*len(flats)
	mobius[0] = 1
	for i in range(1, len(flats)):
		mobius[i] = -sum(mobius[j] for j in range(i) if not flats[j] & ~flats[i])

	logger.debug("Lattice of %s: %d flats", m, len(flats))
	return FlatLattice(
		matroid = m,
		flats = flats,
		ranks = ranks,
		mobius_bottom = tuple(mobius),
		index = index,
		above = above,
	)


# Matroid-level invariants

def mobius(lattice:FlatLattice, lower:Subset, upper:Subset) -> int:
	return lattice.mobius(lower, upper)

def interval_char_poly(lattice:FlatLattice, lower:Subset, upper:Subset) -> IntPoly:
	return lattice.interval_char_poly(lower, upper)

def interval_beta(lattice:FlatLattice, lower:Subset, upper:Subset) -> int:
	return lattice.interval_beta(lower, upper)

def flags(lattice:FlatLattice, k:int) -> typing.Iterator[FlagOfFlats]:
	return lattice.flags(k)

def char_poly(m:Matroid) -> IntPoly:
	"""χ_M(t) = Σ_F μ(∅,F) t^{rk M - rk F}"""
	lattice = build_lattice(m)
	return lattice.lower_char_poly(lattice.top)

def reduced_char_poly(m:Matroid) -> IntPoly:
	"""χ_M(t) / (t - 1), exactly"""
	if m.rank == 0:
		m.require_loopless()
		raise EmptyMatroid("The reduced characteristic polynomial needs rank at least 1")
	return char_poly(m).divide_linear(1)

def beta(m:Matroid) -> int:
	"""β(M) = (-1)^{rk M} Σ_F μ(∅,F) rk F"""
	m.require_loopless()
	if m.n == 0:
		raise EmptyMatroid("β is undefined on the empty matroid")
	lattice = build_lattice(m)
	return lattice.interval_beta(0, lattice.top)

def descending_flags(m:Matroid) -> typing.Iterator[FlagOfFlats]:
	return build_lattice(m).descending_flags()

def flag_beta_product(m:Matroid, flag:FlagOfFlats) -> int:
	return build_lattice(m).flag_beta_product(flag)

def whitney_numbers(m:Matroid) -> tuple[list[int],list[int]]:
	"""Whitney numbers of the first kind (|[t^{d-k}] χ_M|) and second kind (flats per rank)"""
	lattice = build_lattice(m)
	chi = char_poly(m)
	first = [abs(chi.coeff(m.rank - k)) for k in range(m.rank + 1)]
	second = [len(lattice.flats_of_rank(k)) for k in range(m.rank + 1)]
	return first, second
