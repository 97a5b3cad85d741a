"""Memo tables shared by the recursive invariants

Each recursion (KL polynomials, c_M, Eu_M) keeps its own `MemoTable` keyed by
`CanonicalKey`, so isomorphic minors are computed once. Tables never evict. Inserts
are insert-if-absent under a lock; a value computed twice by racing threads is equal
both times, so whichever lands first is kept.
"""

import dataclasses, typing, threading, logging

logger = logging.getLogger(__name__)

K = typing.TypeVar("K")
V = typing.TypeVar("V")


@dataclasses.dataclass(frozen=True)
class MemoStats:
	"""Counters for one memo table"""

	hits:int
	misses:int
	size:int

	def __str__(self) -> str:
		return f"{self.size} entries, {self.hits} hits, {self.misses} misses"


class MemoTable(typing.Generic[K,V]):
	"""A thread-safe insert-if-absent map with hit and miss counters"""

	def __init__(self, name:str):
		self.name = name
		self._values:dict[K,V] = {}
		self._lock = threading.Lock()
		self._hits = 0
		self._misses = 0

	def get(self, key:K) -> typing.Optional[V]:
		with self._lock:
			value = self._values.get(key)
			if value is None:
				self._misses += 1
			else:
				self._hits += 1
			return value

	def put(self, key:K, value:V) -> V:
		"""Insert unless present; returns the stored value"""
		with self._lock:
			return self._values.setdefault(key, value)

	def get_or_compute(self, key:K, compute:typing.Callable[[],V]) -> V:
		"""Cached value, or `compute()` stored under `key`; the lock is not held while computing"""
		value = self.get(key)
		if value is None:
			value = self.put(key, compute())
		return value

	def __contains__(self, key:K) -> bool:
		with self._lock:
			return key in self._values

	def __len__(self) -> int:
		with self._lock:
			return len(self._values)

	@property
	def stats(self) -> MemoStats:
		with self._lock:
			return MemoStats(self._hits, self._misses, len(self._values))

	def clear(self):
		with self._lock:
			self._values.clear()
			self._hits = self._misses = 0


class MemoStore:
	"""Named memo tables, created on first use"""

	def __init__(self):
		self._tables:dict[str,MemoTable] = {}
		self._lock = threading.Lock()

	def table(self, name:str) -> MemoTable:
		with self._lock:
			if name not in self._tables:
				self._tables[name] = MemoTable(name)
			return self._tables[name]

	def stats(self) -> dict[str,MemoStats]:
		with self._lock:
			tables = dict(self._tables)
		return {name: table.stats for name, table in sorted(tables.items())}

	def clear(self):
		with self._lock:
			tables = list(self._tables.values())
		for table in tables:
			table.clear()

	def log_stats(self):
		for name, stats in self.stats().items():
			logger.debug("Memo table %s: %s", name, stats)


_default_store = MemoStore()

def default_store() -> MemoStore:
	"""The per-process store used when no store is passed explicitly"""
	return _default_store
