"""`InvariantRecord`, the full computed profile of one matroid, and its JSON-lines cache

Records are always computed on the canonical form of a matroid, so flat labels in the
flat-indexed maps refer to the canonical labeling and a record is a function of its
key alone.
"""

import dataclasses, typing, json, threading, logging
from pathlib import Path
from matroidlib import ParseError, flat_to_str, str_to_flat, int_to_json, json_to_int
from matroidlib.matroid import Matroid, CanonicalKey, canonical_form, canonical_key
from matroidlib.polynomial import IntPoly
from matroidlib.memo import MemoStore
from matroidlib.microlocal import INVARIANTS, profile

logger = logging.getLogger(__name__)

FLAG_NAMES = ("euEverywherePositive", "ccIrreducible", "hasColoop", "simplificationHasColoop")

CSV_COLUMNS = ("key", "n", "rank", "charPoly", "beta", "klPoly", "eu", "c", "m") + FLAG_NAMES


def _flatmap_to_json(values:typing.Optional[dict[int,int]]) -> typing.Optional[dict[str,typing.Union[int,str]]]:
	if values is None:
		return None
	return {flat_to_str(f): int_to_json(v) for f, v in sorted(values.items(), key=lambda item: (bin(item[0]).count("1"), item[0]))}

def _flatmap_from_json(data:typing.Optional[dict]) -> typing.Optional[dict[int,int]]:
	if data is None:
		return None
	return {str_to_flat(f): json_to_int(v) for f, v in data.items()}

def _optional_int(value) -> typing.Optional[int]:
	return None if value is None else json_to_int(value)


@dataclasses.dataclass(frozen=True)
class InvariantRecord:
	"""Every invariant of one loopless matroid, on its canonical labeling"""

	key:CanonicalKey
	"""Isomorphism class of the matroid"""

	n:int
	"""Size of the ground set"""

	rank:int
	"""Rank of the matroid"""

	char_poly:typing.Optional[IntPoly] = None
	"""χ_M"""

	beta:typing.Optional[int] = None
	"""β(M), absent on the empty matroid"""

	kl_poly:typing.Optional[IntPoly] = None
	"""Kazhdan-Lusztig polynomial P_M"""

	eu_function:typing.Optional[dict[int,int]] = None
	"""Flat to the Euler obstruction on its stratum"""

	c:typing.Optional[int] = None
	"""The constant c_M"""

	m_function:typing.Optional[dict[int,int]] = None
	"""Flat to the microlocal multiplicity on its stratum"""

	m:typing.Optional[int] = None
	"""m_M, the multiplicity at the bottom flat"""

	cm_coeffs:typing.Optional[dict[int,int]] = None
	"""Flat to the coefficient of y_F in the Chern-Mather class"""

	csm_degrees:typing.Optional[list[int]] = None
	"""Total descending-flag weight per CSM dimension"""

	flags:dict[str,bool] = dataclasses.field(default_factory=dict)
	"""Boolean classifications: euEverywherePositive, ccIrreducible, hasColoop, simplificationHasColoop"""

	def __post_init__(self):
		top = (1 << self.n) - 1
		if self.m_function is not None:
			if self.m is not None and self.m_function.get(0) != self.m:
				raise ValueError(f"Record {self.key}: m is {self.m} but the multiplicity function has {self.m_function.get(0)} at the bottom flat")
			if self.m_function.get(top) != 1:
				raise ValueError(f"Record {self.key}: multiplicity at the top flat must be 1")
		if self.eu_function is not None and self.eu_function.get(top) != 1:
			raise ValueError(f"Record {self.key}: Euler obstruction at the top flat must be 1")

	@classmethod
	def from_matroid(cls, m:Matroid, which:typing.Iterable[str]=INVARIANTS, store:MemoStore=None) -> "InvariantRecord":
		"""Compute the requested invariants on the canonical form of `m`"""
		canonical = canonical_form(m)
		values = profile(canonical, which, store)
		return cls(key=canonical_key(canonical), n=canonical.n, rank=canonical.rank, **values)

	@property
	def eu(self) -> typing.Optional[int]:
		"""Eu_M, the Euler obstruction at the bottom flat"""
		return None if self.eu_function is None else self.eu_function[0]

	def covers(self, which:typing.Iterable[str]) -> bool:
		"""Whether every invariant in `which` is present"""
		fields = {"charpoly": self.char_poly, "kl": self.kl_poly, "eu": self.eu_function, "c": self.c, "m": self.m, "cm": self.cm_coeffs}
		for name in which:
			if name == "beta":
				if self.beta is None and self.n:
					return False
			elif name == "csm":
				if self.csm_degrees is None and self.rank:
					return False
			elif fields.get(name) is None:
				return False
		return True

	def to_json(self) -> dict:
		"""Record as a JSON object; absent invariants are omitted"""
		data = {
			"key": str(self.key),
			"n": self.n,
			"rank": self.rank,
			"charPoly": self.char_poly.to_json() if self.char_poly is not None else None,
			"beta": int_to_json(self.beta) if self.beta is not None else None,
			"klPoly": self.kl_poly.to_json() if self.kl_poly is not None else None,
			"euFunction": _flatmap_to_json(self.eu_function),
			"eu": int_to_json(self.eu) if self.eu is not None else None,
			"c": int_to_json(self.c) if self.c is not None else None,
			"mFunction": _flatmap_to_json(self.m_function),
			"m": int_to_json(self.m) if self.m is not None else None,
			"cmCoeffs": _flatmap_to_json(self.cm_coeffs),
			"csmDegrees": [int_to_json(v) for v in self.csm_degrees] if self.csm_degrees is not None else None,
			"flags": dict(sorted(self.flags.items())),
		}
		return {k: v for k, v in data.items() if v is not None}

	def to_line(self) -> str:
		"""One byte-stable JSON line"""
		return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

	@classmethod
	def from_json(cls, data:dict) -> "InvariantRecord":
		try:
			return cls(
				key = CanonicalKey.from_str(data["key"]),
				n = int(data["n"]),
				rank = int(data["rank"]),
				char_poly = IntPoly.from_json(data["charPoly"]) if "charPoly" in data else None,
				beta = _optional_int(data.get("beta")),
				kl_poly = IntPoly.from_json(data["klPoly"]) if "klPoly" in data else None,
				eu_function = _flatmap_from_json(data.get("euFunction")),
				c = _optional_int(data.get("c")),
				m_function = _flatmap_from_json(data.get("mFunction")),
				m = _optional_int(data.get("m")),
				cm_coeffs = _flatmap_from_json(data.get("cmCoeffs")),
				csm_degrees = [json_to_int(v) for v in data["csmDegrees"]] if "csmDegrees" in data else None,
				flags = {str(k): bool(v) for k, v in data.get("flags", {}).items()},
			)
		except (KeyError, TypeError, ValueError) as e:
			if isinstance(e, ParseError):
				raise
			raise ParseError(f"Malformed invariant record: {e}") from e

	def to_csv_row(self) -> list[str]:
		"""Values in `CSV_COLUMNS` order; polynomials as space-separated ascending coefficients"""
		poly = lambda p: "" if p is None else " ".join(str(c) for c in p.coeffs)
		value = lambda v: "" if v is None else str(v)
		row = [str(self.key), str(self.n), str(self.rank), poly(self.char_poly), value(self.beta), poly(self.kl_poly), value(self.eu), value(self.c), value(self.m)]
		row += [value(self.flags.get(name)).lower() for name in FLAG_NAMES]
		return row


class InvariantCache:
	"""Append-only JSON-lines store of records keyed by canonical key

	The last record written for a key wins. A final line cut short by an interrupted
	write is skipped on load and cut off the file before the next append.
	"""

	def __init__(self, path:typing.Union[str,Path]):
		self.path = Path(path)
		self._records:dict[CanonicalKey,InvariantRecord] = {}
		self._lock = threading.Lock()
		self._needs_newline = False
		self._truncate_to:typing.Optional[int] = None
		self._load()

	def _load(self):
		if not self.path.exists():
			return
		data = self.path.read_bytes()
		lines = data.split(b"\n")
		offset = 0
		for lineno, line in enumerate(lines, start=1):
			start = offset
			offset += len(line) + 1
			if not line.strip():
				continue
			try:
				record = InvariantRecord.from_json(json.loads(line))
			except (json.JSONDecodeError, UnicodeDecodeError, ParseError) as e:
				if lineno == len(lines):
					logger.warning("Skipping truncated last line of %s: %s", self.path, e)
					self._truncate_to = start
					continue
				raise ParseError(f"{self.path}:{lineno}: corrupt cache line: {e}") from e
			self._records[record.key] = record
		self._needs_newline = self._truncate_to is None and bool(data) and not data.endswith(b"\n")
		logger.debug("Loaded %d cached records from %s", len(self._records), self.path)

	def get(self, key:CanonicalKey) -> typing.Optional[InvariantRecord]:
		"""The latest record for `key`, or None"""
		with self._lock:
			return self._records.get(key)

	def put(self, record:InvariantRecord):
		"""Append `record` unless an equal record is already stored"""
		with self._lock:
			if self._records.get(record.key) == record:
				return
			self.path.parent.mkdir(parents=True, exist_ok=True)
			if self._truncate_to is not None:
				with open(self.path, "r+b") as handle:
					handle.truncate(self._truncate_to)
				logger.debug("Cut the truncated tail off %s at byte %d", self.path, self._truncate_to)
				self._truncate_to = None
			with open(self.path, "a") as handle:
				if self._needs_newline:
					handle.write("\n")
					self._needs_newline = False
				handle.write(record.to_line() + "\n")
			self._records[record.key] = record

	def __len__(self) -> int:
		with self._lock:
			return len(self._records)

	def __contains__(self, key:CanonicalKey) -> bool:
		with self._lock:
			return key in self._records


def cache_get(cache:InvariantCache, key:CanonicalKey) -> typing.Optional[InvariantRecord]:
	return cache.get(key)

def cache_put(cache:InvariantCache, key:CanonicalKey, record:InvariantRecord):
	if record.key != key:
		raise ValueError(f"Record for {record.key} stored under {key}")
	cache.put(record)
