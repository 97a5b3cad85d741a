"""Exact combinatorial invariants of loopless matroids

Shared helpers and types used across the package: subset bitsets, the exception
hierarchy, and the integer/flat encodings used by every ``to_json``.
"""

__all__ = ["polynomial","matroid","lattice","memo","kl","microlocal","catalog","record","sweep"]

import logging, typing

logging.getLogger(__name__).addHandler(logging.NullHandler())

MAX_GROUND_SET = 16
"""Widest ground set a `Matroid` may have; subsets are single-word bitsets"""

JSON_SAFE_INT = 2**53
"""Integers at or beyond this magnitude serialize as decimal strings"""


# Exceptions

class MatroidError(Exception):
	"""Base class for every error raised by matroidlib"""

class EmptyBases(MatroidError, ValueError):
	"""A basis family must contain at least one basis"""

class ExchangeAxiomViolated(MatroidError, ValueError):
	"""The basis family fails the basis-exchange axiom"""

	def __init__(self, message:str, witness:typing.Optional[tuple[int,int,int]]=None):
		super().__init__(message)
		self.witness = witness
		"""(B1, B2, e) with no f in B2 - B1 making B1 - e + f a basis"""

	@classmethod
	def for_witness(cls, b1:int, b2:int, e:int) -> "ExchangeAxiomViolated":
		return cls(f"No exchange for {e} between bases {bits_to_list(b1)} and {bits_to_list(b2)}", (b1, b2, e))

# Checked before the exchange axiom itself
class UnequalBasisSizes(ExchangeAxiomViolated):
	"""All bases of a matroid must have the same size"""

class NotAFlat(MatroidError, ValueError):
	"""The subset is not closed"""

class HasLoops(MatroidError, ValueError):
	"""Invariants are only defined for loopless matroids"""

class EmptyMatroid(MatroidError, ValueError):
	"""The invariant is undefined on the empty matroid"""

class NotComparable(MatroidError, ValueError):
	"""The two flats are not ordered by inclusion"""

class KOutOfRange(MatroidError, ValueError):
	"""CSM dimension index outside 0..rk M - 1"""

class EmptyMatrix(MatroidError, ValueError):
	"""A matrix with no rows, no columns or ragged rows"""

class UnknownName(MatroidError, LookupError):
	"""No such builtin in the catalog registry"""

class TooLarge(MatroidError, ValueError):
	"""The ground set is too large for the requested operation"""

class BadLength(MatroidError, ValueError):
	"""Revlex code length is not C(n, r)"""

class BadChar(MatroidError, ValueError):
	"""Revlex code uses a character outside {'*', '0'}"""

class ParseError(MatroidError, ValueError):
	"""Malformed matroid input"""

class NonzeroRemainder(MatroidError, ArithmeticError):
	"""Exact polynomial division left a remainder"""

class NonIntegerResult(MatroidError, ArithmeticError):
	"""An invariant that must be an integer came out fractional"""

class RecursionInconsistent(MatroidError, ArithmeticError):
	"""The Kazhdan-Lusztig recursion failed its low-degree check"""

class ProofIdentityViolated(MatroidError, ArithmeticError):
	"""A lattice identity that always holds came out false"""


# Bitsets

def bit(e:int) -> int:
	"""The singleton subset {e}"""
	return 1 << e

def popcount(mask:int) -> int:
	"""Number of elements in a subset"""
	return bin(mask).count("1")

def low_element(mask:int) -> int:
	"""Smallest element of a nonempty subset"""
	if not mask:
		raise ValueError("The empty set has no smallest element")
	return (mask & -mask).bit_length() - 1

def bits_to_list(mask:int) -> list[int]:
	"""Elements of a subset in ascending order"""
	out = []
	e = 0
	while mask:
		if mask & 1:
			out.append(e)
		mask >>= 1
		e += 1
	return out

def list_to_bits(elements:typing.Iterable[int]) -> int:
	"""Subset from an iterable of elements"""
	mask = 0
	for e in elements:
		if e < 0:
			raise ValueError(f"Negative element: {e}")
		mask |= 1 << e
	return mask

def compress(mask:int, support:int) -> int:
	"""Relabel the elements of `mask` that lie in `support` to 0..k-1, preserving order"""
	out = 0
	pos = 0
	e = 0
	while support >> e:
		if support >> e & 1:
			if mask >> e & 1:
				out |= 1 << pos
			pos += 1
		e += 1
	return out


# JSON encodings

def flat_to_str(mask:int) -> str:
	"""Serialize a subset as comma-joined ascending labels ("" for the empty set)"""
	return ",".join(str(e) for e in bits_to_list(mask))

def str_to_flat(text:str) -> int:
	"""Parse the output of `flat_to_str`"""
	return list_to_bits(int(x) for x in text.split(",")) if text else 0

def int_to_json(value:int) -> typing.Union[int,str]:
	"""Plain number when it is safe for every JSON consumer, decimal string otherwise"""
	return value if abs(value) < JSON_SAFE_INT else str(value)

def json_to_int(value:typing.Union[int,str]) -> int:
	"""Inverse of `int_to_json`"""
	if isinstance(value, bool):
		raise ParseError(f"Expected an integer, got {value!r}")
	try:
		return int(value)
	except (TypeError, ValueError) as e:
		raise ParseError(f"Expected an integer, got {value!r}") from e
