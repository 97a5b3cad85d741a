"""`IntPoly`: dense univariate polynomials with integer coefficients

Coefficients are stored degree-ascending, so ``IntPoly((2, -3, 1))`` is ``t^2 - 3t + 2``.
Evaluation is exact at any `fractions.Fraction`.
"""

import dataclasses, typing, fractions
from matroidlib import NonzeroRemainder, json_to_int, int_to_json

Number = typing.Union[int, fractions.Fraction]

def _trim(coeffs:typing.Iterable[int]) -> tuple[int,...]:
	out = list(coeffs)
	while out and out[-1] == 0:
		out.pop()
	return tuple(out)

@dataclasses.dataclass(frozen=True)
class IntPoly:
	"""A polynomial in one variable with arbitrary-precision integer coefficients"""

	coeffs:tuple[int,...] = ()
	"""Coefficients by ascending degree, no trailing zeros (the zero polynomial is empty)"""

	def __post_init__(self):
		object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

	@classmethod
	def monomial(cls, coeff:int, degree:int) -> "IntPoly":
		"""``coeff * t^degree``"""
		return cls((0,)*degree + (coeff,))

	@classmethod
	def one(cls) -> "IntPoly":
		return cls((1,))

	@classmethod
	def zero(cls) -> "IntPoly":
		return cls(())

	@property
	def degree(self) -> int:
		"""Degree, -1 for the zero polynomial"""
		return len(self.coeffs) - 1

	@property
	def is_zero(self) -> bool:
		return not self.coeffs

	def coeff(self, degree:int) -> int:
		"""Coefficient of ``t^degree`` (0 outside the stored range)"""
		return self.coeffs[degree] if 0 <= degree < len(self.coeffs) else 0

	def __add__(self, other:"IntPoly") -> "IntPoly":
		if not isinstance(other, IntPoly):
			return NotImplemented
		longer, shorter = (self.coeffs, other.coeffs) if len(self.coeffs) >= len(other.coeffs) else (other.coeffs, self.coeffs)
		out = list(longer)
		for i, c in enumerate(shorter):
			out[i] += c
		return IntPoly(out)

	def __neg__(self) -> "IntPoly":
		return IntPoly(-c for c in self.coeffs)

	def __sub__(self, other:"IntPoly") -> "IntPoly":
		if not isinstance(other, IntPoly):
			return NotImplemented
		return self + (-other)

	def __mul__(self, other:typing.Union["IntPoly",int]) -> "IntPoly":
		if isinstance(other, int):
			return IntPoly(c*other for c in self.coeffs)
		if not isinstance(other, IntPoly):
			return NotImplemented
		if self.is_zero or other.is_zero:
			return IntPoly.zero()
		out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
		for i, a in enumerate(self.coeffs):
			if a:
				for j, b in enumerate(other.coeffs):
					out[i+j] += a*b
		return IntPoly(out)

	__rmul__ = __mul__

	def shift(self, k:int) -> "IntPoly":
		"""Multiply by ``t^k``"""
		return IntPoly((0,)*k + self.coeffs) if self.coeffs else self

	def reversed(self, degree:int) -> "IntPoly":
		"""``t^degree * p(1/t)``; `degree` must be at least the degree of p"""
		if degree < self.degree:
			raise ValueError(f"Cannot reverse a degree {self.degree} polynomial at degree {degree}")
		padded = self.coeffs + (0,)*(degree + 1 - len(self.coeffs))
		return IntPoly(reversed(padded))

	def __call__(self, x:Number) -> Number:
		"""Exact evaluation by Horner's rule"""
		acc = 0
		for c in reversed(self.coeffs):
			acc = acc*x + c
		return acc

	def divide_linear(self, root:int) -> "IntPoly":
		"""Exact quotient by ``(t - root)``; raises `NonzeroRemainder` otherwise"""
		if self.is_zero:
			return self
		quotient = [0] * (len(self.coeffs) - 1)
		carry = 0
		for i in range(len(self.coeffs) - 1, 0, -1):
			carry = self.coeffs[i] + carry*root
			quotient[i-1] = carry
		remainder = self.coeffs[0] + carry*root
		if remainder:
			raise NonzeroRemainder(f"{self} is not divisible by (t - {root}): remainder {remainder}")
		return IntPoly(quotient)

	def to_json(self) -> list:
		"""Degree-ascending coefficient list"""
		return [int_to_json(c) for c in self.coeffs]

	@classmethod
	def from_json(cls, data:list) -> "IntPoly":
		return cls(json_to_int(c) for c in data)

	def __str__(self) -> str:
		if self.is_zero:
			return "0"
		terms = []
		for d in range(self.degree, -1, -1):
			c = self.coeffs[d]
			if not c:
				continue
			mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
			mag = abs(c)
			body = f"{mag}{mono}" if (mag != 1 or not mono) else mono
			sign = "-" if c < 0 else "+"
			terms.append((sign, body))
		first_sign, first_body = terms[0]
		out = ("-" if first_sign == "-" else "") + first_body
		for sign, body in terms[1:]:
			out += f" {sign} {body}"
		return out
