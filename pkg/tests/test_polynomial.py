import fractions
import pytest
from hypothesis import given, strategies as st
from matroidlib import NonzeroRemainder, ParseError
from matroidlib.polynomial import IntPoly

polys = st.lists(st.integers(-50, 50), max_size=6).map(IntPoly)

def test_trailing_zeros_trimmed():
	assert IntPoly((1, 0, 0)).coeffs == (1,)
	assert IntPoly((0, 0)).is_zero
	assert IntPoly.zero().degree == -1
	assert IntPoly.monomial(3, 2).coeffs == (0, 0, 3)

def test_str():
	assert str(IntPoly((2, -3, 1))) == "t^2 - 3t + 2"
	assert str(IntPoly((-1, 0, 0, -1))) == "-t^3 - 1"
	assert str(IntPoly.zero()) == "0"
	assert str(IntPoly((0, 1))) == "t"

def test_arithmetic():
	t_minus_1 = IntPoly((-1, 1))
	t_minus_2 = IntPoly((-2, 1))
	assert t_minus_1 * t_minus_2 == IntPoly((2, -3, 1))
	assert t_minus_1 + t_minus_2 == IntPoly((-3, 2))
	assert t_minus_1 - t_minus_1 == IntPoly.zero()
	assert 3 * t_minus_1 == IntPoly((-3, 3))
	assert t_minus_1.shift(2) == IntPoly((0, 0, -1, 1))

def test_exact_evaluation():
	chi = IntPoly((2, -3, 1))
	assert chi(fractions.Fraction(1, 2)) == fractions.Fraction(3, 4)
	assert chi(2) == 0
	assert chi(1) == 0
	assert IntPoly.zero()(5) == 0

def test_divide_linear():
	assert IntPoly((2, -3, 1)).divide_linear(1) == IntPoly((-2, 1))
	assert IntPoly((-1, 1)).divide_linear(1) == IntPoly.one()
	with pytest.raises(NonzeroRemainder):
		IntPoly((1, 0, 1)).divide_linear(1)

def test_reversed():
	assert IntPoly((-1, 1)).reversed(1) == IntPoly((1, -1))
	assert IntPoly((1, 2)).reversed(3) == IntPoly((0, 0, 2, 1))
	assert IntPoly.one().reversed(0) == IntPoly.one()
	with pytest.raises(ValueError):
		IntPoly((1, 2, 3)).reversed(1)

def test_json_large_coefficients():
	big = IntPoly((1, 2**60, -(2**70)))
	data = big.to_json()
	assert data == [1, str(2**60), str(-(2**70))]
	assert IntPoly.from_json(data) == big
	assert IntPoly.from_json([1, "2"]) == IntPoly((1, 2))
	with pytest.raises(ParseError):
		IntPoly.from_json([True])

@given(polys, polys, st.integers(-5, 5))
def test_evaluation_is_a_ring_homomorphism(p, q, x):
	assert (p * q)(x) == p(x) * q(x)
	assert (p + q)(x) == p(x) + q(x)

@given(polys, st.integers(-3, 3))
def test_divide_after_multiply(p, root):
	assert (p * IntPoly((-root, 1))).divide_linear(root) == p
