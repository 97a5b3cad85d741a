"""Euler obstructions, the constants c_M, microlocal multiplicities and Chern-Mather data

Most invariants here are available by more than one route: a closed formula in χ_M
and one or two recursions over the lattice of flats. The routes are implemented
independently of each other so that `matroidlib.sweep` can check they agree.

Flat-indexed results (`EulerObstructionFunction`, `MultiplicityFunction`,
`CMCoefficients`) are plain dicts from flat bitset to integer.
"""

import dataclasses, typing, fractions, logging
from matroidlib import EmptyMatroid, NonIntegerResult, ProofIdentityViolated, KOutOfRange, bits_to_list
from matroidlib.matroid import Matroid, Subset, localization, contraction, canonical_key, simplify, uniform
from matroidlib.lattice import FlatLattice, FlagOfFlats, build_lattice, char_poly, reduced_char_poly, beta
from matroidlib.memo import MemoStore, default_store
from matroidlib.polynomial import IntPoly
from matroidlib.kl import kl_poly

logger = logging.getLogger(__name__)

EulerObstructionFunction = dict[Subset,int]
"""Flat F to Eu_{M_F}, the Euler obstruction on the stratum of F"""

MultiplicityFunction = dict[Subset,int]
"""Flat F to m_M(F), the multiplicity of the conormal cycle of the stratum of F"""

CMCoefficients = dict[Subset,int]
"""Flat F to the coefficient of y_F in the Chern-Mather class"""

HALF = fractions.Fraction(1, 2)


def _exact(value:fractions.Fraction, what:str) -> int:
	value = fractions.Fraction(value)
	if value.denominator != 1:
		raise NonIntegerResult(f"{what} came out as {value}")
	return value.numerator

def _sign(k:int) -> int:
	return -1 if k % 2 else 1


# c_M

def c_closed(m:Matroid) -> int:
	"""c_M = -2^{rk M} χ_M(1/2)"""
	m.require_loopless()
	return _exact(-(2**m.rank) * char_poly(m)(HALF), f"c of {m}")

def c_flag_sum(m:Matroid) -> int:
	"""c_M = (-1)^{d-1} Σ over descending flags of the flag beta product"""
	m.require_loopless()
	if m.rank == 0:
		raise EmptyMatroid("Descending flags need rank at least 1")
	lattice = build_lattice(m)
	total = sum(lattice.flag_beta_product(flag) for flag in lattice.descending_flags())
	return _sign(m.rank - 1) * total

def c_recursive(m:Matroid, store:MemoStore=None) -> int:
	"""c_M = (-1)^{d-1} β(M) + Σ_{0 ∉ F ≠ ∅} (-1)^{cork F} c_{M^F} β(M_F), with c_∅ = -1"""
	m.require_loopless()
	if m.n == 0:
		return -1
	table = (store or default_store()).table("c")
	return table.get_or_compute(canonical_key(m), lambda: _c_recursive(m, store))

def _c_recursive(m:Matroid, store:MemoStore) -> int:
	lattice = build_lattice(m)
	total = _sign(m.rank - 1) * lattice.interval_beta(0, lattice.top)
	for flat in lattice.flats[1:]:
		if flat & 1:
			continue
		term = lattice.interval_beta(flat, lattice.top)
		if term:
			total += _sign(lattice.corank(flat)) * c_recursive(localization(m, flat), store) * term
	return total


# Eu_M

def eu_closed(m:Matroid) -> int:
	"""Eu_M = χ_M(2)"""
	m.require_loopless()
	return char_poly(m)(2)

def eu_recursive(m:Matroid, store:MemoStore=None) -> int:
	"""Eu_M = Σ_{F ≠ ∅} c_{M^F} Eu_{M_F}, with Eu_∅ = 1"""
	m.require_loopless()
	if m.n == 0:
		return 1
	table = (store or default_store()).table("eu")
	return table.get_or_compute(canonical_key(m), lambda: _eu_recursive(m, store))

def _eu_recursive(m:Matroid, store:MemoStore) -> int:
	lattice = build_lattice(m)
	return sum(c_closed(localization(m, flat)) * eu_recursive(contraction(m, flat), store) for flat in lattice.flats[1:])

def eu_function(m:Matroid) -> EulerObstructionFunction:
	"""F to Eu_{M_F} = χ_{M_F}(2), read off the upper intervals of the lattice"""
	lattice = build_lattice(m)
	return {flat: lattice.upper_char_poly(flat)(2) for flat in lattice.flats}

def eu_everywhere_positive(m:Matroid) -> bool:
	return all(value > 0 for value in eu_function(m).values())

def is_boolean(m:Matroid) -> bool:
	"""Single basis equal to the whole ground set"""
	m.require_loopless()
	return m.is_boolean


# m_M

def m_closed(m:Matroid, store:MemoStore=None) -> int:
	"""m_M = (-1)^d Σ_F 2^{rk F} χ_{M^F}(1/2) P_{M_F}(1)"""
	lattice = build_lattice(m)
	total = fractions.Fraction(0)
	for flat, rk in zip(lattice.flats, lattice.ranks):
		weight = 2**rk * lattice.lower_char_poly(flat)(HALF)
		total += weight * kl_poly(contraction(m, flat), store)(1)
	return _sign(m.rank) * _exact(total, f"m of {m}")

def ic_stalk_function(m:Matroid, store:MemoStore=None) -> dict[Subset,int]:
	"""G to (-1)^{rk M} P_{M_G}(1), the right-hand side of the defining system"""
	lattice = build_lattice(m)
	sign = _sign(m.rank)
	return {flat: sign * kl_poly(contraction(m, flat), store)(1) for flat in lattice.flats}

def _system_sum(lattice:FlatLattice, lower:Subset, mfunc:MultiplicityFunction, strict:bool) -> int:
	# Σ_{F ≥ lower} m(F) (-1)^{rk F} Eu_{M^F_lower}
	total = 0
	i = lattice.position(lower)
	for j in lattice.above[i] if strict else (i,) + lattice.above[i]:
		upper = lattice.flats[j]
		if mfunc[upper]:
			total += mfunc[upper] * _sign(lattice.ranks[j]) * lattice.interval_char_poly(lower, upper)(2)
	return total

def m_linear_system(m:Matroid, store:MemoStore=None) -> MultiplicityFunction:
	"""Solve Σ_{F ≥ G} m(F) (-1)^{rk F} Eu_{M^F_G} = (-1)^{rk M} P_{M_G}(1) from the top flat down"""
	lattice = build_lattice(m)
	stalks = ic_stalk_function(m, store)
	solution = {}
	for i in range(len(lattice) - 1, -1, -1):
		flat = lattice.flats[i]
		rest = _system_sum(lattice, flat, solution, strict=True)
		solution[flat] = _sign(lattice.ranks[i]) * (stalks[flat] - rest)
	return {flat: solution[flat] for flat in lattice.flats}

def m_residual(m:Matroid, mfunc:MultiplicityFunction, store:MemoStore=None) -> dict[Subset,int]:
	"""Left minus right side of the defining system at every flat"""
	lattice = build_lattice(m)
	stalks = ic_stalk_function(m, store)
	return {flat: _system_sum(lattice, flat, mfunc, strict=False) - stalks[flat] for flat in lattice.flats}

def cc_irreducible(m:Matroid, store:MemoStore=None) -> bool:
	"""The characteristic cycle is the single conormal of the open stratum"""
	lattice = build_lattice(m)
	mfunc = m_linear_system(m, store)
	return all(value == 0 for flat, value in mfunc.items() if flat != lattice.top)


# Chern-Mather and CSM

def schubert_csm_coeffs(m:Matroid) -> dict[Subset,int]:
	"""Coefficients of the CSM class of the Schubert variety: 1 on every y_F"""
	return {flat: 1 for flat in build_lattice(m).flats}

def chern_mather_coeffs(m:Matroid) -> CMCoefficients:
	"""F to 2^{cork F}, checked against the Eu-weighted push of the CSM coefficients"""
	lattice = build_lattice(m)
	eu = eu_function(m)
	csm = schubert_csm_coeffs(m)
	coeffs = {}
	for i, flat in enumerate(lattice.flats):
		expected = 2**(lattice.rank - lattice.ranks[i])
		pushed = sum(eu[lattice.flats[j]] * csm[lattice.flats[j]] for j in (i,) + lattice.above[i])
		if pushed != expected:
			raise ProofIdentityViolated(f"Σ Eu above {bits_to_list(flat)} is {pushed}, expected {expected}")
		coeffs[flat] = expected
	return coeffs


@dataclasses.dataclass(frozen=True)
class CSMWeightTable:
	"""Weights of the k-dimensional cones of the CSM cycle"""

	k:int
	"""Number of flats in each flag"""

	weights:dict[FlagOfFlats,int]
	"""(-1)^{d-1-k} times the flag beta product, for every k-step flag"""

	def to_json(self) -> dict:
		return {"k": self.k, "weights": {flag.to_str(): w for flag, w in self.weights.items()}}

def csm_weights(m:Matroid, k:int) -> CSMWeightTable:
	lattice = build_lattice(m)
	if not 0 <= k < lattice.rank:
		raise KOutOfRange(f"k must lie in 0..{lattice.rank - 1}, got {k}")
	sign = _sign(lattice.rank - 1 - k)
	return CSMWeightTable(k, {flag: sign * lattice.flag_beta_product(flag) for flag in lattice.flags(k)})

def csm_degrees(m:Matroid) -> list[int]:
	"""For each j, the total weight of the descending j-step flags"""
	lattice = build_lattice(m)
	d = lattice.rank
	degrees = [0]*d
	for flag in lattice.descending_flags():
		degrees[len(flag)] += lattice.flag_beta_product(flag)
	return [_sign(d - 1 - j) * value for j, value in enumerate(degrees)]

def c_from_csm(m:Matroid) -> int:
	"""c_M as the alternating sum of the CSM degrees"""
	m.require_loopless()
	if m.rank == 0:
		raise EmptyMatroid("The CSM cycle needs rank at least 1")
	return sum(_sign(j) * value for j, value in enumerate(csm_degrees(m)))


# Lattice identities

def check_identity_A(m:Matroid) -> bool:
	"""χ̄_M(t) = Σ_{0 ∉ F} χ_{M^F}(t) (-t)^{rk M_F - 1} β(M_F)"""
	m.require_loopless()
	if m.n == 0:
		raise EmptyMatroid("The reduced characteristic polynomial needs a nonempty matroid")
	lattice = build_lattice(m)
	rhs = IntPoly.zero()
	for flat in lattice.flats:
		if flat & 1:
			continue
		corank = lattice.corank(flat)
		if corank < 1:
			raise ProofIdentityViolated(f"Flat {bits_to_list(flat)} avoids 0 but has corank {corank}")
		term = lattice.interval_beta(flat, lattice.top)
		if term:
			rhs += lattice.lower_char_poly(flat) * IntPoly.monomial(_sign(corank - 1) * term, corank - 1)
	return reduced_char_poly(m) == rhs

def check_identity_B(m:Matroid) -> bool:
	"""Σ_F t^{rk F} χ_{M^F}(1/t) χ_{M_F}(t) = 0"""
	m.require_loopless()
	if m.n == 0:
		raise EmptyMatroid("The convolution identity needs a nonempty matroid")
	lattice = build_lattice(m)
	total = IntPoly.zero()
	for flat, rk in zip(lattice.flats, lattice.ranks):
		total += lattice.lower_char_poly(flat).reversed(rk) * lattice.upper_char_poly(flat)
	return total.is_zero


def rank_two_uniform_eu(k:int) -> tuple[int,int,int]:
	"""χ_{U_{2,k}}(2) next to the two candidate closed forms 2 - k and 3 - k"""
	if k < 2:
		raise ValueError(f"U_(2,k) needs k >= 2, got {k}")
	return eu_closed(uniform(2, k)), 2 - k, 3 - k


INVARIANTS = ("charpoly", "beta", "kl", "eu", "c", "m", "cm", "csm")
"""Names accepted by `profile`"""

def profile(m:Matroid, which:typing.Iterable[str]=INVARIANTS, store:MemoStore=None) -> dict[str,typing.Any]:
	"""The requested invariants of a loopless matroid, keyed by `InvariantRecord` field name"""
	m.require_loopless()
	which = set(which)
	unknown = which - set(INVARIANTS)
	if unknown:
		raise ValueError(f"Unknown invariants {sorted(unknown)}; choose from {list(INVARIANTS)}")

	out:dict[str,typing.Any] = {}
	if "charpoly" in which:
		out["char_poly"] = char_poly(m)
	if "beta" in which and m.n:
		out["beta"] = beta(m)
	if "kl" in which:
		out["kl_poly"] = kl_poly(m, store)
	if "eu" in which:
		out["eu_function"] = eu_function(m)
	if "c" in which:
		out["c"] = c_closed(m)
	if "m" in which:
		out["m_function"] = m_linear_system(m, store)
		out["m"] = out["m_function"][0]
	if "cm" in which:
		out["cm_coeffs"] = chern_mather_coeffs(m)
	if "csm" in which and m.rank:
		out["csm_degrees"] = csm_degrees(m)

	flags = {
		"hasColoop": bool(m.coloops),
		"simplificationHasColoop": bool(simplify(m).coloops),
	}
	if "eu_function" in out:
		flags["euEverywherePositive"] = all(v > 0 for v in out["eu_function"].values())
	if "m_function" in out:
		top = build_lattice(m).top
		flags["ccIrreducible"] = all(v == 0 for f, v in out["m_function"].items() if f != top)
	out["flags"] = flags
	return out
