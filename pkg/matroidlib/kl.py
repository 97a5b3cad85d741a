"""Kazhdan-Lusztig polynomials of matroids

P_M is the unique family with P_∅ = 1, deg P_M < rk M / 2 for rk M ≥ 1, and

	t^{rk M} P_M(1/t) = Σ_{F ∈ L(M)} χ_{M^F}(t) P_{M_F}(t)

Moving the F = ∅ term to the left leaves t^d P(1/t) - P(t) = R(t), where R only
involves contractions of strictly smaller rank. The top half of R gives the
coefficients of P; the bottom half must be their negatives, which is checked.
"""

import logging
from matroidlib import RecursionInconsistent
from matroidlib.matroid import Matroid, contraction, canonical_key
from matroidlib.lattice import build_lattice
from matroidlib.memo import MemoStore, MemoTable, MemoStats, default_store
from matroidlib.polynomial import IntPoly

logger = logging.getLogger(__name__)

KLCache = MemoTable
"""Memo table from `CanonicalKey` to KL polynomial"""

TABLE = "kl"


def kl_cache(store:MemoStore=None) -> KLCache:
	return (store or default_store()).table(TABLE)

def kl_cache_stats(store:MemoStore=None) -> MemoStats:
	return kl_cache(store).stats


def kl_poly(m:Matroid, store:MemoStore=None) -> IntPoly:
	"""The Kazhdan-Lusztig polynomial of a loopless matroid"""
	m.require_loopless()
	if m.rank == 0:
		return IntPoly.one()
	return kl_cache(store).get_or_compute(canonical_key(m), lambda: _solve(m, store))

def _solve(m:Matroid, store:MemoStore) -> IntPoly:
	lattice = build_lattice(m)
	d = m.rank
	residue = IntPoly.zero()
	for flat in lattice.flats[1:]:
		residue += lattice.lower_char_poly(flat) * kl_poly(contraction(m, flat), store)

	half = (d + 1) // 2
	coeffs = [residue.coeff(d - i) for i in range(half)]
	for i in range(half):
		if residue.coeff(i) != -coeffs[i]:
			raise RecursionInconsistent(f"KL recursion for {m}: [t^{i}] of the residue is {residue.coeff(i)}, expected {-coeffs[i]}")
	if d % 2 == 0 and residue.coeff(d // 2):
		raise RecursionInconsistent(f"KL recursion for {m}: middle coefficient {residue.coeff(d // 2)} is not zero")
	if residue.degree > d:
		raise RecursionInconsistent(f"KL recursion for {m}: residue has degree {residue.degree} above rank {d}")
	return IntPoly(coeffs)

def kl_at_one(m:Matroid, store:MemoStore=None) -> int:
	"""P_M(1)"""
	return kl_poly(m, store)(1)

def kl_residual(m:Matroid, store:MemoStore=None) -> IntPoly:
	"""t^{rk M} P_M(1/t) - Σ_F χ_{M^F}(t) P_{M_F}(t); the zero polynomial for every loopless M"""
	lattice = build_lattice(m)
	total = kl_poly(m, store).reversed(m.rank)
	for flat in lattice.flats:
		total -= lattice.lower_char_poly(flat) * kl_poly(contraction(m, flat), store)
	return total
