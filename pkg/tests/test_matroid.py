import fractions, itertools, time
import pytest
from hypothesis import given, settings, strategies as st
from matroidlib import EmptyBases, UnequalBasisSizes, ExchangeAxiomViolated, NotAFlat, HasLoops, EmptyMatrix, ParseError, TooLarge, list_to_bits
from matroidlib.matroid import (
	Matroid, CanonicalKey, uniform, boolean, localization, contraction, restriction, deletion, direct_sum,
	simplify, connected_components, is_connected, relabel, canonical_key, canonical_form, is_isomorphic, revlex_subsets,
	matroid_from_matrix, matroid_from_graph,
)
from matroidlib import catalog
from conftest import bases, SMALL, small_matroids, U11, U12, U23, U24, U34, B2, EMPTY

S = list_to_bits

LOOP = Matroid(1, frozenset({0}))


# Construction

def test_from_bases_examples():
	assert bases(1, (0,)) == U11
	assert bases(3, (0,1), (0,2), (1,2)) == U23
	assert U23.rank == 2

def test_unequal_sizes_rejected_before_exchange():
	with pytest.raises(UnequalBasisSizes) as raised:
		bases(2, (0,), (0,1))
	assert isinstance(raised.value, ExchangeAxiomViolated)

def test_exchange_witness():
	with pytest.raises(ExchangeAxiomViolated) as raised:
		bases(4, (0,1), (2,3))
	b1, b2, e = raised.value.witness
	assert {b1, b2} == {S([0,1]), S([2,3])}
	assert (b1 >> e) & 1 and not (b2 >> e) & 1

def test_empty_bases():
	with pytest.raises(EmptyBases):
		Matroid.from_bases(3, [])

def test_out_of_range_and_too_large():
	with pytest.raises(ValueError):
		bases(2, (0, 5))
	with pytest.raises(TooLarge):
		Matroid(17, frozenset({0}))

def test_uniform_counts():
	assert len(uniform(2, 4).bases) == 6
	assert len(uniform(0, 3).bases) == 1
	with pytest.raises(ValueError):
		uniform(3, 2)

def test_matrix():
	assert matroid_from_matrix([[1, 0, 1], [0, 1, 1]]) == U23
	assert matroid_from_matrix([["1/2", "0"], ["0", fractions.Fraction(3, 7)]]) == B2
	# second column is twice the first
	assert matroid_from_matrix([[1, 2], [3, 6]]) == U12
	assert matroid_from_matrix([[0, 0]]).loops == S([0, 1])
	with pytest.raises(EmptyMatrix):
		matroid_from_matrix([])
	with pytest.raises(EmptyMatrix):
		matroid_from_matrix([[1, 2], [3]])
	with pytest.raises(ParseError):
		matroid_from_matrix([["x"]])

def test_graph():
	assert matroid_from_graph([(0,1), (1,2), (0,2)]) == U23
	k4 = matroid_from_graph(list(itertools.combinations(range(4), 2)))
	assert k4.rank == 3
	assert len(k4.bases) == 16
	assert matroid_from_graph([(0,1), (0,1)]) == U12
	assert matroid_from_graph([("a", "a")]).loops == 1
	# an isolated vertex changes nothing
	assert matroid_from_graph([(0,1), (1,2), (0,2)], vertices=4) == U23


# Rank and closure

def test_rank_examples():
	assert U23.rank_of(S([0,1,2])) == 2
	assert U23.rank_of(0) == 0
	assert U12.rank_of(S([0,1])) == 1

def test_closure_examples():
	assert U23.closure(S([0])) == S([0])
	assert U12.closure(S([0])) == S([0,1])
	assert not U12.is_flat(S([0]))

def test_loops_and_coloops():
	assert U23.loops == 0 and U23.coloops == 0
	assert U11.coloops == 1
	loopy = bases(2, (0,))
	assert loopy.loops == S([1])
	with pytest.raises(HasLoops):
		loopy.require_loopless()

@settings(max_examples=60, deadline=None)
@given(small_matroids, st.data())
def test_rank_axioms(m, data):
	subset = st.integers(0, m.ground_set)
	s, t, u = data.draw(subset), data.draw(subset), data.draw(subset)
	union = s | t
	assert m.rank_of(s) <= m.rank_of(union) <= m.rank_of(s) + bin(union & ~s).count("1")
	assert m.rank_of(s | u) + m.rank_of(s & u) <= m.rank_of(s) + m.rank_of(u)

@settings(max_examples=60, deadline=None)
@given(small_matroids, st.data())
def test_closure_axioms(m, data):
	s = data.draw(st.integers(0, m.ground_set))
	t = data.draw(st.integers(0, m.ground_set))
	cl = m.closure(s)
	assert cl & s == s
	assert m.closure(cl) == cl
	assert m.closure(s) & ~m.closure(s | t) == 0


# Minors

def test_localization_examples():
	assert localization(U23, S([0])) == U11
	assert localization(U34, S([0,1])) == B2
	assert localization(U23, 0) == EMPTY

def test_contraction_examples():
	assert contraction(U23, S([0])) == U12
	assert contraction(U34, S([0])) == U23
	assert contraction(U23, U23.ground_set) == EMPTY
	with pytest.raises(NotAFlat):
		contraction(U12, S([0]))
	with pytest.raises(NotAFlat):
		localization(U12, S([1]))

def test_restriction_relabels_in_order():
	m = restriction(uniform(2, 5), S([1, 3, 4]))
	assert m == U23
	assert deletion(U34, S([3])) == boolean(3)
	assert deletion(U24, S([0])) == U23

@pytest.mark.parametrize("name", sorted(SMALL))
def test_contractions_of_flats_are_loopless(name):
	from matroidlib.lattice import build_lattice
	m = SMALL[name]
	for flat in build_lattice(m).flats:
		assert contraction(m, flat).is_loopless

def test_direct_sum_examples():
	assert direct_sum(U11, U11) == B2
	assert direct_sum(EMPTY, U23) == U23
	both = direct_sum(U11, U23)
	assert both.rank == 3
	assert len(both.bases) == 3

def test_simplify_examples():
	assert simplify(U12) == U11
	assert simplify(U23) == U23
	assert simplify(B2) == B2
	assert simplify(bases(3, (1,), (2,))) == U11
	assert U23.is_simple and not U12.is_simple

def test_parallel_classes():
	assert U12.parallel_classes() == [S([0,1])]
	assert direct_sum(U12, U11).parallel_classes() == [S([0,1]), S([2])]

def test_connected_components_examples():
	assert connected_components(B2) == [U11, U11]
	assert connected_components(U23) == [U23]
	assert connected_components(direct_sum(U11, U23)) == [U11, U23]
	assert connected_components(EMPTY) == []
	assert is_connected(U23) and not is_connected(B2)
	with pytest.raises(HasLoops):
		connected_components(bases(2, (0,)))

@settings(max_examples=40, deadline=None)
@given(small_matroids, small_matroids)
def test_components_recover_summands(m1, m2):
	parts = connected_components(direct_sum(m1, m2))
	expected = connected_components(m1) + connected_components(m2)
	assert sorted(canonical_key(p) for p in parts) == sorted(canonical_key(p) for p in expected)


# Canonical keys

def test_revlex_order():
	assert revlex_subsets(4, 2) == (S([0,1]), S([0,2]), S([1,2]), S([0,3]), S([1,3]), S([2,3]))

def test_key_examples(fano, nonfano):
	assert canonical_key(U23) == CanonicalKey(3, 2, "***")
	assert canonical_key(direct_sum(U11, U12)) == canonical_key(direct_sum(U12, U11))
	assert canonical_key(fano) != canonical_key(nonfano)
	assert str(canonical_key(B2)) == "2:2:*"
	assert CanonicalKey.from_str("3:2:***") == canonical_key(U23)

def test_key_orders_by_size_first():
	assert canonical_key(U11) < canonical_key(U23)

@pytest.mark.parametrize("name", ["U23", "U12+U12", "U11+U23", "K4", "C4", "U35"])
def test_key_invariant_under_relabeling(name):
	m = SMALL[name]
	key = canonical_key(m)

	@settings(max_examples=100, deadline=None)
	@given(st.permutations(range(m.n)))
	def check(perm):
		assert canonical_key(relabel(m, perm)) == key
	check()

@settings(max_examples=50, deadline=None)
@given(small_matroids)
def test_canonical_form_matches_key(m):
	form = canonical_form(m)
	key = canonical_key(m)
	assert key.to_matroid() == form
	assert canonical_key(form) == key
	assert is_isomorphic(form, m)

def test_isomorphic_sums_share_a_key():
	a = direct_sum(U12, boolean(1))
	b = direct_sum(boolean(1), U12)
	c = bases(3, (0,1), (0,2))
	assert canonical_key(a) == canonical_key(b) == canonical_key(c)
	assert canonical_key(uniform(1, 3)) != canonical_key(direct_sum(U12, LOOP))

def test_sums_are_keyed_by_components():
	assert canonical_form(direct_sum(U23, U11)) == direct_sum(U11, U23)
	assert canonical_form(direct_sum(LOOP, U11)) == direct_sum(U11, LOOP)
	assert str(canonical_key(direct_sum(LOOP, U11))) == "2:1:*0"
	assert canonical_key(direct_sum(LOOP, LOOP)) == CanonicalKey(2, 0, "*")

@pytest.mark.parametrize("pieces", [
	(uniform(2, 5), uniform(2, 5)),
	(U23, U23, U23),
	(U24, U24, U12),
	(catalog.graphic("K4"), U24),
])
def test_sums_of_isomorphic_pieces_are_fast(pieces):
	m = pieces[0]
	for piece in pieces[1:]:
		m = direct_sum(m, piece)
	shuffled = relabel(m, [(3*e + 1) % m.n for e in range(m.n)] if m.n % 3 else list(reversed(range(m.n))))
	started = time.perf_counter()
	key = canonical_key(m)
	assert canonical_key(shuffled) == key
	assert time.perf_counter() - started < 5
	assert canonical_form(shuffled) == canonical_form(m) == key.to_matroid()

def test_sums_of_different_pieces_differ():
	assert canonical_key(direct_sum(uniform(2, 5), uniform(2, 5))) != canonical_key(direct_sum(uniform(2, 5), uniform(3, 5)))
	assert canonical_key(direct_sum(U24, U24)) != canonical_key(direct_sum(U23, uniform(2, 5)))


# JSON

@pytest.mark.parametrize("name", sorted(SMALL))
def test_json_round_trip(name):
	m = SMALL[name]
	assert Matroid.from_json(m.to_json()) == m

def test_json_forms():
	assert Matroid.from_json({"uniform": [2, 4]}) == uniform(2, 4)
	assert Matroid.from_json({"graph": {"vertices": 3, "edges": [[0,1], [1,2], [0,2]]}}) == U23
	assert Matroid.from_json({"matrix": {"rows": [["1", "0", "1"], ["0", "1", "1"]]}}) == U23
	assert Matroid.from_json({"revlex": {"n": 3, "r": 2, "code": "***"}}) == U23
	assert U23.to_json() == {"n": 3, "bases": [[0,1], [0,2], [1,2]]}
	with pytest.raises(ParseError):
		Matroid.from_json({"nothing": 1})
	with pytest.raises(ParseError):
		Matroid.from_json([1, 2])

def test_builtins_are_valid_matroids(fano, vamos):
	for m in (fano, vamos, catalog.graphic("K5")):
		Matroid.from_bases(m.n, m.bases).check_exchange()
