import itertools

import pytest

from homlab.errors import InvalidVertex, SelfLoop, WitnessNotFound
from homlab.families import complete_graph, cycle
from homlab.numtheory import first_primes_in_class
from homlab.rado import (
    BitOracle,
    ExtensionQuery,
    FiniteGraphOracle,
    PrimeOracle,
    back_and_forth,
    common_neighbour_check,
    extension_witness,
    prime_graph_adjacent,
    rado_adjacent,
    verify_partial_isomorphism,
)


class TestBitAdjacency:
    def test_paper_small_cases(self):
        assert rado_adjacent(0, 1)
        assert not rado_adjacent(0, 2)
        assert rado_adjacent(1, 2)

    def test_symmetric(self):
        for x, y in itertools.combinations(range(40), 2):
            assert rado_adjacent(x, y) == rado_adjacent(y, x)

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoop):
            rado_adjacent(3, 3)


class TestPrimeAdjacency:
    def test_known_pairs(self):
        assert prime_graph_adjacent(5, 29)  # 29 = 4 mod 5, a square
        assert not prime_graph_adjacent(5, 13)  # 13 = 3 mod 5, not a square

    def test_rejects_wrong_class(self):
        with pytest.raises(InvalidVertex):
            prime_graph_adjacent(5, 7)  # 7 = 3 mod 4
        with pytest.raises(InvalidVertex):
            prime_graph_adjacent(5, 9)  # not prime

    def test_reciprocity_sample(self):
        ps = first_primes_in_class(60, 1, 4)
        for p, q in itertools.combinations(ps, 2):
            assert prime_graph_adjacent(p, q) == prime_graph_adjacent(q, p)


class TestExtensionWitness:
    def test_example_query(self):
        z = extension_witness(
            BitOracle(), ExtensionQuery(frozenset({0, 2}), frozenset({1}), 1 << 11)
        )
        assert z == 5  # 101 in binary: sees 0 and 2, misses 1

    def test_vacuous_query(self):
        assert extension_witness(
            BitOracle(), ExtensionQuery(frozenset(), frozenset(), 10)
        ) == 0

    @pytest.mark.parametrize("mask", range(0, 3**6, 7))
    def test_patterns_over_small_window(self, mask):
        targets, avoid = set(), set()
        m = mask
        for v in range(6):
            m, r = divmod(m, 3)
            if r == 1:
                targets.add(v)
            elif r == 2:
                avoid.add(v)
        oracle = BitOracle()
        z = extension_witness(
            oracle, ExtensionQuery(frozenset(targets), frozenset(avoid), 1 << 7)
        )
        assert z is not None
        assert all(oracle.adjacent(z, u) for u in targets)
        assert not any(oracle.adjacent(z, v) for v in avoid)

    def test_witness_is_least(self):
        oracle = BitOracle()
        q = ExtensionQuery(frozenset({1}), frozenset(), 100)
        z = q and extension_witness(oracle, q)
        for smaller in range(z):
            if smaller == 1:
                continue
            assert not (
                oracle.adjacent(smaller, 1)
            ) or smaller in q.targets | q.avoid


class TestBackAndForth:
    def test_bit_to_bit_is_identity_segment(self):
        phi = back_and_forth(BitOracle(), BitOracle(), 10, 1 << 20)
        assert phi.pairs == tuple((i, i) for i in range(10))
        assert verify_partial_isomorphism(phi, BitOracle(), BitOracle())

    def test_bit_to_prime_partial_map_verifies(self):
        bit, prime = BitOracle(), PrimeOracle()
        try:
            phi = back_and_forth(bit, prime, 12, 10**6)
        except WitnessNotFound as err:
            phi = err.partial
            assert len(phi.pairs) >= 5
        assert verify_partial_isomorphism(phi, bit, prime)

    def test_finite_cycle_fails_within_bound(self):
        with pytest.raises(WitnessNotFound) as err:
            back_and_forth(BitOracle(), FiniteGraphOracle(cycle(5)), 10, 10**6)
        assert err.value.partial is not None

    def test_covers_initial_segments(self):
        phi = back_and_forth(BitOracle(), BitOracle(), 8, 1 << 20)
        domain = {a for a, _ in phi.pairs}
        image = {b for _, b in phi.pairs}
        assert set(range(4)) <= domain
        assert set(range(4)) <= image


class TestCommonNeighbours:
    def test_bit_oracle_window(self):
        report = common_neighbour_check(BitOracle(), 3, 8, 1 << 11)
        assert report.all_found

    def test_k5_full_set_fails(self):
        report = common_neighbour_check(
            FiniteGraphOracle(complete_graph(5)), 5, 5, 100
        )
        full = [r for r in report.results if len(r[0]) == 5]
        assert full and full[0][1] is None
        assert not report.all_found

    def test_k5_four_subsets_succeed(self):
        report = common_neighbour_check(
            FiniteGraphOracle(complete_graph(5)), 4, 5, 100
        )
        assert report.all_found
