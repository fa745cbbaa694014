import itertools
import random

import pytest

from homlab.core import FiniteGraph, automorphisms, induced_substructure
from homlab.enumeration import all_graphs_up_to
from homlab.families import (
    complete_graph,
    complete_multipartite,
    cycle,
    disjoint_union,
    empty_graph,
    path,
    petersen,
    rook_l_k33,
    union_of_cliques,
)
from homlab.homogeneity import (
    _pattern_class_table,
    _subset_mask,
    four_subset_census,
    gardiner_classify,
    is_homogeneous,
    is_t_homogeneous,
    is_t_tuple_regular,
    schlafli_graph,
    spectral_signature,
)

K3_PLUS_K2 = disjoint_union(cycle(3), complete_graph(2))


class TestTupleRegularity:
    def test_c5_strongly_regular(self):
        assert is_t_tuple_regular(cycle(5), 2).holds

    def test_p3_degree_witness(self):
        rep = is_t_tuple_regular(path(3), 1)
        assert not rep.holds
        assert rep.witness == ((0,), (1,))
        assert rep.counts == (1, 2)

    def test_c5_five_tuple_regular(self):
        for t in range(1, 6):
            assert is_t_tuple_regular(cycle(5), t).holds

    def test_witness_verifies(self):
        rng = random.Random(3)
        found = 0
        while found < 5:
            n = rng.randint(4, 7)
            edges = [
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if rng.random() < 0.5
            ]
            g = FiniteGraph.from_edges(n, edges)
            rep = is_t_tuple_regular(g, 2)
            if rep.holds:
                continue
            found += 1
            a, b = rep.witness
            # same induced subgraph under the positional map, differing counts
            assert induced_substructure(g, a) == induced_substructure(g, b)
            assert g.common_neighbours(a) == rep.counts[0]
            assert g.common_neighbours(b) == rep.counts[1]
            assert rep.counts[0] != rep.counts[1]

    def test_homogeneity_implies_regularity(self):
        for g in [cycle(5), union_of_cliques(2, 3), complete_multipartite(2, 2)]:
            assert is_homogeneous(g)[0]
            for t in range(1, min(5, g.n) + 1):
                assert is_t_tuple_regular(g, t).holds


class TestTHomogeneity:
    def test_p3_not_vertex_transitive(self):
        ok, witness = is_t_homogeneous(path(3), 1)
        assert not ok
        assert witness.pairs == ((0, 1),)

    def test_l_k33_4_homogeneous(self):
        ok, _ = is_t_homogeneous(rook_l_k33(), 4)
        assert ok

    def test_implies_tuple_regularity(self):
        rng = random.Random(17)
        for _ in range(20):
            n = rng.randint(3, 7)
            edges = [
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if rng.random() < 0.5
            ]
            g = FiniteGraph.from_edges(n, edges)
            for t in (1, 2, 3):
                if is_t_homogeneous(g, t)[0]:
                    assert is_t_tuple_regular(g, t).holds


class TestIsHomogeneous:
    @pytest.mark.parametrize(
        "g",
        [
            cycle(5),
            union_of_cliques(2, 3),
            union_of_cliques(3, 2),
            complete_multipartite(3, 3, 3),
            rook_l_k33(),
            complete_graph(6),
            empty_graph(5),
        ],
    )
    def test_known_homogeneous(self, g):
        ok, witness = is_homogeneous(g)
        assert ok and witness is None

    def test_k3_plus_k2_fails(self):
        ok, witness = is_homogeneous(K3_PLUS_K2)
        assert not ok
        # witness maps a triangle vertex to an edge vertex; no automorphism
        # can extend it
        m = witness.as_dict()
        for perm in itertools.permutations(range(5)):
            if K3_PLUS_K2.relabel(perm) == K3_PLUS_K2:
                assert any(perm[a] != b for a, b in m.items())

    def test_petersen_fails(self):
        assert not is_homogeneous(petersen())[0]

    def test_complement_invariance(self):
        for g in all_graphs_up_to(8):
            assert is_homogeneous(g)[0] == is_homogeneous(g.complement())[0]

    def test_witness_is_induced_isomorphism(self):
        rng = random.Random(23)
        for _ in range(30):
            n = rng.randint(2, 7)
            edges = [
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if rng.random() < 0.5
            ]
            g = FiniteGraph.from_edges(n, edges)
            ok, witness = is_homogeneous(g)
            if ok:
                continue
            assert witness.verifies_on(g, g)


class TestGardiner:
    def test_3k2(self):
        verdict = gardiner_classify(union_of_cliques(3, 2))
        assert verdict.family == "mKn"
        assert verdict.params == (3, 2)

    def test_k333(self):
        verdict = gardiner_classify(complete_multipartite(3, 3, 3))
        assert verdict.family == "complete-multipartite"

    def test_c5(self):
        assert gardiner_classify(cycle(5).relabel([2, 0, 4, 1, 3])).family == "C5"

    def test_l_k33(self):
        assert gardiner_classify(rook_l_k33()).family == "L(K33)"

    def test_petersen_not_homogeneous(self):
        verdict = gardiner_classify(petersen())
        assert verdict.family == "not-homogeneous"
        assert verdict.witness is not None

    def test_families_match_is_homogeneous_up_to_six(self):
        for g in all_graphs_up_to(6):
            verdict = gardiner_classify(g)
            assert (verdict.family != "not-homogeneous") == is_homogeneous(g)[0]


class TestSpectralSignature:
    def test_empty_graph(self):
        sig = spectral_signature(empty_graph(4))
        assert sig.coefficients == (1, 0, 0, 0, 0)

    def test_k3(self):
        assert spectral_signature(cycle(3)).coefficients == (1, 0, -3, -2)

    def test_classic_cospectral_pair(self):
        star = disjoint_union(complete_multipartite(1, 4), empty_graph(1))
        c4 = disjoint_union(cycle(4), empty_graph(2))
        a = spectral_signature(star)
        b = spectral_signature(c4)
        assert a == b
        assert a.coefficients == (1, 0, -4, 0, 0, 0, 0)

    def test_trace_term_zero(self):
        rng = random.Random(8)
        for _ in range(10):
            n = rng.randint(1, 9)
            edges = [
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if rng.random() < 0.5
            ]
            sig = spectral_signature(FiniteGraph.from_edges(n, edges))
            assert sig.coefficients[0] == 1
            assert sig.coefficients[1] == 0

    def test_matches_float_eigenvalues(self):
        import numpy as np

        g = petersen()
        coeffs = spectral_signature(g).coefficients
        mat = np.array(
            [[1 if g.adjacent(i, j) else 0 for j in range(g.n)] for i in range(g.n)],
            dtype=float,
        )
        np_coeffs = np.poly(np.linalg.eigvalsh(mat))
        assert np.allclose(np_coeffs, np.array(coeffs, dtype=float), atol=1e-6)


@pytest.fixture(scope="module")
def schlafli():
    return schlafli_graph()


class TestSchlafli:

    def test_ten_regular(self, schlafli):
        assert set(schlafli.degrees()) == {10}

    def test_srg_parameters(self, schlafli):
        for u in range(27):
            for v in range(u + 1, 27):
                common = schlafli.common_neighbours((u, v))
                assert common == (1 if schlafli.adjacent(u, v) else 5)

    def test_missing_four_vertex_types(self, schlafli):
        counts, _ = four_subset_census(schlafli)
        table = _pattern_class_table(4)
        k4 = complete_graph(4)
        k3_k1 = disjoint_union(cycle(3), empty_graph(1))
        k4_minus_e = complete_multipartite(1, 1, 2)
        forbidden = {
            table[_subset_mask(g, (0, 1, 2, 3))] for g in (k4, k3_k1, k4_minus_e)
        }
        assert len(forbidden) == 3
        realized = set(counts)
        assert realized == set(range(11)) - forbidden
