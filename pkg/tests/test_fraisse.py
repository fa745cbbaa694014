import itertools

import pytest

from homlab.core import canonical_code, induced_substructure
from homlab.fraisse import (
    AmalgamationWitness,
    PredicateClass,
    age,
    check_ap,
    check_hereditary,
    check_jep,
    class_by_name,
    free_amalgam,
    graph_structure,
    is_embedding,
    limit_approximation,
    solve_amalgamation,
    structure_edges,
    verified_age_level,
)


def triangle():
    return graph_structure(3, [(0, 1), (1, 2), (0, 2)])


class TestHereditary:
    @pytest.mark.parametrize("name", ["k3free", "tournaments", "bipartite"])
    def test_builtin_kinds(self, name):
        ok, witness = check_hereditary(class_by_name(name), 5)
        assert ok and witness is None

    def test_even_edge_fixture_fails(self):
        even = PredicateClass(
            "even-edges", lambda s: len(structure_edges(s)) % 2 == 0
        )
        ok, witness = check_hereditary(even, 4)
        assert not ok
        member, verts, sub = witness
        assert even.membership(member)
        assert not even.membership(sub)
        assert induced_substructure(member, verts) == sub


class TestJep:
    @pytest.mark.parametrize(
        "name", ["all-graphs", "k3free", "linear-orders", "tournaments", "matchings"]
    )
    def test_builtin_kinds(self, name):
        ok, witness = check_jep(class_by_name(name), 4)
        assert ok and witness is None

    def test_joins_are_verified(self):
        cls = class_by_name("c-relations")
        ok, _ = check_jep(cls, 3)
        assert ok


class TestFreeAmalgam:
    def test_point_glues_two_edges_into_path(self):
        point = graph_structure(1, [])
        edge = graph_structure(2, [(0, 1)])
        out = free_amalgam(point, edge, edge, (0,), (0,))
        assert out.n == 3
        assert structure_edges(out) == {(0, 1), (0, 2)}

    def test_empty_base_gives_disjoint_union(self):
        empty = graph_structure(0, [])
        out = free_amalgam(empty, triangle(), triangle(), (), ())
        assert out.n == 6
        assert len(structure_edges(out)) == 6

    @pytest.mark.parametrize("seed", range(6))
    def test_preserves_triangle_freeness(self, seed):
        import random

        rng = random.Random(seed)
        k3 = class_by_name("k3free")
        base = graph_structure(2, [])
        pool = [s for s in k3.extensions(base, 4)]
        b1 = rng.choice(pool)
        b2 = rng.choice(pool)
        out = free_amalgam(base, b1, b2, (0, 1), (0, 1))
        assert k3.membership(out)

    def test_rejects_non_embedding(self):
        from homlab.errors import InvalidEmbedding

        point = graph_structure(1, [])
        edge = graph_structure(2, [(0, 1)])
        with pytest.raises(InvalidEmbedding):
            free_amalgam(edge, edge, edge, (0, 0), (0, 1))
        base_edge = graph_structure(2, [(0, 1)])
        non_edge = graph_structure(2, [])
        with pytest.raises(InvalidEmbedding):
            free_amalgam(base_edge, non_edge, base_edge, (0, 1), (0, 1))
        _ = point


class TestAmalgamation:
    @pytest.mark.parametrize(
        "name,n", [("all-graphs", 4), ("k3free", 4), ("tournaments", 4)]
    )
    def test_ap_holds(self, name, n):
        ok, witness = check_ap(class_by_name(name), n)
        assert ok and witness is None

    def test_tournaments_strong(self):
        ok, _ = check_ap(class_by_name("tournaments"), 4, strong=True)
        assert ok

    def test_bipartite_fails_with_path_witness(self):
        ok, witness = check_ap(class_by_name("bipartite"), 5)
        assert not ok
        assert witness.base.n == 2 and not structure_edges(witness.base)
        assert (witness.b1.n, witness.b2.n) == (3, 4)
        # B1 joins the base points by a 2-path, B2 by a 3-path
        assert structure_edges(witness.b1) == {(0, 2), (1, 2)}
        assert structure_edges(witness.b2) == {(0, 3), (1, 2), (2, 3)}
        assert witness.verdict == ("unsolvable-up-to", 7)

    def test_matchings_ap_holds_strong_fails(self):
        cls = class_by_name("matchings")
        ok, _ = check_ap(cls, 4)
        assert ok
        ok, witness = check_ap(cls, 4, strong=True)
        assert not ok
        assert witness.base.n == 1
        assert structure_edges(witness.b1) == {(0, 1)}
        assert structure_edges(witness.b2) == {(0, 1)}

    def test_solutions_verified(self):
        cls = class_by_name("all-graphs")
        base = graph_structure(1, [])
        b1 = graph_structure(3, [(0, 1), (1, 2)])
        b2 = graph_structure(2, [(0, 1)])
        witness = solve_amalgamation(cls, base, b1, b2)
        assert isinstance(witness, AmalgamationWitness)
        assert witness.solved
        _, c, g1, g2 = witness.verdict
        assert is_embedding(b1, c, g1)
        assert is_embedding(b2, c, g2)
        assert g1[0] == g2[0]

    def test_c_relations_small_instance(self):
        cls = class_by_name("c-relations")
        base = cls.catalog(1)[0]
        exts = cls.extensions(base, 3)
        witness = solve_amalgamation(cls, base, exts[0], exts[0])
        assert witness.solved


class TestAge:
    def test_age_of_triangle(self):
        out = age(triangle(), 2)
        assert len(out) == 2  # K1 and K2

    def test_age_of_c5(self):
        # every 3 of the 5 cycle vertices contain an adjacent pair, so the
        # 3-point age is {P3, K2+K1}: no triangle and no independent triple
        from homlab.families import cycle

        out = age(cycle(5).to_structure(), 3)
        k1 = canonical_code(graph_structure(1, []))
        k2 = canonical_code(graph_structure(2, [(0, 1)]))
        e2 = canonical_code(graph_structure(2, []))
        k2_k1 = canonical_code(graph_structure(3, [(0, 1)]))
        p3 = canonical_code(graph_structure(3, [(0, 1), (1, 2)]))
        k3 = canonical_code(triangle())
        codes = set(out)
        assert codes == {k1, k2, e2, k2_k1, p3}
        assert k3 not in codes
        assert out[p3] == 5 and out[k2_k1] == 5


class TestLimitApproximation:
    def test_graph_window_has_low_extension_property(self):
        cls = class_by_name("all-graphs")
        lim = limit_approximation(cls, 150, seed=7)
        adj = {(u, v) for u, v in lim.table("adj")}
        # every (U, V) split of subsets of the first 4 vertices is realised
        for w_size in range(1, 5):
            for verts in itertools.combinations(range(4), w_size):
                for pattern in range(1 << w_size):
                    hit = False
                    for z in range(lim.n):
                        if z in verts:
                            continue
                        if all(
                            ((z, v) in adj) == bool((pattern >> i) & 1)
                            for i, v in enumerate(verts)
                        ):
                            hit = True
                            break
                    assert hit, (verts, pattern)

    def test_k3free_window_stays_triangle_free(self):
        cls = class_by_name("k3free")
        lim = limit_approximation(cls, 40, seed=9)
        assert cls.membership(lim)
        assert verified_age_level(lim, cls, 3) == 3

    def test_tournament_window_embeds_all_3_tournaments(self):
        cls = class_by_name("tournaments")
        lim = limit_approximation(cls, 40, seed=5)
        want = {canonical_code(m) for m in cls.catalog(3)}
        assert want <= set(age(lim, 3))

    @pytest.mark.parametrize("stages", [5, 12])
    def test_monotone_in_stages(self, stages):
        cls = class_by_name("all-graphs")
        small = limit_approximation(cls, stages, seed=33)
        big = limit_approximation(cls, stages + 1, seed=33)
        assert induced_substructure(big, range(small.n)) == small

    def test_deterministic(self):
        cls = class_by_name("tournaments")
        a = limit_approximation(cls, 25, seed=1)
        b = limit_approximation(cls, 25, seed=1)
        assert a == b
