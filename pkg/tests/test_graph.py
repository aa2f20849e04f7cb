import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qeagraph.errors import FormatError, InvalidParameter, ResourceLimit
from qeagraph.graph import (INFINITE_GIRTH, Graph, build_standard, chromatic_number,
                            disjoint_union, format_graph, girth, is_independent, mycielskian,
                            parse_graph, petersen, random_graph, read_graph, search_witness,
                            write_graph)

from oracle import brute_chromatic, brute_girth

K2 = build_standard("complete", 2)
C5 = build_standard("cycle", 5)
K4 = build_standard("complete", 4)
GROTZSCH = mycielskian(C5)


@st.composite
def graphs(draw, max_nodes=7):
    v = draw(st.integers(0, max_nodes))
    pairs = [(u, w) for u in range(v) for w in range(u + 1, v)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(v, chosen)


class TestBuild:
    @pytest.mark.parametrize("kind,k,nodes,edges", [
        ("complete", 4, 4, 6), ("cycle", 5, 5, 5), ("edgeless", 1, 1, 0), ("path", 4, 4, 3),
    ])
    def test_standard_counts(self, kind, k, nodes, edges):
        g = build_standard(kind, k)
        assert (g.node_count, g.edge_count) == (nodes, edges)

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_short_cycle_rejected(self, k):
        with pytest.raises(InvalidParameter):
            build_standard("cycle", k)

    def test_unknown_kind(self):
        with pytest.raises(InvalidParameter):
            build_standard("wheel", 5)

    def test_loops_and_out_of_range(self):
        with pytest.raises(InvalidParameter):
            Graph.from_edges(3, [(1, 1)])
        with pytest.raises(InvalidParameter):
            Graph.from_edges(3, [(0, 3)])

    def test_edges_are_unordered(self):
        assert Graph.from_edges(3, [(2, 0)]) == Graph.from_edges(3, [(0, 2)])


class TestUnionAndMycielskian:
    def test_union_counts(self):
        g = disjoint_union(C5, K4)
        # counts add: 5 + 4 nodes, 5 + 6 edges
        assert (g.node_count, g.edge_count) == (9, 11)
        assert chromatic_number(g) == 4

    def test_union_girth_is_min(self):
        assert girth(disjoint_union(C5, build_standard("cycle", 3))) == 3

    def test_union_renumbers_second(self):
        g = disjoint_union(K2, K2)
        assert g.edges == frozenset({(0, 1), (2, 3)})

    def test_mycielskian_of_k2_is_c5(self):
        m = mycielskian(K2)
        assert (m.node_count, m.edge_count) == (5, 5)
        assert all(m.degree(v) == 2 for v in range(5))
        assert girth(m) == 5

    def test_grotzsch(self):
        assert GROTZSCH.node_count == 11
        assert chromatic_number(GROTZSCH) == 4
        assert girth(GROTZSCH) == 4

    @pytest.mark.parametrize("k,chi", [(0, 2), (1, 3), (2, 4), (3, 5)])
    def test_iterated_chromatic(self, k, chi):
        g = K2
        for _ in range(k):
            g = mycielskian(g)
        assert chromatic_number(g) == chi

    @pytest.mark.parametrize("seed", range(10))
    def test_mycielskian_raises_chi_by_one(self, seed):
        rng = random.Random(seed)
        g = random_graph(rng.randint(1, 12), rng.random(), seed)
        assert chromatic_number(mycielskian(g)) == chromatic_number(g) + 1

    @given(graphs())
    @settings(max_examples=40, deadline=None)
    def test_triangle_free_preserved(self, g):
        if g.node_count and girth(g) >= 4:
            assert girth(mycielskian(g)) >= 4


class TestInvariants:
    def test_independence_examples(self):
        assert not is_independent(K4, {0, 1})
        assert is_independent(C5, {0, 2})
        assert is_independent(C5, set())
        with pytest.raises(InvalidParameter):
            is_independent(C5, {7})

    @given(graphs(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_independent_sets_have_no_edges(self, g, data):
        s = data.draw(st.sets(st.integers(0, max(g.node_count - 1, 0)))) if g.node_count else set()
        pair_scan = all((u, w) not in g.edges for u in s for w in s if u < w)
        assert is_independent(g, s) == pair_scan

    def test_small_chromatic_values(self):
        assert chromatic_number(K4) == 4
        assert chromatic_number(Graph.from_edges(0, [])) == 0
        assert chromatic_number(build_standard("edgeless", 3)) == 1

    def test_petersen(self):
        p = petersen()
        assert chromatic_number(p) == 3
        assert brute_chromatic(p.node_count, sorted(p.edges)) == 3
        assert girth(p) == 5

    @given(graphs())
    @settings(max_examples=60, deadline=None)
    def test_chromatic_matches_brute_force(self, g):
        assert chromatic_number(g) == brute_chromatic(g.node_count, sorted(g.edges))

    @given(graphs(max_nodes=6))
    @settings(max_examples=60, deadline=None)
    def test_girth_matches_brute_force(self, g):
        assert girth(g) == brute_girth(g.node_count, sorted(g.edges))

    @given(graphs())
    @settings(max_examples=60, deadline=None)
    def test_forests_are_two_colourable(self, g):
        if girth(g) == INFINITE_GIRTH:
            assert chromatic_number(g) <= 2

    @given(graphs())
    @settings(max_examples=60, deadline=None)
    def test_chi_one_iff_edgeless(self, g):
        assert (chromatic_number(g) == 1) == (g.node_count >= 1 and g.edge_count == 0)

    @given(graphs(5), graphs(5))
    @settings(max_examples=30, deadline=None)
    def test_union_laws(self, g, h):
        u = disjoint_union(g, h)
        assert chromatic_number(u) == max(chromatic_number(g), chromatic_number(h))
        assert girth(u) == min(girth(g), girth(h))

    def test_girth_examples(self):
        assert girth(C5) == 5
        assert girth(build_standard("path", 4)) == math.inf

    def test_chromatic_cap(self):
        with pytest.raises(ResourceLimit):
            chromatic_number(build_standard("edgeless", 10), cap=5)

    def test_random_graph_is_seeded(self):
        assert random_graph(8, 0.4, 3) == random_graph(8, 0.4, 3)


class TestWitness:
    def test_girth4_chi5(self):
        g = search_witness(4, 5, seed=1, budget=100_000)
        assert g.node_count == 23
        assert chromatic_number(g) == 5 and girth(g) == 4

    def test_c5_qualifies(self):
        g = search_witness(5, 3, seed=0, budget=1000)
        assert chromatic_number(g) >= 3 and girth(g) >= 5

    def test_needs_a_cycle(self):
        g = search_witness(3, 2, seed=4, budget=1000)
        assert chromatic_number(g) >= 2 and girth(g) >= 3

    def test_budget_exhausted(self):
        assert search_witness(6, 4, seed=0, budget=1) is None

    def test_bad_parameters(self):
        with pytest.raises(InvalidParameter):
            search_witness(2, 3, 0, 10)


class TestTextFormat:
    @given(graphs())
    @settings(max_examples=50, deadline=None)
    def test_round_trip(self, g):
        assert parse_graph(format_graph(g)) == g

    def test_exact_text(self):
        assert format_graph(build_standard("path", 3)) == "nodes 3\nedge 0 1\nedge 1 2\n"

    def test_comments_allowed(self):
        assert parse_graph("# a path\nnodes 2\n# edge list\nedge 0 1\n") == K2

    @pytest.mark.parametrize("text", [
        "", "edge 0 1\n", "nodes 2\nedge 1 0\n", "nodes 2\nedge 0 1\nedge 0 1\n",
        "nodes 2\nedge 0 2\n", "nodes x\n", "nodes 2\nvertex 0\n",
    ])
    def test_rejects(self, text):
        with pytest.raises(FormatError):
            parse_graph(text)

    def test_files(self, tmp_path):
        write_graph(C5, tmp_path / "c5.graph")
        assert read_graph(tmp_path / "c5.graph") == C5
