import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgesync import (
    ParseError,
    WeightedGraph,
    build_matrices,
    components,
    parse_graph_text,
    random_connected_graph,
    read_graph_file,
    spectral_report,
)

from helpers import C3, P2, P3, graph_family, shifted_union


class TestWeightedGraph:
    def test_basic_properties(self):
        assert P3.n == 3 and P3.q == 2
        assert C3.q == 3
        assert P2.edges == ((1, 2, 1.0),)

    def test_rejects_noncanonical_order(self):
        with pytest.raises(ValueError):
            WeightedGraph(3, ((2, 3, 1.0), (1, 2, 1.0)))

    def test_rejects_reversed_endpoints(self):
        with pytest.raises(ValueError):
            WeightedGraph(3, ((2, 1, 1.0),))

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            WeightedGraph(3, ((2, 2, 1.0),))

    def test_rejects_duplicate_edge(self):
        with pytest.raises(ValueError):
            WeightedGraph(3, ((1, 2, 1.0), (1, 2, 2.0)))

    def test_rejects_nonpositive_weight(self):
        with pytest.raises(ValueError):
            WeightedGraph(2, ((1, 2, 0.0),))

    def test_rejects_out_of_range_node(self):
        with pytest.raises(ValueError):
            WeightedGraph(3, ((1, 4, 1.0),))

    def test_from_pairs_normalizes(self):
        g = WeightedGraph.from_pairs(3, [(3, 2, 2.0), (2, 1, 1.0)])
        assert g.edges == ((1, 2, 1.0), (2, 3, 2.0))

    def test_hash_stable_and_distinct(self):
        assert P3.short_hash() == P3.short_hash()
        assert len(P3.short_hash()) == 12
        assert P3.short_hash() != C3.short_hash()

    def test_canonical_text_round_trip(self):
        for g in (P2, P3, C3, random_connected_graph(7, 0.4, (0.1, 6.0), 1)):
            assert parse_graph_text(g.canonical_text()) == g


class TestMatrices:
    def test_p2_by_hand(self):
        m = build_matrices(P2)
        assert np.array_equal(m.incidence, [[-1.0], [1.0]])
        assert np.array_equal(m.laplacian, [[1.0, -1.0], [-1.0, 1.0]])
        assert np.array_equal(m.edge_laplacian, [[2.0]])

    def test_p3_by_hand(self):
        m = build_matrices(P3)
        assert np.array_equal(
            m.laplacian, [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]])
        assert np.array_equal(m.edge_laplacian, [[2.0, -1.0], [-1.0, 2.0]])

    def test_c3_by_hand(self):
        m = build_matrices(C3)
        assert np.array_equal(
            m.laplacian, [[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]])
        assert np.array_equal(
            m.edge_laplacian, [[2.0, 1.0, -1.0], [1.0, 2.0, 1.0], [-1.0, 1.0, 2.0]])

    def test_incidence_split(self):
        m = build_matrices(C3)
        assert np.array_equal(m.incidence,
                              m.incidence_terminal - m.incidence_initial)
        # indicator matrices are 0/1 with one nonzero per column
        for part in (m.incidence_initial, m.incidence_terminal):
            assert set(np.unique(part)) <= {0.0, 1.0}
            assert np.array_equal(part.sum(axis=0), np.ones(C3.q))

    def test_defining_products_on_family(self):
        for g in graph_family(24):
            m = build_matrices(g)
            w = m.weight_diag
            assert np.max(np.abs(m.laplacian - m.incidence @ w @ m.incidence.T)) <= 1e-12
            assert np.max(np.abs(m.edge_laplacian - m.incidence.T @ m.incidence @ w)) <= 1e-12
            assert np.array_equal(np.diag(np.diag(w)), w)
            # row sums of L vanish
            assert np.max(np.abs(m.laplacian.sum(axis=1))) <= 1e-12


class TestComponents:
    def test_path_connected(self):
        assert components(P3) == 1

    def test_single_edge_of_four(self):
        assert components(WeightedGraph(4, ((1, 2, 1.0),))) == 3

    def test_isolated_pair(self):
        assert components(WeightedGraph(2, ())) == 2

    def test_union_counts_blocks(self):
        g = shifted_union(P3, C3)
        assert components(g) == 2


class TestSpectral:
    def test_p2(self):
        rep = spectral_report(build_matrices(P2), P2)
        assert np.allclose(rep.laplacian_eigs, [0.0, 2.0], atol=1e-12)
        assert np.allclose(rep.edge_laplacian_eigs, [2.0], atol=1e-12)
        assert rep.lambda2 == pytest.approx(2.0)
        assert rep.components == 1

    def test_c3(self):
        rep = spectral_report(build_matrices(C3), C3)
        assert np.allclose(rep.laplacian_eigs, [0.0, 3.0, 3.0], atol=1e-10)
        assert np.allclose(sorted(rep.edge_laplacian_eigs), [0.0, 3.0, 3.0], atol=1e-10)

    def test_p3(self):
        rep = spectral_report(build_matrices(P3), P3)
        assert np.allclose(rep.laplacian_eigs, [0.0, 1.0, 3.0], atol=1e-10)
        assert np.allclose(sorted(rep.edge_laplacian_eigs), [1.0, 3.0], atol=1e-10)

    def test_lambda2_positive_iff_connected(self):
        for g in graph_family(16):
            rep = spectral_report(build_matrices(g), g)
            if rep.components == 1:
                assert rep.lambda2 > 1e-9
            else:
                assert rep.lambda2 <= 1e-9


class TestRandomGraph:
    def test_two_nodes_forced_edge(self):
        g = random_connected_graph(2, 0.0, (0.1, 6.0), 9)
        assert g.edges[0][:2] == (1, 2)
        assert g.q == 1

    def test_tree_at_p_zero(self):
        g = random_connected_graph(5, 0.0, (0.1, 6.0), 3)
        assert g.q == 4
        assert components(g) == 1

    def test_complete_at_p_one(self):
        g = random_connected_graph(5, 1.0, (0.1, 6.0), 3)
        assert g.q == 10

    def test_deterministic(self):
        a = random_connected_graph(9, 0.5, (0.5, 2.0), 77)
        b = random_connected_graph(9, 0.5, (0.5, 2.0), 77)
        assert a == b

    @given(st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=30, deadline=None)
    def test_always_connected_weights_in_range(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 13))
        p = float(rng.uniform())
        g = random_connected_graph(n, p, (0.1, 6.0), seed)
        assert g.n == n
        assert components(g) == 1
        ws = [w for _, _, w in g.edges]
        assert min(ws) >= 0.1 and max(ws) <= 6.0


class TestParsing:
    def test_parse_simple(self):
        g = parse_graph_text("nodes 3\n1 2 1.0\n2 3 0.5\n")
        assert g == WeightedGraph(3, ((1, 2, 1.0), (2, 3, 0.5)))

    def test_comments_and_blanks(self):
        g = parse_graph_text("# header\nnodes 2\n\n1 2 2.0  # the edge\n")
        assert g == WeightedGraph(2, ((1, 2, 2.0),))

    def test_missing_header(self):
        with pytest.raises(ParseError):
            parse_graph_text("1 2 1.0\n")

    def test_bad_weight_reports_line(self):
        with pytest.raises(ParseError) as exc:
            parse_graph_text("nodes 2\n1 2 heavy\n")
        assert "2" in str(exc.value)

    def test_noncanonical_rejected(self):
        with pytest.raises(ParseError):
            parse_graph_text("nodes 3\n2 3 1.0\n1 2 1.0\n")

    def test_read_graph_file(self, tmp_path):
        path = tmp_path / "g.graph"
        path.write_text(C3.canonical_text())
        assert read_graph_file(str(path)) == C3

    def test_read_missing_file(self, tmp_path):
        with pytest.raises((ParseError, OSError)):
            read_graph_file(str(tmp_path / "nope.graph"))
