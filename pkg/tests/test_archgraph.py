"""Graph topologies, sparsity masks, and component counting."""

from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from milackit.archgraph import (
    ArchitectureMask,
    GraphError,
    MilacGraph,
    center_complexity_count,
    center_graph,
    circuit_complexity,
    complete_complexity_count,
    complete_graph,
    mask_from_graph,
    mask_membership,
    rx_stem_graph,
    stem_complexity_count,
    tx_stem_graph,
)


# ---------------------------------------------------------------- MilacGraph

def test_graph_rejects_self_loops():
    with pytest.raises(GraphError):
        MilacGraph(3, frozenset({(2, 2)}))


def test_graph_rejects_out_of_range_vertices():
    with pytest.raises(GraphError):
        MilacGraph(3, frozenset({(1, 4)}))
    with pytest.raises(GraphError):
        MilacGraph(3, frozenset({(0, 2)}))


def test_graph_normalizes_edge_orientation():
    g = MilacGraph(3, [(3, 1), (2, 1)])
    assert g.edges == frozenset({(1, 3), (1, 2)})
    assert g.has_edge(3, 1) and g.has_edge(1, 3)
    assert not g.has_edge(2, 3)


def test_graph_collapses_duplicate_edges():
    g = MilacGraph(3, [(1, 2), (2, 1), (1, 2)])
    assert g.n_edges == 1


def test_neighbors():
    g = MilacGraph(4, [(1, 2), (1, 3)])
    assert g.neighbors(1) == frozenset({2, 3})
    assert g.neighbors(4) == frozenset()


def test_adjacency_matrix_is_symmetric_hollow_boolean():
    g = MilacGraph(4, [(1, 2), (2, 4)])
    a = g.adjacency_matrix()
    assert a.dtype == bool and a.shape == (4, 4)
    assert np.array_equal(a, a.T)
    assert not a.diagonal().any()
    assert a[0, 1] and a[1, 3] and not a[0, 2]


def test_edge_list_text_round_trip():
    g = MilacGraph(5, [(2, 5), (1, 3), (1, 2)])
    text = g.to_edge_list_text()
    lines = text.strip().splitlines()
    assert lines[0] == "5"
    assert lines[1:] == ["1 2", "1 3", "2 5"]  # sorted, i < j
    assert MilacGraph.from_edge_list_text(text) == g


def test_edge_list_parser_tolerates_comments_and_blanks():
    g = MilacGraph.from_edge_list_text("# header\n3\n\n1 2 # pair\n# done\n")
    assert g == MilacGraph(3, [(1, 2)])


def test_edge_list_parser_rejects_garbage():
    with pytest.raises(GraphError):
        MilacGraph.from_edge_list_text("3\n1 2 3\n")
    with pytest.raises(GraphError):
        MilacGraph.from_edge_list_text("")


# ------------------------------------------------------------ graph builders

def test_complete_graph_edge_counts():
    assert complete_graph(1).n_edges == 0
    assert complete_graph(4).n_edges == 6
    assert complete_graph(8).n_edges == 28


def test_complete_graph_matches_all_pairs():
    g = complete_graph(5)
    assert g.edges == frozenset(combinations(range(1, 6), 2))


def test_center_graph_edge_count_examples():
    assert center_graph(5, (1, 2, 3, 4)).n_edges == 10
    assert center_graph(10, (1,)).n_edges == 9  # star


def test_center_graph_with_all_vertices_central_is_complete():
    assert center_graph(6, range(1, 7)) == complete_graph(6)


def test_center_graph_adjacency_structure():
    central = (2, 5)
    g = center_graph(7, central)
    for v in range(1, 8):
        if v in central:
            assert g.neighbors(v) == frozenset(set(range(1, 8)) - {v})
        else:
            assert g.neighbors(v) == frozenset(central)


def test_center_graph_validates_central_set():
    with pytest.raises(GraphError):
        center_graph(5, ())
    with pytest.raises(GraphError):
        center_graph(5, (1, 1))
    with pytest.raises(GraphError):
        center_graph(5, (0,))
    with pytest.raises(GraphError):
        center_graph(5, (6,))


@given(
    n=st.integers(min_value=1, max_value=12),
    data=st.data(),
)
def test_center_graph_edge_count_formula(n, data):
    q = data.draw(st.integers(min_value=1, max_value=n))
    central = tuple(sorted(data.draw(
        st.sets(st.integers(min_value=1, max_value=n), min_size=q, max_size=q)
    )))
    g = center_graph(n, central)
    assert g.n_edges == q * (q - 1) // 2 + q * (n - q)


def test_tx_stem_graph_is_center_graph_with_input_ports_central():
    k, n = 3, 7
    g = tx_stem_graph(k, n)
    assert g == center_graph(k + n, range(1, 2 * k))
    assert g.n_ports == k + n


def test_tx_stem_graph_star_case():
    g = tx_stem_graph(1, 4)
    assert g == center_graph(5, (1,))
    assert g.n_edges == 4


def test_rx_stem_graph_central_set():
    # central vertices: first k-1 input ports plus all k output ports
    g = rx_stem_graph(2, 3)
    assert g == center_graph(5, (1, 4, 5))
    assert g.n_edges == 9


def test_rx_stem_graph_single_stream():
    g = rx_stem_graph(1, 4)
    assert g == center_graph(5, (5,))
    assert g.neighbors(5) == frozenset({1, 2, 3, 4})


def test_stem_graphs_reject_too_few_antennas():
    with pytest.raises(GraphError):
        tx_stem_graph(4, 3)
    with pytest.raises(GraphError):
        rx_stem_graph(4, 3)


# ------------------------------------------------------------------ masks

def test_mask_from_complete_graph_is_all_true():
    m = mask_from_graph(complete_graph(3))
    assert m.tunable.all()


def test_mask_of_star_graph():
    m = mask_from_graph(center_graph(3, (1,)))
    expected = np.array(
        [[True, True, True], [True, True, False], [True, False, True]]
    )
    assert np.array_equal(m.tunable, expected)


def test_mask_matches_edges_and_diagonal():
    g = MilacGraph(5, [(1, 4), (2, 3)])
    m = mask_from_graph(g)
    for i in range(1, 6):
        for j in range(1, 6):
            assert m.tunable[i - 1, j - 1] == (i == j or g.has_edge(i, j))


@pytest.mark.parametrize("k,n", [(1, 4), (2, 6), (3, 8), (4, 16)])
def test_tx_stem_mask_forbids_exactly_leaf_pairs(k, n):
    # forbidden iff off-diagonal with both port indices past the 2k-1 center
    m = mask_from_graph(tx_stem_graph(k, n))
    q = 2 * k - 1
    for i in range(k + n):
        for j in range(k + n):
            expected = i != j and i >= q and j >= q
            assert m.forbidden[i, j] == expected


@pytest.mark.parametrize("k,n", [(1, 4), (2, 6), (3, 8), (4, 16)])
def test_rx_stem_mask_forbids_exactly_interior_input_pairs(k, n):
    # forbidden iff off-diagonal with both 0-based indices in [k-1, n)
    m = mask_from_graph(rx_stem_graph(k, n))
    for i in range(n + k):
        for j in range(n + k):
            expected = i != j and (k - 1 <= i < n) and (k - 1 <= j < n)
            assert m.forbidden[i, j] == expected


def test_mask_validates_symmetry_and_diagonal():
    bad_diag = np.ones((3, 3), dtype=bool)
    bad_diag[1, 1] = False
    with pytest.raises(GraphError):
        ArchitectureMask(3, bad_diag)
    bad_sym = np.eye(3, dtype=bool)
    bad_sym[0, 1] = True
    with pytest.raises(GraphError):
        ArchitectureMask(3, bad_sym)


def test_mask_csv_round_trip():
    m = mask_from_graph(rx_stem_graph(2, 4))
    text = m.to_csv_text()
    cells = {c for line in text.strip().splitlines() for c in line.split(",")}
    assert cells <= {"0", "1"}
    back = ArchitectureMask.from_csv_text(text)
    assert back.n_ports == m.n_ports
    assert np.array_equal(back.tunable, m.tunable)


# -------------------------------------------------------------- membership

def test_membership_zero_matrix_any_mask():
    m = mask_from_graph(center_graph(4, (1,)))
    assert mask_membership(np.zeros((4, 4)), m)


def test_membership_dense_matrix_vs_star_mask():
    m = mask_from_graph(center_graph(3, (1,)))
    assert not mask_membership(np.ones((3, 3)), m)


def test_membership_symmetric_matrices_always_pass_complete_mask():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((6, 6))
    a = a + a.T
    assert mask_membership(a, mask_from_graph(complete_graph(6)))


def test_membership_tolerance_is_absolute():
    m = mask_from_graph(center_graph(3, (1,)))
    b = np.zeros((3, 3))
    b[1, 2] = b[2, 1] = 1e-13
    assert mask_membership(b, m, tol=1e-12)
    b[1, 2] = b[2, 1] = 1e-11
    assert not mask_membership(b, m, tol=1e-12)


def test_membership_rejects_dimension_mismatch():
    m = mask_from_graph(complete_graph(3))
    with pytest.raises(ValueError):
        mask_membership(np.zeros((4, 4)), m)


# -------------------------------------------------------------- complexity

def test_complexity_is_ports_plus_edges():
    assert circuit_complexity(complete_graph(4)).count == 10
    assert circuit_complexity(complete_graph(8)).count == 36
    assert int(circuit_complexity(complete_graph(8))) == 36


def test_complexity_center_graph_example():
    assert circuit_complexity(center_graph(10, (1, 2, 3))).count == 34


def test_complexity_tx_stem_example_against_direct_count():
    g = tx_stem_graph(4, 16)
    # independent count: pairs with at least one endpoint in the center
    q = 7
    direct = sum(
        1 for i, j in combinations(range(1, 21), 2) if i <= q or j <= q
    )
    assert g.n_edges == direct
    assert circuit_complexity(g).count == 20 + direct == 132


@given(st.integers(min_value=1, max_value=40))
def test_complete_closed_form(n):
    assert complete_complexity_count(n) == n * (n + 1) // 2
    assert circuit_complexity(complete_graph(n)).count == complete_complexity_count(n)


@given(n=st.integers(min_value=1, max_value=30), data=st.data())
def test_center_closed_form(n, data):
    q = data.draw(st.integers(min_value=1, max_value=n))
    assert center_complexity_count(n, q) == (q + 1) * (2 * n - q) // 2
    g = center_graph(n, range(1, q + 1))
    assert circuit_complexity(g).count == center_complexity_count(n, q)


@given(k=st.integers(min_value=1, max_value=8), data=st.data())
def test_stem_closed_form_both_sides(k, data):
    n = data.draw(st.integers(min_value=k, max_value=40))
    assert stem_complexity_count(k, n) == k * (2 * n + 1)
    assert circuit_complexity(tx_stem_graph(k, n)).count == stem_complexity_count(k, n)
    assert circuit_complexity(rx_stem_graph(k, n)).count == stem_complexity_count(k, n)


def test_stem_fully_complexity_ordering_example():
    assert stem_complexity_count(4, 100) == 804
    assert complete_complexity_count(104) == 5460
    assert stem_complexity_count(1, 1) == complete_complexity_count(2) == 3
