import numpy as np
import pytest

from phaseloc import (
    BadDimension,
    Dense,
    DimensionMismatch,
    Ensemble,
    GraphMismatch,
    MeasurementGraph,
    UnstructuredVector,
    apply_complex_map,
    build_complex_full,
    build_real_full,
    complex_distance,
    configurations_congruent,
    frameworks_equivalent,
    graph_from_ensemble,
    induced_framework,
    is_lateration,
    verify_lateration_ordering,
)
from phaseloc.ensembles import Coord
from phaseloc.graphs import edge_list_text


def complete_graph(n_vertices):
    edges = {(u, v) for u in range(n_vertices) for v in range(u + 1, n_vertices)}
    return MeasurementGraph(n_vertices - 1, frozenset(edges))


def path_graph(n_vertices):
    edges = {(v, v + 1) for v in range(n_vertices - 1)}
    return MeasurementGraph(n_vertices - 1, frozenset(edges))


class TestGraphFromEnsemble:
    def test_real_full(self):
        g = graph_from_ensemble(build_real_full(3))
        assert g.edges == frozenset({(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)})

    def test_complex_full_triangle(self):
        # the sum and imag-difference vectors collapse to the single edge (1,2)
        g = graph_from_ensemble(build_complex_full(2))
        assert g.edges == frozenset({(0, 1), (0, 2), (1, 2)})

    def test_coords_only_star(self):
        ens = Ensemble(tuple(Coord(k) for k in range(1, 6)), "custom", 5)
        g = graph_from_ensemble(ens)
        assert g.edges == frozenset({(0, k) for k in range(1, 6)})

    def test_dense_rejected(self):
        ens = Ensemble((Dense(np.ones(3, dtype=complex)),), "custom", 3)
        with pytest.raises(UnstructuredVector):
            graph_from_ensemble(ens)


class TestLateration:
    def test_complete_graph(self):
        ok, ordering = is_lateration(complete_graph(4), 2)
        assert ok
        assert verify_lateration_ordering(complete_graph(4), 2, ordering)

    def test_path_graph_fails(self):
        ok, ordering = is_lateration(path_graph(4), 2)
        assert not ok and ordering is None

    def test_complex_full_ordering(self):
        g = graph_from_ensemble(build_complex_full(5))
        ok, ordering = is_lateration(g, 2)
        assert ok
        assert ordering == [0, 1, 2, 3, 4, 5]
        assert verify_lateration_ordering(g, 2, ordering)

    def test_bad_dimension(self):
        with pytest.raises(BadDimension):
            is_lateration(complete_graph(4), 3)

    def test_large_graph_needs_seed_clique(self):
        g = graph_from_ensemble(build_complex_full(40))
        with pytest.raises(ValueError):
            is_lateration(g, 2)
        ok, ordering = is_lateration(g, 2, seed_clique=[0, 1, 2])
        assert ok and verify_lateration_ordering(g, 2, ordering)

    def test_invalid_seed_clique(self):
        g = graph_from_ensemble(build_real_full(4))
        with pytest.raises(ValueError):
            is_lateration(g, 2, seed_clique=[0, 3, 4])  # (3,4) is not an edge

    def test_families_over_grid(self):
        for n in range(1, 20):
            g = graph_from_ensemble(build_real_full(n))
            seed = [0, 1] if n + 1 > 32 else None
            ok, ordering = is_lateration(g, 1, seed)
            assert ok and verify_lateration_ordering(g, 1, ordering)
        for n in range(2, 20):
            g = graph_from_ensemble(build_complex_full(n))
            ok, ordering = is_lateration(g, 2)
            assert ok and verify_lateration_ordering(g, 2, ordering)

    def test_verify_rejects_bad_orderings(self):
        g = graph_from_ensemble(build_complex_full(4))
        assert not verify_lateration_ordering(g, 2, [3, 4, 0, 1, 2])  # (3,4) is no edge
        assert not verify_lateration_ordering(g, 2, [0, 1, 2, 3])  # not a full ordering


class TestComplexDistance:
    def test_zero_on_equal(self):
        z = np.array([1.0 + 2j, -3j])
        assert complex_distance(z, z) == 0.0

    def test_hand_value(self):
        assert complex_distance(1.0, 1j) == pytest.approx(-2j)

    def test_symmetric(self):
        rng = np.random.default_rng(2)
        w = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert complex_distance(w, z) == pytest.approx(complex_distance(z, w))

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            complex_distance(np.ones(2), np.ones(3))


class TestFrameworks:
    def setup_method(self):
        self.graph = graph_from_ensemble(build_complex_full(4))
        rng = np.random.default_rng(31)
        self.x = rng.standard_normal(4) + 1j * rng.standard_normal(4)

    def test_self_equivalent(self):
        f = induced_framework(self.graph, self.x)
        assert frameworks_equivalent(f, f)
        assert configurations_congruent(f, f)

    def test_negation_is_equivalent_and_congruent(self):
        f = induced_framework(self.graph, self.x)
        g = induced_framework(self.graph, -self.x)
        assert frameworks_equivalent(f, g)
        assert configurations_congruent(f, g)

    def test_non_edge_perturbation_invisible_to_equivalence(self):
        # equivalence only inspects edges; (3,4) is no edge of this graph
        assert not self.graph.has_edge(3, 4)
        placement = np.concatenate(([0.0 + 0.0j], self.x))
        from phaseloc import Framework
        f = Framework(self.graph, placement)
        q = placement.copy()
        q[4] += 1.0  # moves vertex 4, touching edges (0,4),(1,4),(2,4)
        # restrict to a graph without vertex-4 edges to expose the point
        edges = frozenset(e for e in self.graph.edges if 4 not in e)
        sub = MeasurementGraph(4, edges)
        f_sub = Framework(sub, placement)
        q_sub = Framework(sub, q)
        assert frameworks_equivalent(f_sub, q_sub)
        assert not configurations_congruent(f_sub, q_sub)

    def test_matching_squared_outputs_mean_congruent(self):
        f = induced_framework(self.graph, self.x)
        g = induced_framework(self.graph, -self.x)
        ens = build_complex_full(4)
        np.testing.assert_allclose(apply_complex_map(ens, self.x),
                                   apply_complex_map(ens, -self.x), atol=1e-12)
        assert configurations_congruent(f, g)

    def test_graph_mismatch(self):
        f = induced_framework(self.graph, self.x)
        other = graph_from_ensemble(build_real_full(4))
        g = induced_framework(other, self.x)
        with pytest.raises(GraphMismatch):
            frameworks_equivalent(f, g)


def test_edge_list_text():
    g = graph_from_ensemble(build_real_full(2))
    assert edge_list_text(g) == "0 1\n0 2\n1 2\n"
