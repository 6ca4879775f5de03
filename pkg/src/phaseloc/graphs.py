"""Measurement graphs, lateration orderings, and complex-distance frameworks.

Vertices are 0..n with 0 the origin anchor. A coordinate measurement on index
k contributes edge (0, k); any pairwise vector on (j, k) contributes edge
(j, k), with multiplicity collapsed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .ensembles import Coord, Dense, Diff, DiffImag, Ensemble, Sum
from .errors import BadDimension, DimensionMismatch, GraphMismatch, UnstructuredVector

# exhaustive clique search is limited to small graphs; larger callers must
# pass the seed clique they already know
EXHAUSTIVE_VERTEX_LIMIT = 32


@dataclass(frozen=True)
class MeasurementGraph:
    n_sensors: int
    edges: frozenset  # of (u, v) tuples with u < v
    anchor_set: frozenset = frozenset({0})

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise GraphMismatch(f"self-loop at vertex {u}")
            if not (0 <= u < v <= self.n_sensors):
                raise GraphMismatch(f"edge ({u}, {v}) outside vertex range")

    @property
    def vertices(self) -> range:
        return range(self.n_sensors + 1)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges


def graph_from_ensemble(ensemble: Ensemble) -> MeasurementGraph:
    """Graph on {0, .., n} induced by a structured ensemble."""
    edges = set()
    for vec in ensemble.vectors:
        if isinstance(vec, Coord):
            edges.add((0, vec.k))
        elif isinstance(vec, (Diff, Sum, DiffImag)):
            edges.add((min(vec.j, vec.k), max(vec.j, vec.k)))
        elif isinstance(vec, Dense):
            raise UnstructuredVector("dense measurement vectors induce no graph edge")
    return MeasurementGraph(ensemble.n, frozenset(edges))


def is_lateration(graph: MeasurementGraph, d: int, seed_clique=None):
    """Check for a lateration ordering: a (d+1)-clique start, then every later
    vertex adjacent to at least d+1 already-placed vertices.

    Returns (True, ordering) with a witness ordering, or (False, None). With no
    seed_clique given, all (d+1)-cliques are tried, which is only allowed for
    graphs of at most EXHAUSTIVE_VERTEX_LIMIT vertices. Greedy placement from a
    seed clique is complete: if any valid ordering starts with that clique, the
    greedy one succeeds.
    """
    if d not in (1, 2):
        raise BadDimension(f"lateration check supports d in {{1, 2}}, got {d}")
    verts = list(graph.vertices)
    if len(verts) < d + 1:
        return False, None
    adj = graph.adjacency()

    if seed_clique is not None:
        seeds = [tuple(sorted(int(v) for v in seed_clique))]
        if len(seeds[0]) != d + 1 or not _is_clique(graph, seeds[0]):
            raise ValueError(f"seed_clique {seed_clique} is not a (d+1)-clique of the graph")
    else:
        if len(verts) > EXHAUSTIVE_VERTEX_LIMIT:
            raise ValueError(
                f"{len(verts)} vertices: exhaustive seed search disabled, pass seed_clique"
            )
        seeds = [c for c in combinations(verts, d + 1) if _is_clique(graph, c)]

    for seed in seeds:
        ordering = _greedy_peel(adj, list(seed), d)
        if ordering is not None:
            return True, ordering
    return False, None


def _is_clique(graph: MeasurementGraph, vertices) -> bool:
    return all(graph.has_edge(u, v) for u, v in combinations(vertices, 2))


def _greedy_peel(adj, ordering, d):
    placed = set(ordering)
    # placed-neighbor counts let each round pick the smallest eligible vertex
    counts = {v: len(adj[v] & placed) for v in adj if v not in placed}
    while counts:
        pick = None
        for v in sorted(counts):
            if counts[v] >= d + 1:
                pick = v
                break
        if pick is None:
            return None
        ordering.append(pick)
        placed.add(pick)
        del counts[pick]
        for u in adj[pick]:
            if u in counts:
                counts[u] += 1
    return ordering


def verify_lateration_ordering(graph: MeasurementGraph, d: int, ordering) -> bool:
    """Independent witness check of an ordering against the definition."""
    if d not in (1, 2):
        raise BadDimension(f"lateration check supports d in {{1, 2}}, got {d}")
    ordering = list(ordering)
    if sorted(ordering) != list(graph.vertices):
        return False
    head = ordering[: d + 1]
    if not _is_clique(graph, head):
        return False
    for i in range(d + 1, len(ordering)):
        earlier = ordering[:i]
        v = ordering[i]
        if sum(1 for u in earlier if graph.has_edge(u, v)) < d + 1:
            return False
    return True


def edge_list_text(graph: MeasurementGraph) -> str:
    """Edge list, one `u v` pair per line, sorted."""
    return "\n".join(f"{u} {v}" for u, v in sorted(graph.edges)) + "\n"


# --- complex distances and frameworks ---------------------------------------

def complex_distance(w, z) -> complex:
    """Sum of squared (unconjugated) coordinate differences; complex in general."""
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if w.shape != z.shape:
        raise DimensionMismatch(f"shape mismatch: {w.shape} vs {z.shape}")
    return complex(np.sum((w - z) ** 2))


@dataclass(frozen=True)
class Framework:
    """A graph together with a complex placement of every vertex."""

    graph: MeasurementGraph
    placement: np.ndarray  # placement[v] is the position of vertex v

    def __post_init__(self):
        p = np.asarray(self.placement, dtype=np.complex128)
        object.__setattr__(self, "placement", p)
        if p.size != self.graph.n_sensors + 1:
            raise GraphMismatch(
                f"placement covers {p.size} vertices, graph has {self.graph.n_sensors + 1}"
            )


def induced_framework(graph: MeasurementGraph, x: np.ndarray) -> Framework:
    """Framework with sensor i at x_i and the origin vertex at 0."""
    x = np.asarray(x, dtype=np.complex128)
    if x.size != graph.n_sensors:
        raise GraphMismatch(f"signal length {x.size} vs {graph.n_sensors} sensors")
    return Framework(graph, np.concatenate(([0.0 + 0.0j], x)))


def frameworks_equivalent(f1: Framework, f2: Framework, tol: float = 1e-10) -> bool:
    """Edge-wise complex distances agree within tol."""
    if f1.graph.edges != f2.graph.edges or f1.graph.n_sensors != f2.graph.n_sensors:
        raise GraphMismatch("frameworks live on different graphs")
    p, q = f1.placement, f2.placement
    for u, v in f1.graph.edges:
        if abs((p[u] - p[v]) ** 2 - (q[u] - q[v]) ** 2) > tol:
            return False
    return True


def configurations_congruent(f1: Framework, f2: Framework, tol: float = 1e-10) -> bool:
    """All-pairs complex distances agree within tol."""
    if f1.placement.size != f2.placement.size:
        raise GraphMismatch("configurations have different vertex counts")
    p, q = f1.placement, f2.placement
    dp = (p[:, None] - p[None, :]) ** 2
    dq = (q[:, None] - q[None, :]) ** 2
    return bool(np.max(np.abs(dp - dq)) <= tol)
