from itertools import combinations

import numpy as np
import pytest

from conftest import field_graph, knuth_graph
from fanoforge.algebra import field_presemifield, presemifield_from_array
from fanoforge.errors import AbsolutesNotCollinear, DegeneratePair, NotOrthogonal
from fanoforge.plane import Affine, Infinity, LineAtInfinity, Plane, Regular, Slope, Vertical
from fanoforge.polarity import (
    PolarityGraph,
    absolute_points,
    baer_line,
    incidence_preservation_witness,
    is_absolute,
    lemma21_dense,
    polar,
    pole,
)


def test_polar_examples(gf4_plane):
    assert polar(Infinity()) == LineAtInfinity()
    assert polar(Affine(0, 3)) == Regular(0, 3)
    assert polar(Slope(2)) == Vertical(2)
    P = gf4_plane
    for u in P.points():
        for v in P.points():
            assert P.incident(u, polar(v)) == P.incident(v, polar(u))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_polar_is_an_involution(k):
    P = Plane(field_presemifield(k))
    for x in P.points() + P.lines():
        assert polar(polar(x)) == x
    # and it is the identity on dense indices
    assert all(P.line_index(polar(p)) == i for i, p in enumerate(P.points()))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_incidence_preserved(k):
    assert incidence_preservation_witness(Plane(field_presemifield(k))) is None


def test_incidence_preserved_knuth():
    assert incidence_preservation_witness(knuth_graph(3).plane) is None
    P = knuth_graph(5).plane
    pairs = np.random.default_rng(5).integers(0, P.size, (50_000, 2))
    assert incidence_preservation_witness(P, pairs) is None


def test_noncommutative_table_breaks_incidence_preservation():
    F = field_presemifield(2).table
    T = np.array([[F[x, F[y, y]] for y in range(4)] for x in range(4)])
    P = Plane(presemifield_from_array(T, require_commutative=False))
    w = incidence_preservation_witness(P)
    assert w is not None
    u, v = w
    assert P.incident(P.point(u), polar(P.point(v))) != P.incident(P.point(v), polar(P.point(u)))
    with pytest.raises(ValueError):
        PolarityGraph(P)


def test_is_absolute_examples():
    for k in (1, 2, 3):
        P = Plane(field_presemifield(k))
        assert is_absolute(P, Infinity())
        assert all(is_absolute(P, Affine(0, b)) for b in range(P.n))
        assert not any(is_absolute(P, Slope(m)) for m in range(P.n))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_absolute_points_count(k):
    P = Plane(field_presemifield(k))
    absol = absolute_points(P)
    assert len(absol) == P.n + 1
    # scalar scan agrees
    assert sum(is_absolute(P, p) for p in P.points()) == P.n + 1


def test_knuth_32_has_33_absolute_points():
    P = knuth_graph(5).plane
    assert sum(is_absolute(P, p) for p in P.points()) == 33
    assert len(absolute_points(P)) == 33


def test_baer_line_and_pole():
    P2 = Plane(field_presemifield(1))
    assert baer_line(P2) == Vertical(0)
    assert [p for p in P2.points() if P2.incident(p, Vertical(0))] == [Affine(0, 0), Affine(0, 1), Infinity()]
    P4 = Plane(field_presemifield(2))
    assert baer_line(P4) == Vertical(0)
    assert all(P4.incident(a, Vertical(0)) for a in absolute_points(P4))
    for k in (1, 2, 3, 4):
        assert pole(Plane(field_presemifield(k))) == Slope(0)


def test_non_collinear_absolutes_are_rejected(gf4_plane):
    absol = absolute_points(gf4_plane)
    absol[-1] = Slope(1)
    with pytest.raises(AbsolutesNotCollinear):
        baer_line(gf4_plane, absol)


def test_wrong_absolute_count_is_an_error(monkeypatch):
    P = Plane(field_presemifield(2))
    from fanoforge import polarity

    monkeypatch.setattr(polarity, "absolute_mask", lambda plane: np.arange(plane.size) < 3)
    with pytest.raises(NotOrthogonal):
        polarity.absolute_points(P)


def test_pole_neighbourhood_is_absolute_set(small_graph):
    G = small_graph
    assert sorted(G.neighbors(G.pole).tolist()) == G.absolutes.tolist()
    for a in G.absolutes:
        assert len(G.neighbors(a)) == G.n
        assert len(G.line_neighborhood(a)) == G.n + 1


def test_neighbour_sizes(small_graph):
    G = small_graph
    for v in range(G.size):
        nb = G.neighbors(v)
        assert v not in nb
        assert len(nb) == (G.n if G.loops[v] else G.n + 1)


def test_n2_class_vertex_has_three_neighbours():
    G = field_graph(1)
    (v,) = G.partition()[0]
    assert len(G.neighbors(v)) == 3


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_degree_sum_and_symmetry(k):
    G = field_graph(k)
    A = G.adjacency_matrix()
    assert (A == A.T).all()
    assert A.sum() + G.loops.sum() == G.size * (G.n + 1)
    assert G.degree_sum() == A.sum()


def brute_common(G, u, v):
    common = set(G.line_neighborhood(u).tolist()) & set(G.line_neighborhood(v).tolist())
    return common


@pytest.mark.parametrize("k", [1, 2, 3])
def test_common_neighbour_exhaustive(k):
    G = field_graph(k)
    for u, v in combinations(range(G.size), 2):
        common = brute_common(G, u, v)
        assert len(common) == 1
        assert G.common_neighbor(u, v) == common.pop()


def test_common_neighbour_sampled_n16():
    G = field_graph(4)
    rng = np.random.default_rng(16)
    for _ in range(10_000):
        u, v = rng.choice(G.size, 2, replace=False)
        assert {G.common_neighbor(int(u), int(v))} == brute_common(G, int(u), int(v))


def test_common_neighbour_of_absolutes_is_the_pole(small_graph):
    G = small_graph
    for a, b in combinations(G.absolutes.tolist(), 2):
        assert not G.adjacent(a, b)
        assert G.common_neighbor(a, b) == G.pole
    with pytest.raises(DegeneratePair):
        G.common_neighbor(0, 0)


def test_partition_sizes():
    G = field_graph(1)
    assert [len(c) for c in G.partition()] == [1, 1, 1]
    G = field_graph(2)
    classes = G.partition()
    assert [len(c) for c in classes] == [3] * 5
    assert 1 + len(G.absolutes) + sum(map(len, classes)) == 21


@pytest.mark.parametrize("k", [3, 4, 5])
def test_partition_is_disjoint_and_covering(k):
    G = field_graph(k)
    classes = G.partition()
    seen = np.zeros(G.size, dtype=int)
    seen[G.pole] += 1
    seen[G.absolutes] += 1
    for c in classes:
        seen[c] += 1
    assert (seen == 1).all()
    for i, c in enumerate(classes):
        a = G.absolutes[i]
        assert all(G.adjacent(a, v) for v in c)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lemma_local_properties_exhaustive(k):
    rep = field_graph(k).check_lemma21("exhaustive")
    assert rep.ok, rep.witnesses


def test_lemma_local_properties_knuth_exhaustive():
    assert knuth_graph(3).check_lemma21("exhaustive").ok


def test_injected_edge_is_detected():
    G = field_graph(2)
    A = G.adjacency_matrix()
    u, v = next((u, v) for u, v in combinations(range(G.size), 2) if not A[u, v])
    A[u, v] = A[v, u] = True
    rep = lemma21_dense(A, G.loops)
    assert not (rep.passed("a") and rep.passed("b"))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lemma_local_properties_sampled_small(k):
    rep = field_graph(k).check_lemma21("sampled", samples=3000, seed=1)
    assert rep.ok, rep.witnesses
