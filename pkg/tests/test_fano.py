from itertools import combinations

import numpy as np
import pytest

from conftest import field_graph, knuth_graph
from fanoforge.errors import AbsoluteEndpoint, BadTriangle, NotAnEdge, OutOfScope, VerificationFailed
from fanoforge.fano import (
    Triangle,
    assemble_fano,
    brute_force_fano_count,
    census,
    certify,
    count_good_triangles,
    count_nonabsolute_edges,
    enumerate_good_triangles,
    find_fano,
    lower_bound,
    nonabsolute_edge_formula,
    triangle_cap_at_absolute,
    triangle_of_edge,
    triangles_through,
)
from fanoforge.plane import restrict, verify_plane_axioms


def brute_triangles(G):
    """All loop-free triangles of the graph, from the dense adjacency matrix."""
    A = G.adjacency_matrix()
    adj = [set(np.flatnonzero(A[v]).tolist()) for v in range(G.size)]
    out = []
    for u in range(G.size):
        for v in adj[u]:
            if v <= u:
                continue
            for w in adj[u] & adj[v]:
                if w > v:
                    out.append((u, v, w))
    return out


def brute_good(G):
    return [t for t in brute_triangles(G) if all(G.good_mask[x] for x in t)]


def test_lower_bound_values():
    # (n^3 - n)/6 - (n + 1)(n/2 - 1), evaluated by hand
    assert [lower_bound(n) for n in (2, 4, 8, 16, 32)] == [1, 5, 57, 561, 4961]
    for n in range(2, 200, 2):
        assert lower_bound(n) == (n**3 - n) // 6 - (n + 1) * (n // 2 - 1) > 0
    for n in (1, 3, 7, 0):
        with pytest.raises(OutOfScope):
            lower_bound(n)


def test_edge_formula_values():
    assert nonabsolute_edge_formula(2) == 3
    assert nonabsolute_edge_formula(4) == 30


@pytest.mark.parametrize("k", [1, 2, 3])
def test_nonabsolute_edges_match_brute_scan(k):
    G = field_graph(k)
    A = G.adjacency_matrix()
    na = ~G.loops
    brute = int(A[np.ix_(na, na)].sum()) // 2
    assert count_nonabsolute_edges(G) == brute == nonabsolute_edge_formula(G.n)


def test_triangle_of_edge_n2():
    G = field_graph(1)
    good = np.flatnonzero(G.good_mask)
    assert len(good) == 3
    u, v = int(good[0]), int(good[1])
    t = triangle_of_edge(G, u, v)
    assert t.vertices == tuple(good.tolist())
    assert brute_good(G) == [tuple(good.tolist())]
    with pytest.raises(AbsoluteEndpoint):
        triangle_of_edge(G, int(G.absolutes[0]), int(G.neighbors(G.absolutes[0])[0]))
    with pytest.raises(NotAnEdge):
        triangle_of_edge(G, G.pole, u)


def test_triangle_of_edge_n4_never_hits_pole():
    G = field_graph(2)
    na = np.flatnonzero(~G.loops)
    for u, v in combinations(na.tolist(), 2):
        if G.adjacent(u, v):
            t = triangle_of_edge(G, u, v)
            if t is not None:
                assert G.pole not in t.vertices
                assert {u, v} < set(t.vertices)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_enumeration_matches_brute_force(k):
    G = field_graph(k)
    got = [t.vertices for t in enumerate_good_triangles(G)]
    assert got == sorted(brute_good(G))
    assert len(got) == count_good_triangles(G)


def test_enumeration_matches_brute_force_knuth():
    G = knuth_graph(3)
    got = [t.vertices for t in enumerate_good_triangles(G)]
    assert got == sorted(brute_good(G))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_good_count_is_a_third_of_good_edges(k):
    G = field_graph(k)
    na = np.flatnonzero(~G.loops).tolist()
    good_edges = 0
    for u, v in combinations(na, 2):
        if G.adjacent(u, v) and triangle_of_edge(G, u, v) is not None:
            good_edges += 1
    assert good_edges % 3 == 0
    assert count_good_triangles(G) == good_edges // 3


def test_small_counts():
    assert count_good_triangles(field_graph(1)) == 1
    assert count_good_triangles(field_graph(2)) >= 5


@pytest.mark.parametrize("k", [2, 3, 4])
def test_classes_are_distinct(k):
    for t in enumerate_good_triangles(field_graph(k)):
        assert len(set(t.classes)) == 3


def test_whole_plane_is_its_own_certificate():
    G = field_graph(1)
    cert = find_fano(G)
    assert sorted(cert.points) == list(range(7))
    assert cert.incidence.sum() == 21
    assert cert.verified and cert.graph_embedding_ok


@pytest.mark.parametrize("k", [2, 3])
def test_every_good_triangle_gives_a_verified_certificate(k):
    G = field_graph(k)
    seen = set()
    for t in enumerate_good_triangles(G):
        cert = assemble_fano(G, t)
        assert cert.verified
        M = cert.incidence
        assert (M.sum(axis=0) == 3).all() and (M.sum(axis=1) == 3).all()
        assert cert.lines == cert.points  # polar images, index for index
        key = frozenset(cert.points)
        assert key not in seen
        seen.add(key)
        # the triangle is recoverable as the non-absolute, non-pole points
        assert tuple(sorted(p for p in cert.points if G.good_mask[p])) == t.vertices


def test_corrupted_certificate_is_rejected():
    G = field_graph(2)
    cert = find_fano(G)
    pts = list(cert.points)
    outsider = next(v for v in range(G.size) if v not in pts and G.good_mask[v])
    pts[-1] = outsider
    with pytest.raises(VerificationFailed):
        certify(G, pts)
    bad = certify(G, pts, strict=False)
    assert not (bad.verified and bad.graph_embedding_ok)


def test_bad_triangles_are_refused():
    G = field_graph(2)
    with pytest.raises(BadTriangle):
        assemble_fano(G, Triangle((G.pole, 4, 5), (0, 0, 0)))
    good = np.flatnonzero(G.good_mask)
    non_tri = next(t for t in combinations(good.tolist(), 3) if not G.adjacent(t[0], t[1]))
    with pytest.raises(BadTriangle):
        assemble_fano(G, Triangle(non_tri, (0, 0, 0)))


def test_find_fano_is_deterministic():
    a = find_fano(field_graph(4))
    b = find_fano(field_graph(4))
    assert a.points == b.points and a.bitmap_hex == b.bitmap_hex


def test_find_fano_knuth_32():
    G = knuth_graph(5)
    cert = find_fano(G)
    assert cert.verified
    assert verify_plane_axioms(restrict(G.plane, cert.points, cert.lines)).ok


def test_census_small():
    c = census(field_graph(1))
    assert (c.nonabsolute_edges, c.fano_lower_bound, c.good_triangles_exact) == (3, 1, 1)
    c = census(field_graph(2))
    assert c.fano_lower_bound == 5 and c.good_triangles_exact >= 5
    c = census(field_graph(3))
    assert c.fano_lower_bound == 57 and c.good_triangles_exact >= 57


@pytest.mark.parametrize("k", [1, 2])
def test_census_agrees_with_subset_oracle(k):
    G = field_graph(k)
    assert brute_force_fano_count(G) == census(G).good_triangles_exact


def test_triangle_caps():
    G = field_graph(1)
    assert [triangle_cap_at_absolute(G, int(a)) for a in G.absolutes] == [0, 0, 0]
    for k in (2, 3):
        G = field_graph(k)
        brute = brute_triangles(G)
        for a in G.absolutes:
            exact = sum(int(a) in t for t in brute)
            assert triangle_cap_at_absolute(G, int(a)) == exact <= G.n // 2 - 1
        assert triangles_through(G, G.pole) == 0
    with pytest.raises(ValueError):
        triangle_cap_at_absolute(field_graph(2), field_graph(2).pole)


def test_parallel_count_matches_serial():
    G = field_graph(5)
    serial = count_good_triangles(G, workers=1, chunk=100)
    assert count_good_triangles(G, workers=4, chunk=100) == serial
    assert census(G, workers=3) == census(G, workers=1)
