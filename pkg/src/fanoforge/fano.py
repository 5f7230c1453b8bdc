"""Good triangles, Fano certificates and the census through the pole.

A *good* triangle has all three vertices outside the Baer line and different
from the pole. Together with the pole and the three absolute points adjacent
to its vertices it spans a Fano subplane whose lines are the polars of its
seven points. "Count" throughout means Fano subplanes arising this way,
i.e. containing the pole.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from itertools import combinations

import numpy as np

from .errors import (
    AbsoluteEndpoint,
    BadTriangle,
    BoundViolated,
    CapViolated,
    FormulaMismatch,
    NoFanoFound,
    NotAnEdge,
    OutOfScope,
    VerificationFailed,
)
from .plane import IncidenceStructure, Plane, restrict, verify_plane_axioms
from .polarity import PolarityGraph


@dataclass(frozen=True)
class Triangle:
    vertices: tuple[int, int, int]  # sorted
    classes: tuple[int, int, int]  # class label of each vertex, same order


@dataclass
class FanoCertificate:
    n: int
    source: str
    points: tuple[int, ...]  # p, a_i, a_j, a_k, v_i, v_j, v_k
    lines: tuple[int, ...]  # polar of each point, same order
    incidence: np.ndarray  # 7x7 bool, rows = lines
    verified: bool
    graph_embedding_ok: bool

    @property
    def bitmap_hex(self) -> str:
        bits = "".join("1" if b else "0" for b in self.incidence.ravel())
        return f"{int(bits, 2):013x}"


@dataclass
class TriangleCensus:
    n: int
    nonabsolute_edges: int
    total_triangles_lower_bound: int
    triangles_at_absolutes_upper_bound: int
    triangles_at_absolutes_exact: int
    good_triangles_exact: int
    fano_lower_bound: int

    def as_dict(self) -> dict:
        return asdict(self)


# -- closed forms ---------------------------------------------------------


def _require_even(n: int) -> None:
    if n < 2 or n % 2:
        raise OutOfScope(f"the counting argument needs an even order n >= 2, got {n}")


def nonabsolute_edge_formula(n: int) -> int:
    _require_even(n)
    return n * (n - 1) * (n + 1) // 2


def triangle_lower_bound(n: int) -> int:
    """Each non-absolute edge sits in one triangle, a triangle has three edges."""
    _require_even(n)
    return (n**3 - n) // 6


def absolute_triangle_cap(n: int) -> int:
    """Triangles through one absolute point: at most floor((n-1)/2)."""
    _require_even(n)
    return (n - 1) // 2


def lower_bound(n: int) -> int:
    """Guaranteed number of good triangles (Fano subplanes through the pole)."""
    b = triangle_lower_bound(n) - (n + 1) * absolute_triangle_cap(n)
    if b <= 0:  # pragma: no cover - positive for every even n
        raise BoundViolated(f"lower bound {b} is not positive at n={n}")
    return b


# -- edges and triangles ----------------------------------------------------


def count_nonabsolute_edges(G: PolarityGraph, *, check: bool = True) -> int:
    """Edges with neither end absolute, counted by scanning every class vertex."""
    G.partition()
    good = G.good_mask
    verts = np.flatnonzero(good)
    total = 0
    for start in range(0, len(verts), 4096):
        nb = G.neighbors_many(verts[start : start + 4096])
        total += int(((nb >= 0) & ~G.loops[np.maximum(nb, 0)]).sum())
    # class vertices are the only non-absolute vertices with non-absolute
    # neighbours (the pole sees only absolutes), so each edge shows up twice
    edges = total // 2
    if check:
        expected = nonabsolute_edge_formula(G.n)
        if edges != expected:
            raise FormulaMismatch("non-absolute edges", edges, expected)
    return edges


def triangle_of_edge(G: PolarityGraph, u: int, v: int) -> Triangle | None:
    """The unique triangle through edge uv, or None if its third vertex is absolute."""
    if not G.adjacent(u, v):
        raise NotAnEdge(f"{u} and {v} are not adjacent")
    if G.loops[u] or G.loops[v]:
        raise AbsoluteEndpoint(f"edge {u}-{v} has an absolute endpoint")
    w = G.common_neighbor(u, v)
    if G.loops[w]:
        return None
    return _triangle(G, (u, v, w))


def _triangle(G: PolarityGraph, verts) -> Triangle:
    vs = tuple(sorted(int(x) for x in verts))
    labels = tuple(int(G.class_of[x]) for x in vs)
    return Triangle(vs, labels)


def _good_third_vertices(G: PolarityGraph, us: np.ndarray):
    """For class vertices ``us``: neighbour matrix and the third vertex of each edge.

    Entries where the neighbour is absolute (or the loop slot) get -1 in both.
    """
    nb = G.neighbors_many(us)
    valid = nb >= 0
    valid &= ~G.loops[np.maximum(nb, 0)]
    third = G.common_neighbor_many(us[:, None], np.where(valid, nb, us[:, None]))
    third = np.where(valid, third, -1)
    good_third = valid & G.good_mask[np.maximum(third, 0)] & (third >= 0)
    return np.where(valid, nb, -1), np.where(good_third, third, -1)


def _count_chunk(G: PolarityGraph, us: np.ndarray) -> int:
    _, third = _good_third_vertices(G, us)
    return int((third >= 0).sum())


def count_good_triangles(G: PolarityGraph, *, workers: int = 1, chunk: int = 2048) -> int:
    """Exact good-triangle count via the geometric third vertex of every edge."""
    G.partition()
    verts = np.flatnonzero(G.good_mask)
    chunks = [verts[s : s + chunk] for s in range(0, len(verts), chunk)]
    if workers <= 1:
        directed = sum(_count_chunk(G, c) for c in chunks)
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            directed = sum(ex.map(lambda c: _count_chunk(G, c), chunks))
    # six directed edges per triangle
    if directed % 6:
        raise FormulaMismatch("directed good edges not divisible by 6", directed, directed - directed % 6)
    return directed // 6


def enumerate_good_triangles(G: PolarityGraph, *, chunk: int = 256):
    """Yield every good triangle once, in lexicographic order of sorted vertices."""
    G.partition()
    verts = np.flatnonzero(G.good_mask)
    for start in range(0, len(verts), chunk):
        us = verts[start : start + chunk]
        nb, third = _good_third_vertices(G, us)
        keep = (third >= 0) & (nb > us[:, None]) & (third > nb)
        r, c = np.nonzero(keep)
        a = us[r]
        b = nb[r, c]
        d = third[r, c]
        order = np.lexsort((d, b, a))
        labels = G.class_of
        for i in order:
            vs = (int(a[i]), int(b[i]), int(d[i]))
            yield Triangle(vs, (int(labels[vs[0]]), int(labels[vs[1]]), int(labels[vs[2]])))


def triangles_through(G: PolarityGraph, v: int) -> int:
    """Triangles (loop-free) containing vertex v, by scanning its neighbourhood."""
    nb = G.neighbors(v)
    inner = G.adjacent_many(nb[:, None], nb[None, :])
    return int(inner.sum()) // 2


def triangle_cap_at_absolute(G: PolarityGraph, a: int) -> int:
    if not G.loops[a]:
        raise ValueError(f"vertex {a} is not absolute")
    count = triangles_through(G, a)
    cap = absolute_triangle_cap(G.n)
    if count > cap:
        raise CapViolated(f"absolute vertex {a} lies in {count} triangles, cap is {cap}")
    return count


# -- certificates -----------------------------------------------------------


def assemble_fano(G: PolarityGraph, t: Triangle, *, strict: bool = True) -> FanoCertificate:
    vs = t.vertices
    if len(set(vs)) != 3 or not all(G.good_mask[v] for v in vs):
        raise BadTriangle(f"{vs} has an absolute vertex, the pole, or a repeat")
    if not all(G.adjacent(x, y) for x, y in combinations(vs, 2)):
        raise BadTriangle(f"{vs} is not a triangle")
    labels = [int(G.class_of[v]) for v in vs]
    if len(set(labels)) != 3:
        raise BadTriangle(f"{vs} has two vertices in one class")
    absol = [int(G.absolutes[i]) for i in labels]
    points = (G.pole, *absol, *vs)
    return certify(G, points, strict=strict)


def certify(G: PolarityGraph, points, *, strict: bool = True) -> FanoCertificate:
    """Build and check the certificate for seven points (lines = their polars).

    With ``strict`` a failed check raises :class:`VerificationFailed`.
    """
    plane = G.plane
    points = tuple(int(p) for p in points)
    lines = points  # polar is the identity on indices
    S = restrict(plane, points, lines)
    M = S.matrix()
    rep = verify_plane_axioms(S)
    regular = bool((M.sum(axis=0) == 3).all() and (M.sum(axis=1) == 3).all())
    verified = rep.ok and regular and len(points) == 7
    emb = _er2_embedding_ok(G, points)
    cert = FanoCertificate(
        n=G.n,
        source=plane.S.source,
        points=points,
        lines=lines,
        incidence=M,
        verified=verified,
        graph_embedding_ok=emb,
    )
    if strict and not (verified and emb):
        raise VerificationFailed(f"points {points} do not span a Fano subplane with the expected graph")
    return cert


def _er2_embedding_ok(G: PolarityGraph, points) -> bool:
    """Pole joined to three absolutes, each absolute to one triangle vertex, plus the triangle."""
    if len(points) != 7:
        return False
    p, a1, a2, a3, v1, v2, v3 = points
    loops_ok = [bool(G.loops[x]) for x in points] == [False, True, True, True, False, False, False]
    edges = [(p, a1), (p, a2), (p, a3), (a1, v1), (a2, v2), (a3, v3), (v1, v2), (v1, v3), (v2, v3)]
    return loops_ok and all(G.adjacent(x, y) for x, y in edges)


def find_fano(G: PolarityGraph) -> FanoCertificate:
    for t in enumerate_good_triangles(G):
        return assemble_fano(G, t)
    raise NoFanoFound(f"no good triangle in the polarity graph of order {G.n}")


def census(G: PolarityGraph, *, workers: int = 1) -> TriangleCensus:
    """Exact counts next to every counting expression, with the bound asserted."""
    n = G.n
    edges = count_nonabsolute_edges(G)
    exact = count_good_triangles(G, workers=workers)
    at_abs = sum(triangle_cap_at_absolute(G, int(a)) for a in G.absolutes)
    if triangles_through(G, G.pole):
        raise CapViolated("the pole lies in a triangle")
    c = TriangleCensus(
        n=n,
        nonabsolute_edges=edges,
        total_triangles_lower_bound=triangle_lower_bound(n),
        triangles_at_absolutes_upper_bound=(n + 1) * absolute_triangle_cap(n),
        triangles_at_absolutes_exact=at_abs,
        good_triangles_exact=exact,
        fano_lower_bound=lower_bound(n),
    )
    if exact < c.fano_lower_bound:
        raise BoundViolated(f"{exact} good triangles at n={n}, bound is {c.fano_lower_bound}")
    return c


count_fanos_through_pole = census


def certificate_record(cert: FanoCertificate, plane: Plane, census_: TriangleCensus | None = None) -> dict:
    """Stable JSON-ready record of a certificate."""
    rec = {
        "n": cert.n,
        "source": cert.source,
        "modulus": plane.S.modulus,
        "points": [{"index": i, "coords": _coords(plane.point(i))} for i in cert.points],
        "lines": [{"index": i, "coords": _coords(plane.line(i))} for i in cert.lines],
        "incidence_hex": cert.bitmap_hex,
        "verified": cert.verified,
        "graph_embedding_ok": cert.graph_embedding_ok,
    }
    if census_ is not None:
        rec["census"] = census_.as_dict()
    return rec


def _coords(obj) -> str:
    return repr(obj)


def brute_force_fano_count(G: PolarityGraph) -> int:
    """Oracle: 7-sets {pole, three absolutes, three others} whose polars cut out a Fano plane.

    Independent of the triangle machinery; feasible for n <= 4.
    """
    plane = G.plane
    others = np.flatnonzero(G.good_mask)
    count = 0
    for abs3 in combinations(G.absolutes.tolist(), 3):
        for rest in combinations(others.tolist(), 3):
            pts = (G.pole, *abs3, *rest)
            M = plane.incident_many(np.array(pts)[None, :], np.array(pts)[:, None])
            if _is_fano_matrix(M):
                count += 1
    return count


def _is_fano_matrix(M: np.ndarray) -> bool:
    if not ((M.sum(0) == 3).all() and (M.sum(1) == 3).all()):
        return False
    return verify_plane_axioms(IncidenceStructure.from_matrix(M)).ok
