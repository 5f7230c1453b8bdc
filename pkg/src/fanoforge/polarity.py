"""Orthogonal polarity and its polarity graph.

The polarity swaps ``Affine(a, b) <-> Regular(a, b)``, ``Slope(m) <->
Vertical(m)`` and ``Infinity <-> LineAtInfinity``. With the index layout in
:mod:`fanoforge.plane` this maps point index ``i`` to line index ``i``, so
the graph needs no stored adjacency: ``u ~ v`` iff point ``u`` lies on line
``v``.

Loops at absolute points are kept out of :meth:`PolarityGraph.neighbors`;
:meth:`PolarityGraph.line_neighborhood` returns the full polar line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    AbsolutesNotCollinear,
    DegeneratePair,
    NotOrthogonal,
    PartitionDefect,
)
from .plane import (
    Affine,
    Infinity,
    LineAtInfinity,
    Plane,
    PlaneLine,
    PlanePoint,
    Regular,
    Slope,
    Vertical,
)

#: Dense adjacency matrices are only built up to this order.
DENSE_LIMIT = 64


def polar(x: PlanePoint | PlaneLine) -> PlaneLine | PlanePoint:
    if isinstance(x, Affine):
        return Regular(x.x, x.y)
    if isinstance(x, Regular):
        return Affine(x.m, x.k)
    if isinstance(x, Slope):
        return Vertical(x.m)
    if isinstance(x, Vertical):
        return Slope(x.c)
    if isinstance(x, Infinity):
        return LineAtInfinity()
    if isinstance(x, LineAtInfinity):
        return Infinity()
    raise TypeError(f"not a point or line: {x!r}")


def is_absolute(plane: Plane, pt: PlanePoint) -> bool:
    return plane.incident(pt, polar(pt))


def absolute_mask(plane: Plane) -> np.ndarray:
    idx = np.arange(plane.size)
    return plane.incident_many(idx, idx)


def incidence_preservation_witness(plane: Plane, pairs=None):
    """First point pair (u, v) with ``u in polar(v)`` but ``v not in polar(u)``.

    Checks all pairs unless ``pairs`` (an ``(m, 2)`` index array) is given.
    Returns None when the polarity respects incidence.
    """
    if pairs is None:
        idx = np.arange(plane.size)
        A = plane.incident_many(idx[None, :], idx[:, None])  # A[v, u]: u on polar(v)
        bad = np.argwhere(A != A.T)
        if len(bad):
            v, u = bad[0]
            return (int(u), int(v))
        return None
    pairs = np.asarray(pairs)
    fwd = plane.incident_many(pairs[:, 0], pairs[:, 1])
    back = plane.incident_many(pairs[:, 1], pairs[:, 0])
    bad = np.flatnonzero(fwd != back)
    if len(bad):
        u, v = pairs[bad[0]]
        return (int(u), int(v))
    return None


def absolute_points(plane: Plane) -> list[PlanePoint]:
    idx = np.flatnonzero(absolute_mask(plane))
    if len(idx) != plane.n + 1:
        raise NotOrthogonal(len(idx), plane.n + 1)
    return [plane.point(i) for i in idx]


def baer_line(plane: Plane, absolutes: list[PlanePoint] | None = None) -> PlaneLine:
    """The line carrying every absolute point."""
    if absolutes is None:
        absolutes = absolute_points(plane)
    if len(absolutes) < 2:
        raise AbsolutesNotCollinear(f"need at least two absolute points, got {len(absolutes)}")
    ln = plane.join(absolutes[0], absolutes[1])
    for a in absolutes[2:]:
        if not plane.incident(a, ln):
            raise AbsolutesNotCollinear(f"{a!r} is not on {ln!r}, the join of the first two absolute points")
    return ln


def pole(plane: Plane) -> PlanePoint:
    return polar(baer_line(plane))


@dataclass
class Lemma21Report:
    """Outcome of the five local checks on a polarity graph."""

    mode: str
    probes: dict[str, int] = field(default_factory=dict)
    witnesses: dict[str, tuple | None] = field(default_factory=dict)

    def passed(self, key: str) -> bool:
        return self.witnesses.get(key) is None

    @property
    def ok(self) -> bool:
        return all(w is None for w in self.witnesses.values())

    def as_dict(self) -> dict:
        return {
            key: {"pass": self.passed(key), "probes": self.probes[key], "witness": self.witnesses[key]}
            for key in ("a", "b", "c", "d", "e")
        }


class PolarityGraph:
    """Polarity graph of a plane, with the pole / absolute / class structure.

    Vertices are point indices. ``absolutes`` is sorted, so class ``i`` is
    the set of non-absolute, non-pole neighbours of ``absolutes[i]``.
    """

    def __init__(self, plane: Plane, *, check_polarity: bool = True):
        if check_polarity and not plane.S.verified_commutative:
            raise ValueError("the canonical polarity needs a commutative presemifield")
        self.plane = plane
        self.n = plane.n
        self.size = plane.size
        self.loops = absolute_mask(plane)
        abs_idx = np.flatnonzero(self.loops)
        if len(abs_idx) != self.n + 1:
            raise NotOrthogonal(len(abs_idx), self.n + 1)
        self.absolutes = abs_idx
        self.baer_line = baer_line(plane, [plane.point(i) for i in abs_idx])
        self.pole = plane.point_index(polar(self.baer_line))

    def __repr__(self):
        return f"PolarityGraph(n={self.n}, pole={self.pole})"

    # -- adjacency -------------------------------------------------------
    def adjacent(self, u: int, v: int) -> bool:
        return u != v and bool(self.plane.incident_many(u, v))

    def adjacent_many(self, u, v) -> np.ndarray:
        u, v = np.broadcast_arrays(np.asarray(u), np.asarray(v))
        return self.plane.incident_many(u, v) & (u != v)

    def line_neighborhood(self, v: int) -> np.ndarray:
        """Points of polar(v): the neighbourhood with the loop counted."""
        return self.plane.points_on(int(v))

    def neighbors(self, v: int) -> np.ndarray:
        nb = self.line_neighborhood(v)
        return nb[nb != v]

    def neighbors_many(self, vs) -> np.ndarray:
        """``(len(vs), n+1)`` neighbour rows; the loop slot of an absolute vertex is -1."""
        vs = np.asarray(vs, dtype=np.int64)
        nb = self.plane.points_on_many(vs)
        return np.where(nb == vs[:, None], -1, nb)

    def common_neighbor(self, u: int, v: int) -> int:
        """The unique vertex on both polar(u) and polar(v).

        This may be ``u`` or ``v`` itself when that endpoint is absolute.
        """
        if u == v:
            raise DegeneratePair(f"common neighbour of {u} with itself")
        return int(self.plane.meet_many(u, v))

    def common_neighbor_many(self, u, v) -> np.ndarray:
        return self.plane.meet_many(u, v)

    def edges(self):
        """Undirected edges ``(u, v)`` with ``u < v`` in index order, loops excluded."""
        verts = np.arange(self.size)
        for start in range(0, self.size, 4096):
            block = verts[start : start + 4096]
            nb = self.neighbors_many(block)
            us = np.repeat(block, nb.shape[1])
            vs = nb.ravel()
            keep = vs > us
            yield from zip(us[keep].tolist(), vs[keep].tolist())

    def degree_sum(self) -> int:
        return int(self.size * (self.n + 1) - self.loops.sum())

    def adjacency_matrix(self) -> np.ndarray:
        """Dense loop-free boolean adjacency; refused above :data:`DENSE_LIMIT`."""
        if self.n > DENSE_LIMIT:
            raise MemoryError(f"dense adjacency refused for n={self.n} > {DENSE_LIMIT}")
        idx = np.arange(self.size)
        A = self.plane.incident_many(idx[None, :], idx[:, None])
        np.fill_diagonal(A, False)
        return A

    # -- partition -------------------------------------------------------
    @cached_property
    def class_of(self) -> np.ndarray:
        """Class label of each vertex; -1 for the pole and for absolute points."""
        labels = np.full(self.size, -1, dtype=np.int64)
        for i, a in enumerate(self.absolutes):
            nb = self.neighbors(a)
            nb = nb[nb != self.pole]
            if np.any(self.loops[nb]):
                raise PartitionDefect(f"absolute point {a} is adjacent to another absolute point", int(a))
            clash = nb[labels[nb] != -1]
            if len(clash):
                raise PartitionDefect(f"vertex {clash[0]} lies in two classes", int(clash[0]))
            labels[nb] = i
        return labels

    def partition(self) -> list[np.ndarray]:
        """Classes ``N_1..N_{n+1}`` (0-based here), each sorted."""
        labels = self.class_of
        classes = [np.flatnonzero(labels == i) for i in range(len(self.absolutes))]
        for i, cls in enumerate(classes):
            if len(cls) != self.n - 1:
                raise PartitionDefect(f"class {i} has {len(cls)} vertices, expected {self.n - 1}", i)
        covered = np.zeros(self.size, dtype=bool)
        covered[self.pole] = True
        covered[self.absolutes] = True
        covered |= labels >= 0
        if not covered.all():
            miss = int(np.flatnonzero(~covered)[0])
            raise PartitionDefect(f"vertex {miss} is in no part", miss)
        if self.loops[self.pole] or labels[self.pole] != -1:
            raise PartitionDefect("the pole is absolute or classed", self.pole)
        return classes

    @property
    def good_mask(self) -> np.ndarray:
        """Vertices that are neither absolute nor the pole."""
        return self.class_of >= 0

    # -- Lemma checks ----------------------------------------------------
    def check_lemma21(self, mode: str | None = None, *, samples: int = 100_000, seed: int = 0) -> Lemma21Report:
        if mode is None:
            mode = "exhaustive" if self.n <= 32 else "sampled"
        if mode == "exhaustive":
            return lemma21_dense(self.adjacency_matrix(), self.loops)
        if mode == "sampled":
            return self._lemma21_sampled(samples, seed)
        raise ValueError(f"unknown mode {mode!r}")

    def _lemma21_sampled(self, samples: int, seed: int) -> Lemma21Report:
        rng = np.random.default_rng(seed)
        plane, size, n = self.plane, self.size, self.n
        rep = Lemma21Report(mode="sampled")
        chunk = max(1, 2_000_000 // (n + 1) ** 2)

        def batches():
            done = 0
            while done < samples:
                m = min(chunk, samples - done)
                yield m
                done += m

        # (a) closed neighbourhoods of random distinct pairs meet in one vertex,
        # and that vertex is what the geometric meet returns
        wit = None
        for m in batches():
            u = rng.integers(0, size, m)
            v = (u + rng.integers(1, size, m)) % size
            nu, nv = plane.points_on_many(u), plane.points_on_many(v)
            eq = nu[:, :, None] == nv[:, None, :]
            cnt = eq.sum(axis=(1, 2))
            geo = plane.meet_many(u, v)
            brute = np.where(eq.any(axis=2), nu, -1).max(axis=1)
            bad = np.flatnonzero((cnt != 1) | (geo != brute))
            if len(bad):
                r = bad[0]
                wit = (int(u[r]), int(v[r]), int(cnt[r]))
                break
        rep.probes["a"], rep.witnesses["a"] = samples, wit

        # (b) a path x - v - y never closes into a 4-cycle: the loop-free
        # neighbourhoods of x and y share only v
        wit = None
        for m in batches():
            v = rng.integers(0, size, m)
            nb = self.neighbors_many(v)
            i = rng.integers(0, n + 1, m)
            j = (i + rng.integers(1, n + 1, m)) % (n + 1)
            x, y = nb[np.arange(m), i], nb[np.arange(m), j]
            ok_pair = (x >= 0) & (y >= 0)
            x, y, vv = x[ok_pair], y[ok_pair], v[ok_pair]
            nx, ny = self.neighbors_many(x), self.neighbors_many(y)
            eq = (nx[:, :, None] == ny[:, None, :]) & (nx[:, :, None] >= 0)
            common = np.where(eq.any(axis=2), nx, -1)
            others = ((common >= 0) & (common != vv[:, None])).sum(axis=1)
            bad = np.flatnonzero(others > 0)
            if len(bad):
                r = bad[0]
                wit = (int(x[r]), int(vv[r]), int(y[r]))
                break
        rep.probes["b"], rep.witnesses["b"] = samples, wit

        # (c) absolute points are pairwise non-adjacent; always exhaustive
        a = self.absolutes
        adj = self.adjacent_many(a[:, None], a[None, :])
        bad = np.argwhere(adj)
        rep.probes["c"] = len(a) * (len(a) - 1) // 2
        rep.witnesses["c"] = (int(a[bad[0][0]]), int(a[bad[0][1]])) if len(bad) else None

        # (d) inside any neighbourhood every vertex has at most one neighbour
        wit = None
        rows_all = np.arange(chunk)
        for m in batches():
            v = rng.integers(0, size, m)
            nb = self.neighbors_many(v)
            rows = rows_all[:m, None]
            member = np.zeros((m, size + 1), dtype=bool)  # column -1 stays False
            member[rows, nb] = True
            member[:, -1] = False
            nbw = self.neighbors_many(np.where(nb >= 0, nb, v[:, None]).ravel()).reshape(m, n + 1, n + 1)
            deg = member[rows[:, :, None], nbw].sum(axis=2)
            deg[nb < 0] = 0
            bad = np.argwhere(deg > 1)
            if len(bad):
                r, c = bad[0]
                wit = (int(v[r]), int(nb[r, c]), int(deg[r, c]))
                break
        rep.probes["d"], rep.witnesses["d"] = samples, wit

        # (e) an edge between non-absolute vertices has exactly one third
        # vertex adjacent to both
        wit = None
        nonabs = np.flatnonzero(~self.loops)
        for m in batches():
            u = nonabs[rng.integers(0, len(nonabs), m)]
            nb = self.neighbors_many(u)
            v = nb[np.arange(m), rng.integers(0, n + 1, m)]
            keep = ~self.loops[v]
            u, v = u[keep], v[keep]
            nu, nv = self.neighbors_many(u), self.neighbors_many(v)
            eq = (nu[:, :, None] == nv[:, None, :]) & (nu[:, :, None] >= 0)
            cnt = eq.sum(axis=(1, 2))
            bad = np.flatnonzero(cnt != 1)
            if len(bad):
                r = bad[0]
                wit = (int(u[r]), int(v[r]), int(cnt[r]))
                break
        rep.probes["e"], rep.witnesses["e"] = samples, wit
        return rep


def lemma21_dense(A: np.ndarray, loops: np.ndarray) -> Lemma21Report:
    """All five checks from a loop-free adjacency matrix plus loop flags.

    Works on any graph, which is what lets tests inject defects.
    """
    A = np.asarray(A, dtype=bool)
    loops = np.asarray(loops, dtype=bool)
    size = A.shape[0]
    rep = Lemma21Report(mode="exhaustive")
    Af = A.astype(np.float32)
    C = Af + np.diag(loops.astype(np.float32))
    CC = np.rint(C @ C).astype(np.int64)
    AA = np.rint(Af @ Af).astype(np.int64)

    off = ~np.eye(size, dtype=bool)
    bad = np.argwhere(off & (CC != 1))
    rep.probes["a"] = size * (size - 1) // 2
    rep.witnesses["a"] = tuple(int(x) for x in (*bad[0], CC[tuple(bad[0])])) if len(bad) else None

    bad = np.argwhere(off & (AA > 1))
    rep.probes["b"] = size * (size - 1) // 2
    rep.witnesses["b"] = tuple(int(x) for x in (*bad[0], AA[tuple(bad[0])])) if len(bad) else None

    ab = np.flatnonzero(loops)
    bad = np.argwhere(A[np.ix_(ab, ab)])
    rep.probes["c"] = len(ab) * (len(ab) - 1) // 2
    rep.witnesses["c"] = (int(ab[bad[0][0]]), int(ab[bad[0][1]])) if len(bad) else None

    # AA[v, w] for w ~ v counts neighbours of w inside N(v)
    bad = np.argwhere(A & (AA > 1))
    rep.probes["d"] = int(A.sum())
    rep.witnesses["d"] = tuple(int(x) for x in (*bad[0], AA[tuple(bad[0])])) if len(bad) else None

    na = ~loops
    sel = A & na[:, None] & na[None, :]
    bad = np.argwhere(sel & (AA != 1))
    rep.probes["e"] = int(sel.sum()) // 2
    rep.witnesses["e"] = tuple(int(x) for x in (*bad[0], AA[tuple(bad[0])])) if len(bad) else None
    return rep
