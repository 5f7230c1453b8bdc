"""Text and binary export formats, with readers for round-trip checks.

Incidence text::

    plane n=<order> source=<field|knuth|table>
    <sorted point indices of line 0>
    ...

Incidence bitmap: one row of ``ceil((n^2+n+1)/8)`` bytes per line in line
index order; point ``i`` is bit ``7 - i % 8`` of byte ``i // 8``
(``numpy.packbits`` order).

Edge list::

    # polarity graph n=<order> absolutes=<count> pole=<index>
    u v        (u < v; a loop is written u u)
"""

from __future__ import annotations

import json

import numpy as np

from .errors import TableFormatError
from .plane import IncidenceStructure, Plane
from .polarity import PolarityGraph


def incidence_text(plane: Plane, *, chunk: int = 4096) -> str:
    parts = [f"plane n={plane.n} source={plane.S.source}\n"]
    for start in range(0, plane.size, chunk):
        rows = plane.points_on_many(np.arange(start, min(start + chunk, plane.size)))
        parts.append("".join(" ".join(map(str, r)) + "\n" for r in rows.tolist()))
    return "".join(parts)


def read_incidence_text(text: str) -> tuple[int, str, IncidenceStructure]:
    lines = text.splitlines()
    if not lines:
        raise TableFormatError("empty incidence file")
    head = lines[0].split()
    try:
        if head[0] != "plane":
            raise ValueError
        n = int(head[1].removeprefix("n="))
        source = head[2].removeprefix("source=")
    except (IndexError, ValueError) as exc:
        raise TableFormatError(f"bad incidence header {lines[0]!r}") from exc
    rows = [np.array([int(t) for t in ln.split()], dtype=np.int64) for ln in lines[1:] if ln.strip()]
    return n, source, IncidenceStructure(n * n + n + 1, rows)


def incidence_bitmap(plane: Plane, *, chunk: int = 4096) -> bytes:
    size = plane.size
    out = []
    for start in range(0, size, chunk):
        lns = np.arange(start, min(start + chunk, size))
        rows = np.zeros((len(lns), size), dtype=bool)
        rows[np.arange(len(lns))[:, None], plane.points_on_many(lns)] = True
        out.append(np.packbits(rows, axis=1).tobytes())
    return b"".join(out)


def read_incidence_bitmap(data: bytes, n: int) -> IncidenceStructure:
    size = n * n + n + 1
    width = (size + 7) // 8
    if len(data) != width * size:
        raise TableFormatError(f"bitmap has {len(data)} bytes, expected {width * size}")
    M = np.unpackbits(np.frombuffer(data, dtype=np.uint8).reshape(size, width), axis=1)[:, :size]
    return IncidenceStructure.from_matrix(M)


def edge_list(G: PolarityGraph) -> str:
    parts = [f"# polarity graph n={G.n} absolutes={len(G.absolutes)} pole={G.pole}\n"]
    for start in range(0, G.size, 4096):
        us = np.arange(start, min(start + 4096, G.size))
        nb = G.plane.points_on_many(us)  # includes the loop slot
        r, c = np.nonzero(nb >= us[:, None])
        parts.append("".join(f"{u} {v}\n" for u, v in zip(us[r].tolist(), nb[r, c].tolist())))
    return "".join(parts)


def read_edge_list(text: str):
    """Returns (header fields, edges, loops) with edges as a list of (u, v), u < v."""
    lines = text.splitlines()
    header = dict(tok.split("=", 1) for tok in lines[0].lstrip("# ").split() if "=" in tok)
    edges, loops = [], []
    for ln in lines[1:]:
        if not ln.strip() or ln.startswith("#"):
            continue
        u, v = map(int, ln.split())
        (loops if u == v else edges).append((u, v) if u == v else (min(u, v), max(u, v)))
    return {k: int(v) for k, v in header.items()}, edges, [u for u, _ in loops]


def dumps(record: dict) -> str:
    """Key order is the insertion order; output ends with a newline."""
    return json.dumps(record, indent=2) + "\n"
