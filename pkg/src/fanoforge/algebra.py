"""Commutative presemifields of order 2^k.

A presemifield is stored as its full multiplication table. Every constructor
runs :func:`verify_axioms` before handing the object out, so a bad formula or
a corrupt table file fails here instead of producing a broken plane later.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import gf2
from .errors import AxiomViolation, DegenerateSlope, TableFormatError

#: Above this order distributivity is checked through row/column linearity
#: instead of the cubic triple scan.
EXHAUSTIVE_AXIOM_LIMIT = 64


@dataclass(frozen=True)
class AxiomReport:
    distributive: bool
    no_zero_divisors: bool
    commutative: bool
    distributivity_witness: tuple[str, int, int, int] | None = None
    zero_divisor_witness: tuple[int, int] | None = None
    commutativity_witness: tuple[int, int] | None = None
    method: str = "exhaustive"
    closed: bool = True
    closure_witness: tuple[int, int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.closed and self.distributive and self.no_zero_divisors and self.commutative

    def failures(self) -> list[str]:
        out = []
        if not self.closed:
            a, b, v = self.closure_witness
            out.append(f"not closed: {a}o{b} = {v} is not an element")
        if not self.distributive:
            side, a, b, c = self.distributivity_witness
            if side == "left":
                out.append(f"distributivity fails: {a}o({b}+{c}) != {a}o{b} + {a}o{c}")
            else:
                out.append(f"distributivity fails: ({a}+{b})o{c} != {a}o{c} + {b}o{c}")
        if not self.no_zero_divisors:
            a, b = self.zero_divisor_witness
            out.append(f"zero divisors: {a}o{b} = 0")
        if not self.commutative:
            a, b = self.commutativity_witness
            out.append(f"not commutative: {a}o{b} != {b}o{a}")
        return out


@dataclass(frozen=True, eq=False)
class Presemifield:
    """Multiplication table ``table[a, b] = a o b`` on ``n = 2**k`` elements.

    ``source`` records where the table came from (``field``, ``knuth`` or
    ``table``); ``modulus`` is the field polynomial when there is one.
    """

    k: int
    table: np.ndarray = field(repr=False)
    source: str = "table"
    modulus: int | None = None
    report: AxiomReport | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return 1 << self.k

    @property
    def verified_distributive(self) -> bool:
        return self.report is not None and self.report.distributive

    @property
    def verified_no_zero_divisors(self) -> bool:
        return self.report is not None and self.report.no_zero_divisors

    @property
    def verified_commutative(self) -> bool:
        return self.report is not None and self.report.commutative

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def __eq__(self, other):
        if not isinstance(other, Presemifield):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.k, self.table.tobytes()))

    # Inverse tables are filled lazily; the dataclass is frozen so go
    # through object.__setattr__.
    @property
    def left_inverse(self) -> np.ndarray:
        """``left_inverse[m, c]`` is the x with ``m o x = c`` (row 0 is junk)."""
        inv = self.__dict__.get("_linv")
        if inv is None:
            inv = _inverse_rows(self.table)
            object.__setattr__(self, "_linv", inv)
        return inv

    @property
    def right_inverse(self) -> np.ndarray:
        """``right_inverse[m, c]`` is the x with ``x o m = c``."""
        inv = self.__dict__.get("_rinv")
        if inv is None:
            inv = _inverse_rows(self.table.T)
            object.__setattr__(self, "_rinv", inv)
        return inv


def _inverse_rows(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    inv = np.zeros_like(table)
    rows = np.arange(1, n)[:, None]
    inv[rows, table[1:]] = np.arange(n)[None, :]
    return inv


def _freeze(table) -> np.ndarray:
    arr = np.array(table, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


def verify_axioms(P: Presemifield | np.ndarray, *, exhaustive: bool | None = None) -> AxiomReport:
    """Check distributivity, absence of zero divisors and commutativity.

    Orders up to :data:`EXHAUSTIVE_AXIOM_LIMIT` get the full triple scan.
    Larger orders check that every row and column is GF(2)-linear, which is
    exactly equivalent to both distributive laws, and scan all pairs for zero
    products.
    """
    table = P.table if isinstance(P, Presemifield) else np.asarray(P, dtype=np.int64)
    n = table.shape[0]
    if table.shape != (n, n) or n & (n - 1) or n < 2:
        raise ValueError(f"table must be square with a power-of-two side, got {table.shape}")
    clo_w = None
    outside = np.argwhere((table < 0) | (table >= n))
    if len(outside):
        a, b = (int(v) for v in outside[0])
        clo_w = (a, b, int(table[a, b]))
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_AXIOM_LIMIT

    dist_w = _distributivity_exhaustive(table) if exhaustive else _distributivity_linear(table)

    zd_w = None
    zeros = np.argwhere(table[1:, 1:] == 0)
    if len(zeros):
        a, b = zeros[0] + 1
        zd_w = (int(a), int(b))

    comm_w = None
    asym = np.argwhere(table != table.T)
    if len(asym):
        a, b = asym[0]
        comm_w = (int(a), int(b))

    return AxiomReport(
        distributive=dist_w is None,
        no_zero_divisors=zd_w is None,
        commutative=comm_w is None,
        distributivity_witness=dist_w,
        zero_divisor_witness=zd_w,
        commutativity_witness=comm_w,
        method="exhaustive" if exhaustive else "linearity",
        closed=clo_w is None,
        closure_witness=clo_w,
    )


def _distributivity_exhaustive(table):
    n = table.shape[0]
    idx = np.arange(n)
    bxc = idx[:, None] ^ idx[None, :]
    for a in range(n):
        row = table[a]
        # a o (b + c) vs a o b + a o c
        bad = np.argwhere(row[bxc] != (row[:, None] ^ row[None, :]))
        if len(bad):
            b, c = bad[0]
            return ("left", a, int(b), int(c))
    for c in range(n):
        col = table[:, c]
        bad = np.argwhere(col[bxc] != (col[:, None] ^ col[None, :]))
        if len(bad):
            a, b = bad[0]
            return ("right", int(a), int(b), c)
    return None


def _distributivity_linear(table):
    n = table.shape[0]
    k = n.bit_length() - 1
    idx = np.arange(n)
    basis = [1 << j for j in range(k)]

    def expand(images):
        # images[..., j] = f(e_j); returns f(x) for every x by linearity
        out = np.zeros(images.shape[:-1] + (n,), dtype=np.int64)
        for j in range(k):
            bit = ((idx >> j) & 1).astype(bool)
            out[..., bit] ^= images[..., j : j + 1]
        return out

    left = expand(table[:, basis])
    bad = np.argwhere(left != table)
    if len(bad):
        a, x = (int(v) for v in bad[0])
        return ("left", a, *_split_witness(table[a], x))
    right = expand(table[basis, :].T)
    bad = np.argwhere(right != table.T)
    if len(bad):
        c, x = (int(v) for v in bad[0])
        b, cc = _split_witness(table[:, c], x)
        return ("right", b, cc, c)
    return None


def _split_witness(vec, x):
    # find b, c with b ^ c = x and vec[x] != vec[b] ^ vec[c]
    n = len(vec)
    for b in range(n):
        c = x ^ b
        if vec[x] != vec[b] ^ vec[c]:
            return b, c
    return 0, x  # pragma: no cover - linear failure always has a witness pair


def _build(k, table, source, modulus=None, *, require_commutative=True) -> Presemifield:
    table = _freeze(table)
    report = verify_axioms(table)
    bad = not (report.closed and report.distributive and report.no_zero_divisors)
    if require_commutative and not report.commutative:
        bad = True
    if bad:
        raise AxiomViolation("; ".join(report.failures()), report)
    return Presemifield(k=k, table=table, source=source, modulus=modulus, report=report)


def field_presemifield(k: int, modulus: int | None = None) -> Presemifield:
    """GF(2^k) itself, the desarguesian coordinate ring."""
    if modulus is None:
        modulus = gf2.default_modulus(k)
    return _build(k, gf2.field_table(k, modulus), "field", modulus)


def knuth_binary_table(k: int, modulus: int) -> np.ndarray:
    """x o y = xy + (x Tr(y) + y Tr(x))^2 over GF(2^k)."""
    F = gf2.field_table(k, modulus)
    tr = gf2.trace_vector(k, modulus)
    n = 1 << k
    idx = np.arange(n)
    inner = np.where(tr[None, :] == 1, idx[:, None], 0) ^ np.where(tr[:, None] == 1, idx[None, :], 0)
    square = F[idx, idx]
    return F ^ square[inner]


def knuth_binary_presemifield(k: int, modulus: int | None = None) -> Presemifield:
    if k < 3 or k % 2 == 0:
        raise ValueError(f"Knuth binary presemifields need odd k >= 3, got {k}")
    if modulus is None:
        modulus = gf2.default_modulus(k)
    return _build(k, knuth_binary_table(k, modulus), "knuth", modulus)


def presemifield_from_array(table, *, source="table", require_commutative=True) -> Presemifield:
    arr = np.asarray(table, dtype=np.int64)
    n = arr.shape[0]
    if arr.ndim != 2 or arr.shape != (n, n) or n < 2 or n & (n - 1):
        raise TableFormatError(f"table must be 2^k x 2^k, got shape {arr.shape}")
    if arr.min() < 0 or arr.max() >= n:
        raise TableFormatError("table entries must lie in [0, n)")
    return _build(n.bit_length() - 1, arr, source, require_commutative=require_commutative)


def format_table(P: Presemifield) -> str:
    lines = [f"semifield k={P.k} n={P.n}"]
    lines += [" ".join(str(int(v)) for v in row) for row in P.table]
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> np.ndarray:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise TableFormatError("empty table file")
    head = rows[0]
    if len(head) != 3 or head[0] != "semifield" or not head[1].startswith("k=") or not head[2].startswith("n="):
        raise TableFormatError(f"bad header: {' '.join(head)!r}")
    try:
        k = int(head[1][2:])
        n = int(head[2][2:])
    except ValueError as exc:
        raise TableFormatError(f"bad header: {' '.join(head)!r}") from exc
    if k < 1 or n != 1 << k:
        raise TableFormatError(f"header declares k={k} but n={n}")
    body = rows[1:]
    if len(body) != n or any(len(r) != n for r in body):
        raise TableFormatError(f"expected {n} rows of {n} entries")
    try:
        return np.array([[int(v) for v in r] for r in body], dtype=np.int64)
    except ValueError as exc:
        raise TableFormatError(f"non-integer entry: {exc}") from exc


def presemifield_from_table(path: str | Path, *, require_commutative=True) -> Presemifield:
    text = Path(path).read_text()
    return presemifield_from_array(parse_table(text), require_commutative=require_commutative)


def write_table(P: Presemifield, path: str | Path) -> None:
    Path(path).write_text(format_table(P))


def left_mult_matrix(P: Presemifield, m: int) -> list[int]:
    """Columns of the GF(2) matrix of ``x -> m o x`` as bitmasks."""
    return [int(P.table[m, 1 << j]) for j in range(P.k)]


def solve_left(P: Presemifield, m: int, c: int, *, use_table: bool = True) -> int:
    """The unique x with ``m o x = c``."""
    if m == 0:
        raise DegenerateSlope("slope 0 has no left inverse")
    if use_table:
        return int(P.left_inverse[m, c])
    x = gf2.gf2_solve(left_mult_matrix(P, m), c)
    if x is None:  # pragma: no cover - impossible for a verified presemifield
        raise DegenerateSlope(f"x -> {m} o x is singular")
    return x


def solve_right(P: Presemifield, m: int, c: int) -> int:
    """The unique x with ``x o m = c``."""
    if m == 0:
        raise DegenerateSlope("slope 0 has no right inverse")
    return int(P.right_inverse[m, c])


def mutate_entry(P: Presemifield | np.ndarray, a: int, b: int, value: int) -> np.ndarray:
    table = np.array(P.table if isinstance(P, Presemifield) else P, dtype=np.int64)
    table[a, b] = value
    return table
