"""Binary field arithmetic and small GF(2) linear algebra on int bitmasks.

Elements of GF(2^k) are ints in ``[0, 2**k)``: bit ``i`` is the coefficient
of ``x**i`` in a polynomial basis, so addition is XOR.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ConstructionError


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree <= deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if not poly & 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, f) == 0:
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(k: int) -> int:
    """Numerically smallest irreducible polynomial of degree ``k``.

    k=1: 0b10, k=2: 0b111, k=3: 0b1011, k=4: 0b10011, k=5: 0b100101,
    k=6: 0b1000011, k=7: 0b10000011, k=8: 0b100011011.
    """
    if k < 1:
        raise ConstructionError(f"field dimension must be >= 1, got {k}")
    for poly in range(1 << k, 1 << (k + 1)):
        if is_irreducible(poly):
            return poly
    raise ConstructionError(f"no irreducible polynomial of degree {k}")  # pragma: no cover


def check_modulus(k: int, modulus: int) -> None:
    if modulus.bit_length() - 1 != k:
        raise ConstructionError(
            f"modulus {modulus:#b} has degree {modulus.bit_length() - 1}, expected {k}"
        )
    if not is_irreducible(modulus):
        raise ConstructionError(f"modulus {modulus:#b} is reducible over GF(2)")


def gf_mul(a: int, b: int, k: int, modulus: int) -> int:
    """Product of ``a`` and ``b`` in GF(2^k) = GF(2)[x]/(modulus)."""
    check_modulus(k, modulus)
    n = 1 << k
    if not (0 <= a < n and 0 <= b < n):
        raise ValueError(f"operands must lie in [0, {n})")
    return poly_mod(clmul(a, b), modulus)


def gf_pow(a: int, e: int, k: int, modulus: int) -> int:
    out = poly_mod(1, modulus)
    base = a
    while e:
        if e & 1:
            out = poly_mod(clmul(out, base), modulus)
        base = poly_mod(clmul(base, base), modulus)
        e >>= 1
    return out


def gf_trace(a: int, k: int, modulus: int | None = None) -> int:
    """Absolute trace a + a^2 + ... + a^(2^(k-1)); returns 0 or 1."""
    if modulus is None:
        modulus = default_modulus(k)
    acc = 0
    t = a
    for _ in range(k):
        acc ^= t
        t = poly_mod(clmul(t, t), modulus)
    if acc not in (0, 1):
        raise ConstructionError(f"trace of {a} left the prime field: {acc}")  # pragma: no cover
    return acc


def field_table(k: int, modulus: int) -> np.ndarray:
    """Full ``2^k x 2^k`` multiplication table of GF(2^k)."""
    check_modulus(k, modulus)
    n = 1 << k
    elems = np.arange(n, dtype=np.int64)
    # shifted[j] = a * x^j reduced, for every a at once
    shifted = elems.copy()
    table = np.zeros((n, n), dtype=np.int64)
    for j in range(k):
        bit = ((elems >> j) & 1).astype(bool)
        table[:, bit] ^= shifted[:, None]
        shifted = shifted << 1
        overflow = (shifted >> k) & 1
        shifted = np.where(overflow == 1, shifted ^ modulus, shifted)
    return table


def trace_vector(k: int, modulus: int) -> np.ndarray:
    return np.array([gf_trace(a, k, modulus) for a in range(1 << k)], dtype=np.int64)


# ---------------------------------------------------------------------------
# GF(2) linear algebra; a matrix is a list of row bitmasks.


def gf2_rank(rows: list[int]) -> int:
    work = list(rows)
    rank = 0
    while work:
        pivot = work.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        work = [r ^ pivot if r & low else r for r in work]
    return rank


def gf2_solve(columns: list[int], rhs: int) -> int | None:
    """Solve ``A x = rhs`` where ``columns[j]`` is column j of A as a bitmask.

    Returns the solution bitmask ``x`` (any one if the system is singular but
    consistent), or ``None`` if inconsistent.
    """
    # Augmented rows over the column basis: track which combination of
    # columns produced each reduced vector.
    basis: list[tuple[int, int]] = []  # (vector, combination)
    for j, col in enumerate(columns):
        vec, comb = col, 1 << j
        for bvec, bcomb in basis:
            if vec & (bvec & -bvec):
                vec ^= bvec
                comb ^= bcomb
        if vec:
            basis.append((vec, comb))
    target, sol = rhs, 0
    for bvec, bcomb in basis:
        if target & (bvec & -bvec):
            target ^= bvec
            sol ^= bcomb
    return None if target else sol


__all__ = [
    "check_modulus",
    "clmul",
    "default_modulus",
    "field_table",
    "gf2_rank",
    "gf2_solve",
    "gf_mul",
    "gf_pow",
    "gf_trace",
    "is_irreducible",
    "poly_mod",
    "trace_vector",
]
