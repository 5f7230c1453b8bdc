import numpy as np
import pytest

from fanoforge import algebra
from fanoforge.algebra import (
    field_presemifield,
    format_table,
    knuth_binary_presemifield,
    mutate_entry,
    parse_table,
    presemifield_from_array,
    presemifield_from_table,
    solve_left,
    verify_axioms,
)
from fanoforge.errors import AxiomViolation, DegenerateSlope, TableFormatError
from fanoforge.gf2 import default_modulus, gf_mul, gf_trace


def brute_axioms(T):
    """Oracle: the three properties by plain loops."""
    n = len(T)
    dist = all(
        T[a][b ^ c] == T[a][b] ^ T[a][c] and T[b ^ c][a] == T[b][a] ^ T[c][a]
        for a in range(n) for b in range(n) for c in range(n)
    )
    nzd = all(T[a][b] != 0 for a in range(1, n) for b in range(1, n))
    comm = all(T[a][b] == T[b][a] for a in range(n) for b in range(n))
    return dist, nzd, comm


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_field_presemifield_axioms(k):
    P = field_presemifield(k)
    assert P.n == 1 << k
    assert P.verified_distributive and P.verified_no_zero_divisors and P.verified_commutative
    assert P.report.method == "exhaustive"
    if k <= 3:
        assert brute_axioms(P.table.tolist()) == (True, True, True)


def test_gf4_commutativity_over_all_pairs():
    T = field_presemifield(2).table
    assert sum(T[a, b] == T[b, a] for a in range(4) for b in range(4)) == 16


def test_knuth_formula_matches_scalar_definition():
    k = 3
    m = default_modulus(k)
    P = knuth_binary_presemifield(k)

    def mul(x, y):
        return gf_mul(x, y, k, m)

    for x in range(8):
        for y in range(8):
            inner = (x if gf_trace(y, k, m) else 0) ^ (y if gf_trace(x, k, m) else 0)
            assert P.table[x, y] == mul(x, y) ^ mul(inner, inner)


def test_knuth_k3_no_zero_divisors_on_all_49_pairs():
    T = knuth_binary_presemifield(3).table
    pairs = [(a, b) for a in range(1, 8) for b in range(1, 8)]
    assert len(pairs) == 49
    assert all(T[a, b] != 0 for a, b in pairs)
    assert brute_axioms(T.tolist()) == (True, True, True)


def test_knuth_k5_passes_all_axioms():
    P = knuth_binary_presemifield(5)
    assert P.n == 32 and P.report.ok
    assert not np.array_equal(P.table, field_presemifield(5).table)


@pytest.mark.parametrize("k", [0, 1, 2, 4])
def test_knuth_rejects_bad_dimension(k):
    with pytest.raises(ValueError):
        knuth_binary_presemifield(k)


def test_constant_zero_multiplication():
    rep = verify_axioms(np.zeros((4, 4), dtype=int))
    assert rep.distributive and rep.commutative
    assert not rep.no_zero_divisors
    assert rep.zero_divisor_witness == (1, 1)


def test_gf8_report():
    rep = verify_axioms(field_presemifield(3))
    assert rep.ok and rep.failures() == []


def test_single_entry_mutations_of_gf4_are_all_caught():
    # every entry replaced by each of the other fifteen 4-bit values
    T = field_presemifield(2).table
    caught = in_range = 0
    for a in range(4):
        for b in range(4):
            for v in range(16):
                if v == T[a, b]:
                    continue
                rep = verify_axioms(mutate_entry(T, a, b, v))
                assert not rep.ok, (a, b, v)
                if v < 4:
                    in_range += 1
                    assert rep.closed
                    assert not (rep.distributive and rep.no_zero_divisors and rep.commutative)
                else:
                    assert rep.closure_witness == (a, b, v)
                caught += 1
    assert (caught, in_range) == (240, 48)


@pytest.mark.parametrize("k", [5, 6])
def test_linearity_check_agrees_with_exhaustive(k):
    rng = np.random.default_rng(k)
    T = field_presemifield(k).table
    assert verify_axioms(T, exhaustive=False).ok
    for _ in range(20):
        a, b = rng.integers(0, 1 << k, 2)
        bad = mutate_entry(T, a, b, (T[a, b] + 1 + rng.integers(0, (1 << k) - 1)) % (1 << k))
        full = verify_axioms(bad, exhaustive=True)
        fast = verify_axioms(bad, exhaustive=False)
        assert (full.distributive, full.no_zero_divisors, full.commutative) == (
            fast.distributive, fast.no_zero_divisors, fast.commutative,
        )
        assert not fast.distributive


def test_linearity_witness_is_a_real_violation():
    T = mutate_entry(field_presemifield(7).table, 5, 9, 0)
    rep = verify_axioms(T)
    assert rep.method == "linearity" and not rep.distributive
    side, a, b, c = rep.distributivity_witness
    if side == "left":
        assert T[a, b ^ c] != T[a, b] ^ T[a, c]
    else:
        assert T[a ^ b, c] != T[a, c] ^ T[b, c]


@pytest.mark.parametrize("source", ["field", "knuth"])
def test_multiplication_by_nonzero_is_bijective(source):
    for k in ([1, 2, 3, 4, 5, 6, 7, 8] if source == "field" else [3, 5, 7]):
        P = field_presemifield(k) if source == "field" else knuth_binary_presemifield(k)
        n = P.n
        for m in range(1, n):
            assert len(set(P.table[m].tolist())) == n
            assert len(set(P.table[:, m].tolist())) == n


def test_addition_is_xor():
    for a in range(16):
        for b in range(16):
            assert (a ^ b) ^ b == a


def test_solve_left_examples():
    P = field_presemifield(2)
    assert [solve_left(P, 1, c) for c in range(4)] == [0, 1, 2, 3]
    # oracle: scan m o x over x
    assert [x for x in range(4) if P.table[2, x] == 1] == [3]
    assert solve_left(P, 2, 1) == 3
    assert solve_left(P, 2, 1, use_table=False) == 3
    for m in range(1, 4):
        assert solve_left(P, m, 0) == 0
    with pytest.raises(DegenerateSlope):
        solve_left(P, 0, 1)


@pytest.mark.parametrize("maker,k", [(field_presemifield, 4), (knuth_binary_presemifield, 5)])
def test_solve_left_paths_agree(maker, k):
    P = maker(k)
    for m in range(1, P.n):
        for c in range(P.n):
            x = solve_left(P, m, c)
            assert P.table[m, x] == c
            assert solve_left(P, m, c, use_table=False) == x


def test_table_round_trip(tmp_path):
    P = knuth_binary_presemifield(3)
    text = format_table(P)
    assert text.splitlines()[0] == "semifield k=3 n=8"
    path = tmp_path / "k3.tbl"
    algebra.write_table(P, path)
    Q = presemifield_from_table(path)
    assert Q == P
    assert format_table(Q) == text


def test_gf2_table_file(tmp_path):
    path = tmp_path / "gf2.tbl"
    path.write_text("semifield k=1 n=2\n0 0\n0 1\n")
    P = presemifield_from_table(path)
    assert P.n == 2 and P.report.ok


def test_flipped_gf4_entry_reports_witness(tmp_path):
    T = mutate_entry(field_presemifield(2).table, 2, 3, 0)
    with pytest.raises(AxiomViolation) as info:
        presemifield_from_array(T)
    rep = info.value.report
    assert not rep.no_zero_divisors and rep.zero_divisor_witness == (2, 3)
    assert not rep.commutative


def test_noncommutative_table_reports_pair():
    # x o y = x * y^2 is bilinear with no zero divisors, but not commutative
    F = field_presemifield(2).table
    T = np.array([[F[x, F[y, y]] for y in range(4)] for x in range(4)])
    with pytest.raises(AxiomViolation) as info:
        presemifield_from_array(T)
    rep = info.value.report
    assert rep.distributive and rep.no_zero_divisors and not rep.commutative
    a, b = rep.commutativity_witness
    assert T[a, b] != T[b, a]
    P = presemifield_from_array(T, require_commutative=False)
    assert not P.verified_commutative


@pytest.mark.parametrize(
    "text",
    [
        "",
        "semifield k=2 n=5\n",
        "semifeld k=1 n=2\n0 0\n0 1\n",
        "semifield k=1 n=2\n0 0\n",
        "semifield k=1 n=2\n0 0\n0 x\n",
        "semifield k=1 n=2\n0 0 0\n0 1\n",
    ],
)
def test_malformed_table_files(text):
    with pytest.raises(TableFormatError):
        parse_table(text)
