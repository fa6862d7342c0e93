import pytest

from sublattices.arith import divisor_compositions
from sublattices.census import sublattice_count
from sublattices.enumeration import hnf_stream, hnf_stream_count
from sublattices.forms import validate_hnf


def test_stream_2_2_exact_order():
    got = [h.rows for h in hnf_stream(2, 2)]
    assert got == [
        ((1, 0), (0, 2)),
        ((1, 1), (0, 2)),
        ((2, 0), (0, 1)),
    ]


def test_stream_1_m():
    assert [h.rows for h in hnf_stream(1, 7)] == [((7,),)]


def test_stream_yields_valid_matrices():
    for h in hnf_stream(3, 12):
        validate_hnf(h.rows)
        assert h.det() == 12


def test_stream_no_duplicates():
    seen = [h.rows for h in hnf_stream(3, 12)]
    assert len(seen) == len(set(seen))


def test_stream_diagonal_order_follows_compositions():
    diags = []
    for h in hnf_stream(3, 8):
        if not diags or diags[-1] != h.diag:
            diags.append(h.diag)
    assert diags == list(divisor_compositions(8, 3))


def test_stream_counts_match_closed_form():
    for n in (1, 2, 3):
        for m in range(1, 41):
            assert hnf_stream_count(n, m) == sublattice_count(n, m), (n, m)
    for m in (2, 4, 8, 16):
        assert hnf_stream_count(4, m) == sublattice_count(4, m), m


def test_stream_cardinality_splits_over_coprime_parts():
    from math import gcd

    for n in (1, 2, 3):
        counted = [0] + [hnf_stream_count(n, m) for m in range(1, 201)]
        for a in range(2, 15):
            for b in range(a, 201):
                if a * b > 200:
                    break
                if gcd(a, b) == 1:
                    assert counted[a * b] == counted[a] * counted[b], (n, a, b)


def test_stream_known_cardinalities():
    assert hnf_stream_count(2, 2) == 3
    assert hnf_stream_count(2, 4) == 7
    assert hnf_stream_count(3, 2) == 7
    assert hnf_stream_count(3, 4) == 35
    assert hnf_stream_count(4, 2) == 15
    assert hnf_stream_count(4, 4) == 155


def test_stream_errors():
    with pytest.raises(ValueError):
        next(hnf_stream(0, 4))
    with pytest.raises(ValueError):
        next(hnf_stream(2, 0))
