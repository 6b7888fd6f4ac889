import pytest

from ggtkit.literals import (
    PairError,
    TautologyError,
    alpha_clause,
    clause_key,
    decode_lit,
    encode_lit,
    make_clause,
    num_vars,
    order_pair,
    trans_clause,
    triangle_of,
)


def test_codec_first_pair():
    assert encode_lit(0, 1, 4) == 1


def test_codec_formula_example():
    # v(2,3) = 2*4 - 3 + 1 = 6
    assert encode_lit(2, 3, 4) == 6
    assert encode_lit(3, 2, 4) == -6


def test_codec_roundtrip_exhaustive_n6():
    n = 6
    seen = set()
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            lit = encode_lit(i, j, n)
            assert decode_lit(lit, n) == (i, j)
            seen.add(lit)
    assert seen == {l for v in range(1, num_vars(n) + 1) for l in (v, -v)}


def test_codec_bijective_onto_range():
    n = 5
    positives = {encode_lit(i, j, n) for i in range(n) for j in range(i + 1, n)}
    assert positives == set(range(1, num_vars(n) + 1))


def test_codec_rejects_bad_pairs():
    with pytest.raises(PairError):
        encode_lit(1, 1, 4)
    with pytest.raises(PairError):
        encode_lit(0, 4, 4)
    with pytest.raises(PairError):
        decode_lit(7, 4)


def test_canonical_identification():
    # x[i,j] and the negation of x[j,i] are the same literal
    n = 6
    for i in range(n):
        for j in range(n):
            if i != j:
                assert encode_lit(i, j, n) == -encode_lit(j, i, n)


def test_make_clause_rejects_tautology():
    with pytest.raises(TautologyError):
        make_clause([1, -1, 2])


def test_clause_key_deterministic():
    assert clause_key([3, -1, 2, -2]) == (-1, 2, -2, 3)


def test_order_pair_reads_branch_commitment():
    n = 4
    # a falsified literal -x[1,2] on a branch asserts 1 < 2
    lit = -encode_lit(1, 2, n)
    assert order_pair(lit, n) == (1, 2)
    assert order_pair(encode_lit(2, 1, n), n) == (1, 2)


def test_triangle_of_recognizes_cycles():
    n = 5
    assert triangle_of(trans_clause(2, 4, 1, n), n) == (1, 2, 4)
    assert triangle_of(trans_clause(0, 1, 2, n), n) == (0, 1, 2)
    assert triangle_of(alpha_clause(0, n), n) is None
    assert triangle_of(frozenset({1, 2, 3}), n) is None
