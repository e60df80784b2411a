import pytest
from hypothesis import given, strategies as st

from d4tuples.errors import DomainError
from d4tuples.tuples import (
    DQuadruple,
    DTriple,
    d_minus,
    enumerate_d4_triples,
    format_tuple,
    is_d4_pair,
    is_d4_tuple,
    parse_tuples,
    partner_table,
    regular_extensions,
    regularity_relation_holds,
    triples_with_largest,
    witness_table,
)


def test_known_quadruples():
    assert is_d4_tuple((3, 4, 15, 224))
    assert is_d4_tuple((224, 15, 4, 3))
    assert is_d4_tuple((1, 5, 12, 96))
    assert not is_d4_tuple((1, 2))


def test_pair_checks():
    assert is_d4_pair(3, 4) == (True, 4)
    assert is_d4_pair(1, 2) == (False, None)
    with pytest.raises(DomainError):
        is_d4_pair(0, 5)
    with pytest.raises(DomainError):
        is_d4_pair(5, 5)


def test_tuple_rejects_duplicates_and_nonpositive():
    with pytest.raises(DomainError):
        is_d4_tuple((3, 3, 4))
    with pytest.raises(DomainError):
        is_d4_tuple((0, 3))


def test_witness_table():
    assert witness_table((3, 4, 15)) == [(3, 4, 4), (3, 15, 7), (4, 15, 8)]


def test_regular_extensions_examples():
    e = regular_extensions(DTriple.of(3, 4, 15))
    assert (e.d_plus, e.d_minus) == (224, 0)
    e = regular_extensions(DTriple.of(1, 5, 12))
    assert (e.d_plus, e.d_minus) == (96, 0)
    assert d_minus(3, 15, 224) == 4
    assert d_minus(4, 15, 224) == 3


def test_not_a_triple():
    with pytest.raises(DomainError):
        DTriple.of(1, 2, 3)


def test_quadruple_witnesses():
    q = DQuadruple.of((3, 4, 15, 224))
    assert q.witnesses[(15, 224)] == 58
    with pytest.raises(DomainError):
        DQuadruple.of((1, 2, 3, 4))


@given(st.integers(min_value=1, max_value=10**6))
def test_extensions_of_regular_triples_are_quadruples(k):
    # {k, k+4} is a D(4)-pair and c = 4k + 8 extends it regularly
    t = DTriple.of(k, k + 4, 4 * k + 8)
    e = regular_extensions(t)
    assert is_d4_tuple((t.a, t.b, t.c, e.d_plus))
    assert regularity_relation_holds(t.a, e.d_plus, t.b, t.c)
    assert regularity_relation_holds(t.a, e.d_minus, t.b, t.c)
    assert e.d_plus * e.d_minus >= 0


def test_partner_table_small():
    table = partner_table(20)
    assert list(table[12]) == [1, 5, 8]
    assert list(table[1]) == []
    assert triples_with_largest(12, table) == [(1, 5)]


def test_enumeration_matches_brute_force():
    limit = 400
    fast = {(t.a, t.b, t.c) for t in enumerate_d4_triples(limit)}
    slow = {(a, b, c) for c in range(3, limit + 1) for b in range(2, c) if is_d4_pair(b, c)[0]
            for a in range(1, b) if is_d4_pair(a, b)[0] and is_d4_pair(a, c)[0]}
    assert fast == slow
    assert (3, 15, 224) in fast and (4, 15, 224) in fast


def test_enumeration_is_sorted_and_unique():
    got = [(t.a, t.b, t.c) for t in enumerate_d4_triples(1000)]
    assert got == sorted(set(got))


def test_format_and_parse():
    assert format_tuple((15, 3, 224, 4)) == "3 4 15 224"
    assert parse_tuples(["# comment", "224 3 15 4", "", "1 5"]) == [(3, 4, 15, 224), (1, 5)]
