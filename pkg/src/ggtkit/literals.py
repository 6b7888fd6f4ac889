"""Ordered-pair variables and their DIMACS codec.

A variable x[i,j] (i != j, both in range(n)) states "i precedes j".  The
literals x[i,j] and -x[j,i] are identified: canonically, the pair with
i < j gets a positive DIMACS id and the reversed pair is its negation.
Clauses are duplicate-free frozensets of nonzero ints; a clause containing
a literal together with its negation is rejected as tautological.
"""

from __future__ import annotations

from typing import Iterable

Clause = frozenset  # frozenset[int]


class PairError(ValueError):
    """Raised for an out-of-range or degenerate (i == j) vertex pair."""


class TautologyError(ValueError):
    """Raised when a clause would contain a literal and its negation."""


def num_vars(n: int) -> int:
    """Number of canonical variables over n vertices: C(n, 2)."""
    return n * (n - 1) // 2


def encode_lit(i: int, j: int, n: int) -> int:
    """Signed DIMACS literal for x[i,j].

    For i < j this is +v with v = i*n - i*(i+1)//2 + (j - i); for i > j it
    is -v(j, i).  Bijective onto +-{1..C(n,2)}.
    """
    if i == j or not (0 <= i < n) or not (0 <= j < n):
        raise PairError(f"invalid vertex pair ({i},{j}) for n={n}")
    if i < j:
        return i * n - i * (i + 1) // 2 + (j - i)
    return -(j * n - j * (j + 1) // 2 + (i - j))


def decode_lit(lit: int, n: int) -> tuple[int, int]:
    """Invert encode_lit: the (i, j) with encode_lit(i, j, n) == lit."""
    v = abs(lit)
    if not (1 <= v <= num_vars(n)):
        raise PairError(f"literal {lit} out of range for n={n}")
    i = 0
    while i * n - i * (i + 1) // 2 + (n - 1 - i) < v:
        i += 1
    j = v - (i * n - i * (i + 1) // 2) + i
    return (i, j) if lit > 0 else (j, i)


def order_pair(lit: int, n: int) -> tuple[int, int]:
    """The pair (i, j) such that lit is the negated order literal for i<j.

    A clause literal that is falsified along a search branch asserts the
    opposite order: lit == -x[i,j] for exactly one ordered pair, and that
    pair is what the branch has committed to.
    """
    return decode_lit(-lit, n)


def make_clause(lits: Iterable[int]) -> Clause:
    """Canonicalize a literal collection into a clause, rejecting tautologies."""
    c = frozenset(lits)
    if 0 in c:
        raise PairError("literal 0 is not allowed in a clause")
    for lit in c:
        if -lit in c:
            raise TautologyError(f"clause contains both {lit} and {-lit}")
    return c


def clause_key(clause: Iterable[int]) -> tuple[int, ...]:
    """Deterministic sort key / display order for a clause."""
    return tuple(sorted(clause, key=lambda l: (abs(l), l < 0)))


def trans_clause(i: int, j: int, k: int, n: int) -> Clause:
    """The transitivity clause T[i,j,k] = -x[i,j] | -x[j,k] | -x[k,i]."""
    c = make_clause((-encode_lit(i, j, n), -encode_lit(j, k, n), -encode_lit(k, i, n)))
    if len(c) != 3:
        raise PairError(f"degenerate transitivity triple ({i},{j},{k})")
    return c


def alpha_clause(i: int, n: int) -> Clause:
    """The minimality clause for vertex i: some j precedes i."""
    return frozenset(encode_lit(j, i, n) for j in range(n) if j != i)


def triangle_of(clause: Clause, n: int) -> tuple[int, int, int] | None:
    """If clause is a transitivity clause, its canonical (min-rotated) triple.

    Returns the rotation (a, b, c) with a minimal such that the clause is
    T[a,b,c]; None if the clause is not of that shape.
    """
    if len(clause) != 3:
        return None
    succ: dict[int, int] = {}
    for lit in clause:
        i, j = order_pair(lit, n)
        if i in succ:
            return None
        succ[i] = j
    a = min(succ)
    b = succ.get(a)
    if b is None or succ.get(b) is None:
        return None
    c = succ[b]
    if succ.get(c) != a or len({a, b, c}) != 3:
        return None
    return (a, b, c)
