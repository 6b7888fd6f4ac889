import pytest

from ggtkit.bpo import Bpo
from ggtkit.dimacs import DimacsError, read_dimacs, write_dimacs
from ggtkit.formulas import gen_ggt, gen_gt, gen_gt_pi


def test_write_gt3_header():
    text = write_dimacs(gen_gt(3))
    assert "p cnf 3 5" in text
    assert text.startswith("c family=gt n=3")


def test_roundtrip_ggt():
    f = gen_ggt(5, 7)
    g = read_dimacs(write_dimacs(f))
    assert g.family == f.family and g.n == f.n and g.seed == 7
    assert g.clause_set() == f.clause_set()
    assert g.guard_map is not None and g.guard_map.table == f.guard_map.table


def test_roundtrip_gt_pi():
    pi = Bpo.of(5, [(0, 3), (1, 4)])
    f = gen_gt_pi(5, pi)
    g = read_dimacs(write_dimacs(f))
    assert g.pi is not None and g.pi.pairs == pi.pairs
    assert g.clause_set() == f.clause_set()


def test_roundtrip_unguarded():
    f = gen_ggt(3, 2)
    g = read_dimacs(write_dimacs(f))
    assert g.unguarded and g.guard_map is None
    assert g.clause_set() == f.clause_set()


def test_determinism_byte_identical():
    assert write_dimacs(gen_ggt(6, 1)) == write_dimacs(gen_ggt(6, 1))


def test_literal_out_of_range():
    text = "c family=gt n=3\np cnf 3 5\n-1 -2 0\n1 -3 0\n2 3 0\n-1 2 -3 0\n1 -2 4 0\n"
    with pytest.raises(DimacsError) as info:
        read_dimacs(text)
    assert "line 7" in str(info.value)


def test_tautological_clause_rejected():
    text = "c family=gt n=2\np cnf 1 1\n1 -1 0\n"
    with pytest.raises(DimacsError) as info:
        read_dimacs(text)
    assert "line 3" in str(info.value)


def test_missing_terminator():
    text = "c family=gt n=2\np cnf 1 1\n1\n"
    with pytest.raises(DimacsError):
        read_dimacs(text)


def test_clause_count_mismatch():
    text = "c family=gt n=2\np cnf 1 2\n1 0\n"
    with pytest.raises(DimacsError):
        read_dimacs(text)


def test_missing_family():
    text = "p cnf 1 1\n1 0\n"
    with pytest.raises(DimacsError):
        read_dimacs(text)
