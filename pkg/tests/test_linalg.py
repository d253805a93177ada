from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from leibniz_lab import catalog, linalg
from leibniz_lab.algebra import right_mult
from leibniz_lab.derivations import derivation_system_columns
from leibniz_lab.linalg import (LinalgError, Matrix, NotNilpotentError, RowReducer, SingularMatrixError,
                                column_rank, format_rational, inverse, is_nilpotent_matrix,
                                jordan_blocks_nilpotent, nullspace, rank, rational, rref, solve,
                                sparse_kernel)
from leibniz_lab.subspace import unit
from strategies import invertible_matrices, matrices, nilpotent_matrices, small_rationals

F = Fraction


def jordan_block(n, eigen=0):
    return Matrix.from_rows([[eigen if i == j else int(j == i + 1) for j in range(n)] for i in range(n)])


def r_e1_mu1():
    a = catalog.mu1(6, 1)
    return right_mult(a, unit(6, 1))


# coercion and formatting

@pytest.mark.parametrize("text, value", [("3/4", F(3, 4)), ("-2", F(-2)), (" 6/-4 ", F(-3, 2)), (7, F(7))])
def test_rational_accepts_exact_forms(text, value):
    assert rational(text) == value


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "1.5", "x", "2/"])
def test_rational_refuses_inexact_or_malformed(bad):
    with pytest.raises((TypeError, ValueError)):
        rational(bad)


def test_format_rational():
    assert [format_rational(F(x)) for x in (0, -3)] == ["0", "-3"]
    assert format_rational(F(-6, 4)) == "-3/2"


# documented examples

def test_rank_examples():
    assert rank(Matrix.identity(3)) == 3
    assert rank(Matrix.zeros(2)) == 0
    assert rank(r_e1_mu1()) == 3


def test_nullspace_examples():
    assert nullspace(Matrix.identity(3)) == []
    assert nullspace(Matrix.zeros(2)) == [(1, 0), (0, 1)]
    # the derivation system of A(2) has no equations: Der is all 2x2 matrices
    cols = derivation_system_columns(catalog.abelian(2))
    assert len(sparse_kernel(cols, 4)) == 4


def test_nilpotency_examples():
    assert is_nilpotent_matrix(jordan_block(3))
    assert not is_nilpotent_matrix(Matrix.identity(3))
    r1 = catalog.r1(3)
    jordan_on_f = right_mult(r1, unit(4, 4)).entries
    assert not is_nilpotent_matrix(Matrix.from_rows([row[:3] for row in jordan_on_f[:3]]))


def test_jordan_block_examples():
    assert jordan_blocks_nilpotent(Matrix.zeros(4)) == (1, 1, 1, 1)
    assert jordan_blocks_nilpotent(jordan_block(4)) == (4,)
    assert jordan_blocks_nilpotent(r_e1_mu1()) == (4, 1, 1)
    with pytest.raises(NotNilpotentError):
        jordan_blocks_nilpotent(jordan_block(2, eigen=1))


def test_solve_and_inverse():
    m = Matrix.from_rows([[2, 1], [4, 3]])
    assert solve(m, [F(1), F(1)]) == (F(1), F(-1))
    assert solve(Matrix.from_rows([[1, 1], [1, 1]]), [1, 2]) is None
    assert inverse(m) @ m == Matrix.identity(2)
    with pytest.raises(SingularMatrixError):
        inverse(Matrix.from_rows([[1, 2], [2, 4]]))
    with pytest.raises(LinalgError):
        inverse(Matrix.zeros(2, 3))


def test_tracking_reducer_returns_annihilating_combination():
    red = RowReducer(track=True)
    rows = [{0: F(1), 1: F(2)}, {1: F(1)}, {0: F(2), 1: F(7)}]
    assert red.insert(rows[0]) is None and red.insert(rows[1]) is None
    combo = red.insert(rows[2])
    total = {}
    for i, c in combo.items():
        for col, v in rows[i].items():
            total[col] = total.get(col, 0) + c * v
    assert not any(total.values())


# properties

@given(matrices())
def test_rank_plus_nullity(m):
    assert rank(m) + len(nullspace(m)) == m.cols


@given(matrices())
def test_nullspace_vectors_are_annihilated(m):
    for v in nullspace(m):
        assert not any(m.apply(v))


@given(matrices())
def test_nullspace_is_canonical(m):
    basis = nullspace(m)
    assert rref(basis, m.cols) == tuple(basis)


@given(matrices(), st.randoms(use_true_random=False))
def test_rref_depends_only_on_the_row_space(m, rnd):
    rows = list(m.entries)
    mixed = [tuple(x + 2 * y for x, y in zip(r, rows[0])) for r in rows[1:]] + rows[:1]
    rnd.shuffle(mixed)
    assert rref(rows, m.cols) == rref(mixed, m.cols)


@given(st.integers(1, 5).flatmap(invertible_matrices))
def test_inverse_round_trip(g):
    assert inverse(g) @ g == Matrix.identity(g.rows)
    assert inverse(inverse(g)) == g


@given(nilpotent_matrices())
def test_jordan_type_partitions_the_size(m):
    blocks = jordan_blocks_nilpotent(m)
    assert sum(blocks) == m.rows
    assert list(blocks) == sorted(blocks, reverse=True)
    # the largest block is the nilpotency index
    assert (m ** blocks[0]).is_zero()
    if blocks[0] > 1:
        assert not (m ** (blocks[0] - 1)).is_zero()


@given(st.lists(st.dictionaries(st.integers(0, 11), small_rationals, max_size=4), min_size=1, max_size=8))
def test_backends_agree(columns):
    nvars = len(columns)
    if linalg.flint is None:
        pytest.skip("python-flint not installed")
    assert column_rank(columns, 12, "flint") == column_rank(columns, 12, "python")
    assert sparse_kernel(columns, nvars, "flint") == sparse_kernel(columns, nvars, "python")


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        column_rank([{0: F(1)}], 1, "gpu")


def test_python_rref_matches_flint_rref(monkeypatch):
    rows = [[F(i * j % 7 - 3, 1 + (i + j) % 3) for j in range(20)] for i in range(15)]
    fast = rref(rows, 20)
    monkeypatch.setattr(linalg, "flint", None)
    assert rref(rows, 20) == fast
