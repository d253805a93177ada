from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from leibniz_lab import algebra as algebra_module
from leibniz_lab import catalog, linalg
from leibniz_lab.algebra import (Algebra, bracket, change_basis, direct_sum, leibniz_defect_at, rebase,
                                 subspace_product, verify_leibniz)
from leibniz_lab.linalg import LinalgError, Matrix, inverse
from leibniz_lab.subspace import Subspace, unit, zero_vector
from strategies import invertible_matrices, leibniz_algebras, small_rationals, structure_tables

F = Fraction


def permutation(order):
    """New basis vector ``c`` is old basis vector ``order[c]`` (1-based)."""
    n = len(order)
    return Matrix.from_columns([unit(n, i) for i in order])


def test_table_is_canonical():
    a = Algebra.from_products(2, {(2, 1): {1: 1, 2: 0}, (1, 1): [(2, F(1, 2)), (2, F(1, 2))]})
    assert a.table == (((1, 1), ((2, F(1)),)), ((2, 1), ((1, F(1)),)))
    with pytest.raises(ValueError):
        Algebra(1, (((1, 2), ((1, F(1)),)),))
    with pytest.raises(ValueError):
        Algebra(2, (((1, 1), ((1, F(0)),)),))


def test_bracket_examples():
    mu1 = catalog.mu1(6, 1)
    assert bracket(mu1, unit(6, 1), unit(6, 1)) == unit(6, 2)
    assert bracket(mu1, zero_vector(6), unit(6, 3)) == zero_vector(6)
    mu3 = catalog.mu3(8, 1)
    assert bracket(mu3, unit(8, 1), unit(8, 1)) == unit(8, 3)


def test_bracket_is_bilinear_on_combinations():
    r2 = catalog.r2()
    # [2e + x, e - x] = -2[e,x] + [x,e] = -2e - e
    assert bracket(r2, (2, 1), (1, -1)) == (F(-3), F(0))


def test_verify_examples():
    assert verify_leibniz(catalog.abelian(3)) == []
    assert verify_leibniz(catalog.mu2(7, 1)) == []
    idem = Algebra.from_products(1, {(1, 1): {1: 1}})
    (defect,) = verify_leibniz(idem)
    assert defect.triple == (1, 1, 1) and defect.value == (F(1),)


def test_change_basis_examples():
    a = catalog.rmu1(8, 1, range(1, 7))
    assert change_basis(a, Matrix.identity(9)) == a
    mu3 = catalog.mu3(9, 2)
    assert change_basis(catalog.mu3_original(9, 2), catalog.mu3_basis_change(9, 2)) == mu3
    assert rebase(catalog.mu3_original(9, 2), catalog.mu3_new_basis(9, 2)) == mu3
    with pytest.raises(LinalgError):
        change_basis(a, Matrix.identity(3))


def test_scaling_substitution_on_rmu1():
    # e_i' = 2^i e_i, f_1' = f_1, f_2' = 2 f_2, x' = x
    p = Matrix.diagonal([2 ** i for i in range(1, 7)] + [1, 2, 1])
    a = [F(v) for v in (3, -1, F(1, 2), 5, 7, -2)]
    expected = catalog.rmu1(8, 1, [v / 2 ** (i - 1) for i, v in enumerate(a, 2)])
    assert rebase(catalog.rmu1(8, 1, a), p) == expected
    assert change_basis(catalog.rmu1(8, 1, a), inverse(p)) == expected


def test_direct_sum_examples():
    assert direct_sum(catalog.abelian(1), catalog.abelian(1)) == catalog.abelian(2)
    # l2 + r2 has basis (e, x, e', x'); L_1(k=2) orders it e1, x1, y1, f1
    assert rebase(direct_sum(catalog.l2(), catalog.r2()), permutation([1, 2, 4, 3])) == catalog.lt(2, 1)
    assert rebase(direct_sum(catalog.l2(), catalog.l2()), permutation([1, 3, 2, 4])) == catalog.lt(2, 2)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_lt_is_an_iterated_direct_sum(k):
    for t in range(k + 1):
        parts = [catalog.l2()] * t + [catalog.r2()] * (k - t)
        total = parts[0]
        for p in parts[1:]:
            total = direct_sum(total, p)
        # summand c contributes basis vectors 2c+1 (e or f) and 2c+2 (x or y)
        order = ([2 * c + 1 for c in range(t)] + [2 * c + 2 for c in range(t)]
                 + [2 * c + 2 for c in range(t, k)] + [2 * c + 1 for c in range(t, k)])
        assert rebase(total, permutation(order)) == catalog.lt(k, t)


def test_subspace_product_examples():
    whole6 = Subspace.whole(6)
    a = catalog.mu1(6, 1)
    square = subspace_product(a, whole6, whole6)
    assert square == Subspace.coordinate(6, [2, 3, 4, 6])
    assert subspace_product(a, square, whole6) == Subspace.coordinate(6, [3, 4])
    ab = catalog.abelian(3)
    assert subspace_product(ab, Subspace.whole(3), Subspace.whole(3)).dim == 0


# properties

@given(st.integers(1, 4).flatmap(lambda n: st.tuples(structure_tables(max_dim=n).filter(lambda a: a.dim == n),
                                                     invertible_matrices(n))))
def test_change_basis_round_trip(pair):
    a, g = pair
    assert change_basis(change_basis(a, g), inverse(g)) == a


@given(st.data())
def test_change_basis_composes(data):
    a = data.draw(structure_tables())
    g, h = data.draw(invertible_matrices(a.dim)), data.draw(invertible_matrices(a.dim))
    assert change_basis(a, g @ h) == change_basis(change_basis(a, h), g)


@given(st.data())
def test_change_basis_preserves_leibniz(data):
    a = data.draw(st.one_of(structure_tables(), leibniz_algebras(max_dim=6)))
    g = data.draw(invertible_matrices(a.dim))
    assert bool(verify_leibniz(a)) == bool(verify_leibniz(change_basis(a, g)))


@given(st.data())
def test_basis_check_covers_arbitrary_vectors(data):
    a = data.draw(st.one_of(structure_tables(), leibniz_algebras(max_dim=6)))
    vec = st.lists(small_rationals, min_size=a.dim, max_size=a.dim)
    x, y, z = data.draw(vec), data.draw(vec), data.draw(vec)
    # the defect is trilinear, so expand it over the basis defects
    expected = [F(0)] * a.dim
    for d in verify_leibniz(a):
        i, j, k = d.triple
        c = x[i - 1] * y[j - 1] * z[k - 1]
        expected = [e + c * v for e, v in zip(expected, d.value)]
    assert list(leibniz_defect_at(a, x, y, z)) == expected


@given(st.one_of(structure_tables(3), leibniz_algebras(4)), st.one_of(structure_tables(3), leibniz_algebras(4)))
def test_direct_sum_is_leibniz_iff_both_summands_are(a, b):
    assert (not verify_leibniz(direct_sum(a, b))) == (not verify_leibniz(a) and not verify_leibniz(b))


@given(st.data())
def test_flint_paths_match_sparse_paths(data):
    if linalg.flint is None:
        return
    a = data.draw(st.sampled_from([catalog.mu2(7, 1), catalog.rmu2(6, 1, 1, -2, F(1, 3)), catalog.lt(3, 1)]))
    g = data.draw(invertible_matrices(a.dim))
    u = Subspace.span(a.dim, data.draw(st.lists(st.lists(small_rationals, min_size=a.dim, max_size=a.dim),
                                                max_size=4)))
    fast = change_basis(a, g), subspace_product(a, u, Subspace.whole(a.dim))
    saved = linalg.flint
    try:
        linalg.flint = None
        slow = change_basis(a, g), subspace_product(a, u, Subspace.whole(a.dim))
    finally:
        linalg.flint = saved
    assert fast == slow
    assert algebra_module.linalg is linalg
