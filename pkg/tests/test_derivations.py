from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from leibniz_lab import catalog, linalg
from leibniz_lab.algebra import change_basis, left_mult, right_mult, verify_leibniz
from leibniz_lab.derivations import (ExtensionError, ExtensionSpec, build_extension, characteristic_polynomial,
                                     derivation_space, extension_data, is_derivation, nil_independence,
                                     rational_roots)
from leibniz_lab.invariants import nilpotency_status, solvability_status
from leibniz_lab.linalg import LinalgError, Matrix, inverse
from leibniz_lab.subspace import unit
from strategies import invertible_matrices, leibniz_algebras, small_rationals

F = Fraction


@pytest.mark.parametrize("a, dim", [
    (catalog.abelian(3), 9), (catalog.l2(), 1), (catalog.r2(), 2), (catalog.lt(2, 1), 3),
    (catalog.mu1(6, 1), 9), (catalog.r1(2), 2), (catalog.abelian(0), 0),
])
def test_derivation_dimensions(a, dim):
    assert derivation_space(a).dim == dim


def test_is_derivation_examples():
    mu1 = catalog.mu1(6, 1)
    assert is_derivation(mu1, Matrix.zeros(6))
    assert not is_derivation(mu1, Matrix.identity(6))
    # the grading e_i -> i e_i, f_1 -> f_1, f_2 -> 2 f_2
    assert is_derivation(mu1, Matrix.diagonal([1, 2, 3, 4, 1, 2]))
    with pytest.raises(LinalgError):
        is_derivation(mu1, Matrix.identity(3))


def test_right_multiplications_are_derivations():
    # the right Leibniz identity says exactly this
    a = catalog.mu3(8, 1)
    for i in range(1, 9):
        assert is_derivation(a, right_mult(a, unit(8, i)))
    # left multiplications need not be
    assert not is_derivation(catalog.mu1(6, 1), left_mult(catalog.mu1(6, 1), unit(6, 1)))


def test_charpoly_and_roots():
    assert characteristic_polynomial(Matrix.from_rows([[1, 2], [3, 4]])) == [-2, -5, 1]
    assert rational_roots([-2, 1, 1]) == ([-2, 1], [1])
    assert rational_roots([2, 0, 1]) == ([], [2, 0, 1])
    assert rational_roots([0, 0, F(-1, 2), F(1, 2)]) == ([0, 0, 1], [F(1, 2)])
    with pytest.raises(LinalgError):
        rational_roots([0])


def test_nil_independence_examples():
    d = Matrix.diagonal([1, 2])
    n = Matrix.from_rows([[0, 1], [0, 0]])
    assert nil_independence([d]).status == "certified_independent"
    assert nil_independence([d, Matrix.diagonal([1, 0])]).status == "certified_independent"
    dep = nil_independence([d, Matrix.diagonal([2, 4])])
    assert dep.status == "dependent" and dep.witness == (1, F(-1, 2))
    assert nil_independence([n]) == nil_independence([n], mode="randomized")
    assert nil_independence([Matrix.identity(2)], mode="randomized").status == "no_dependence_found"
    with pytest.raises(LinalgError):
        nil_independence([d, n])
    with pytest.raises(ValueError):
        nil_independence([d], mode="guess")


def test_nil_independence_with_nilpotent_parts():
    # D and -D + N differ from nilpotent by their semisimple parts only
    d = Matrix.diagonal([1, 1, 2])
    nil = Matrix.from_rows([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    res = nil_independence([d, d.scale(-1) + nil])
    assert res.status == "dependent" and res.witness == (1, 1)


def test_extensions_rebuild_the_catalog():
    for a, m in ((catalog.r1(3), 3), (catalog.r2_family(3), 3), (catalog.rmu1(8, 1, [1, 2, 0, -1, 3, 5]), 8)):
        data = extension_data(a, m)
        ext = build_extension(data)
        assert ext.is_leibniz and ext.algebra == a
        assert extension_data(ext.algebra, m) == data


def test_extensions_are_solvable_not_nilpotent():
    for a, m in ((catalog.r1(2), 2), (catalog.r2_family(3), 3), (catalog.rmu2(6, 1, 1, 2, 3), 6)):
        r = build_extension(extension_data(a, m)).algebra
        assert solvability_status(r).holds and not nilpotency_status(r).holds


def test_extension_errors():
    nil = catalog.mu1(6, 1)
    with pytest.raises(ExtensionError):
        build_extension(ExtensionSpec(nil, (Matrix.identity(6),)))
    with pytest.raises(ExtensionError):
        build_extension(ExtensionSpec(nil, (Matrix.zeros(6),), left_action=((unit(6, 1),),)))
    with pytest.raises(ExtensionError):
        extension_data(catalog.r1(2), 1)   # span(f1) is not an ideal
    # a derivation right action with inconsistent left action still builds, with defects reported
    bad = build_extension(ExtensionSpec(catalog.l2(), (right_mult(catalog.l2(), unit(2, 2)),),
                                        left_action=((unit(2, 1), unit(2, 1)),)))
    assert not bad.is_leibniz and bad.defects == tuple(verify_leibniz(bad.algebra))


# properties

@given(st.data())
def test_derivation_basis_is_exact(data):
    a = data.draw(leibniz_algebras(max_dim=7))
    der = derivation_space(a)
    assert all(is_derivation(a, d) for d in der.basis)
    coeffs = data.draw(st.lists(small_rationals, min_size=der.dim, max_size=der.dim))
    combo = Matrix.zeros(a.dim)
    for c, d in zip(coeffs, der.basis):
        combo = combo + d.scale(c)
    assert is_derivation(a, combo)


@given(st.data())
def test_derivation_dimension_is_basis_invariant(data):
    a = data.draw(leibniz_algebras(max_dim=7))
    g = data.draw(invertible_matrices(a.dim))
    b = change_basis(a, g)
    assert derivation_space(b).dim == derivation_space(a).dim
    # conjugation carries derivations across
    for d in derivation_space(a).basis[:3]:
        assert is_derivation(b, g @ d @ inverse(g))


@given(st.data())
def test_backends_agree(data):
    a = data.draw(leibniz_algebras())
    if linalg.flint is None:
        pytest.skip("python-flint not installed")
    assert derivation_space(a, "python") == derivation_space(a, "flint")


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_rational_roots_recovers_linear_factors(roots):
    poly = [F(1)]
    for r in roots:
        poly = [F(0)] + poly
        poly = [poly[i] - r * (poly[i + 1] if i + 1 < len(poly) else 0) for i in range(len(poly))]
    found, rest = rational_roots(poly)
    assert found == sorted(roots) and rest == [1]
