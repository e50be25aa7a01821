from fractions import Fraction

import pytest

from errors import DomainError, NotInvertibleError
from exact_algebra import LaurentPoly, Scalar, ScalarSum
from matrices import Matrix


def x(k=1):
    return Scalar(xpoly=LaurentPoly.monomial(1, k))


def test_rank_over_rationals():
    """[[1,2],[2,4]] has rank 1."""
    assert Matrix([[1, 2], [2, 4]]).rank() == 1
    assert Matrix([[1, 2], [3, 4]]).rank() == 2


def test_rank_over_laurent_polynomials():
    """Fraction-free elimination over Q[x]: [[x,1],[x^2,x]] has rank 1."""
    assert Matrix([[x(), 1], [x(2), x()]]).rank() == 1
    assert Matrix([[x(), 1], [1, x()]]).rank() == 2


def test_determinant():
    """Bareiss determinant, with a row swap and with q^(1/2) entries."""
    assert Matrix([[1, 2], [3, 4]]).determinant() == ScalarSum.coerce(-2)
    assert Matrix([[0, 1], [1, 0]]).determinant() == ScalarSum.coerce(-1)
    half = Scalar.q_power(Fraction(1, 2))
    assert Matrix([[half, 1], [1, half]]).determinant() == ScalarSum.coerce(2)


def test_rational_inverse():
    """Exact inverse through sympy's DomainMatrix."""
    m = Matrix([[2, 1], [1, 1]])
    assert m @ m.inverse() == Matrix.identity(2)


def test_inverse_with_x_entries():
    """Gauss-Jordan over the coefficient ring for an upper triangular matrix in x."""
    m = Matrix([[x(), 1], [0, 1]])
    assert m @ m.inverse() == Matrix.identity(2)


def test_singular_matrix_is_not_invertible():
    """Singular rational matrices raise NotInvertibleError."""
    with pytest.raises(NotInvertibleError):
        Matrix([[1, 2], [2, 4]]).inverse()


def test_kron_and_block_diag():
    """Kronecker product and block-diagonal shapes."""
    a = Matrix([[1, 2], [3, 4]])
    assert a.kron(Matrix.identity(3)).shape == (6, 6)
    assert Matrix.block_diag([a, Matrix.identity(1)]).shape == (3, 3)
    assert a.kron(Matrix.identity(1)) == a


def test_ragged_rows_rejected():
    """Rows of different lengths are a domain error."""
    with pytest.raises(DomainError):
        Matrix([[1, 2], [3]])


def test_power_and_specialize():
    """N^2 = 0 for a nilpotent matrix in x, and specialization entrywise."""
    n = Matrix([[0, x()], [0, 0]])
    assert n.power(2).is_zero()
    assert n.specialize(0).is_zero()
    assert n.specialize(2) == Matrix([[0, 2], [0, 0]])
