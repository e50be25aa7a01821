from fractions import Fraction

import pytest
from hypothesis import given, settings

from errors import DomainError, UncertifiedTruncation
from exact_algebra import LaurentPoly, PolyT, RatFuncT, Scalar
import zeta_integrals
from zeta_integrals import (SatakeData, complete_homogeneous, dominant_weights, gl2_gamma_functional_equation_check,
                            invariant_pairing_check, measure_constant, schur_polynomial, whittaker_value,
                            zeta_gl_n_gl1, zeta_gl_n_gl_n)
from tests.strategies import satake_tuples


def data(*values):
    return SatakeData([Scalar(Fraction(v)) for v in values])


def test_satake_data_validation():
    """At least one parameter, all nonzero."""
    with pytest.raises(DomainError):
        SatakeData([])
    with pytest.raises(DomainError):
        data(2, 0)


def test_satake_dual_and_unitary():
    """alpha^-1 q^(n-1) and alpha q^((1-n)/2)."""
    d = data(2, 3)
    assert d.dual() == data(Fraction(3, 2), 1)
    assert d.unitary() == SatakeData([Scalar(2) * Scalar.q_power(Fraction(-1, 2)), Scalar.q_power(Fraction(1, 2))])


def test_symmetric_functions():
    """h_2(2, 3) = 19, s_(1,1) = 6, s_(2,1) = 30 and s_(0,-1) = 5/6."""
    params = data(2, 3).params
    assert complete_homogeneous(params, 2).as_scalar() == Scalar(19)
    assert schur_polynomial(params, [1, 1]).as_scalar() == Scalar(6)
    assert schur_polynomial(params, [2, 1]).as_scalar() == Scalar(30)
    assert schur_polynomial(params, [0, -1]).as_scalar() == Scalar(Fraction(5, 6))
    assert schur_polynomial(params, [1, 2]).is_zero()


def test_whittaker_value():
    """delta^(1/2) scales by q^(-<rho, lam>)."""
    d = data(2, 3)
    assert whittaker_value(d, [1, 0]).as_scalar() == Scalar(5) * Scalar.q_power(Fraction(-1, 2))
    assert whittaker_value(d, [0, 1]).is_zero()
    with pytest.raises(DomainError):
        whittaker_value(d, [1])


def test_dominant_weights_and_measure():
    """Weights of size 2 for GL_2, and vol(K_2) = 1 - q^-2."""
    assert sorted(dominant_weights(2, 2)) == [[1, 1], [2, 0]]
    assert sorted(dominant_weights(3, 1)) == [[1, 0, 0]]
    assert measure_constant(2, 3).as_scalar() == Scalar(Fraction(8, 9))


def test_gl1_series():
    """A character of GL_1 gives the geometric series of its L-factor."""
    result = zeta_gl_n_gl1(data(2), 0, 3)
    assert result.series.render() == '1 + 2*T + 4*T^2 + 8*T^3 + O(T^4)'
    assert result.l_inv.render() == '1 - 2*T'
    assert result.certified
    assert result.polynomial() == PolyT.one()


@pytest.mark.parametrize('params,m', [
    ((2, 3), Fraction(-1, 2)),
    ((1, Fraction(1, 2)), Fraction(1, 2)),
    ((2, 3, 5), -1),
    ((-1, 2, Fraction(1, 3)), 0),
])
def test_gl_n_gl1_is_the_l_factor(params, m):
    """L^-1 times the integral is the constant 1."""
    result = zeta_gl_n_gl1(data(*params), m, 40)
    assert result.certified
    assert result.polynomial() == PolyT.one()


def test_gl_n_gl_n_is_the_rankin_selberg_factor():
    """GL_2 x GL_2 at m = -3/2 with the volume factored out."""
    result = zeta_gl_n_gl_n(data(2, 3), data(5, 1), Fraction(-3, 2), 20)
    assert result.certified
    assert result.polynomial() == PolyT.one()
    assert result.volume.as_scalar() == Scalar(Fraction(8, 9))
    assert result.l_inv.degree() == 4


def test_off_lattice_points_are_rejected():
    """m must lie in (1 - n n')/2 + Z."""
    with pytest.raises(DomainError):
        zeta_gl_n_gl1(data(2), Fraction(1, 2), 5)
    with pytest.raises(DomainError):
        zeta_gl_n_gl_n(data(2, 3), data(5, 1), 0, 5)
    with pytest.raises(DomainError):
        zeta_gl_n_gl_n(data(2, 3), data(5), Fraction(-1, 2), 5)


def test_bound_must_exceed_the_degree():
    """A bound at the L-factor degree cannot certify."""
    result = zeta_gl_n_gl1(data(2, 3), Fraction(-1, 2), 2)
    assert not result.certified
    with pytest.raises(UncertifiedTruncation) as exc:
        result.require_certified()
    assert 'does not exceed' in str(exc.value)


@pytest.mark.parametrize('params,bound', [((2,), 20), ((2, 3), 20), ((2, 3, 5), 10)])
def test_invariant_pairing(params, bound):
    """The pairing against the dual Whittaker model is the L-factor at 1."""
    assert invariant_pairing_check(data(*params), bound)


@pytest.mark.parametrize('params', [(2,), (2, 3), (Fraction(1, 2), 5)])
def test_functional_equation(params):
    """Both sides of the GL_n x GL_1 functional equation agree."""
    assert gl2_gamma_functional_equation_check(data(*params), 20)


def test_functional_equation_rank_limit():
    """Only GL_1 and GL_2 are covered."""
    with pytest.raises(DomainError):
        gl2_gamma_functional_equation_check(data(2, 3, 5), 10)


@settings(max_examples=15)
@given(satake_tuples(2))
def test_gl2_certified_for_random_parameters(params):
    """Certification holds across Satake parameters."""
    result = zeta_gl_n_gl1(SatakeData(params), Fraction(-1, 2), 12)
    assert result.polynomial() == PolyT.one()


@settings(max_examples=10)
@given(satake_tuples(3))
def test_gl3_certified_for_random_parameters(params):
    """GL_3 x GL_1 at m = -1."""
    assert zeta_gl_n_gl1(SatakeData(params), -1, 10).polynomial() == PolyT.one()


@settings(max_examples=10)
@given(satake_tuples(2), satake_tuples(2))
def test_gl2_gl2_certified_for_random_parameters(params1, params2):
    """The Cauchy identity through the window."""
    result = zeta_gl_n_gl_n(SatakeData(params1), SatakeData(params2), Fraction(-3, 2), 10)
    assert result.polynomial() == PolyT.one()


@settings(max_examples=10)
@given(satake_tuples(2))
def test_functional_equation_for_random_parameters(params):
    """The GL_2 functional equation holds for random Satake pairs."""
    assert gl2_gamma_functional_equation_check(SatakeData(params), 12)


def test_zeta_family_specializes_fiberwise():
    """The integral over a Satake family in x, read at x = 2, is the integral at the fiber."""
    x = Scalar(xpoly=LaurentPoly.monomial(1, 1))
    family = SatakeData([x, Scalar(5)])
    result = zeta_gl_n_gl1(family, Fraction(-1, 2), 8)
    assert result.certified
    fiber = zeta_gl_n_gl1(family.specialize(2), Fraction(-1, 2), 8)
    at_two = result.specialize(2)
    assert at_two.series == fiber.series
    assert at_two.l_inv == fiber.l_inv
    assert at_two.certified


def test_functional_equation_detects_a_wrong_gamma(monkeypatch):
    """Multiplying gamma by 1 + T breaks the comparison."""
    wrong = zeta_integrals.gamma_family

    def skewed(r):
        return wrong(r) * RatFuncT(PolyT([1, 1]))

    monkeypatch.setattr(zeta_integrals, 'gamma_family', skewed)
    assert not gl2_gamma_functional_equation_check(data(2, 3), 12)
