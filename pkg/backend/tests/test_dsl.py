from fractions import Fraction

import pytest
from hypothesis import given

from dsl import parse_family, parse_matrix, parse_scalar, parse_scalar_list, parse_wd, render_wd
from errors import ParseError
from exact_algebra import LaurentPoly, Scalar
from weil_deligne import InertialAtom, SpehBlock, WDRep, unramified_atom
from tests.strategies import family_reps, mixed_reps


def test_parse_unramified_speh_block():
    """Sp(unr(2/3),3) has alpha q^-1 * 2."""
    r = parse_wd('Sp(unr(2/3),3)')
    assert r == WDRep([SpehBlock(unramified_atom(), Scalar(Fraction(2, 3)), 3)])
    assert render_wd(r) == 'Sp(unr(q^-1*2),3)'


def test_parse_ignores_whitespace():
    """Spaces and newlines between tokens are allowed."""
    assert parse_wd(' Sp( unr( 1 ) , 2 )\n+ Sp(unr(q), 1) ') == parse_wd('Sp(unr(1),2)+Sp(unr(3),1)')


def test_parse_zero():
    """'0' is the zero representation."""
    assert parse_wd('0') == WDRep()
    assert render_wd(WDRep()) == '0'


def test_parse_ramified_atom():
    """Atom keys with defaults for the rest."""
    r = parse_wd('Sp(tau(a,dim=2,f=2,cond=1)*unr(x),1)')
    atom = r.blocks[0].atom
    assert atom == InertialAtom('a', dim=2, f=2, cond=1)
    assert r.blocks[0].alpha == Scalar(xpoly=LaurentPoly.monomial(1, 1))


def test_self_dual_atom_reuses_its_unit():
    """dual=a without dual_eps takes eps for both."""
    atom = parse_wd('Sp(tau(b,cond=2,dual=b,eps=-1),2)').blocks[0].atom
    assert atom.dual_eps_unit == Scalar(-1)
    assert render_wd(parse_wd('Sp(tau(b,cond=2,dual=b,eps=-1),2)')) == 'Sp(tau(b,cond=2,dual=b,eps=-1)*unr(1),2)'


def test_scalar_forms():
    """Roots of unity, half powers, x and opaque units."""
    assert parse_scalar('q^(1/2)*zeta(1,4)*2*x').render() == 'zeta(1,4)*q^(1/2)*2*x'
    assert parse_scalar('zeta(2,4)') == Scalar(-1)
    assert parse_scalar('(1+2)*q^-1') == Scalar(1)
    assert parse_scalar('eps_a^2') == Scalar.opaque('eps_a') * Scalar.opaque('eps_a')


def test_scalar_lists_and_matrices():
    """Comma-separated lists and ';'-separated rows."""
    assert parse_scalar_list('2,3') == [Scalar(2), Scalar(3)]
    n = parse_matrix('0,x;0,0')
    assert n.shape == (2, 2)
    assert n[0, 1] == Scalar(xpoly=LaurentPoly.monomial(1, 1))
    assert parse_matrix('1+x,0;0,1')[0, 0] == Scalar(1) + Scalar.x_power()


def test_ragged_matrix_is_a_parse_error():
    """Rows must have equal length."""
    with pytest.raises(ParseError):
        parse_matrix('1,2;3')


def test_syntax_error_reports_position_and_expected_tokens():
    """A missing parenthesis at the end of the input."""
    with pytest.raises(ParseError) as exc:
        parse_wd('Sp(unr(1),2')
    assert exc.value.line == 1
    assert exc.value.column == 12
    assert "')'" in exc.value.expected


def test_error_position_on_a_later_line():
    """Line and column count from 1."""
    with pytest.raises(ParseError) as exc:
        parse_wd('Sp(unr(1),1)+\nSp(unr(1),)')
    assert (exc.value.line, exc.value.column) == (2, 11)
    assert exc.value.exit_code == 2


@pytest.mark.parametrize('text', [
    'Sp(unr(1),0)',
    'Sp(unr(0),1)',
    'Sp(unr(1+q^(1/2)),1)',
    'Sp(tau(q),1)',
    'Sp(tau(a,cond=1),1)+Sp(tau(a,cond=2),1)',
    'Sp(tau(a),1)',
    'Sp(tau(a,color=1),1)',
    'Sp(unr(q^(1/3)),1)',
    'Sp(unr(1),1) extra',
    'Sp(unr(zeta(1,0)),1)',
    'Sp(unr(1),1)#',
])
def test_rejected_expressions(text):
    """Syntax and semantic errors are both parse errors."""
    with pytest.raises(ParseError):
        parse_wd(text)


def test_semantic_error_message():
    """unr(0) is named in the message."""
    with pytest.raises(ParseError) as exc:
        parse_wd('Sp(unr(0),1)')
    assert str(exc.value) == 'semantic error: alpha must be invertible, got 0 at line 1, column 1'


@given(mixed_reps())
def test_render_then_parse(r):
    """Parsing the rendered text gives back r."""
    assert parse_wd(render_wd(r)) == r


@given(family_reps())
def test_render_then_parse_families(r):
    """Alphas with x survive the text form."""
    assert parse_wd(render_wd(r)) == r


def test_parse_family_with_special_fiber():
    """Declared fibers are parsed with the family."""
    fam = parse_family('Sp(unr(x),2)', ['5'], {Fraction(1): 'Sp(unr(1),1)+Sp(unr(q^-1),1)'})
    assert fam.bad_points == {Fraction(5)}
    assert fam.special[Fraction(1)] == parse_wd('Sp(unr(1),1)+Sp(unr(q^-1),1)')


def test_parse_family_bad_point_must_be_rational():
    """Invalid bad points surface as parse errors."""
    with pytest.raises(ParseError):
        parse_family('Sp(unr(x),1)', ['x'])


def test_alpha_may_be_a_laurent_polynomial_in_x():
    """unr(1+x) is a family parameter; sums across q^(1/2) parity are not."""
    r = parse_wd('Sp(unr(1+x),1)')
    assert r.blocks[0].alpha == Scalar(xpoly=LaurentPoly({0: 1, 1: 1}))
    assert r.blocks[0].alpha.has_x()
