import json
from pathlib import Path

import pytest

from app import create_app
from cli import Command, run
from errors import ParseError

GOLDEN = Path(__file__).parent / 'golden'


@pytest.fixture
def app():
    """Create and configure a Flask app for testing."""
    app = create_app('testing')
    yield app


@pytest.fixture
def runner(app):
    """A test CLI runner for the app."""
    return app.test_cli_runner()


@pytest.mark.parametrize('name,args,exit_code', [
    ('l_speh', ['L', 'Sp(unr(1),2)'], 0),
    ('lss_speh', ['Lss', 'Sp(unr(1),2)'], 0),
    ('classify_two_blocks', ['classify', 'Sp(unr(2),1)+Sp(unr(2),2)'], 0),
    ('check_eps_ratio', ['check', 'eps-ratio', 'Sp(unr(5),3)'], 0),
    ('eps_speh', ['eps', 'Sp(unr(1),2)'], 0),
    ('llc_linked_pair', ['llc', 'Sp(unr(1),1)+Sp(unr(q^-1),1)'], 0),
    ('l_zero_alpha', ['L', 'Sp(unr(0),1)'], 2),
    ('rsl_speh_pair', ['rsL', 'Sp(unr(1),2)', 'Sp(unr(1),2)'], 0),
    ('gamma_trivial', ['gamma', 'Sp(unr(1),1)'], 0),
    ('oracle_roundtrip', ['oracle', 'roundtrip', 'Sp(unr(2),2)'], 0),
    ('oracle_tensor', ['oracle', 'tensor', 'Sp(unr(1),2)', 'Sp(unr(1),2)'], 0),
    ('zeta_gl1', ['zeta', '--n1', '1', '--params', '2', '--m', '0', '--bound', '3'], 0),
    ('zeta_uncertified', ['zeta', '--n1', '2', '--params', '2,3', '--m', '-1/2', '--bound', '2'], 4),
    ('pairing_gl1', ['pairing', '--params', '2', '--bound', '5'], 0),
    ('family_check_structured', ['family-check', 'Sp(unr(x),2)', '--at', '2', '--at', '1',
                                 '--special', '1=Sp(unr(1),1)+Sp(unr(q^-1),1)'], 0),
])
def test_golden_output(runner, name, args, exit_code):
    """Byte-exact JSON output and exit code of each verb."""
    result = runner.invoke(args=['llct'] + args)
    assert result.exit_code == exit_code
    assert result.output == (GOLDEN / f'{name}.json').read_text()


def test_gen_sub_mode(runner):
    """--mode GenSub reverses linked segments."""
    result = runner.invoke(args=['llct', 'llc', 'Sp(unr(1),1)+Sp(unr(q^-1),1)', '--mode', 'GenSub'])
    data = json.loads(result.output)
    assert data['ordering_mode'] == 'GenSub'
    assert [s['alpha'] for s in data['segments']] == ['q^-1', '1']


def test_residue_cardinality_option(runner):
    """--q changes how scalars are rendered."""
    result = runner.invoke(args=['llct', '--q', '5', 'L', 'Sp(unr(5),1)'])
    assert json.loads(result.output) == {'L_inverse': '1 - q*T'}
    result = runner.invoke(args=['llct', 'L', 'Sp(unr(5),1)'])
    assert json.loads(result.output) == {'L_inverse': '1 - 5*T'}


def test_invalid_residue_cardinality(runner):
    """q = 6 is not a prime power."""
    result = runner.invoke(args=['llct', '--q', '6', 'L', 'Sp(unr(1),1)'])
    assert result.exit_code == 3
    assert json.loads(result.output)['error'] == 'domain_error'


def test_syntax_error_exit_code(runner):
    """Unbalanced parentheses exit with code 2."""
    result = runner.invoke(args=['llct', 'L', 'Sp(unr(1),2'])
    assert result.exit_code == 2
    data = json.loads(result.output)
    assert data['line'] == 1
    assert data['column'] == 12


def test_domain_error_exit_code(runner):
    """Matrix realizations of ramified atoms are a domain error."""
    result = runner.invoke(args=['llct', 'oracle', 'roundtrip', 'Sp(tau(a,cond=1),1)'])
    assert result.exit_code == 3


def test_matrix_family_check(runner):
    """A matrix-mode family drops its monodromy at x = 0."""
    result = runner.invoke(args=['llct', 'family-check', '--phi', '1,3', '--nmat', '0,x;0,0',
                                 '--at', '0', '--at', '2'])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data['mode'] == 'matrix'
    assert [p['result'] for p in data['points']] == ['ProperSurjection', 'Isomorphism']
    assert data['points'][1]['fiber'] == 'Sp(unr(q),2)'


def test_sign_check(runner):
    """The root number of Sp(1,2) is -1 at every sample."""
    result = runner.invoke(args=['llct', 'check', 'sign', 'Sp(unr(1),2)', '--samples', '3'])
    data = json.loads(result.output)
    assert data['ok'] is True
    assert [s['sign'] for s in data['signs']] == [-1, -1, -1]


def test_special_fiber_needs_a_point(runner):
    """--special takes POINT=REP."""
    result = runner.invoke(args=['llct', 'family-check', 'Sp(unr(x),2)', '--at', '2', '--special', 'oops'])
    assert result.exit_code != 0


def test_command_rejects_unknown_verbs():
    """Only registered verbs can be dispatched."""
    with pytest.raises(ParseError):
        Command('frobnicate')


def test_run_outside_the_app(app):
    """run works with the library session alone."""
    assert json.loads(run(Command('Lss', {'rep': 'Sp(unr(1),1)'}))) == {'L_ss_inverse': '1 - T'}
    assert json.loads(run(Command('L', {'rep': 'Sp(unr(5),1)'}, 5))) == {'L_inverse': '1 - q*T'}


def test_schema_errors_are_parse_errors():
    """Missing arguments fail validation."""
    with pytest.raises(ParseError):
        run(Command('rsL', {'rep': 'Sp(unr(1),1)'}))


@pytest.mark.parametrize('args', [
    ['gamma', 'Sp(unr(1),2)+Sp(tau(a,cond=1),1)'],
    ['classify', 'Sp(unr(2),1)+Sp(unr(2),2)'],
    ['check', 'eps-ratio', 'Sp(unr(x),2)+Sp(unr(q*x^-1),1)'],
])
def test_output_is_deterministic(runner, args):
    """Two runs of the same command print the same bytes."""
    first = runner.invoke(args=['llct'] + args)
    second = runner.invoke(args=['llct'] + args)
    assert first.exit_code == 0
    assert first.output == second.output


@pytest.mark.parametrize('args,text', [
    (['gamma', '--help'], 'Gamma factor of REP'),
    (['eps', '--help'], 'Epsilon factor of REP'),
    (['check', 'eps-ratio', '--help'], 'semisimplification'),
])
def test_verbs_document_themselves(runner, args, text):
    """--help shows each verb's description."""
    result = runner.invoke(args=['llct'] + args)
    assert result.exit_code == 0
    assert text in result.output
