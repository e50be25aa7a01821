"""The llct command group and the verb dispatch shared with the HTTP API.

Every verb maps to one library operation. Output is JSON with sorted keys
on stdout; errors are JSON objects too, with exit code 2 (parse),
3 (domain), 4 (uncertified truncation) or 1 (internal).
"""
import json
import logging
import os
from fractions import Fraction

import click
from flask import has_app_context
from flask.cli import AppGroup, ScriptInfo
from marshmallow import ValidationError

from bernstein import extended_point_of, point_of
from dsl import parse_family, parse_wd, render_wd
from errors import LlctError, ParseError, UncertifiedTruncation
from exact_algebra import current_q, session
from extensions import residue_field
from local_factors import (conductor, epsilon, epsilon_ratio_check, epsilon_ss, gamma, gamma_family,
                           l_inverse, l_ss_inverse, rs_l_inverse, sign_constancy_check)
from matrix_oracle import classify, monodromy_filtration, realize, tensor_realization
from multisegments import ORDERING_MODES, llc_gen
from schemas import (BernsteinPointSchema, CheckArgsSchema, EpsFactorSchema, ExtendedPointSchema,
                     FamilyArgsSchema, FiberSchema, LlcArgsSchema, MultisegmentSchema, OracleArgsSchema,
                     PairingArgsSchema, RepArgsSchema, RsArgsSchema, SignReportSchema, ZetaArgsSchema,
                     ZetaResultSchema)
from weil_deligne import WDFamily, check_interpolation, jordan_data, specialize, tensor
from zeta_integrals import SatakeData, invariant_pairing_check, zeta_gl_n_gl1, zeta_gl_n_gl_n

logger = logging.getLogger(__name__)


def dumps(payload):
    """Deterministic JSON text."""
    return json.dumps(payload, sort_keys=True, separators=(',', ':'))


# ---------------------------------------------------------------------------
# Verbs

def classify_verb(rep):
    data = ExtendedPointSchema().dump(extended_point_of(rep))
    data['support'] = BernsteinPointSchema().dump(point_of(rep))['coords']
    data['rep'] = render_wd(rep)
    return data


def llc_verb(rep, mode):
    return MultisegmentSchema().dump(llc_gen(rep, mode))


def l_verb(rep):
    return {'L_inverse': l_inverse(rep).render()}


def lss_verb(rep):
    return {'L_ss_inverse': l_ss_inverse(rep).render()}


def rsl_verb(rep, other, shift):
    return {'L_inverse': rs_l_inverse(rep, other, shift).render()}


def gamma_verb(rep):
    return {'gamma': gamma(rep).render(), 'gamma_family': gamma_family(rep).render()}


def eps_verb(rep):
    data = EpsFactorSchema().dump(epsilon(rep))
    data['semisimple'] = EpsFactorSchema().dump(epsilon_ss(rep))
    data['conductor'] = conductor(rep)
    return data


def zeta_verb(n1, n2, params, m, params2=None, bound=None):
    d1 = SatakeData(params)
    if n2 == 1 and params2 is None:
        result = zeta_gl_n_gl1(d1, m, bound)
    else:
        result = zeta_gl_n_gl_n(d1, SatakeData(params2), m, bound)
    data = ZetaResultSchema().dump(result)
    try:
        result.require_certified()
    except UncertifiedTruncation as exc:
        exc.details['result'] = data
        raise
    return data


def pairing_verb(params, bound=None):
    d = SatakeData(params)
    return {'n': d.n, 'ok': invariant_pairing_check(d, bound)}


def family_check_verb(rep, phi, nmat, at, bad, special):
    if rep is not None:
        fam = parse_family(rep, bad, {Fraction(point): text for point, text in special.items()})
    else:
        fam = WDFamily(phi=phi, n_matrix=nmat, bad_points=bad)
    fibers = []
    for point in at:
        fiber = specialize(fam, point)
        fibers.append({'x': point, 'fiber': fiber, 'jordan_data': jordan_data(fiber),
                       'result': check_interpolation(fam, point)})
    return {'generic': fam.generic_jordan_data().to_dict(), 'mode': fam.mode,
            'points': FiberSchema(many=True).dump(fibers)}


def oracle_verb(kind, rep, other=None):
    if kind == 'roundtrip':
        mwd = realize(rep)
        classified = classify(mwd)
        filtration = [[degree, [v.render() for v in values]] for degree, values in monodromy_filtration(mwd)]
        return {'filtration': filtration, 'ok': classified == rep, 'oracle': render_wd(classified),
                'rep': render_wd(rep)}
    structured = tensor(rep, other)
    oracle = classify(tensor_realization(realize(rep), realize(other)))
    return {'ok': structured == oracle, 'oracle': render_wd(oracle), 'structured': render_wd(structured)}


def check_verb(kind, rep, bad, samples=None):
    if kind == 'eps-ratio':
        return {'ok': epsilon_ratio_check(parse_wd(rep))}
    return SignReportSchema().dump(sign_constancy_check(parse_family(rep, bad), samples))


VERBS = {
    'classify': (classify_verb, RepArgsSchema),
    'llc': (llc_verb, LlcArgsSchema),
    'L': (l_verb, RepArgsSchema),
    'Lss': (lss_verb, RepArgsSchema),
    'rsL': (rsl_verb, RsArgsSchema),
    'gamma': (gamma_verb, RepArgsSchema),
    'eps': (eps_verb, RepArgsSchema),
    'zeta': (zeta_verb, ZetaArgsSchema),
    'pairing': (pairing_verb, PairingArgsSchema),
    'family-check': (family_check_verb, FamilyArgsSchema),
    'oracle': (oracle_verb, OracleArgsSchema),
    'check': (check_verb, CheckArgsSchema),
}


class Command:
    """A verb with its raw arguments and an optional residue cardinality."""
    __slots__ = ('verb', 'args', 'q')

    def __init__(self, verb, args=None, q=None):
        if verb not in VERBS:
            raise ParseError(f'unknown verb {verb!r}', expected=VERBS)
        self.verb = verb
        self.args = {key: value for key, value in (args or {}).items() if value is not None}
        self.q = q

    def __repr__(self):
        return f'<Command {self.verb} {sorted(self.args)}>'


def _default_q():
    return residue_field.q if has_app_context() else current_q()


def run(cmd):
    """Execute a command in its residue-field session; returns the JSON text."""
    handler, schema = VERBS[cmd.verb]
    logger.info('dispatching %s', cmd.verb)
    with session(cmd.q if cmd.q is not None else _default_q()):
        try:
            args = schema().load(cmd.args)
        except ValidationError as exc:
            raise ParseError(f'invalid arguments for {cmd.verb}: {dumps(exc.messages)}')
        return dumps(handler(**args))


# ---------------------------------------------------------------------------
# Click surface

@click.group('llct', cls=AppGroup)
@click.option('--q', 'q', type=int, default=None, help='Residue cardinality of the local field (default from config).')
@click.pass_context
def llct(ctx, q):
    """Exact computations with Weil-Deligne representations."""
    ctx.meta['llct.q'] = q


def _emit(verb, **args):
    ctx = click.get_current_context()
    try:
        click.echo(run(Command(verb, args, ctx.meta.get('llct.q'))))
    except LlctError as exc:
        logger.debug('%s failed: %s', verb, exc)
        click.echo(dumps(exc.to_dict()))
        ctx.exit(exc.exit_code)


@llct.command('classify')
@click.argument('rep')
def classify_command(rep):
    """Extended Bernstein point of REP."""
    _emit('classify', rep=rep)


@llct.command('llc')
@click.argument('rep')
@click.option('--mode', type=click.Choice(ORDERING_MODES), default=None)
def llc_command(rep, mode):
    """Multisegment of the generic representation attached to REP."""
    _emit('llc', rep=rep, mode=mode)


@llct.command('L')
@click.argument('rep')
def l_command(rep):
    """Inverse L-factor."""
    _emit('L', rep=rep)


@llct.command('Lss')
@click.argument('rep')
def lss_command(rep):
    """Inverse L-factor of the semisimplification."""
    _emit('Lss', rep=rep)


@llct.command('rsL')
@click.argument('rep')
@click.argument('other')
@click.option('--shift', default=None, help='Replace T by q^-shift T.')
def rsl_command(rep, other, shift):
    """Inverse Rankin-Selberg L-factor of REP x OTHER."""
    _emit('rsL', rep=rep, other=other, shift=shift)


@llct.command('gamma')
@click.argument('rep')
def gamma_command(rep):
    """Gamma factor of REP in T, and its T-twisted form."""
    _emit('gamma', rep=rep)


@llct.command('eps')
@click.argument('rep')
def eps_command(rep):
    """Epsilon factor of REP: unit and conductor exponent."""
    _emit('eps', rep=rep)


@llct.command('zeta')
@click.option('--n1', type=int, required=True)
@click.option('--n2', type=int, default=None)
@click.option('--params', required=True, help='Satake parameters of the first factor, comma separated.')
@click.option('--params2', default=None, help='Satake parameters of the second factor (GL_n x GL_n).')
@click.option('--m', required=True, help='Half-integral evaluation point.')
@click.option('--bound', type=int, default=None)
def zeta_command(n1, n2, params, params2, m, bound):
    """Truncated unramified zeta integral with its polynomial certificate."""
    _emit('zeta', n1=n1, n2=n2, params=params, params2=params2, m=m, bound=bound)


@llct.command('pairing')
@click.option('--params', required=True)
@click.option('--bound', type=int, default=None)
def pairing_command(params, bound):
    """Invariant pairing check for unramified Satake parameters."""
    _emit('pairing', params=params, bound=bound)


@llct.command('family-check')
@click.argument('rep', required=False)
@click.option('--phi', default=None, help='Diagonal of phi for a matrix-mode family.')
@click.option('--nmat', default=None, help="N(x), rows separated by ';'.")
@click.option('--at', 'at', multiple=True, required=True, help='Sample point (repeatable).')
@click.option('--bad', multiple=True, help='Declared bad point (repeatable).')
@click.option('--special', multiple=True, help='Declared fiber POINT=REP (repeatable).')
def family_check_command(rep, phi, nmat, at, bad, special):
    """Fibers of a family and whether each is an isomorphism or a proper surjection."""
    declared = {}
    for item in special:
        point, sep, text = item.partition('=')
        if not sep:
            raise click.BadParameter(f'expected POINT=REP, got {item!r}', param_hint='--special')
        declared[point.strip()] = text
    _emit('family-check', rep=rep, phi=phi, nmat=nmat, at=list(at), bad=list(bad), special=declared)


@llct.group('oracle')
def oracle_group():
    """Matrix oracle cross-checks."""


@oracle_group.command('roundtrip')
@click.argument('rep')
def oracle_roundtrip_command(rep):
    """classify(realize(REP)) against REP."""
    _emit('oracle', kind='roundtrip', rep=rep)


@oracle_group.command('tensor')
@click.argument('rep')
@click.argument('other')
def oracle_tensor_command(rep, other):
    """Structured tensor product against the Kronecker product of the realizations."""
    _emit('oracle', kind='tensor', rep=rep, other=other)


@llct.group('check')
def check_group():
    """Identities of the local factors."""


@check_group.command('eps-ratio')
@click.argument('rep')
def check_eps_ratio_command(rep):
    """Epsilon of REP against epsilon of its semisimplification through the L-factor ratio."""
    _emit('check', kind='eps-ratio', rep=rep)


@check_group.command('sign')
@click.argument('rep')
@click.option('--bad', multiple=True)
@click.option('--samples', type=int, default=None)
def check_sign_command(rep, bad, samples):
    """Root-number sign of a self-dual family across pure sample points."""
    _emit('check', kind='sign', rep=rep, bad=list(bad), samples=samples)


if __name__ == '__main__':
    from app import create_app

    env = os.environ.get('FLASK_ENV', 'development')
    llct(obj=ScriptInfo(create_app=lambda: create_app(env)), prog_name='llct')
