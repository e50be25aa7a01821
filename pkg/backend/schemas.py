"""Marshmallow schemas: request arguments of every verb and the JSON produced for results."""
from fractions import Fraction

from marshmallow import ValidationError, fields, validate, validates_schema

from dsl import parse_matrix, parse_scalar, parse_scalar_list, parse_wd, render_atom, render_wd
from extensions import ma
from multisegments import GEN_QUOTIENT, ORDERING_MODES, is_generic_irreducible


# ---------------------------------------------------------------------------
# Fields

class Rendered(fields.Field):
    """Dumps any value with a render() method to its canonical text."""

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else value.render()


class Rep(fields.Field):
    """DSL text in, WDRep out; dumps back to canonical text."""

    def _deserialize(self, value, attr, data, **kwargs):
        if not isinstance(value, str):
            raise ValidationError('a representation must be given as text')
        return parse_wd(value)

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else render_wd(value)


class ScalarList(fields.Field):
    """'2,3' or a JSON list of scalar texts."""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str):
            return parse_scalar_list(value)
        if isinstance(value, list):
            return [parse_scalar(str(v)) for v in value]
        raise ValidationError('expected a comma-separated string or a list')


class MatrixText(fields.Field):
    def _deserialize(self, value, attr, data, **kwargs):
        if not isinstance(value, str):
            raise ValidationError('a matrix must be given as text')
        return parse_matrix(value)


class RationalField(fields.Field):
    """Rational number from '-1/2', 3 or '0'."""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, bool):
            raise ValidationError('expected a rational number')
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f'{value!r} is not a rational number')

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else str(value)


def _rational_text(point):
    return point.render() if hasattr(point, 'render') else str(point)


# ---------------------------------------------------------------------------
# Request arguments

class RepArgsSchema(ma.Schema):
    rep = Rep(required=True)


class LlcArgsSchema(RepArgsSchema):
    mode = fields.String(load_default=GEN_QUOTIENT, validate=validate.OneOf(ORDERING_MODES))


class PairArgsSchema(ma.Schema):
    rep = Rep(required=True)
    other = Rep(required=True)


class RsArgsSchema(PairArgsSchema):
    shift = RationalField(load_default=Fraction(0))


class ZetaArgsSchema(ma.Schema):
    n1 = fields.Integer(required=True, validate=validate.Range(min=1))
    n2 = fields.Integer(load_default=1, validate=validate.Range(min=1))
    params = ScalarList(required=True)
    params2 = ScalarList(load_default=None)
    m = RationalField(required=True)
    bound = fields.Integer(load_default=None, validate=validate.Range(min=1))

    @validates_schema
    def validate_ranks(self, data, **kwargs):
        if len(data['params']) != data['n1']:
            raise ValidationError(f"--params has {len(data['params'])} entries, expected {data['n1']}", 'params')
        if data['n2'] not in (1, data['n1']):
            raise ValidationError('n2 must be 1 or equal to n1', 'n2')
        if data['n2'] == data['n1'] and data['n1'] > 1 and data['params2'] is None:
            raise ValidationError('GL_n x GL_n needs params2', 'params2')
        if data['params2'] is not None and len(data['params2']) != data['n2']:
            raise ValidationError(f"params2 has {len(data['params2'])} entries, expected {data['n2']}", 'params2')


class PairingArgsSchema(ma.Schema):
    params = ScalarList(required=True)
    bound = fields.Integer(load_default=None, validate=validate.Range(min=1))


class FamilyArgsSchema(ma.Schema):
    """Structured (rep) or matrix (phi, nmat) family with sample points."""
    rep = fields.String(load_default=None)
    phi = ScalarList(load_default=None)
    nmat = MatrixText(load_default=None)
    at = fields.List(RationalField(), required=True, validate=validate.Length(min=1))
    bad = fields.List(RationalField(), load_default=list)
    special = fields.Dict(keys=fields.String(), values=fields.String(), load_default=dict)

    @validates_schema
    def validate_mode(self, data, **kwargs):
        if (data['rep'] is None) == (data['nmat'] is None):
            raise ValidationError('give either a representation or phi and nmat')
        if data['nmat'] is not None and data['phi'] is None:
            raise ValidationError('matrix-mode families need phi', 'phi')


class OracleArgsSchema(ma.Schema):
    kind = fields.String(required=True, validate=validate.OneOf(('roundtrip', 'tensor')))
    rep = Rep(required=True)
    other = Rep(load_default=None)

    @validates_schema
    def validate_other(self, data, **kwargs):
        if data['kind'] == 'tensor' and data['other'] is None:
            raise ValidationError('oracle tensor needs a second representation', 'other')


class CheckArgsSchema(ma.Schema):
    kind = fields.String(required=True, validate=validate.OneOf(('eps-ratio', 'sign')))
    rep = fields.String(required=True)
    bad = fields.List(RationalField(), load_default=list)
    samples = fields.Integer(load_default=None, validate=validate.Range(min=1))


# ---------------------------------------------------------------------------
# Results

class AtomSchema(ma.Schema):
    """(atom, multiplicity) pairs of an inertial class."""
    label = fields.Function(lambda item: item[0].label)
    atom = fields.Function(lambda item: render_atom(item[0]))
    dim = fields.Function(lambda item: item[0].dim)
    f = fields.Function(lambda item: item[0].f)
    cond = fields.Function(lambda item: item[0].cond)
    multiplicity = fields.Function(lambda item: item[1])


class BernsteinPointSchema(ma.Schema):
    inertial_class = fields.Method('dump_class', data_key='class')
    coords = fields.Method('dump_coords')

    def dump_class(self, point):
        return AtomSchema(many=True).dump(point.cls.atoms)

    def dump_coords(self, point):
        return {label: [c.render() for c in values] for label, values in point.coords}


class ExtendedPointSchema(BernsteinPointSchema):
    stratum = fields.Method('dump_stratum')

    def dump_stratum(self, point):
        return point.stratum.to_dict()

    def dump_coords(self, point):
        return {label: [[part, c.render()] for part, c in values] for label, values in point.coords}


class SegmentSchema(ma.Schema):
    atom = fields.Function(lambda s: render_atom(s.atom))
    alpha = Rendered()
    m = fields.Integer()


class MultisegmentSchema(ma.Schema):
    ordering_mode = fields.String()
    segments = fields.List(fields.Nested(SegmentSchema))
    text = fields.Function(lambda s: s.render())
    generic_irreducible = fields.Function(is_generic_irreducible)


class EpsFactorSchema(ma.Schema):
    unit = Rendered()
    cond = fields.Integer()


class ZetaResultSchema(ma.Schema):
    series = Rendered()
    l_inv = Rendered()
    product = Rendered()
    certified = fields.Boolean()
    certified_degree = fields.Integer()
    bound = fields.Integer()
    volume = Rendered()


class SignReportSchema(ma.Schema):
    ok = fields.Boolean()
    signs = fields.Function(lambda report: [{'x': _rational_text(p), 'sign': s} for p, s in report.signs])
    skipped = fields.Function(lambda report: [{'x': _rational_text(p), 'reason': r} for p, r in report.skipped])


class FiberSchema(ma.Schema):
    """One sampled fiber of a family: dumped from a dict built by the family-check verb."""
    x = RationalField()
    fiber = Rep()
    jordan_data = fields.Function(lambda item: item['jordan_data'].to_dict())
    result = fields.String()
