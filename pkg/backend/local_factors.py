"""Inverse L-factors, epsilon and gamma factors of Weil-Deligne representations.

All factors are polynomials or rational functions in T, where T stands for
q^-s. epsilon is the pair (unit, conductor exponent); under the T-twist it
becomes unit * T^cond.
"""
import logging
from collections import Counter
from fractions import Fraction
from math import gcd

from config import Config
from errors import DomainError, InternalInvariantError, NotInvertibleError, SelfDualityError
from exact_algebra import PolyT, RatFuncT, Scalar, det_char
from weil_deligne import WDRep, dual, inertia_invariants, is_pure, specialize, tensor, twist

logger = logging.getLogger(__name__)


class EpsFactor:
    """epsilon(r) = unit * T^cond."""
    __slots__ = ('unit', 'cond')

    def __init__(self, unit, cond):
        unit = Scalar.coerce(unit)
        if not unit.is_invertible():
            raise NotInvertibleError(f'epsilon unit {unit.render()} is not invertible')
        if cond < 0:
            raise DomainError(f'conductor exponent must be nonnegative, got {cond}')
        self.unit = unit
        self.cond = int(cond)

    def __mul__(self, other):
        return EpsFactor(self.unit * other.unit, self.cond + other.cond)

    def as_ratfunc(self):
        return RatFuncT(PolyT.monomial(self.unit, self.cond, self.unit.q))

    def __eq__(self, other):
        if not isinstance(other, EpsFactor):
            return NotImplemented
        return (self.unit, self.cond) == (other.unit, other.cond)

    def __hash__(self):
        return hash((self.unit, self.cond))

    def __repr__(self):
        return f'<EpsFactor unit={self.unit.render()} cond={self.cond}>'


def _q_of(r):
    return r.blocks[0].alpha.q if r.blocks else None


def l_ss_inverse(r):
    """det(1 - phi T | r^I)."""
    full, _ = inertia_invariants(r)
    return det_char(full)


def l_inverse(r):
    """det(1 - phi T | (Ker N)^I)."""
    _, kernel = inertia_invariants(r)
    return det_char(kernel)


def rs_l_inverse(r1, r2, shift=0):
    """l_inverse of r1 x r2 with T replaced by q^-shift T."""
    poly = l_inverse(tensor(r1, r2))
    if shift:
        poly = poly.scale_variable(Scalar.q_power(-Fraction(shift), q=poly.q))
    return poly


def _quotient_levels(r):
    """phi-eigenvalues on r^I / (Ker N)^I, read off the inertia invariants."""
    full, kernel = inertia_invariants(r)
    quotient = Counter(e.as_scalar() for e in full.diagonal_entries())
    quotient.subtract(Counter(e.as_scalar() for e in kernel.diagonal_entries()))
    if any(count < 0 for count in quotient.values()):
        raise InternalInvariantError('kernel invariants are not a subspace of the invariants')
    return sorted(quotient.elements(), key=Scalar.sort_key)


def epsilon_ss(r):
    """Atom units, one copy per Speh level, and the conductor of r_ss."""
    unit = Scalar(1, q=_q_of(r))
    cond = 0
    for b in r.blocks:
        unit = unit * b.atom.eps_unit ** b.m
        cond += b.atom.cond * b.m
    return EpsFactor(unit, cond)


def epsilon(r):
    """epsilon_ss(r) * det(-phi T | r^I / (Ker N)^I)."""
    base = epsilon_ss(r)
    unit = base.unit
    levels = _quotient_levels(r)
    for level in levels:
        unit = unit * (-level)
    return EpsFactor(unit, base.cond + len(levels))


def conductor(r):
    """Artin conductor exponent a(r) = a(r_ss) + dim r^I - dim (Ker N)^I."""
    full, kernel = inertia_invariants(r)
    return sum(b.atom.cond * b.m for b in r.blocks) + full.nrows - kernel.nrows


def _dual_twist(r):
    return twist(dual(r), 1)


def _invariant_dual_twist(r):
    """r*(1) restricted to unramified blocks; ramified blocks have no inertia invariants."""
    return _dual_twist(WDRep([b for b in r.blocks if b.atom.unramified]))


def gamma(r):
    """epsilon_ss * L_ss(r*(1)) / L_ss(r), both L-factors at T; independent of N."""
    stripped = r.strip_monodromy()
    value = _gamma_at_T(r)
    if _gamma_at_T(stripped) != value:
        raise InternalInvariantError('gamma depends on the monodromy')
    return value


def _gamma_at_T(r):
    unit = epsilon_ss(r).unit
    return RatFuncT(l_ss_inverse(r) * unit, l_ss_inverse(_invariant_dual_twist(r)))


def gamma_family(r):
    """epsilon_ss T^a L_ss(r*(1))(1/T) / L_ss(r)(T); equals gamma at T = 1."""
    eps = epsilon_ss(r)
    numerator = RatFuncT(l_ss_inverse(r) * eps.unit) * RatFuncT(PolyT.monomial(1, eps.cond, eps.unit.q))
    return numerator / l_ss_inverse(_invariant_dual_twist(r)).at_inverse()


def _twisted_ratio(r):
    """[L(r*(1))(1/T) / L(r)(T)] over the same ratio for r_ss; the N-dependence of epsilon."""
    r_ss = r.strip_monodromy()
    left = l_inverse(_invariant_dual_twist(r)).at_inverse() / RatFuncT(l_inverse(r))
    right = RatFuncT(l_ss_inverse(r_ss)) / l_ss_inverse(_invariant_dual_twist(r_ss)).at_inverse()
    return left * right


def epsilon_ratio_check(r):
    """The L-ratio against r_ss equals det(-phi T | r^I / (Ker N)^I), as rational functions and at T = 1."""
    levels = _quotient_levels(r)
    q = _q_of(r)
    unit = Scalar(1, q=q)
    for level in levels:
        unit = unit * (-level)
    expected = RatFuncT(PolyT.monomial(unit, len(levels), q))
    ratio = _twisted_ratio(r)
    if ratio != expected:
        logger.debug('epsilon ratio %s differs from %s', ratio.render(), expected.render())
        return False
    if not ratio.den.evaluate(1).is_zero() and ratio.evaluate(1) != expected.evaluate(1):
        return False
    return epsilon(r).unit == epsilon_ss(r).unit * unit


class SignReport:
    """Outcome of a sign-constancy scan."""
    __slots__ = ('signs', 'skipped')

    def __init__(self, signs, skipped):
        self.signs = list(signs)
        self.skipped = list(skipped)

    @property
    def ok(self):
        return bool(self.signs) and len({sign for _, sign in self.signs}) == 1

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f'<SignReport ok={self.ok} samples={len(self.signs)} skipped={len(self.skipped)}>'


def check_self_dual(fam):
    if fam.mode != 'structured':
        raise SelfDualityError('sign constancy needs a structured family')
    for label, atom in fam.rep.atoms().items():
        if atom.unramified:
            continue
        if atom.dual_label != label:
            raise SelfDualityError(f'atom {label} is not self-dual')
        unit = atom.eps_unit
        if not unit.is_rational() or abs(unit.rational_value()) != 1:
            raise SelfDualityError(f'atom {label} needs a real epsilon unit +1 or -1')
    if _dual_twist(fam.rep) != fam.rep:
        raise SelfDualityError('the family is not isomorphic to its dual twisted by 1')


def sample_points(q, limit):
    """zeta_N^a * q^(h/2) for N = 1, 2, ... in a fixed order."""
    points = []
    order = 1
    while len(points) < limit:
        for a in range(order):
            if gcd(a, order) != 1:
                continue
            for h in (0, -1, 1, -2, 2):
                points.append(Scalar(turn=Fraction(a, order), q2=h, q=q))
        order += 1
    return points[:limit]


def sign_constancy_check(fam, samples=None, candidates=None):
    """epsilon of the self-dual fibers at pure sample points, and whether it is constant."""
    samples = Config.SIGN_SAMPLES if samples is None else samples
    candidates = Config.SIGN_CANDIDATES if candidates is None else candidates
    check_self_dual(fam)
    q = _q_of(fam.rep)
    signs, skipped = [], []
    for point in sample_points(q, candidates):
        if len(signs) >= samples:
            break
        at = point.rational_value() if point.is_rational() else point
        try:
            fiber = specialize(fam, at)
        except DomainError as exc:
            skipped.append((point, str(exc)))
            continue
        if not is_pure(fiber, -1):
            skipped.append((point, 'not pure'))
            continue
        unit = epsilon(fiber).unit
        if not unit.is_rational() or abs(unit.rational_value()) != 1:
            raise InternalInvariantError(f'epsilon {unit.render()} of a self-dual fiber is not a sign')
        signs.append((point, int(unit.rational_value())))
    report = SignReport(signs, skipped)
    logger.info('sign constancy: %s pure points, %s skipped', len(report.signs), len(report.skipped))
    return report
