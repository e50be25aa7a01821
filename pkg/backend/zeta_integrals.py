"""Truncated unramified zeta integrals from symmetric-function Whittaker values.

A Whittaker function of the unramified principal series with Satake
parameters alpha takes the value delta^(1/2)(w^lam) s_lam(alpha) on the
torus element w^lam, so every integral reduces to a sum over dominant
weights. The variable m is normalized so that the GL_n x GL_n' factor at m
is the classical one at k = m + (n n' - 1)/2.
"""
import logging
from fractions import Fraction

from config import Config
from errors import DomainError, InternalInvariantError, UncertifiedTruncation
from exact_algebra import PolyT, RatFuncT, Scalar, ScalarSum, TruncSeriesT
from local_factors import gamma_family, rs_l_inverse
from matrices import Matrix
from partitions import enumerate_partitions
from weil_deligne import SpehBlock, WDRep, unramified_atom

logger = logging.getLogger(__name__)


class SatakeData:
    """Satake parameters of an unramified generic representation of GL_n."""
    __slots__ = ('params',)

    def __init__(self, params):
        params = tuple(Scalar.coerce(p) for p in params)
        if not params:
            raise DomainError('Satake data needs at least one parameter')
        if any(p.is_zero() for p in params):
            raise DomainError('Satake parameters must be nonzero')
        self.params = params

    @property
    def n(self):
        return len(self.params)

    @property
    def q(self):
        return self.params[0].q

    def rep(self):
        """The N = 0 representation with these Frobenius eigenvalues."""
        atom = unramified_atom()
        return WDRep([SpehBlock(atom, p, 1) for p in self.params])

    def dual(self):
        """Parameters of the contragredient Whittaker model: alpha^-1 q^(n-1)."""
        shift = Scalar.q_power(self.n - 1, q=self.q)
        return SatakeData([p.inverse() * shift for p in self.params])

    def unitary(self):
        """alpha q^((1-n)/2)."""
        shift = Scalar.q_power(Fraction(1 - self.n, 2), q=self.q)
        return SatakeData([p * shift for p in self.params])

    def specialize(self, point):
        return SatakeData([p.specialize(point) for p in self.params])

    def __eq__(self, other):
        if not isinstance(other, SatakeData):
            return NotImplemented
        return self.params == other.params

    def __hash__(self):
        return hash(self.params)

    def __repr__(self):
        return f"<SatakeData n={self.n} params=[{', '.join(p.render() for p in self.params)}]>"


class ZetaResult:
    """series, l_inv and their product, with the polynomial certificate."""

    def __init__(self, series, l_inv, certified_degree, volume=None):
        self.series = series
        self.l_inv = l_inv
        self.product = series.mul_poly(l_inv)
        self.certified_degree = certified_degree
        self.volume = volume
        self.certified = series.bound > certified_degree and self.product.tail_vanishes(certified_degree)

    @property
    def bound(self):
        return self.series.bound

    def require_certified(self):
        if not self.certified:
            logger.info('uncertified truncation at bound %s (degree %s)', self.bound, self.certified_degree)
            if self.bound <= self.certified_degree:
                raise UncertifiedTruncation(
                    f'truncation bound {self.bound} does not exceed the degree {self.certified_degree} of the inverse L-factor')
            raise UncertifiedTruncation(
                f'product has nonzero coefficients in ({self.certified_degree}, {self.bound}]')
        return self

    def polynomial(self):
        """The certified product as an exact polynomial."""
        self.require_certified()
        return PolyT({d: c for d, c in self.product.items() if d <= self.certified_degree}, self.product.q)

    def specialize(self, point):
        volume = self.volume.specialize(point) if self.volume is not None else None
        return ZetaResult(self.series.specialize(point), self.l_inv.specialize(point), self.certified_degree, volume)

    def __repr__(self):
        return f'<ZetaResult bound={self.bound} certified={self.certified}>'


def complete_homogeneous(params, k):
    """h_k(params)."""
    return complete_homogeneous_table(params, k)[k] if k >= 0 else ScalarSum.zero(params[0].q)


def complete_homogeneous_table(params, top):
    """[h_0, ..., h_top] by adding one variable at a time."""
    q = params[0].q
    table = [ScalarSum.one(q)] + [ScalarSum.zero(q)] * top
    for value in params:
        for k in range(1, top + 1):
            table[k] = table[k] + table[k - 1] * value
    return table


def schur_polynomial(params, lam, table=None):
    """s_lam(params) by Jacobi-Trudi; negative weights factor out a power of the determinant."""
    n = len(params)
    lam = list(lam) + [0] * (n - len(lam))
    if len(lam) > n or any(a < b for a, b in zip(lam, lam[1:])):
        return ScalarSum.zero(params[0].q)
    low = min(lam)
    factor = ScalarSum.one(params[0].q)
    if low < 0:
        det = Scalar(1, q=params[0].q)
        for p in params:
            det = det * p
        factor = (det ** low).to_sum()
        lam = [a - low for a in lam]
    top = lam[0] + n
    table = table if table is not None and len(table) > top else complete_homogeneous_table(params, top)
    zero = ScalarSum.zero(params[0].q)
    rows = [[table[lam[i] - i + j] if lam[i] - i + j >= 0 else zero for j in range(n)] for i in range(n)]
    return Matrix(rows, params[0].q).determinant() * factor


def _rho_pairing(n, lam):
    """sum (n + 1 - 2i) lam_i, i.e. <2 rho, lam>."""
    return sum((n + 1 - 2 * i) * a for i, a in enumerate(lam, start=1))


def whittaker_value(d, lam, table=None):
    """delta_B^(1/2)(w^lam) s_lam(alpha); zero off the dominant cone."""
    lam = list(lam)
    if len(lam) != d.n:
        raise DomainError(f'weight {lam} has the wrong length for GL_{d.n}')
    if any(a < b for a, b in zip(lam, lam[1:])):
        return ScalarSum.zero(d.q)
    scale = Scalar.q_power(Fraction(-_rho_pairing(d.n, lam), 2), q=d.q)
    return schur_polynomial(d.params, lam, table) * scale


def dominant_weights(n, j):
    """Weights lam_1 >= ... >= lam_n >= 0 with |lam| = j."""
    return [p.to_list() + [0] * (n - len(p)) for p in enumerate_partitions(j) if len(p) <= n]


def measure_constant(n, q):
    """vol(K_n) = prod_(i=2..n) (1 - q^-i)."""
    value = ScalarSum.one(q)
    for i in range(2, n + 1):
        value = value * (1 - Scalar.q_power(-i, q=q))
    return value


def _check_lattice(m, n, n2):
    m = Fraction(m)
    if (m - Fraction(1 - n * n2, 2)).denominator != 1:
        raise DomainError(f'm = {m} is off the lattice (1 - {n * n2})/2 + Z')
    return m


def _finish(series, l_inv, volume=None, on_lattice=True):
    if series.low_degree < 0:
        raise InternalInvariantError('unramified zeta series has negative degrees')
    result = ZetaResult(series, l_inv, l_inv.degree() if not l_inv.is_zero() else 0, volume)
    logger.debug('certification window (%s, %s]: %s', result.certified_degree, result.bound, result.certified)
    if on_lattice and result.certified and any(c.has_half_power() for _, c in result.product.items()):
        raise InternalInvariantError('half powers of q survive in a certified product')
    return result


def gl_n_gl1_series(d, m, bound=None):
    """sum_j W(diag(w^j, 1, ..., 1)) q^(-jm) T^j for any half-integral m."""
    bound = Config.ZETA_BOUND if bound is None else bound
    if bound < 1:
        raise DomainError('truncation bound must be positive')
    m = Fraction(m)
    if (2 * m).denominator != 1:
        raise DomainError(f'm = {m} is not half-integral')
    table = complete_homogeneous_table(d.params, bound + d.n)
    coefficients = []
    for j in range(bound + 1):
        value = whittaker_value(d, [j] + [0] * (d.n - 1), table)
        coefficients.append(value * Scalar.q_power(-j * m, q=d.q))
    series = TruncSeriesT(coefficients, bound, 0, d.q)
    trivial = WDRep([SpehBlock(unramified_atom(), Scalar(1, q=d.q), 1)])
    l_inv = rs_l_inverse(d.rep(), trivial, m + Fraction(d.n - 1, 2))
    on_lattice = (m - Fraction(1 - d.n, 2)).denominator == 1
    return _finish(series, l_inv, on_lattice=on_lattice)


def zeta_gl_n_gl1(d, m, bound=None):
    """GL_n x GL_1 integral against the trivial character; m in (1 - n)/2 + Z."""
    _check_lattice(m, d.n, 1)
    return gl_n_gl1_series(d, m, bound)


def zeta_gl_n_gl_n(d1, d2, m, bound=None):
    """GL_n x GL_n integral with Phi the characteristic function of O^n, vol(K_n) factored out."""
    bound = Config.ZETA_BOUND if bound is None else bound
    if d1.n != d2.n:
        raise DomainError(f'GL_n x GL_n needs equal ranks, got {d1.n} and {d2.n}')
    if bound < 1:
        raise DomainError('truncation bound must be positive')
    n = d1.n
    m = _check_lattice(m, n, n)
    k = m + Fraction(n * n - 1, 2)
    table1 = complete_homogeneous_table(d1.params, bound + n)
    table2 = complete_homogeneous_table(d2.params, bound + n)
    coefficients = []
    for j in range(bound + 1):
        total = ScalarSum.zero(d1.q)
        for lam in dominant_weights(n, j):
            w1 = whittaker_value(d1, lam, table1)
            w2 = whittaker_value(d2, lam, table2)
            total = total + w1 * w2 * Scalar.q_power(_rho_pairing(n, lam), q=d1.q)
        coefficients.append(total * Scalar.q_power(-j * k, q=d1.q))
    series = TruncSeriesT(coefficients, bound, 0, d1.q)
    l_inv = rs_l_inverse(d1.rep(), d2.rep(), k)
    return _finish(series, l_inv, volume=measure_constant(n, d1.q))


def invariant_pairing_check(d, bound=None):
    """L^-1 I(W, W^dual) / vol(K_n) is the constant 1 through the window."""
    bound = Config.ZETA_BOUND if bound is None else bound
    n = d.n
    result = zeta_gl_n_gl_n(d, d.dual(), n + Fraction(1 - n * n, 2), bound).require_certified()
    return result.polynomial() == PolyT.one(d.q)


def gl2_gamma_functional_equation_check(d, bound=None):
    """I(W_dual, 1/T) = gamma(T) I(W, T) for the truncated GL_n x GL_1 integrals (n = 1 or 2).

    The certified integral of W gives a rational function in T; gamma times it,
    read in U = 1/T and expanded about U = 0, must reproduce every computed
    coefficient of the integral of the dual Whittaker function.
    """
    if d.n not in (1, 2):
        raise DomainError(f'the functional-equation check covers GL_1 and GL_2, got GL_{d.n}')
    left = gl_n_gl1_series(d, 0, bound).require_certified()
    right = gl_n_gl1_series(d.dual(), 1, bound)
    predicted = gamma_family(d.unitary().rep()) * RatFuncT(left.polynomial(), left.l_inv)
    try:
        expansion = predicted.at_inverse().expand(right.bound)
    except DomainError:
        logger.debug('gamma times the integral has a pole at T = infinity')
        return False
    return all(expansion.coefficient(j) == c for j, c in right.series.items())
