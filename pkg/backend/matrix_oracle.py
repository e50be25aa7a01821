"""Explicit matrix realizations (Phi, N) of unramified Weil-Deligne representations.

Every structured rule in weil_deligne is checked against these matrices:
realize builds the block matrices, classify recovers the Speh blocks from
ranks on Phi-eigenspaces, and monodromy_filtration builds the weight
filtration of N from its kernels and images.
"""
import logging
from fractions import Fraction
from math import lcm

from sympy import Poly, Rational, cancel, factor_list, fraction, integer_nthroot, symbols

from errors import (DomainError, InternalInvariantError, UnsupportedEigenstructureError,
                    UnsupportedEvaluationError)
from exact_algebra import LaurentPoly, Scalar, det_char
from matrices import Matrix
from partitions import jordan_type
from weil_deligne import SpehBlock, WDRep, unramified_atom

logger = logging.getLogger(__name__)

_LAM, _XS = symbols('lam x')


class MatrixWD:
    """A pair (Phi, N) with N nilpotent and N*Phi = q*Phi*N."""
    __slots__ = ('phi', 'n')

    def __init__(self, phi, n, check=True):
        if not phi.is_square() or phi.shape != n.shape:
            raise DomainError(f'Phi {phi.shape} and N {n.shape} must be square of the same size')
        self.phi = phi
        self.n = n
        if check:
            if n @ phi != (phi @ n) * phi.q:
                raise DomainError('the relation N*Phi = q*Phi*N fails')
            if self.size and not n.power(self.size).is_zero():
                raise DomainError('N is not nilpotent')

    @property
    def size(self):
        return self.phi.nrows

    @property
    def q(self):
        return self.phi.q

    def __repr__(self):
        return f'<MatrixWD size={self.size}>'


def _speh_matrices(block):
    m = block.m
    phi = Matrix.diagonal(block.levels())
    n = Matrix([[1 if i == j + 1 else 0 for j in range(m)] for i in range(m)], phi.q, m)
    return phi, n


def realize(r):
    """Block-diagonal (Phi, N); Sp(alpha, m) gives diag(alpha, alpha q^-1, ...) and a lower shift."""
    phis, ns = [], []
    for block in r.blocks:
        if not block.atom.unramified:
            raise DomainError(f'cannot realize the ramified atom {block.atom.label} by matrices')
        phi, n = _speh_matrices(block)
        phis.append(phi)
        ns.append(n)
    if not phis:
        empty = Matrix.zero(0)
        return MatrixWD(empty, empty, check=False)
    return MatrixWD(Matrix.block_diag(phis), Matrix.block_diag(ns))


def direct_sum_realization(a, b):
    return MatrixWD(Matrix.block_diag([a.phi, b.phi]), Matrix.block_diag([a.n, b.n]), check=False)


def conjugate(mwd, p):
    """(P Phi P^-1, P N P^-1)."""
    p_inv = p.inverse()
    return MatrixWD(p @ mwd.phi @ p_inv, p @ mwd.n @ p_inv)


def dual_realization(mwd):
    """Contragredient pair (Phi^-T, -N^T)."""
    return MatrixWD(mwd.phi.inverse().transpose(), -mwd.n.transpose())


def tensor_realization(a, b):
    """(Phi_a x Phi_b, N_a x 1 + 1 x N_b)."""
    ident_a = Matrix.identity(a.size, a.q)
    ident_b = Matrix.identity(b.size, b.q)
    return MatrixWD(a.phi.kron(b.phi), a.n.kron(ident_b) + ident_a.kron(b.n))


# ---------------------------------------------------------------------------
# Eigenvalues

def _char_poly_expr(matrix):
    """det(lam - A) as a sympy polynomial in lam and x (x powers shifted to be nonnegative)."""
    n = matrix.nrows
    terms = []
    for j, c in det_char(matrix).coeffs:
        for (word, parity, xexp), value in c.terms.items():
            if word or parity or not value.is_rational():
                raise UnsupportedEigenstructureError('eigenvalues outside the scalar class')
            terms.append((n - j, xexp, value.value))
    low = min(xexp for _, xexp, _ in terms)
    return sum(Rational(v.numerator, v.denominator) * _LAM ** d * _XS ** (xexp - low) for d, xexp, v in terms)


def _monomial_root(factor):
    """Root c*x^k of a factor linear in lam, as (Fraction c, int k)."""
    a, b = Poly(factor, _LAM).all_coeffs()
    num, den = fraction(cancel(-b / a))
    num_terms = Poly(num, _XS).terms()
    den_terms = Poly(den, _XS).terms()
    if len(num_terms) != 1 or len(den_terms) != 1:
        raise UnsupportedEigenstructureError('eigenvalue is not a monomial in x')
    ((e_num,), c_num), ((e_den,), c_den) = num_terms[0], den_terms[0]
    value = Rational(c_num) / Rational(c_den)
    return Fraction(int(value.p), int(value.q)), int(e_num) - int(e_den)


def _rational_root(value, e):
    if value <= 0:
        return None
    num, exact_num = integer_nthroot(value.numerator, e)
    den, exact_den = integer_nthroot(value.denominator, e)
    if exact_num and exact_den:
        return Fraction(int(num), int(den))
    return None


def _power_candidates(phi):
    """Eigenvalue candidates of a general Phi from the factorization of char(Phi^e)."""
    conductor = lcm(1, *(value.conductor for row in phi.rows for entry in row for value in entry.terms.values()))
    e = 2 * conductor
    expr = _char_poly_expr(phi.power(e))
    _, factors = factor_list(expr, _LAM, _XS)
    candidates = []
    for factor, _ in factors:
        degree = Poly(factor, _LAM).degree()
        if degree == 0:
            continue
        if degree > 1:
            raise UnsupportedEigenstructureError(f'characteristic polynomial has an irreducible factor of degree {degree}')
        c, k = _monomial_root(factor)
        if k % e:
            raise UnsupportedEigenstructureError('eigenvalue has a fractional power of x')
        for half in (0, 1):
            root = _rational_root(c / Fraction(phi.q) ** (half * e // 2), e)
            if root is None:
                continue
            base = Scalar(root, q2=half, xpoly=LaurentPoly.monomial(1, k // e), q=phi.q)
            candidates.extend(base * Scalar.root(j, e, q=phi.q) for j in range(e))
    logger.debug('eigenvalue candidates from char(Phi^%s): %s', e, len(candidates))
    return candidates


def eigenvalue_candidates(phi):
    if phi.is_triangular():
        values = []
        for entry in phi.diagonal_entries():
            scalar = entry.as_scalar()
            if scalar is None:
                raise UnsupportedEigenstructureError(f'eigenvalue {entry.render()} outside the scalar class')
            values.append(scalar)
        return values
    return _power_candidates(phi)


class _Eigenspaces:
    """Ranks of powers of N on the Phi-eigenspaces."""

    def __init__(self, mwd):
        self.mwd = mwd
        self.size = mwd.size
        self.diagonal = mwd.phi.is_diagonal()
        self._entries = mwd.phi.diagonal_entries()
        self._powers = [Matrix.identity(self.size, mwd.q)]
        self.eigenvalues = []
        for value in eigenvalue_candidates(mwd.phi):
            if value not in self.eigenvalues and self.dimension(value) > 0:
                self.eigenvalues.append(value)
        self.eigenvalues.sort(key=Scalar.sort_key)

    def n_power(self, d):
        while len(self._powers) <= d:
            self._powers.append(self._powers[-1] @ self.mwd.n)
        return self._powers[d]

    def _indices(self, mu):
        return [i for i, entry in enumerate(self._entries) if entry == mu]

    def _shifted(self, mu):
        return self.mwd.phi - Matrix.identity(self.size, self.mwd.q) * mu

    def dimension(self, mu):
        if self.diagonal:
            return len(self._indices(mu))
        return self._shifted(mu).nullity()

    def rank_on(self, mu, d):
        """rank of N^d restricted to the mu-eigenspace."""
        if mu not in self.eigenvalues:
            return 0
        if self.diagonal:
            return self.n_power(d).columns(self._indices(mu)).rank()
        stacked = self.n_power(d).vstack(self._shifted(mu))
        return self.dimension(mu) - (self.size - stacked.rank())


def classify(mwd):
    """Speh blocks of a Frobenius-semisimple pair; inverse of realize."""
    if mwd.size == 0:
        return WDRep()
    if mwd.phi.has_opaque() or mwd.n.has_opaque():
        raise UnsupportedEvaluationError('cannot classify matrices with opaque units')
    spaces = _Eigenspaces(mwd)
    if sum(spaces.dimension(mu) for mu in spaces.eigenvalues) != mwd.size:
        raise UnsupportedEigenstructureError('semisimplification not supported for this eigenstructure')
    q = Scalar.q_power(1, q=mwd.q)
    atom = unramified_atom()
    blocks = []
    for mu in spaces.eigenvalues:
        starts = [spaces.rank_on(mu, d) - spaces.rank_on(mu * q, d + 1) for d in range(mwd.size + 1)]
        for length in range(1, mwd.size + 1):
            blocks.extend(SpehBlock(atom, mu, length) for _ in range(starts[length - 1] - starts[length]))
    rep = WDRep(blocks)
    if rep.rank != mwd.size:
        raise InternalInvariantError(f'classified rank {rep.rank} differs from matrix size {mwd.size}')
    return rep


def _span_sum(a, b):
    return a.hstack(b).column_basis()


def _span_meet(a, b):
    """Basis of span(a) meet span(b), from the kernel of [a | -b]."""
    if not a.ncols or not b.ncols:
        return Matrix.zero(a.nrows, 0, a.q)
    kernel = a.hstack(-b).nullspace()
    return (a @ kernel.top_rows(a.ncols)).column_basis()


def weight_filtration(mwd):
    """{k: basis of M_k}, with M_k the sum over a - b = k of Ker N^(a+1) meet Im N^b."""
    size, q = mwd.size, mwd.q
    powers = [Matrix.identity(size, q)]
    for _ in range(size):
        powers.append(powers[-1] @ mwd.n)
    kernels = [p.nullspace() for p in powers]
    images = [p.column_basis() for p in powers]
    filtration = {}
    for k in range(-size, size + 1):
        span = Matrix.zero(size, 0, q)
        for b in range(max(0, -k), size + 1):
            piece = _span_meet(kernels[min(k + b + 1, size)], images[b])
            if piece.ncols:
                span = _span_sum(span, piece)
        filtration[k] = span
    return filtration


def monodromy_filtration(mwd):
    """[(k, eigenvalues of Phi on Gr_k)] for k from the top degree down.

    The graded pieces come from the weight filtration of N alone; Phi enters
    only through the dimensions of M_k meet each eigenspace.
    """
    if mwd.size == 0:
        return []
    if mwd.phi.has_opaque() or mwd.n.has_opaque():
        raise UnsupportedEvaluationError('cannot filter matrices with opaque units')
    spaces = _Eigenspaces(mwd)
    if sum(spaces.dimension(mu) for mu in spaces.eigenvalues) != mwd.size:
        raise UnsupportedEigenstructureError('Phi is not semisimple on a supported eigenstructure')
    identity = Matrix.identity(mwd.size, mwd.q)
    eigenspaces = {mu: (mwd.phi - identity * mu).nullspace() for mu in spaces.eigenvalues}
    filtration = weight_filtration(mwd)
    graded = []
    previous = {mu: 0 for mu in eigenspaces}
    for k in sorted(filtration):
        span = filtration[k]
        current = {mu: span.ncols + e.ncols - _span_sum(span, e).ncols for mu, e in eigenspaces.items()}
        if any(current[mu] < previous[mu] for mu in current):
            raise InternalInvariantError(f'M_{k} does not contain M_{k - 1}')
        values = [mu for mu in spaces.eigenvalues for _ in range(current[mu] - previous[mu])]
        if values:
            graded.append((k, sorted(values, key=Scalar.sort_key)))
        previous = current
    if sum(previous.values()) != mwd.size:
        raise InternalInvariantError('the weight filtration does not exhaust the space')
    dims = {k: len(values) for k, values in graded}
    for k, d in dims.items():
        if dims.get(-k, 0) != d:
            raise InternalInvariantError(f'Gr_{k} and Gr_{-k} have different dimensions')
    return list(reversed(graded))


def kernel_line_eigenvalues(mwd):
    """Eigenvalues of Phi on Ker N, with multiplicity."""
    if mwd.size == 0:
        return []
    spaces = _Eigenspaces(mwd)
    values = []
    for mu in spaces.eigenvalues:
        values.extend([mu] * (spaces.dimension(mu) - spaces.rank_on(mu, 1)))
    return values


def generic_rank_profile(n_family, points=()):
    """Jordan type over Q(x) and at each sample point."""
    n_family = n_family if isinstance(n_family, Matrix) else Matrix(n_family)
    generic = jordan_type(n_family)
    special = {point: jordan_type(n_family.specialize(point)) for point in points}
    return generic, special
