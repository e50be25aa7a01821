"""Frobenius-semisimple Weil-Deligne representations as multisets of Speh blocks.

Conventions: |phi| = q^-1, so the twist r(i) multiplies every alpha by q^-i.
A block Sp(tau * unr(alpha), m) has levels alpha, alpha*q^-1, ..., alpha*q^-(m-1)
and N maps each level onto the next one.
"""
import logging
import re

from errors import (AtomConflictError, DomainError, InternalInvariantError, MissingDualError,
                    NotInvertibleError, TensorNotComputableError)
from exact_algebra import Scalar, to_fraction
from matrices import Matrix
from partitions import MultiPartition, Partition, dominance_leq_inertia, jordan_type

logger = logging.getLogger(__name__)

UNRAMIFIED = 'unr'
ISOMORPHISM = 'Isomorphism'
PROPER_SURJECTION = 'ProperSurjection'

_LABEL = re.compile(r'^[A-Za-z][A-Za-z0-9_]*$')


class InertialAtom:
    """Abstract invariants of an irreducible inertial type.

    The unramified atom has label 'unr'; every other label is ramified and
    must have a positive conductor. eps_unit defaults to the opaque unit
    eps_<label>. dual_label names the contragredient atom (None: unknown).
    """
    __slots__ = ('label', 'dim', 'f', 'cond', 'eps_unit', 'weight', 'dual_label', 'dual_eps_unit')

    def __init__(self, label, dim=1, f=1, cond=0, eps_unit=None, weight=0, dual_label=None,
                 dual_eps_unit=None):
        if not isinstance(label, str) or not _LABEL.match(label):
            raise DomainError(f'invalid atom label {label!r}')
        dim, f, cond = int(dim), int(f), int(cond)
        if dim < 1 or f < 1 or cond < 0:
            raise DomainError(f'atom {label}: dim and f must be positive and cond nonnegative')
        weight = to_fraction(weight)
        if label == UNRAMIFIED:
            if (dim, f, cond, weight) != (1, 1, 0, 0):
                raise DomainError('the unramified atom has dim 1, f 1, cond 0 and weight 0')
            eps_unit, dual_label, dual_eps_unit = Scalar(1), UNRAMIFIED, Scalar(1)
        elif cond == 0:
            raise DomainError(f'ramified atom {label} needs a positive conductor')
        if dual_label == label and weight:
            raise DomainError(f'self-dual atom {label} must have weight 0')
        eps_unit = Scalar.opaque(f'eps_{label}') if eps_unit is None else Scalar.coerce(eps_unit)
        if not eps_unit.is_invertible() or eps_unit.has_x():
            raise DomainError(f'epsilon unit of {label} must be an invertible constant')
        if dual_label is not None and dual_eps_unit is None:
            dual_eps_unit = eps_unit if dual_label == label else Scalar.opaque(f'eps_{dual_label}')
        elif dual_eps_unit is not None:
            dual_eps_unit = Scalar.coerce(dual_eps_unit)
        self.label = label
        self.dim = dim
        self.f = f
        self.cond = cond
        self.eps_unit = eps_unit
        self.weight = weight
        self.dual_label = dual_label
        self.dual_eps_unit = dual_eps_unit

    @property
    def unramified(self):
        return self.label == UNRAMIFIED

    def dual(self):
        """Contragredient atom; eigenvalue weights change sign."""
        if self.dual_label is None:
            raise MissingDualError(f'atom {self.label} has no declared dual')
        return InertialAtom(self.dual_label, self.dim, self.f, self.cond, eps_unit=self.dual_eps_unit,
                            weight=-self.weight, dual_label=self.label, dual_eps_unit=self.eps_unit)

    def _key(self):
        return (self.label, self.dim, self.f, self.cond, self.eps_unit, self.weight, self.dual_label,
                self.dual_eps_unit)

    def __eq__(self, other):
        if not isinstance(other, InertialAtom):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f'<InertialAtom {self.label} dim={self.dim} f={self.f} cond={self.cond}>'


def unramified_atom():
    return InertialAtom(UNRAMIFIED)


class SpehBlock:
    """Sp(atom * unr(alpha), m)."""
    __slots__ = ('atom', 'alpha', 'm')

    def __init__(self, atom, alpha, m):
        alpha = Scalar.coerce(alpha)
        if alpha.is_zero():
            raise NotInvertibleError('alpha must be invertible, got 0')
        if int(m) < 1:
            raise DomainError(f'Speh length must be positive, got {m}')
        self.atom = atom
        self.alpha = alpha
        self.m = int(m)

    @property
    def rank(self):
        return self.atom.dim * self.m

    def levels(self):
        """alpha * q^-j for j = 0 .. m-1."""
        return [self.alpha * Scalar.q_power(-j, q=self.alpha.q) for j in range(self.m)]

    def sort_key(self):
        return (self.atom.label, self.m, self.alpha.sort_key())

    def __eq__(self, other):
        if not isinstance(other, SpehBlock):
            return NotImplemented
        return (self.atom, self.alpha, self.m) == (other.atom, other.alpha, other.m)

    def __hash__(self):
        return hash((self.atom, self.alpha, self.m))

    def __repr__(self):
        return f'<SpehBlock {self.atom.label} alpha={self.alpha.render()} m={self.m}>'


class WDRep:
    """Multiset of Speh blocks, kept sorted by (atom label, m, alpha)."""
    __slots__ = ('blocks',)

    def __init__(self, blocks=()):
        blocks = list(blocks)
        atoms = {}
        for block in blocks:
            known = atoms.setdefault(block.atom.label, block.atom)
            if known != block.atom:
                raise AtomConflictError(f'atom {block.atom.label} declared with two different invariant sets')
        self.blocks = tuple(sorted(blocks, key=SpehBlock.sort_key))

    @property
    def rank(self):
        return sum(b.rank for b in self.blocks)

    def atoms(self):
        return {b.atom.label: b.atom for b in self.blocks}

    def direct_sum(self, other):
        return WDRep(self.blocks + other.blocks)

    __add__ = direct_sum

    def strip_monodromy(self):
        """The same Weil group representation with N = 0."""
        return WDRep([SpehBlock(b.atom, level, 1) for b in self.blocks for level in b.levels()])

    def is_unramified(self):
        return all(b.atom.unramified for b in self.blocks)

    def has_x(self):
        return any(b.alpha.has_x() for b in self.blocks)

    def __eq__(self, other):
        if not isinstance(other, WDRep):
            return NotImplemented
        return self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def render(self):
        from dsl import render_wd
        return render_wd(self)

    __str__ = render

    def __repr__(self):
        return f'<WDRep rank={self.rank} blocks={len(self.blocks)}>'


def twist(r, i):
    """r(i) = r tensor |.|^i; every alpha is multiplied by q^-i."""
    if not r.blocks:
        return r
    shift = Scalar.q_power(-i, q=r.blocks[0].alpha.q)
    return WDRep([SpehBlock(b.atom, b.alpha * shift, b.m) for b in r.blocks])


def dual(r):
    """Contragredient: Sp(tau * unr(alpha), m)* = Sp(tau* * unr(alpha^-1 q^(m-1)), m)."""
    out = []
    for b in r.blocks:
        if not b.alpha.is_invertible():
            raise NotInvertibleError(f'alpha {b.alpha.render()} is not invertible in the coefficient ring')
        alpha = b.alpha.inverse() * Scalar.q_power(b.m - 1, q=b.alpha.q)
        out.append(SpehBlock(b.atom.dual(), alpha, b.m))
    return WDRep(out)


def _tensor_atoms(a, b):
    if a.unramified:
        return b
    if b.unramified:
        return a
    raise TensorNotComputableError(f'tensor not computable for ramified x ramified atoms ({a.label}, {b.label})')


def tensor(r1, r2):
    """Clebsch-Gordan on Speh lengths; twists follow the matrix realization."""
    out = []
    for b1 in r1.blocks:
        for b2 in r2.blocks:
            atom = _tensor_atoms(b1.atom, b2.atom)
            product = b1.alpha * b2.alpha
            for k in range(min(b1.m, b2.m)):
                alpha = product * Scalar.q_power(-k, q=product.q)
                out.append(SpehBlock(atom, alpha, b1.m + b2.m - 1 - 2 * k))
    return WDRep(out)


def inertia_invariants(r):
    """(phi on r^I, phi on (Ker N)^I) as diagonal matrices."""
    full, kernel = [], []
    for b in r.blocks:
        if b.atom.unramified:
            levels = b.levels()
            full.extend(levels)
            kernel.append(levels[-1])
    q = r.blocks[0].alpha.q if r.blocks else None
    return Matrix.diagonal(full, q), Matrix.diagonal(kernel, q)


def jordan_data(r):
    """Per atom label, the partition of Speh lengths."""
    lengths = {}
    for b in r.blocks:
        lengths.setdefault(b.atom.label, []).append(b.m)
    return MultiPartition({label: Partition(parts) for label, parts in lengths.items()})


def block_weight(block):
    """Weight w with the block pure of weight w, or None."""
    alpha_weight = block.alpha.weight()
    if alpha_weight is None:
        return None
    return block.atom.weight + alpha_weight - (block.m - 1)


def purity_weight(r):
    """The unique w with r pure of weight w; None when r is mixed or empty."""
    weights = {block_weight(b) for b in r.blocks}
    if len(weights) != 1 or None in weights:
        return None
    return weights.pop()


def is_pure(r, w):
    """Weight test on the monodromy filtration.

    The unramified part goes through the matrix realization and its
    monodromy filtration; ramified blocks use the blockwise weight.
    """
    from matrix_oracle import monodromy_filtration, realize

    w = to_fraction(w)
    unramified = WDRep([b for b in r.blocks if b.atom.unramified])
    ramified = [b for b in r.blocks if not b.atom.unramified]
    for b in ramified:
        if block_weight(b) != w:
            return False
    if not unramified.blocks:
        return True
    for degree, eigenvalues in monodromy_filtration(realize(unramified)):
        for value in eigenvalues:
            if value.weight() != w + degree:
                return False
    return True


class WDFamily:
    """One-parameter family over the affine x-line.

    Structured mode: a WDRep whose alphas involve x, bad points excluded,
    and optional declared special fibers (point -> WDRep with the same
    Weil group part). Matrix mode: diagonal phi entries and a nilpotent
    N(x) over Q[x]; monodromy may jump.
    """

    def __init__(self, rep=None, bad_points=(), special=None, phi=None, n_matrix=None):
        if (rep is None) == (n_matrix is None):
            raise DomainError('a family is either structured (rep) or matrix mode (phi, N)')
        self.rep = rep
        self.bad_points = frozenset(to_fraction(a) for a in bad_points)
        self.special = {to_fraction(a): s for a, s in (special or {}).items()}
        self.phi = None
        self.n_matrix = None
        if n_matrix is not None:
            if phi is None:
                raise DomainError('matrix-mode families need the diagonal of phi')
            self.phi = [Scalar.coerce(p) for p in phi]
            self.n_matrix = n_matrix if isinstance(n_matrix, Matrix) else Matrix(n_matrix)
            self._check_relation()

    @property
    def mode(self):
        return 'structured' if self.rep is not None else 'matrix'

    def _check_relation(self):
        phi = Matrix.diagonal(self.phi)
        n = self.n_matrix
        if phi.shape != n.shape:
            raise DomainError('phi and N have different sizes')
        if n @ phi != (phi @ n) * phi.q:
            raise DomainError('the relation N*Phi = q*Phi*N fails for this family')
        jordan_type(n)

    def generic_jordan_data(self):
        if self.mode == 'structured':
            return jordan_data(self.rep)
        return MultiPartition({UNRAMIFIED: jordan_type(self.n_matrix)})

    def __repr__(self):
        return f'<WDFamily {self.mode}>'


def _specialize_rep(r, point):
    out = []
    for b in r.blocks:
        alpha = b.alpha.specialize(point)
        if alpha.is_zero():
            raise NotInvertibleError(f'alpha {b.alpha.render()} vanishes at x = {_point_text(point)}')
        out.append(SpehBlock(b.atom, alpha, b.m))
    return WDRep(out)


def _point_text(point):
    return point.render() if isinstance(point, Scalar) else str(point)


def specialize(fam, point):
    """Fiber of the family at x = point (a rational or a constant Scalar)."""
    if not isinstance(point, Scalar):
        point = to_fraction(point)
        if point in fam.bad_points:
            raise NotInvertibleError(f'x = {point} is a declared bad point')
    if fam.mode == 'structured':
        fiber = _specialize_rep(fam.rep, point)
        declared = fam.special.get(point) if not isinstance(point, Scalar) else None
        if declared is None:
            return fiber
        if declared.strip_monodromy() != fiber.strip_monodromy():
            raise DomainError(f'declared special fiber at x = {point} has a different Weil group part')
        return declared
    from matrix_oracle import MatrixWD, classify
    phi = []
    for entry in fam.phi:
        value = entry.specialize(point)
        if value.is_zero():
            raise NotInvertibleError(f'phi entry {entry.render()} vanishes at x = {_point_text(point)}')
        phi.append(value)
    return classify(MatrixWD(Matrix.diagonal(phi), fam.n_matrix.specialize(point)))


def check_interpolation(fam, point):
    """Isomorphism when the fiber keeps the generic monodromy, else ProperSurjection."""
    generic = fam.generic_jordan_data()
    special = jordan_data(specialize(fam, point))
    if not dominance_leq_inertia(special, generic):
        raise InternalInvariantError(f'special monodromy {special.render()} is not below {generic.render()}')
    if special == generic:
        return ISOMORPHISM
    logger.debug('monodromy drops at x = %s: %s < %s', _point_text(point), special.render(), generic.render())
    return PROPER_SURJECTION


