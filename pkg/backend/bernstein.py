"""Coordinates of representations on the Bernstein variety and its monodromy-stratified extension."""
import logging

from errors import InternalInvariantError
from exact_algebra import Scalar
from multisegments import llc_gen, supercuspidal_support
from partitions import MultiPartition
from weil_deligne import SpehBlock, WDRep, jordan_data, tensor

logger = logging.getLogger(__name__)


def _root_key(value):
    return (value.turn.numerator, value.turn.denominator, value.sort_key())


def canonical_orbit_rep(alpha, f=1):
    """Representative of alpha * mu_f with the smallest root-of-unity part."""
    alpha = Scalar.coerce(alpha)
    if f == 1:
        return alpha
    return min((alpha * Scalar.root(j, f, q=alpha.q) for j in range(f)), key=_root_key)


class InertialClass:
    """Atoms with multiplicities; n = sum of dim * multiplicity."""
    __slots__ = ('atoms',)

    def __init__(self, atoms):
        self.atoms = tuple(sorted(((atom, int(mult)) for atom, mult in atoms), key=lambda item: item[0].label))
        labels = [atom.label for atom, _ in self.atoms]
        if len(set(labels)) != len(labels):
            raise InternalInvariantError(f'repeated atom labels in an inertial class: {labels}')

    @classmethod
    def of(cls, r):
        counts = {}
        for b in r.blocks:
            atom, mult = counts.get(b.atom.label, (b.atom, 0))
            counts[b.atom.label] = (atom, mult + b.m)
        return cls(counts.values())

    @property
    def n(self):
        return sum(atom.dim * mult for atom, mult in self.atoms)

    def atom(self, label):
        for atom, _ in self.atoms:
            if atom.label == label:
                return atom
        raise KeyError(label)

    def __eq__(self, other):
        if not isinstance(other, InertialClass):
            return NotImplemented
        return self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __repr__(self):
        return f'<InertialClass n={self.n} atoms={[a.label for a, _ in self.atoms]}>'


class BernsteinPoint:
    """Point of the Bernstein variety: per atom a sorted multiset of canonical coordinates."""
    __slots__ = ('cls', 'coords')

    def __init__(self, cls, coords):
        self.cls = cls
        self.coords = tuple(
            (label, tuple(sorted((canonical_orbit_rep(c, cls.atom(label).f) for c in values), key=Scalar.sort_key)))
            for label, values in sorted(coords.items()))

    def coordinates(self, label):
        return list(dict(self.coords)[label])

    def __eq__(self, other):
        if not isinstance(other, BernsteinPoint):
            return NotImplemented
        return (self.cls, self.coords) == (other.cls, other.coords)

    def __hash__(self):
        return hash((self.cls, self.coords))

    def __repr__(self):
        return f'<BernsteinPoint n={self.cls.n}>'


class ExtendedPoint:
    """Point of the stratum [t]: per atom one canonical coordinate for each part of t."""
    __slots__ = ('cls', 'coords')

    def __init__(self, cls, coords):
        self.cls = cls
        self.coords = tuple(
            (label, tuple(sorted(((int(part), canonical_orbit_rep(c, cls.atom(label).f)) for part, c in values),
                                 key=lambda item: (-item[0], item[1].sort_key()))))
            for label, values in sorted(coords.items()))

    @property
    def stratum(self):
        return MultiPartition({label: [part for part, _ in values] for label, values in self.coords})

    def representative(self):
        """A representation whose extended point is this one."""
        return WDRep([SpehBlock(self.cls.atom(label), c, part) for label, values in self.coords for part, c in values])

    def _shifted_representative(self):
        blocks = []
        for label, values in self.coords:
            atom = self.cls.atom(label)
            for part, c in values:
                blocks.append(SpehBlock(atom, c * Scalar.root(1, atom.f, q=c.q), part))
        return WDRep(blocks)

    def __eq__(self, other):
        if not isinstance(other, ExtendedPoint):
            return NotImplemented
        return (self.cls, self.coords) == (other.cls, other.coords)

    def __hash__(self):
        return hash((self.cls, self.coords))

    def __repr__(self):
        return f'<ExtendedPoint n={self.cls.n} stratum={self.stratum.render()}>'


def point_of(r):
    """Forget monodromy: the supercuspidal support grouped by atom."""
    coords = {}
    for (atom, alpha), mult in supercuspidal_support(llc_gen(r)).items():
        coords.setdefault(atom.label, []).extend([alpha] * mult)
    return BernsteinPoint(InertialClass.of(r), coords)


def extended_point_of(r):
    """Stratum jordan_data(r) and one coordinate per Speh block."""
    coords = {}
    for b in r.blocks:
        coords.setdefault(b.atom.label, []).append((b.m, b.alpha))
    point = ExtendedPoint(InertialClass.of(r), coords)
    if point.stratum != jordan_data(r):
        raise InternalInvariantError('extended point stratum differs from the Jordan data')
    return point


def forget_monodromy(e):
    coords = {}
    for label, values in e.coords:
        for part, c in values:
            coords.setdefault(label, []).extend(c * Scalar.q_power(-j, q=c.q) for j in range(part))
    return BernsteinPoint(e.cls, coords)


def rs_point(e1, e2):
    """Extended point of the tensor product, checked on two representatives of each side."""
    result = extended_point_of(tensor(e1.representative(), e2.representative()))
    other = extended_point_of(tensor(e1._shifted_representative(), e2._shifted_representative()))
    if other != result:
        raise InternalInvariantError('rs_point depends on the chosen representatives')
    return result
