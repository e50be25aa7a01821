"""Segments, multisegments and the generic correspondence at the level of inducing data."""
import logging
from collections import Counter
from itertools import permutations

from errors import DomainError, InternalInvariantError
from exact_algebra import Scalar, twist_offset
from partitions import dominance_leq
from weil_deligne import jordan_data

logger = logging.getLogger(__name__)

GEN_QUOTIENT = 'GenQuotient'
GEN_SUB = 'GenSub'
UNORDERED = 'Unordered'
ORDERING_MODES = (GEN_QUOTIENT, GEN_SUB, UNORDERED)

ISO = 'Iso'
SURJECTION = 'Surjection'


class Segment:
    """Delta(sigma, m) = {sigma, sigma(1), ..., sigma(m-1)} with sigma = atom * unr(alpha)."""
    __slots__ = ('atom', 'alpha', 'm')

    def __init__(self, atom, alpha, m):
        alpha = Scalar.coerce(alpha)
        if alpha.is_zero():
            raise DomainError('segment start must be invertible')
        if int(m) < 1:
            raise DomainError(f'segment length must be positive, got {m}')
        self.atom = atom
        self.alpha = alpha
        self.m = int(m)

    def offset_of(self, other):
        """s with other starting at sigma(s), or None when unrelated."""
        if self.atom.label != other.atom.label:
            return None
        return twist_offset(self.alpha, other.alpha, self.atom.f)

    def contains(self, other):
        s = self.offset_of(other)
        return s is not None and s >= 0 and s + other.m <= self.m

    def support(self):
        return [(self.atom, self.alpha * Scalar.q_power(-j, q=self.alpha.q)) for j in range(self.m)]

    def sort_key(self):
        return (self.atom.label, -self.m, self.alpha.sort_key())

    def __eq__(self, other):
        if not isinstance(other, Segment):
            return NotImplemented
        return (self.atom, self.alpha, self.m) == (other.atom, other.alpha, other.m)

    def __hash__(self):
        return hash((self.atom, self.alpha, self.m))

    def render(self):
        from dsl import render_twisted_atom
        return f'Delta({render_twisted_atom(self.atom, self.alpha)},{self.m})'

    __str__ = render

    def __repr__(self):
        return f'<Segment {self.render()}>'


def precedes(d1, d2):
    """d1 precedes d2: they are linked and d2 starts at sigma_1(t+1) for some 0 <= t < m1."""
    if d1.contains(d2) or d2.contains(d1):
        return False
    s = d1.offset_of(d2)
    return s is not None and 1 <= s <= d1.m


def follows(d1, d2):
    return precedes(d2, d1)


def _violations(segments, mode):
    found = []
    for i, earlier in enumerate(segments):
        for later in segments[i + 1:]:
            if mode == GEN_QUOTIENT and precedes(later, earlier):
                found.append((later, earlier))
            elif mode == GEN_SUB and precedes(earlier, later):
                found.append((earlier, later))
    return found


def is_valid_order(segments, mode=GEN_QUOTIENT):
    return mode == UNORDERED or not _violations(list(segments), mode)


def _ordered(segments, mode):
    """Topological sort of the precedes relation, smallest sort_key first among ready segments."""
    segments = sorted(segments, key=Segment.sort_key)
    if mode == UNORDERED:
        return segments
    count = len(segments)
    edges = {i: [] for i in range(count)}
    indegree = [0] * count
    for i in range(count):
        for j in range(count):
            if i != j and precedes(segments[i], segments[j]):
                first, second = (i, j) if mode == GEN_QUOTIENT else (j, i)
                edges[first].append(second)
                indegree[second] += 1
    ready = [i for i in range(count) if not indegree[i]]
    order = []
    while ready:
        ready.sort()
        current = ready.pop(0)
        order.append(segments[current])
        for nxt in edges[current]:
            indegree[nxt] -= 1
            if not indegree[nxt]:
                ready.append(nxt)
    if len(order) != count:
        raise InternalInvariantError('the precedes relation has a cycle')
    return order


class Multisegment:
    """Ordered list of segments with the ordering condition of its mode."""
    __slots__ = ('segments', 'ordering_mode')

    def __init__(self, segments=(), ordering_mode=GEN_QUOTIENT, check=True):
        if ordering_mode not in ORDERING_MODES:
            raise DomainError(f'unknown ordering mode {ordering_mode!r}')
        self.segments = tuple(segments)
        self.ordering_mode = ordering_mode
        if check and not is_valid_order(self.segments, ordering_mode):
            raise DomainError(f'segments are not in a valid {ordering_mode} order')

    @classmethod
    def sorted_from(cls, segments, ordering_mode=GEN_QUOTIENT):
        return cls(_ordered(segments, ordering_mode), ordering_mode, check=False)

    def canonical(self):
        """The deterministic representative of this multiset in the same mode."""
        return Multisegment.sorted_from(self.segments, self.ordering_mode)

    def as_multiset(self):
        return Counter(self.segments)

    def with_mode(self, ordering_mode):
        return Multisegment.sorted_from(self.segments, ordering_mode)

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __eq__(self, other):
        if not isinstance(other, Multisegment):
            return NotImplemented
        return (self.segments, self.ordering_mode) == (other.segments, other.ordering_mode)

    def __hash__(self):
        return hash((self.segments, self.ordering_mode))

    def render(self):
        return '[' + '; '.join(s.render() for s in self.segments) + ']'

    __str__ = render

    def __repr__(self):
        return f'<Multisegment {self.ordering_mode} {self.render()}>'


def valid_orderings(segments, mode=GEN_QUOTIENT):
    """Every distinct arrangement of the multiset that satisfies the mode's condition."""
    seen = set()
    found = []
    for arrangement in permutations(segments):
        if arrangement in seen:
            continue
        seen.add(arrangement)
        if is_valid_order(arrangement, mode):
            found.append(Multisegment(arrangement, mode, check=False))
    return found


def segments_of(r):
    return [Segment(b.atom, b.alpha, b.m) for b in r.blocks]


def llc_gen(r, ordering_mode=GEN_QUOTIENT):
    """Inducing data of the generic representation attached to r."""
    result = Multisegment.sorted_from(segments_of(r), ordering_mode)
    violations = _violations(list(result.segments), ordering_mode)
    if violations:
        raise InternalInvariantError(f'llc_gen produced an invalid order: {violations[0]}')
    return result


def supercuspidal_support(s):
    """Multiset of (atom, alpha) pairs over all segment elements."""
    support = Counter()
    for segment in s:
        support.update(segment.support())
    return support


def is_generic_irreducible(s):
    segments = list(s)
    for i, a in enumerate(segments):
        for b in segments[i + 1:]:
            if precedes(a, b) or precedes(b, a):
                return False
    return True


def surjection_exists(r1, r2):
    """Iso, Surjection (pi_gen(r1) onto pi_gen(r2)) or None.

    Iso only for isomorphic data: equal Jordan data over a common support
    without r1 == r2 gives None.
    """
    if r1 == r2:
        return ISO
    if supercuspidal_support(llc_gen(r1)) != supercuspidal_support(llc_gen(r2)):
        return None
    t1, t2 = jordan_data(r1), jordan_data(r2)
    if t1.labels() != t2.labels():
        return None
    for label, part in t1.items():
        if part.total != t2[label].total or not dominance_leq(part, t2[label]):
            return None
    if t1 == t2:
        logger.debug('equal Jordan data on non-isomorphic data %s, %s', r1, r2)
        return None
    return SURJECTION
