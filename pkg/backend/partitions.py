"""Partitions, multipartitions, Jordan types and the dominance order."""
from itertools import accumulate, zip_longest

from errors import DomainError, UnsupportedEvaluationError
from matrices import Matrix


class Partition:
    """Partition stored with its parts in decreasing order."""
    __slots__ = ('parts',)

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise DomainError(f'partition parts must be positive, got {list(parts)}')
        self.parts = tuple(sorted(parts, reverse=True))

    @property
    def total(self):
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def conjugate(self):
        """Transpose of the Young diagram."""
        width = self.parts[0] if self.parts else 0
        columns = [0] * width
        for part in self.parts:
            for i in range(part):
                columns[i] += 1
        return Partition(columns)

    def partial_sums(self):
        return list(accumulate(self.parts))

    def rank_sequence(self):
        """rk N^i for i = 1 .. largest part, for N nilpotent of this Jordan type."""
        top = self.parts[0] if self.parts else 0
        return [sum(max(p - i, 0) for p in self.parts) for i in range(1, top + 1)]

    @classmethod
    def from_rank_sequence(cls, size, ranks):
        """Jordan type from rk N, rk N^2, ... (kernel dimension differences)."""
        previous = size
        columns = []
        for rank in list(ranks) + [0]:
            if previous - rank:
                columns.append(previous - rank)
            previous = rank
        return cls(columns).conjugate()

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.parts == other.parts

    def __lt__(self, other):
        return self.parts < other.parts

    def __hash__(self):
        return hash(self.parts)

    def to_list(self):
        return list(self.parts)

    def render(self):
        return '[' + ','.join(str(p) for p in self.parts) + ']'

    __str__ = render

    def __repr__(self):
        return f'<Partition {self.render()}>'


class MultiPartition:
    """Partitions indexed by atom label."""
    __slots__ = ('components',)

    def __init__(self, components=None):
        items = (components or {}).items()
        self.components = tuple(sorted((str(label), p if isinstance(p, Partition) else Partition(p))
                                       for label, p in items))

    def labels(self):
        return [label for label, _ in self.components]

    def items(self):
        return list(self.components)

    def __getitem__(self, label):
        for key, p in self.components:
            if key == label:
                return p
        raise KeyError(label)

    def totals(self):
        return {label: p.total for label, p in self.components}

    def __eq__(self, other):
        if not isinstance(other, MultiPartition):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def to_dict(self):
        return {label: p.to_list() for label, p in self.components}

    def render(self):
        return '{' + ', '.join(f'{label}: {p.render()}' for label, p in self.components) + '}'

    def __repr__(self):
        return f'<MultiPartition {self.render()}>'


def dominance_leq(t, u):
    """t precedes u in the dominance order (partial sums of t never exceed those of u)."""
    if t.total != u.total:
        raise DomainError(f'dominance needs equal totals, got {t.total} and {u.total}')
    sums_t = t.partial_sums()
    sums_u = u.partial_sums()
    return all(a <= b for a, b in zip_longest(sums_t, sums_u, fillvalue=t.total))


def dominance_leq_inertia(t, u):
    """Componentwise dominance of two multipartitions over the same atom labels."""
    if t.labels() != u.labels():
        raise DomainError(f'atom labels differ: {t.labels()} vs {u.labels()}')
    return all(dominance_leq(p, u[label]) for label, p in t.items())


def enumerate_partitions(m):
    """All partitions of m, lexicographically sorted."""
    if m < 0:
        raise DomainError('cannot partition a negative integer')
    found = []

    def extend(remaining, largest, prefix):
        if remaining == 0:
            found.append(Partition(prefix))
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            extend(remaining - part, part, prefix)
            prefix.pop()

    extend(m, m, [])
    return sorted(found)


def nilpotent_of_type(t, q=None):
    """Block-diagonal nilpotent matrix with Jordan blocks of sizes t (ones below the diagonal)."""
    blocks = []
    for part in t.parts:
        rows = [[1 if i == j + 1 else 0 for j in range(part)] for i in range(part)]
        blocks.append(Matrix(rows, q, ncols=part))
    if not blocks:
        return Matrix.zero(0, q=q)
    return Matrix.block_diag(blocks)


def jordan_type(n_matrix):
    """Jordan type of a nilpotent matrix, read off from the ranks of its powers."""
    n_matrix = n_matrix if isinstance(n_matrix, Matrix) else Matrix(n_matrix)
    if not n_matrix.is_square():
        raise DomainError('Jordan type needs a square matrix')
    if n_matrix.has_opaque():
        raise UnsupportedEvaluationError('Jordan type is undefined on opaque units')
    size = n_matrix.nrows
    ranks = []
    power = n_matrix
    for _ in range(size):
        rank = power.rank()
        if rank == 0:
            break
        ranks.append(rank)
        power = power @ n_matrix
    if ranks and len(ranks) == size:
        raise DomainError('matrix is not nilpotent')
    return Partition.from_rank_sequence(size, ranks)
