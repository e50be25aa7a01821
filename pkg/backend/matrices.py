"""Exact matrices over the coefficient ring."""
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from errors import DomainError, NotInvertibleError
from exact_algebra import ScalarSum, infer_q, current_q


class Matrix:
    """Immutable rectangular matrix of ScalarSum entries."""
    __slots__ = ('q', 'rows', 'nrows', 'ncols')

    def __init__(self, rows, q=None, ncols=None):
        rows = [list(row) for row in (rows.rows if isinstance(rows, Matrix) else rows)]
        self.q = infer_q([e for row in rows for e in row], q)
        widths = {len(row) for row in rows}
        if len(widths) > 1:
            raise DomainError('ragged matrix rows')
        self.nrows = len(rows)
        self.ncols = widths.pop() if widths else (ncols or 0)
        self.rows = tuple(tuple(ScalarSum.coerce(e, self.q) for e in row) for row in rows)

    @classmethod
    def zero(cls, n, m=None, q=None):
        m = n if m is None else m
        q = current_q() if q is None else q
        return cls([[ScalarSum.zero(q)] * m for _ in range(n)], q, ncols=m)

    @classmethod
    def identity(cls, n, q=None):
        return cls.diagonal([1] * n, q)

    @classmethod
    def diagonal(cls, entries, q=None):
        entries = list(entries)
        q = infer_q(entries, q)
        n = len(entries)
        zero = ScalarSum.zero(q)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)], q, ncols=n)

    @classmethod
    def block_diag(cls, blocks, q=None):
        blocks = list(blocks)
        q = blocks[0].q if blocks else (current_q() if q is None else q)
        size = sum(b.nrows for b in blocks)
        width = sum(b.ncols for b in blocks)
        rows = [[ScalarSum.zero(q)] * width for _ in range(size)]
        r = c = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                rows[r + i][c:c + b.ncols] = row
            r += b.nrows
            c += b.ncols
        return cls(rows, q, ncols=width)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def is_square(self):
        return self.nrows == self.ncols

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def __add__(self, other):
        self._check_shape(other)
        return Matrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)], self.q, self.ncols)

    def __neg__(self):
        return Matrix([[-a for a in row] for row in self.rows], self.q, self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return Matrix([[a * scalar for a in row] for row in self.rows], self.q, self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise DomainError(f'cannot multiply {self.shape} by {other.shape}')
        zero = ScalarSum.zero(self.q)
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for row in self.rows:
            out.append([sum((a * b for a, b in zip(row, col) if not a.is_zero() and not b.is_zero()), zero)
                        for col in cols])
        return Matrix(out, self.q, other.ncols)

    def _check_shape(self, other):
        if self.shape != other.shape:
            raise DomainError(f'shape mismatch {self.shape} vs {other.shape}')

    def power(self, k):
        result = Matrix.identity(self.nrows, self.q)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self):
        return Matrix([list(col) for col in zip(*self.rows)] if self.nrows else [], self.q, self.nrows)

    @property
    def T(self):
        return self.transpose()

    def kron(self, other):
        rows = []
        for r1 in self.rows:
            for r2 in other.rows:
                rows.append([a * b for a in r1 for b in r2])
        return Matrix(rows, self.q, self.ncols * other.ncols)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise DomainError('vstack needs equal column counts')
        return Matrix(list(self.rows) + list(other.rows), self.q, self.ncols)

    def columns(self, indices):
        indices = list(indices)
        return Matrix([[row[j] for j in indices] for row in self.rows], self.q, len(indices))

    def specialize(self, point):
        return Matrix([[a.specialize(point) for a in row] for row in self.rows], self.q, self.ncols)

    def diagonal_entries(self):
        return [self.rows[i][i] for i in range(min(self.shape))]

    def is_zero(self):
        return all(a.is_zero() for row in self.rows for a in row)

    def is_diagonal(self):
        return all(a.is_zero() for i, row in enumerate(self.rows) for j, a in enumerate(row) if i != j)

    def is_triangular(self):
        lower = all(a.is_zero() for i, row in enumerate(self.rows) for j, a in enumerate(row) if j > i)
        upper = all(a.is_zero() for i, row in enumerate(self.rows) for j, a in enumerate(row) if j < i)
        return lower or upper

    def has_opaque(self):
        return any(a.has_opaque() for row in self.rows for a in row)

    def has_x(self):
        return any(a.has_x() for row in self.rows for a in row)

    def is_rational(self):
        return all(a.is_rational() for row in self.rows for a in row)

    def _echelon(self):
        """Fraction-free (Bareiss) row echelon form and its pivot columns."""
        a = [list(row) for row in self.rows]
        n, m = self.shape
        pivots = []
        previous = ScalarSum.one(self.q)
        for col in range(m):
            r = len(pivots)
            if r == n:
                break
            pivot = next((i for i in range(r, n) if not a[i][col].is_zero()), None)
            if pivot is None:
                continue
            a[r], a[pivot] = a[pivot], a[r]
            head = a[r][col]
            for i in range(r + 1, n):
                lead = a[i][col]
                for j in range(col + 1, m):
                    a[i][j] = (head * a[i][j] - lead * a[r][j]).exact_div(previous)
                a[i][col] = ScalarSum.zero(self.q)
            previous = head
            pivots.append(col)
        return a, pivots

    def rank(self):
        """Rank over the fraction field."""
        return len(self._echelon()[1])

    def nullity(self):
        return self.ncols - self.rank()

    def nullspace(self):
        """Columns spanning the kernel over the fraction field.

        Back substitution scales the vector by each pivot instead of dividing,
        so entries stay in the coefficient ring.
        """
        a, pivots = self._echelon()
        zero, one = ScalarSum.zero(self.q), ScalarSum.one(self.q)
        vectors = []
        for free in range(self.ncols):
            if free in pivots:
                continue
            v = [zero] * self.ncols
            v[free] = one
            for p in range(len(pivots) - 1, -1, -1):
                col = pivots[p]
                total = sum((a[p][j] * v[j] for j in range(col + 1, self.ncols) if not v[j].is_zero()), zero)
                head = a[p][col]
                v = [e * head for e in v]
                v[col] = -total
            vectors.append(v)
        if not vectors:
            return Matrix([[] for _ in range(self.ncols)], self.q, 0)
        return Matrix([list(row) for row in zip(*vectors)], self.q, len(vectors))

    def column_basis(self):
        """The pivot columns: a basis of the column space."""
        return self.columns(self._echelon()[1])

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise DomainError('hstack needs equal row counts')
        return Matrix([list(a) + list(b) for a, b in zip(self.rows, other.rows)], self.q, self.ncols + other.ncols)

    def top_rows(self, count):
        return Matrix(list(self.rows[:count]), self.q, self.ncols)

    def determinant(self):
        """Bareiss determinant; exact over the coefficient ring."""
        if not self.is_square():
            raise DomainError('determinant needs a square matrix')
        n = self.nrows
        if n == 0:
            return ScalarSum.one(self.q)
        a = [list(row) for row in self.rows]
        sign = 1
        previous = ScalarSum.one(self.q)
        for k in range(n - 1):
            pivot = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
            if pivot is None:
                return ScalarSum.zero(self.q)
            if pivot != k:
                a[k], a[pivot] = a[pivot], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).exact_div(previous)
            previous = a[k][k]
        return a[n - 1][n - 1] * sign

    def _to_domain_matrix(self):
        entries = []
        for row in self.rows:
            line = []
            for a in row:
                value = a.rational_value()
                line.append(QQ(value.numerator, value.denominator))
            entries.append(line)
        return DomainMatrix(entries, self.shape, QQ)

    def rational_inverse(self):
        """Inverse of a matrix with rational entries."""
        try:
            inverse = self._to_domain_matrix().inv()
        except DMNonInvertibleMatrixError:
            raise NotInvertibleError('singular matrix')
        rows = [[Fraction(int(c.p), int(c.q)) for c in row] for row in inverse.to_Matrix().tolist()]
        return Matrix(rows, self.q, self.ncols)

    def inverse(self):
        if not self.is_square():
            raise NotInvertibleError('only square matrices are invertible')
        if self.is_diagonal():
            return Matrix.diagonal([a.inverse() for a in self.diagonal_entries()], self.q)
        if self.is_rational():
            return self.rational_inverse()
        return self._gauss_jordan_inverse()

    def _gauss_jordan_inverse(self):
        n = self.nrows
        one, zero = ScalarSum.one(self.q), ScalarSum.zero(self.q)
        a = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(self.rows)]
        for col in range(n):
            pivot = None
            for i in range(col, n):
                try:
                    inv = a[i][col].inverse()
                except NotInvertibleError:
                    continue
                pivot = i
                break
            if pivot is None:
                raise NotInvertibleError('no invertible pivot; matrix is singular or needs a larger field')
            a[col], a[pivot] = a[pivot], a[col]
            a[col] = [e * inv for e in a[col]]
            for i in range(n):
                if i != col and not a[i][col].is_zero():
                    factor = a[i][col]
                    a[i] = [e - factor * p for e, p in zip(a[i], a[col])]
        return Matrix([row[n:] for row in a], self.q, n)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def render(self):
        return [[a.render() for a in row] for row in self.rows]

    def __repr__(self):
        return f'<Matrix {self.nrows}x{self.ncols}>'
