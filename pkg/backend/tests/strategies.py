"""Hypothesis strategies for scalars, representations, families and Satake data (q = 3)."""
from fractions import Fraction

from hypothesis import strategies as st

from exact_algebra import LaurentPoly, PolyT, Scalar
from matrices import Matrix
from multisegments import Segment
from partitions import Partition
from weil_deligne import InertialAtom, SpehBlock, WDRep, unramified_atom

Q = 3

# Small rationals with and without factors of q, so that linked segments show up often
BASES = [Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2), Fraction(5), Fraction(-2, 5)]


def rationals(nonzero=True):
    values = st.fractions(min_value=-6, max_value=6, max_denominator=6)
    if nonzero:
        values = values.filter(bool)
    return values


@st.composite
def unit_scalars(draw, roots=True, halves=True):
    """base * q^(h/2) * zeta_N^a with small N."""
    base = draw(st.sampled_from(BASES))
    q2 = draw(st.integers(min_value=-3, max_value=3)) if halves else 2 * draw(st.integers(-2, 2))
    turn = Fraction(0)
    if roots:
        order = draw(st.sampled_from([1, 2, 3, 4]))
        turn = Fraction(draw(st.integers(0, order - 1)), order)
    return Scalar(base, turn=turn, q2=q2, q=Q)


@st.composite
def rational_scalars(draw):
    base = draw(st.sampled_from(BASES))
    return Scalar(base * Fraction(Q) ** draw(st.integers(-2, 2)), q=Q)


@st.composite
def unramified_reps(draw, max_rank=8, alphas=None):
    """Sums of unramified Speh blocks of total rank at most max_rank."""
    alphas = alphas or unit_scalars()
    atom = unramified_atom()
    blocks = []
    budget = draw(st.integers(min_value=1, max_value=max_rank))
    while budget > 0:
        m = draw(st.integers(min_value=1, max_value=min(4, budget)))
        blocks.append(SpehBlock(atom, draw(alphas), m))
        budget -= m
        if draw(st.booleans()):
            break
    return WDRep(blocks)


@st.composite
def ramified_atoms(draw, label='a', self_dual=None):
    self_dual = draw(st.booleans()) if self_dual is None else self_dual
    dim = draw(st.integers(1, 2))
    f = draw(st.sampled_from([1, 2]))
    cond = draw(st.integers(1, 3))
    if self_dual:
        return InertialAtom(label, dim=dim, f=f, cond=cond, dual_label=label)
    weight = draw(st.sampled_from([Fraction(0), Fraction(1), Fraction(-1, 2)]))
    return InertialAtom(label, dim=dim, f=f, cond=cond, weight=weight, dual_label=label + 'd')


@st.composite
def mixed_reps(draw, max_blocks=4):
    """Unramified blocks plus blocks of up to two ramified atoms (opaque epsilon units)."""
    atoms = [unramified_atom(), draw(ramified_atoms('a')), draw(ramified_atoms('b'))]
    count = draw(st.integers(min_value=1, max_value=max_blocks))
    blocks = []
    for _ in range(count):
        atom = draw(st.sampled_from(atoms))
        blocks.append(SpehBlock(atom, draw(unit_scalars(roots=atom.unramified)), draw(st.integers(1, 3))))
    return WDRep(blocks)


@st.composite
def x_alphas(draw):
    """c * q^k * x^e with e in {-1, 1}."""
    base = draw(st.sampled_from(BASES))
    return Scalar(base, q2=2 * draw(st.integers(-1, 1)),
                  xpoly=LaurentPoly.monomial(1, draw(st.sampled_from([-1, 1]))), q=Q)


@st.composite
def family_reps(draw, max_blocks=3):
    atom = unramified_atom()
    alphas = st.one_of(x_alphas(), unit_scalars(roots=False))
    count = draw(st.integers(1, max_blocks))
    return WDRep([SpehBlock(atom, draw(alphas), draw(st.integers(1, 3))) for _ in range(count)])


@st.composite
def nilpotent_families(draw, max_size=5, max_degree=3):
    """Strictly upper triangular N(x) with polynomial entries over Q."""
    size = draw(st.integers(min_value=2, max_value=max_size))
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            if j <= i or draw(st.integers(0, 2)) == 0:
                row.append(0)
                continue
            terms = {e: draw(st.integers(-2, 2)) for e in range(draw(st.integers(0, max_degree)) + 1)}
            row.append(Scalar(xpoly=LaurentPoly(terms), q=Q) if any(terms.values()) else 0)
        rows.append(row)
    return Matrix(rows, Q)


@st.composite
def satake_tuples(draw, n):
    values = st.sampled_from([Fraction(1), Fraction(2), Fraction(-1), Fraction(1, 2), Fraction(5), Fraction(-3),
                              Fraction(2, 3), Fraction(7)])
    return [Scalar(draw(values), q=Q) for _ in range(n)]


@st.composite
def partitions(draw, max_total=6):
    total = draw(st.integers(min_value=1, max_value=max_total))
    parts = []
    while total:
        part = draw(st.integers(min_value=1, max_value=total))
        parts.append(part)
        total -= part
    return Partition(parts)


@st.composite
def unimodular_matrices(draw, size):
    """L U with unit triangular integer factors, so the inverse stays integral."""
    entries = st.integers(-2, 2)
    lower = [[1 if i == j else (draw(entries) if j < i else 0) for j in range(size)] for i in range(size)]
    upper = [[1 if i == j else (draw(entries) if j > i else 0) for j in range(size)] for i in range(size)]
    return Matrix(lower, Q, size) @ Matrix(upper, Q, size)


@st.composite
def x_sums(draw, max_terms=3):
    """Sums of rational x-monomials c * q^k * x^e."""
    terms = draw(st.lists(st.one_of(x_alphas(), unit_scalars(roots=False, halves=False)),
                          min_size=1, max_size=max_terms))
    total = terms[0].to_sum()
    for term in terms[1:]:
        total = total + term
    return total


@st.composite
def x_polys(draw, max_degree=2):
    return PolyT([draw(x_sums()) for _ in range(draw(st.integers(1, max_degree + 1)))], Q)


@st.composite
def x_denominators(draw, max_factors=2):
    """prod (1 - alpha T) with monomial alphas, the shape of every inverse L-factor."""
    alphas = st.one_of(x_alphas(), unit_scalars(roots=False, halves=False))
    return PolyT.from_roots(draw(st.lists(alphas, min_size=1, max_size=max_factors)), Q)


@st.composite
def segments(draw):
    atom = draw(st.sampled_from([unramified_atom(), InertialAtom('a', f=2, cond=1, dual_label='a')]))
    alpha = draw(unit_scalars(roots=atom.unramified, halves=False))
    return Segment(atom, alpha, draw(st.integers(1, 4)))
