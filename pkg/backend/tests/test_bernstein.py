from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from bernstein import (InertialClass, canonical_orbit_rep, extended_point_of, forget_monodromy, point_of,
                       rs_point)
from exact_algebra import Scalar
from matrix_oracle import classify, conjugate, realize
from partitions import MultiPartition
from weil_deligne import InertialAtom, SpehBlock, WDRep, tensor, unramified_atom
from tests.strategies import unimodular_matrices, unit_scalars, unramified_reps

UNR = unramified_atom()


def sp(alpha, m, atom=UNR):
    return SpehBlock(atom, Scalar.coerce(alpha), m)


def by_key(values):
    return sorted(values, key=Scalar.sort_key)


def test_canonical_orbit_rep():
    """-2 and 2 are one orbit under mu_2."""
    assert canonical_orbit_rep(-2, 2) == canonical_orbit_rep(2, 2) == Scalar(2)
    assert canonical_orbit_rep(-2) == Scalar(-2)


def test_inertial_class():
    """n counts dim times multiplicity."""
    atom = InertialAtom('a', dim=2, cond=1)
    cls = InertialClass.of(WDRep([sp(1, 2), sp(1, 1, atom)]))
    assert cls.n == 4
    assert cls.atom('a') == atom


def test_point_of_uses_the_support():
    """Sp(2,1) + Sp(2,2) has support {2, 2, 2 q^-1}."""
    point = point_of(WDRep([sp(2, 1), sp(2, 2)]))
    assert by_key(point.coordinates('unr')) == by_key([Scalar(2), Scalar(2), Scalar(Fraction(2, 3))])


def test_extended_point_records_the_stratum():
    """One coordinate per Speh block, stratum the Jordan data."""
    point = extended_point_of(WDRep([sp(2, 1), sp(2, 2)]))
    assert point.stratum == MultiPartition({'unr': [2, 1]})
    assert dict(point.coords)['unr'] == ((2, Scalar(2)), (1, Scalar(2)))


def test_points_ignore_the_twist_stabilizer():
    """With f = 2 the alphas 2 and -2 give the same point."""
    atom = InertialAtom('a', f=2, cond=1)
    assert point_of(WDRep([sp(2, 1, atom)])) == point_of(WDRep([sp(-2, 1, atom)]))
    assert extended_point_of(WDRep([sp(2, 2, atom)])) == extended_point_of(WDRep([sp(-2, 2, atom)]))


def test_monodromy_separates_extended_points():
    """Sp(1,2) and Sp(1,1) + Sp(q^-1,1) share a point but not an extended point."""
    joined = WDRep([sp(1, 2)])
    split = WDRep([sp(1, 1), sp(Fraction(1, 3), 1)])
    assert point_of(joined) == point_of(split)
    assert extended_point_of(joined) != extended_point_of(split)


@given(unramified_reps(max_rank=6))
def test_forget_monodromy_matches_point_of(r):
    """Forgetting the stratum lands on the Bernstein point."""
    assert forget_monodromy(extended_point_of(r)) == point_of(r)


@given(unramified_reps(max_rank=6))
def test_representative_round_trip(r):
    """For unramified data the representative is r itself."""
    assert extended_point_of(r).representative() == r


@given(unramified_reps(max_rank=3), unramified_reps(max_rank=3))
def test_rs_point(r1, r2):
    """The extended point of a tensor product depends only on the extended points."""
    assert rs_point(extended_point_of(r1), extended_point_of(r2)) == extended_point_of(tensor(r1, r2))


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_point_survives_a_change_of_basis(data):
    """Classifying a conjugated realization lands on the same Bernstein point."""
    r = data.draw(unramified_reps(max_rank=4, alphas=unit_scalars(roots=False, halves=False)))
    moved = conjugate(realize(r), data.draw(unimodular_matrices(r.rank)))
    assert point_of(classify(moved)) == point_of(r)
