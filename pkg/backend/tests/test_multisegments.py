from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given

from errors import DomainError
from exact_algebra import Scalar
from multisegments import (GEN_QUOTIENT, GEN_SUB, ISO, SURJECTION, UNORDERED, Multisegment, Segment,
                           is_generic_irreducible, is_valid_order, llc_gen, precedes, segments_of,
                           supercuspidal_support, surjection_exists, valid_orderings)
from weil_deligne import InertialAtom, SpehBlock, WDRep, unramified_atom
from tests.strategies import segments, unramified_reps

UNR = unramified_atom()


def seg(alpha, m, atom=UNR):
    return Segment(atom, Scalar.coerce(alpha), m)


def sp(alpha, m):
    return SpehBlock(UNR, Scalar.coerce(alpha), m)


THIRD = Fraction(1, 3)


def test_juxtaposed_segments_are_linked():
    """Delta(1,1) precedes Delta(q^-1,1)."""
    assert precedes(seg(1, 1), seg(THIRD, 1))
    assert not precedes(seg(THIRD, 1), seg(1, 1))


def test_overlapping_segments_are_linked():
    """Delta(1,2) precedes Delta(q^-1,2)."""
    assert precedes(seg(1, 2), seg(THIRD, 2))


def test_nested_and_separated_segments_are_not_linked():
    """Containment and gaps both break the link."""
    assert not precedes(seg(1, 3), seg(THIRD, 1))
    assert not precedes(seg(1, 1), seg(Fraction(1, 9), 1))
    assert not precedes(seg(1, 1), seg(5, 1))


def test_precedes_up_to_unramified_twists_of_the_atom():
    """With f = 2, -2 q^-1 lies on the line of 2."""
    atom = InertialAtom('a', f=2, cond=1)
    assert precedes(seg(2, 1, atom), seg(Fraction(-2, 3), 1, atom))


def test_different_atoms_are_never_linked():
    """Segments of distinct atoms are unrelated."""
    atom = InertialAtom('a', cond=1)
    assert not precedes(seg(1, 1), seg(THIRD, 1, atom))


def test_gen_quotient_and_gen_sub_orders():
    """The two ordering modes put linked segments in opposite orders."""
    r = WDRep([sp(1, 1), sp(THIRD, 1)])
    assert llc_gen(r).segments == (seg(1, 1), seg(THIRD, 1))
    assert llc_gen(r, GEN_SUB).segments == (seg(THIRD, 1), seg(1, 1))
    assert llc_gen(r).render() == '[Delta(unr(1),1); Delta(unr(q^-1),1)]'


def test_invalid_order_is_rejected():
    """A Multisegment checks its ordering condition."""
    with pytest.raises(DomainError):
        Multisegment([seg(THIRD, 1), seg(1, 1)], GEN_QUOTIENT)
    assert is_valid_order([seg(THIRD, 1), seg(1, 1)], UNORDERED)
    with pytest.raises(DomainError):
        Multisegment([], 'Sideways')


def test_valid_orderings():
    """Linked pairs have one valid order; unlinked pairs have two."""
    assert len(valid_orderings([seg(1, 1), seg(THIRD, 1)])) == 1
    assert len(valid_orderings([seg(1, 1), seg(5, 1)])) == 2
    assert len(valid_orderings([seg(1, 1), seg(THIRD, 1)], UNORDERED)) == 2


def test_with_mode_keeps_the_multiset():
    """Switching modes reorders but keeps the segments."""
    s = llc_gen(WDRep([sp(1, 2), sp(THIRD, 2), sp(5, 1)]))
    other = s.with_mode(GEN_SUB)
    assert other.ordering_mode == GEN_SUB
    assert other.as_multiset() == s.as_multiset()
    assert is_valid_order(other.segments, GEN_SUB)


@given(unramified_reps(max_rank=6))
def test_llc_gen_is_valid_and_keeps_the_segments(r):
    """The output order is valid and the multiset is that of the Speh blocks."""
    for mode in (GEN_QUOTIENT, GEN_SUB):
        s = llc_gen(r, mode)
        assert is_valid_order(s.segments, mode)
        assert s.as_multiset() == Multisegment(segments_of(r), UNORDERED).as_multiset()


@given(unramified_reps(max_rank=6))
def test_support_forgets_monodromy(r):
    """Cuspidal support of r and of r_ss agree."""
    assert supercuspidal_support(llc_gen(r)) == supercuspidal_support(llc_gen(r.strip_monodromy()))


def test_generic_irreducibility():
    """Unlinked segments give an irreducible induced representation."""
    assert is_generic_irreducible(llc_gen(WDRep([sp(1, 3), sp(THIRD, 1)])))
    assert not is_generic_irreducible(llc_gen(WDRep([sp(1, 1), sp(THIRD, 1)])))


def test_surjection_exists():
    """Less monodromy maps onto more; equal data is an isomorphism."""
    split = WDRep([sp(1, 1), sp(THIRD, 1)])
    joined = WDRep([sp(1, 2)])
    assert surjection_exists(split, joined) == SURJECTION
    assert surjection_exists(joined, split) is None
    assert surjection_exists(joined, joined) == ISO
    assert surjection_exists(joined, WDRep([sp(5, 2)])) is None


@given(segments(), segments())
def test_precedes_is_irreflexive_and_asymmetric(a, b):
    """No segment precedes itself, and two segments never precede each other."""
    assert not precedes(a, a)
    assert not (precedes(a, b) and precedes(b, a))


def chain(lengths):
    """Blocks tiling the levels 1, q^-1, q^-2, ... in order."""
    blocks, start = [], 0
    for m in lengths:
        blocks.append(sp(Scalar.q_power(-start), m))
        start += m
    return WDRep(blocks)


def compositions(m):
    for cuts in product((False, True), repeat=m - 1):
        lengths, current = [], 1
        for cut in cuts:
            if cut:
                lengths.append(current)
                current = 1
            else:
                current += 1
        yield lengths + [current]


def test_surjections_compose():
    """Surjections between chains over one support compose."""
    reps = [chain(lengths) for lengths in compositions(4)]
    linked = {ISO, SURJECTION}
    for a, b, c in product(reps, repeat=3):
        if surjection_exists(a, b) in linked and surjection_exists(b, c) in linked:
            assert surjection_exists(a, c) in linked


def test_equal_jordan_data_on_different_chains_is_not_iso():
    """Sp(1,2) + Sp(q^-2,1) and Sp(1,1) + Sp(q^-1,2) share support and type (2,1) but are not isomorphic."""
    left = WDRep([sp(1, 2), sp(Fraction(1, 9), 1)])
    right = WDRep([sp(1, 1), sp(THIRD, 2)])
    assert surjection_exists(left, right) is None
    assert surjection_exists(left, left) == ISO
