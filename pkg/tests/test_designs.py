from fractions import Fraction

import pytest

from extractorforge.bits import BitString
from extractorforge.designs import (
    Design,
    build_greedy_weak_design,
    build_poly_design,
    restrict_seed,
    verify_design,
)


def _pairwise_overlaps(design):
    out = []
    for i in range(design.num_sets):
        for j in range(i):
            out.append(len(set(design.sets[i]) & set(design.sets[j])))
    return out


def test_poly_design_degree_zero_is_disjoint():
    # all sets fit in one field: constant polynomials, pairwise disjoint
    d = build_poly_design(4, 4)
    assert all(ov == 0 for ov in _pairwise_overlaps(d))
    assert d.certified_overlap == 0


def test_poly_design_q4_c2_overlap_at_most_one():
    d = build_poly_design(16, 4)
    assert d.universe_size == 16
    assert max(_pairwise_overlaps(d)) <= 1
    assert verify_design(d).valid


def test_poly_design_set_sizes_exact():
    for m, l in [(1, 1), (5, 3), (16, 4), (30, 7)]:
        d = build_poly_design(m, l)
        assert all(len(s) == l for s in d.sets)
        assert d.num_sets == m


def test_poly_design_deterministic():
    assert build_poly_design(16, 4) == build_poly_design(16, 4)


def test_greedy_single_set():
    d = build_greedy_weak_design(1, 4)
    assert d.num_sets == 1
    assert d.certified_overlap == 0
    assert verify_design(d).valid


def test_disjoint_sets_meet_rho_one_bound():
    # disjoint families satisfy the weak bound with rho = 1: every term is 2^0
    sets = tuple(tuple(range(4 * i, 4 * i + 4)) for i in range(4))
    d = Design(16, 4, "weak", sets, Fraction(3, 3))
    report = verify_design(d)
    assert report.valid
    assert report.max_weak_sum_ratio <= 1


def test_greedy_rho_one_within_bound():
    d = build_greedy_weak_design(4, 4, rho=1, t_initial=32)
    assert d.certified_overlap <= 1
    assert verify_design(d).valid


def test_greedy_weak_bound_certified():
    d = build_greedy_weak_design(8, 4, rho=2, t_initial=16)
    assert d.certified_overlap <= 2
    report = verify_design(d)
    assert report.valid
    assert report.max_weak_sum_ratio == d.certified_overlap


def test_greedy_deterministic():
    a = build_greedy_weak_design(8, 4, rho=2, t_initial=16)
    b = build_greedy_weak_design(8, 4, rho=2, t_initial=16)
    assert a == b


def test_verify_disjoint_and_duplicate_sets():
    disjoint = Design(8, 2, "standard", ((0, 1), (2, 3), (4, 5)), Fraction(0))
    assert verify_design(disjoint).max_overlap == 0
    dup = Design(8, 2, "standard", ((0, 1), (0, 1)), Fraction(2))
    report = verify_design(dup)
    assert report.valid
    assert report.max_overlap == 2  # equal sets overlap in every element


def test_verify_flags_wrong_certification_and_malformed_sets():
    wrong = Design(8, 2, "standard", ((0, 1), (1, 2)), Fraction(0))
    report = verify_design(wrong)
    assert not report.valid
    assert "recomputed" in report.reason

    out_of_universe = Design(4, 2, "standard", ((0, 7),), Fraction(0))
    assert not verify_design(out_of_universe).valid
    unsorted_set = Design(8, 2, "standard", ((3, 1),), Fraction(0))
    assert not verify_design(unsorted_set).valid


def test_restrict_seed_examples():
    assert restrict_seed(BitString.zeros(8), (1, 4, 6)) == 0
    assert restrict_seed(BitString.ones(8), (0, 3, 5)) == 7
    # y = ...1010 (bits 1 and 3 set), S = {0, 1, 2}
    assert restrict_seed(BitString(0b1010, 4), (0, 1, 2)) == 0b010


def test_restrict_seed_errors():
    y = BitString(0b1010, 4)
    with pytest.raises(IndexError):
        restrict_seed(y, (0, 5))
    with pytest.raises(ValueError):
        restrict_seed(y, (2, 1))


def test_restrict_seed_ignores_outside_bits():
    positions = (1, 3)
    base = BitString(0b0101, 4)
    value = restrict_seed(base, positions)
    for flip in (0, 2):
        flipped = base ^ BitString(1 << flip, 4)
        assert restrict_seed(flipped, positions) == value


def test_design_json_roundtrip():
    for d in (build_poly_design(16, 4), build_greedy_weak_design(8, 4, 2, 16)):
        data = d.to_json_dict()
        assert set(data) == {"t", "l", "kind", "sets", "certifiedOverlap"}
        assert Design.from_json_dict(data) == d
