"""Root systems: exact counts, Weyl dimensions against closed forms, and the
subset inequality."""

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hwalk import rootsys


@pytest.mark.parametrize(
    "family,rank,npos",
    [
        ("A", 1, 1),
        ("A", 4, 10),
        ("B", 2, 4),
        ("B", 5, 25),
        ("C", 3, 9),
        ("D", 4, 12),
        ("G2", 2, 6),
        ("F4", 4, 24),
        ("E6", 6, 36),
        ("E7", 7, 63),
        ("E8", 8, 120),
    ],
)
def test_positive_root_counts(family, rank, npos):
    rs = rootsys.build_rootsystem(family, rank)
    assert len(rs.positive_roots) == npos


def test_short_root_normalization():
    for fam in ("B", "C", "G2", "F4"):
        rs = rootsys.build_rootsystem(fam, 3 if fam in "BC" else None)
        lengths = {rs.inner(a, a) for a in rs.positive_roots}
        assert min(lengths) == 2
        assert len(lengths) == 2  # two root lengths in non-simply-laced types


def test_simply_laced_single_length():
    for fam, rank in (("A", 3), ("D", 4), ("E6", None)):
        rs = rootsys.build_rootsystem(fam, rank)
        assert {rs.inner(a, a) for a in rs.positive_roots} == {Fraction(2)}


def test_cartan_matrices():
    a2 = rootsys.build_rootsystem("A", 2)
    assert a2.cartan == [[2, -1], [-1, 2]]
    g2 = rootsys.build_rootsystem("G2")
    offdiag = sorted(g2.cartan[0][1:] + g2.cartan[1][:1])
    assert offdiag == [-3, -1]


def test_exponent_table_values():
    cases = {
        ("A", 1): Fraction(2),
        ("A", 2): Fraction(5, 3),
        ("B", 4): Fraction(5, 4),
        ("C", 7): Fraction(8, 7),
        ("D", 5): Fraction(5, 4),
        ("E6", 6): Fraction(7, 6),
        ("E7", 7): Fraction(10, 9),
        ("E8", 8): Fraction(16, 15),
        ("F4", 4): Fraction(7, 6),
        ("G2", 2): Fraction(4, 3),
    }
    for (fam, rank), want in cases.items():
        rs = rootsys.build_rootsystem(fam, rank)
        assert rootsys.exponent_A(rs) == want


# ---------------------------------------------------------------------------
# Weyl dimension formula


def test_weyl_dims_a1():
    rs = rootsys.build_rootsystem("A", 1)
    assert [rootsys.weyl_dimension(rs, (m,)) for m in range(6)] == [1, 2, 3, 4, 5, 6]


@given(st.integers(0, 6), st.integers(0, 6))
@settings(max_examples=30, deadline=None)
def test_weyl_dims_a2_closed_form(p, q):
    # rank-2 special unitary dimension formula (p+1)(q+1)(p+q+2)/2
    rs = rootsys.build_rootsystem("A", 2)
    assert rootsys.weyl_dimension(rs, (p, q)) == (p + 1) * (q + 1) * (p + q + 2) // 2


def test_weyl_dims_fundamental_an():
    # the k-th fundamental representation of A_n is the exterior power:
    # dim = binom(n+1, k)
    for n in (3, 4, 5):
        rs = rootsys.build_rootsystem("A", n)
        for k in range(1, n + 1):
            weight = tuple(1 if i == k - 1 else 0 for i in range(n))
            assert rootsys.weyl_dimension(rs, weight) == comb(n + 1, k)


def test_weyl_dims_known_small():
    b2 = rootsys.build_rootsystem("B", 2)
    dims_b2 = sorted(
        rootsys.weyl_dimension(b2, w) for w in [(1, 0), (0, 1), (1, 1), (2, 0)]
    )
    assert dims_b2 == [4, 5, 14, 16]
    g2 = rootsys.build_rootsystem("G2")
    dims_g2 = sorted(rootsys.weyl_dimension(g2, w) for w in [(1, 0), (0, 1)])
    assert dims_g2 == [7, 14]
    e8 = rootsys.build_rootsystem("E8")
    # the adjoint representation is fundamental for E8
    fund = [
        rootsys.weyl_dimension(e8, tuple(1 if i == k else 0 for i in range(8)))
        for k in range(8)
    ]
    assert 248 in fund


def test_weyl_dimension_of_zero_weight_is_one():
    for fam, rank in (("A", 3), ("F4", None)):
        rs = rootsys.build_rootsystem(fam, rank)
        assert rootsys.weyl_dimension(rs, (0,) * rs.rank) == 1


def test_weyl_dimension_rejects_negative():
    rs = rootsys.build_rootsystem("A", 2)
    with pytest.raises(ValueError):
        rootsys.weyl_dimension(rs, (-1, 0))


# ---------------------------------------------------------------------------
# subset inequality and weight enumeration


@pytest.mark.parametrize("family,rank", rootsys.all_types(8))
def test_roots_lemma_all_types(family, rank):
    rs = rootsys.build_rootsystem(family, rank)
    rep = rootsys.verify_roots_lemma(rs)
    assert rep.passed
    assert rep.subsets_checked == 2**rank - 1
    assert rep.worst_ratio <= rep.bound


def test_roots_lemma_empty_subset_is_extremal():
    # S' = empty gives exactly (|S| - 0)/(|R_+| - 0) = A - 1
    rs = rootsys.build_rootsystem("D", 5)
    rep = rootsys.verify_roots_lemma(rs)
    assert rep.worst_ratio == rep.bound


def test_dominant_weights_in_ball_a1():
    rs = rootsys.build_rootsystem("A", 1)
    # |m omega| = m/sqrt(2): radius 2 admits m = 0, 1, 2
    assert rootsys.dominant_weights_in_ball(rs, 2) == [(0,), (1,), (2,)]


def test_dominant_weights_in_ball_brute_force():
    rs = rootsys.build_rootsystem("A", 2)
    r = Fraction(3)
    got = set(rootsys.dominant_weights_in_ball(rs, r))
    gram = rs.weight_gram()
    brute = set()
    for p in range(10):
        for q in range(10):
            norm2 = (
                p * p * gram[0][0] + 2 * p * q * gram[0][1] + q * q * gram[1][1]
            )
            if norm2 <= r * r:
                brute.add((p, q))
    assert got == brute


def test_rank_caps():
    with pytest.raises(ValueError):
        rootsys.build_rootsystem("A", 13)
    with pytest.raises(ValueError):
        rootsys.build_rootsystem("D", 2)
    with pytest.raises(ValueError):
        rootsys.build_rootsystem("E8", 7)
    with pytest.raises(ValueError):
        rootsys.build_rootsystem("X", 2)
