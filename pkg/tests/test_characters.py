"""Character tables against known tables and orthogonality; quasirandomness
and the Clifford refinement."""

import cmath
import math

import numpy as np
import pytest

from hwalk import characters, groups, measures


def test_cyclic_character_table_is_dft():
    n = 6
    t = groups.cyclic(n)
    ct = characters.character_table(t)
    assert sorted(ct.dims) == [1] * n
    # every character is g -> omega^{kg}; match rows as sets of value tuples
    got = {
        tuple(np.round(ct.chars[r][ct.class_of], 8)) for r in range(n)
    }
    want = {
        tuple(np.round([cmath.exp(2j * cmath.pi * k * g / n) for g in range(n)], 8))
        for k in range(n)
    }
    assert got == want


def test_s3_character_table():
    t = groups.symmetric_group(3)
    ct = characters.character_table(t)
    assert sorted(ct.dims) == [1, 1, 2]
    assert len(ct.classes.reps) == 3
    assert sorted(ct.classes.sizes) == [1, 2, 3]


def test_s4_character_table():
    t = groups.symmetric_group(4)
    ct = characters.character_table(t)
    assert sorted(ct.dims) == [1, 1, 2, 3, 3]


def test_sl2_3_character_table(sl23):
    ct = characters.character_table(sl23)
    assert sorted(ct.dims) == [1, 1, 1, 2, 2, 2, 3]
    assert len(ct.classes.reps) == 7


def test_sl2_5_character_table(sl25):
    ct = characters.character_table(sl25)
    assert sorted(ct.dims) == [1, 2, 2, 3, 3, 4, 4, 5, 6]


def test_row_orthogonality(sl23):
    ct = characters.character_table(sl23)
    sizes = np.asarray(ct.classes.sizes, dtype=float)
    n = sl23.order
    k = len(ct.dims)
    gram = (ct.chars * sizes) @ ct.chars.conj().T / n
    np.testing.assert_allclose(gram, np.eye(k), atol=1e-8)


def test_column_orthogonality(sl25):
    ct = characters.character_table(sl25)
    sizes = np.asarray(ct.classes.sizes, dtype=float)
    n = sl25.order
    cols = ct.chars.conj().T @ ct.chars  # sum_pi chi(g) conj(chi(h))
    want = np.diag(n / sizes)
    np.testing.assert_allclose(cols, want, atol=1e-7)


def test_dimension_sum_of_squares(s4):
    ct = characters.character_table(s4)
    assert sum(d * d for d in ct.dims) == s4.order


def test_trivial_character_first(sl23):
    ct = characters.character_table(sl23)
    assert ct.dims[0] == 1
    np.testing.assert_allclose(ct.chars[0], 1.0, atol=1e-10)


def test_character_values_are_algebraic_integers_spot(sl23):
    # chi(g) is a sum of dim-many roots of unity: |chi(g)| <= dim
    ct = characters.character_table(sl23)
    for r, d in enumerate(ct.dims):
        assert np.all(np.abs(ct.chars[r]) <= d + 1e-8)


def test_conjugacy_classes_partition(sl25):
    cd = characters.conjugacy_classes(sl25)
    assert sum(cd.sizes) == sl25.order
    assert cd.class_of[0] == 0 and cd.sizes[0] == 1
    # class function: chi constant on conjugacy classes by construction;
    # verify the partition is conjugation-invariant
    rng = np.random.default_rng(0)
    for _ in range(50):
        g, h = rng.integers(0, sl25.order, 2)
        conj = sl25.multiply(sl25.multiply(int(h), int(g)), sl25.invert(int(h)))
        assert cd.class_of[conj] == cd.class_of[g]


@pytest.mark.parametrize("p", [5, 7])
def test_quasirandom_min_dim(p):
    t = groups.build_slq(2, p)
    cert = characters.quasirandom_cert(t, alpha=1.0 / 3.0)
    assert cert.min_nontrivial_dim == (p - 1) // 2


def test_quasirandom_cert_constants(sl23):
    cert = characters.quasirandom_cert(sl23, alpha=0.25)
    # c = min over nontrivial irreps of dim / index^alpha, and must be realized
    vals = [d / idx**0.25 for d, idx in cert.rows]
    assert math.isclose(cert.c, min(vals), rel_tol=1e-12)


def test_clifford_bound_s3():
    t = groups.symmetric_group(3)
    # A_3 = the rotation subgroup: identity and the two 3-cycles
    a3 = [i for i in range(t.order) if t.element_order(i) in (1, 3)]
    assert len(a3) == 3
    rng = np.random.default_rng(1)
    mu = measures.random_measure(t, rng, symmetric=True)
    rep = characters.clifford_bound_check(t, a3, mu, l=2, lp=4, M=4.0)
    assert rep.applicable
    assert rep.passed


def test_clifford_bound_center(sl23):
    center = [
        i
        for i in range(sl23.order)
        if all(sl23.multiply(i, j) == sl23.multiply(j, i) for j in range(sl23.order))
    ]
    rng = np.random.default_rng(2)
    mu = measures.random_measure(sl23, rng, symmetric=True)
    rep = characters.clifford_bound_check(sl23, center, mu, l=2, lp=4, M=4.0)
    assert rep.applicable
    assert rep.passed


def test_clifford_inapplicable_reported(sl23):
    center = [0, sl23.index[(2, 0, 0, 2)]]
    rng = np.random.default_rng(3)
    mu = measures.random_measure(sl23, rng, symmetric=True)
    # M far below any achievable trace: the hypothesis fails and is reported
    rep = characters.clifford_bound_check(sl23, center, mu, l=2, lp=4, M=1e-6)
    assert not rep.applicable
    assert not rep.passed


def test_clifford_data_s3():
    t = groups.symmetric_group(3)
    a3 = [i for i in range(t.order) if t.element_order(i) in (1, 3)]
    data = characters.clifford_data(t, a3)
    # A_3 has three linear characters; the two nontrivial ones are swapped by
    # conjugation with a transposition and live in the 2-dim irrep of S_3
    assert sorted(data.dims) == [1, 1, 1]
    trivial = data.conjugates[data.dims.index(1)]
    assert sorted(data.conjugates) == [1, 2, 2]
    assert sorted(data.min_containing_dim) == [1, 2, 2]
