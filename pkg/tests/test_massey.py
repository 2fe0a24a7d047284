from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from staircase.analysis import mi_enumerate, mi_rank_check, sigma_max_scan
from staircase.codes import NestedCodeFamily, hermitian_curve, rs_nested
from staircase.gf import gf
from staircase.linalg import GFMatrix, LinearCode, dual, min_distance, rank, shorten
from staircase.massey import (MasseyConditionError, ag_strong_scheme, massey_derive,
                              mds_strong_scheme)


@pytest.fixture(scope="module")
def mds11():
    return mds_strong_scheme(11, 8, 3, 5, (5, 7))


@pytest.fixture(scope="module")
def ag2():
    return ag_strong_scheme(hermitian_curve(2), 7, 2, 5, (5, 6))


def strong_pairs(scheme, sigma):
    for a in range(1, scheme.ell + 1):
        for I in combinations(range(scheme.ell), a):
            for m in range(1, min(sigma + 1 - a, scheme.n) + 1):
                for J in combinations(range(scheme.n), m):
                    yield I, J


def test_full_space_parent_rejected():
    F = gf(5)
    parents = NestedCodeFamily(F, GFMatrix.identity(F, 4), (4,))
    with pytest.raises(MasseyConditionError):
        massey_derive(parents, 1)


def test_secret_coordinates_must_be_covered():
    F = gf(5)
    # D1 vanishes on coordinate 0, so condition 1 fails
    G = GFMatrix(F, [[0, 1, 1, 1], [0, 1, 2, 3], [1, 0, 0, 0]])
    with pytest.raises(MasseyConditionError, match="secret coordinates"):
        massey_derive(NestedCodeFamily(F, G, (2, 3)), 1)


def test_rs_parent_dimensions():
    F = gf(11)
    parents = rs_nested(F, range(10), (5, 7))
    fam = massey_derive(parents, 2)
    d = fam.derived
    assert d.n == 8
    assert d.dims == (3, 5, 7)
    assert d.k1 - d.k2 == 2
    assert rank(d.generator[:5, :]) == 5


def test_derived_codes_match_definition():
    # C2 = codewords of D1 zero on the secret coordinates, restricted to the shares
    F = gf(11)
    parents = rs_nested(F, range(10), (5, 7))
    fam = massey_derive(parents, 2)
    D1 = LinearCode(parents.generator[:5, :])
    expect = shorten(D1, range(2, 10))
    assert fam.derived.code(3).same_as(expect)
    for k in (5, 7):
        top = LinearCode.from_rows(parents.generator[:k, :].columns(list(range(2, 10))))
        assert fam.derived.code(k).same_as(top)


def test_mds_q11(mds11):
    scheme, rep, fam = mds11
    assert scheme.ell == 2 and scheme.n == 8
    assert (scheme.t, scheme.r, scheme.deltas) == (3, 5, (7, 5))
    assert rep.component_distances == [5, 5]
    assert rep.sigma_lower == 4
    assert rep.sigma_max == 4
    assert rep.sigma_upper == 4
    assert rep.consistent()


def test_mds_strong_security_rank_level(mds11):
    scheme, rep, _ = mds11
    for I, J in strong_pairs(scheme, rep.sigma_lower):
        assert mi_rank_check(scheme, I, J) == 0


def test_mds_inherits_bandwidth_identities(mds11):
    scheme = mds11[0]
    for j in range(1, scheme.h + 1):
        d, k = scheme.contact_size(j), scheme.level_dim(j)
        assert scheme.co(j) == Fraction(scheme.ell * (d - k + scheme.k2), k - scheme.k2)
    rng = np.random.default_rng(0)
    S = scheme.field.random((scheme.alpha, scheme.ell), rng)
    sh = scheme.share(S, 3)
    for j in range(1, scheme.h + 1):
        for I in combinations(range(8), scheme.contact_size(j)):
            prepped = {i: scheme.preprocess(sh.share(i), j) for i in I}
            assert np.array_equal(scheme.reconstruct(prepped, j), S)


def test_mds_field_too_small():
    with pytest.raises(ValueError, match="ell \\+ n"):
        mds_strong_scheme(7, 8, 3, 5)


def test_mds_tiny_brute_force():
    scheme, rep, _ = mds_strong_scheme(5, 3, 1, 2)
    assert scheme.ell == 1
    assert sigma_max_scan(scheme) == 1 == scheme.r - 1
    # distribution-level cross-check on every (I, J)
    for m in range(1, 4):
        for J in combinations(range(3), m):
            assert mi_enumerate(scheme, [0], J) == mi_rank_check(scheme, [0], J)


def test_mds_q3_distribution_cross_check():
    scheme, rep, _ = mds_strong_scheme(3, 2, 1, 2)
    assert rep.sigma_max == 1
    for m in range(1, 3):
        for J in combinations(range(2), m):
            assert mi_enumerate(scheme, [0], J) == mi_rank_check(scheme, [0], J)


def test_ag_parameters(ag2):
    scheme, rep, fam = ag2
    g = 1
    assert scheme.ell == 1 and scheme.n == 7
    assert scheme.t == scheme.r - 2 * g - scheme.ell
    assert rep.designed_lower == scheme.r - 2 * g - 1
    assert rep.sigma_lower >= rep.designed_lower
    assert rep.consistent()


def test_ag_component_distance_bound(ag2):
    scheme, rep, fam = ag2
    mu1 = scheme.r - 1
    g = 1
    for Gi in fam.components:
        assert min_distance(dual(Gi)) >= mu1 - 2 * g + 1


def test_ag_shortened_dimension(ag2):
    # C2 = C(D, mu1 Q - P_1 - ... - P_ell) has dimension mu1 - ell - g + 1
    scheme, rep, fam = ag2
    mu1, g = scheme.r - 1, 1
    assert fam.derived.k2 == mu1 - scheme.ell - g + 1


def test_ag_strong_security_rank_level(ag2):
    scheme, rep, _ = ag2
    for I, J in strong_pairs(scheme, rep.sigma_lower):
        assert mi_rank_check(scheme, I, J) == 0


def test_ag_rejects_too_many_points():
    with pytest.raises(ValueError):
        ag_strong_scheme(hermitian_curve(2), 8, 2, 5)


def test_ag_and_mds_same_contact_structure(mds11, ag2):
    # both paths produce schemes whose CO follows the same closed form
    for scheme, _, _ in (mds11, ag2):
        for j in range(1, scheme.h + 1):
            assert scheme.co(j) == scheme.co_formula(j)


def test_report_text(mds11):
    text = mds11[1].to_text()
    assert "sigma_lower = 4" in text and "d(G_2^perp) = 5" in text
