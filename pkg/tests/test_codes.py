from itertools import combinations, product

import numpy as np
import pytest

from staircase.codes import (NestedCodeFamily, Thresholds, designed_thresholds,
                             enumerated_thresholds, hermitian_q4_family, hermitian_code,
                             hermitian_curve, hermitian_monomials, hermitian_nested, rs_family,
                             rs_nested)
from staircase.gf import gf
from staircase.linalg import GFMatrix, LinearCode, dual, min_distance, min_distance_pair, rank

# exact minimum distances of the u = 2 one-point codes on all 8 affine points,
# mu = 1..7, from brute-force enumeration (frozen)
HERMITIAN_U2_DISTANCES = {1: 8, 2: 6, 3: 5, 4: 4, 5: 3, 6: 2, 7: 2}


def brute_distance(F, G):
    best = G.cols
    for msg in product(range(F.q), repeat=G.rows):
        if any(msg):
            w = F.matmul(np.array([msg]), G.a)[0]
            best = min(best, int(np.count_nonzero(w)))
    return best


def test_rs_nested_repetition_bottom():
    F = gf(5)
    fam = rs_nested(F, [1, 2, 3], (1, 2))
    assert (fam.code(1).generator.a == 1).all()
    assert min_distance_pair(fam.code(2), fam.code(1)) >= 3 - 2 + 1


def test_rs_q13_levels_are_mds():
    fam = rs_family(13, 12, (2, 6, 8, 12))
    # smallest level by enumeration, larger ones by Singleton plus column-subset ranks
    assert min_distance(fam.code(2)) == 11
    assert min_distance_pair(fam.code(6), fam.code(2)) == 12 - 6 + 1
    rng = np.random.default_rng(0)
    for k in (6, 8, 12):
        G = fam.generator[:k, :]
        for _ in range(40):
            I = sorted(rng.choice(12, size=k, replace=False).tolist())
            assert rank(G.columns(I)) == k


@pytest.mark.parametrize("q,n", [(7, 6), (8, 7), (9, 8)])
def test_rs_restriction_to_any_k_columns(q, n):
    for k in range(1, n + 1):
        G = rs_family(q, n, (0, k)).generator
        assert all(rank(G.columns(list(I))) == k for I in combinations(range(n), k))


@pytest.mark.parametrize("q,n", [(5, 4), (7, 6), (8, 7), (11, 10)])
def test_rs_every_level_singleton_tight(q, n):
    for k in range(1, min(n, 4) + 1):
        fam = rs_family(q, n, (0, k))
        assert min_distance(fam.code(k)) == n - k + 1


def test_rs_rejects_bad_points():
    F = gf(7)
    with pytest.raises(ValueError):
        rs_nested(F, [1, 1, 2], (1, 2))
    with pytest.raises(ValueError):
        rs_nested(F, [1, 2], (1, 3))
    with pytest.raises(ValueError):
        rs_family(7, 7, (1, 2))


def test_hermitian_curve_u2():
    c = hermitian_curve(2)
    assert len(c.points) == 8
    assert c.num_rational_points == 9
    assert c.genus == 1
    F = c.field
    for x, y in c.points:
        assert int(F.add(F.power(y, 2), y)) == int(F.power(x, 3))


def test_hermitian_curve_u3_u4():
    assert len(hermitian_curve(3).points) == 27
    c4 = hermitian_curve(4)
    assert len(c4.points) == 64 and c4.genus == 6
    assert list(c4.points) == sorted(c4.points)


def test_hermitian_monomials_pole_orders():
    u = 2
    assert hermitian_monomials(u, 4) == [(0, 0), (1, 0), (0, 1), (2, 0)]
    for mu in range(1, 8):
        orders = [i * u + j * (u + 1) for i, j in hermitian_monomials(u, mu)]
        assert orders == sorted(orders) and len(set(orders)) == len(orders)
        assert set(hermitian_monomials(u, mu - 1)) <= set(hermitian_monomials(u, mu))


@pytest.mark.parametrize("mu", range(1, 8))
def test_goppa_and_dimension_u2(mu):
    c = hermitian_curve(2)
    C = hermitian_code(c, mu)
    assert C.k == mu - c.genus + 1
    d = min_distance(C)
    assert d == HERMITIAN_U2_DISTANCES[mu]
    assert d >= 8 - mu


@pytest.mark.parametrize("mu", [1, 2, 3, 4])
def test_goppa_distances_brute_force(mu):
    c = hermitian_curve(2)
    C = hermitian_code(c, mu)
    assert brute_distance(c.field, C.generator) == HERMITIAN_U2_DISTANCES[mu]


def test_dimension_formula_u3():
    c = hermitian_curve(3)
    g = c.genus
    for mu in range(2 * g - 1, 27):
        assert hermitian_code(c, mu).k == mu - g + 1


def test_hermitian_code_rejects_out_of_range():
    c = hermitian_curve(2)
    with pytest.raises(ValueError):
        hermitian_code(c, 8)
    with pytest.raises(ValueError):
        hermitian_code(c, 0)


def test_hermitian_nested_example_parameters():
    fam = hermitian_nested(hermitian_curve(2), (2, 3, 4))
    assert fam.dims == (2, 3, 4)
    th = designed_thresholds(fam)
    assert (th.t, th.r, th.deltas) == (1, 4, (5, 4))
    assert enumerated_thresholds(fam) == Thresholds(1, 4, (5, 4), "enumerated")
    C2, top = fam.code(2), fam.code(4)
    assert min_distance_pair(dual(C2), dual(top)) >= 2


def test_hermitian_nested_prefix_property():
    c = hermitian_curve(2)
    fam = hermitian_nested(c, (2, 4, 6))
    for mu, k in zip((2, 4), (2, 4)):
        assert fam.code(k).same_as(hermitian_code(c, mu))


def test_hermitian_nested_rejects_equal_degrees():
    with pytest.raises(ValueError):
        hermitian_nested(hermitian_curve(2), (2, 2, 4))


def test_hermitian_q4_thresholds():
    fam = hermitian_q4_family()
    assert designed_thresholds(fam) == Thresholds(1, 4, (5, 4))
    assert enumerated_thresholds(fam) == Thresholds(1, 4, (5, 4), "enumerated")


def test_family_validation():
    F = gf(3)
    G = GFMatrix(F, [[1, 1, 1], [0, 1, 2]])
    with pytest.raises(ValueError):
        NestedCodeFamily(F, G, (2, 1))
    with pytest.raises(ValueError):
        NestedCodeFamily(F, GFMatrix(F, [[1, 1, 0], [0, 1, 0]]), (1, 2))
    with pytest.raises(ValueError):
        NestedCodeFamily(F, GFMatrix(F, [[1, 1, 1], [2, 2, 2]]), (1, 2))


def test_thresholds_validation():
    with pytest.raises(ValueError):
        Thresholds(1, 4, (4, 5))
    with pytest.raises(ValueError):
        Thresholds(1, 4, (5, 3))


def test_designed_matches_enumerated_rs():
    fam = rs_family(13, 12, (2, 6, 8, 12))
    th = designed_thresholds(fam)
    assert (th.t, th.r, th.deltas) == (2, 6, (12, 8, 6))
    small = rs_family(7, 6, (1, 3, 4))
    assert designed_thresholds(small).deltas == enumerated_thresholds(small).deltas
    assert designed_thresholds(small).t == enumerated_thresholds(small).t


def test_codes_are_linear_code_instances():
    assert isinstance(hermitian_q4_family().code(3), LinearCode)
