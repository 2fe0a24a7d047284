from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from staircase import analysis
from staircase.analysis import (audit_levels, bandwidth_audit, check_multiplicative, co_lower,
                                mi_enumerate, mi_rank_check, parameter_table, per_party_entropy,
                                round2, sigma_max_scan, table_csv, thresholds_exhaustive)
from staircase.codes import (NestedCodeFamily, hermitian_q4_family, hermitian_curve, hermitian_nested,
                             rs_family)
from staircase.gf import gf
from staircase.linalg import GFMatrix
from staircase.massey import mds_strong_scheme
from staircase.scheme_c1 import c1_setup
from staircase.scheme_c2 import c2_setup


def toy_c1():
    F = gf(2)
    G = GFMatrix(F, [[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 0, 1]])
    return c1_setup(NestedCodeFamily(F, G, (1, 2, 3)), "enumerated")


def toy_c2():
    F = gf(2)
    G = GFMatrix(F, [[1, 1, 1, 1, 1], [1, 0, 1, 0, 0], [1, 0, 0, 0, 0]])
    return c2_setup(NestedCodeFamily(F, G, (1, 2, 3)), thresholds="enumerated")


def all_pairs(scheme):
    for a in range(0, scheme.ell + 1):
        for I in combinations(range(scheme.ell), a):
            for m in range(0, scheme.n + 1):
                for J in combinations(range(scheme.n), m):
                    yield I, J


@pytest.fixture(scope="module")
def rs13_c1():
    return c1_setup(rs_family(13, 12, (2, 6, 8)))


def test_no_observation_no_leak(rs13_c1):
    assert mi_rank_check(rs13_c1, [0, 1], []) == 0
    assert mi_enumerate(toy_c1(), [0], []) == 0


def test_rs13_privacy_exact(rs13_c1):
    s = rs13_c1
    for m in (1, 2):
        for J in combinations(range(12), m):
            assert mi_rank_check(s, range(s.ell), J) == 0
    assert any(mi_rank_check(s, range(s.ell), J) > 0 for J in combinations(range(12), 3))


def test_massey_q11_zero_up_to_r():
    scheme, _, _ = mds_strong_scheme(11, 8, 3, 5, (5, 7), scan=False)
    for a in (1, 2):
        for I in combinations(range(2), a):
            for m in range(1, 5 - a + 1):
                for J in combinations(range(8), m):
                    assert mi_rank_check(scheme, I, J) == 0


@pytest.mark.parametrize("make", [toy_c1, toy_c2])
def test_enumeration_agrees_with_rank(make):
    scheme = make()
    for I, J in all_pairs(scheme):
        assert mi_enumerate(scheme, I, J) == mi_rank_check(scheme, I, J)


def test_enumeration_agrees_on_prefixes():
    # observing only the preprocessed rows of a share
    scheme = toy_c1()
    Ss, Xs = analysis.enumerate_outcomes(scheme)
    for J in combinations(range(4), 3):
        rows = scheme.prefix_rows(1)
        x = Xs[:, :rows, :][:, :, list(J)].reshape(len(Xs), -1)
        s = Ss.reshape(len(Ss), -1)
        q = 2
        hs = analysis._uniform_entropy(s, q)
        hx = analysis._uniform_entropy(x, q)
        hsx = analysis._uniform_entropy(np.hstack([s, x]), q)
        assert hs + hx - hsx == mi_rank_check(scheme, [0], J, rows=rows)


def test_deterministic_scheme_reveals_everything():
    inst = c1_setup(rs_family(5, 4, (0, 2, 3)))
    assert inst.k2 == 0
    full = inst.alpha * inst.ell
    assert mi_enumerate(inst, range(inst.ell), range(inst.n)) == full
    assert mi_rank_check(inst, range(inst.ell), range(inst.n)) == full


def test_uniform_secret_entropy():
    scheme = toy_c2()
    Ss, _ = analysis.enumerate_outcomes(scheme)
    assert analysis._uniform_entropy(Ss.reshape(len(Ss), -1), 2) == scheme.alpha * scheme.ell


def test_thresholds_rs():
    rep = thresholds_exhaustive(c1_setup(rs_family(13, 12, (2, 6))))
    assert (rep.r_min, rep.t_max) == (6, 2)


def test_thresholds_hermitian_q4():
    rep = thresholds_exhaustive(c1_setup(hermitian_q4_family()))
    assert rep.r_min <= 4 and rep.t_max >= 1
    assert (rep.r_min, rep.t_max) == (4, 1)


def test_thresholds_without_randomness():
    inst = c1_setup(rs_family(5, 4, (0, 2, 3)))
    rep = thresholds_exhaustive(inst)
    assert rep.t_max == 0
    assert any(mi_rank_check(inst, range(inst.ell), [i]) > 0 for i in range(inst.n))


def test_thresholds_size_limit():
    inst = c1_setup(hermitian_nested(hermitian_curve(3), (5, 6, 8)))
    with pytest.raises(ValueError):
        thresholds_exhaustive(inst)


def test_sigma_scan_is_monotone_and_matches():
    scheme, rep, _ = mds_strong_scheme(7, 4, 1, 3, scan=False)
    assert sigma_max_scan(scheme) == scheme.r - 1


def test_hermitian_q4_bandwidth_audit():
    inst = c1_setup(hermitian_q4_family())
    for I in combinations(range(8), 5):
        e = bandwidth_audit(inst, I, 1, seed=1)
        assert e.co_measured == Fraction(3, 2)
        # Hermitian gap: measured CO = ell (t + 2g) / (delta - t - 2g) > ell t / (delta - t)
        assert e.co_measured == Fraction(1 * (1 + 2), 5 - 1 - 2)
        assert e.co_measured > e.co_lower
        assert not e.equality
    e = bandwidth_audit(inst, range(4), 2)
    assert e.co_measured == inst.r - inst.ell == 3


def test_audit_requires_exact_contact_size():
    inst = c1_setup(hermitian_q4_family())
    with pytest.raises(ValueError):
        bandwidth_audit(inst, range(6), 1)


def test_rs_audit_equality():
    inst = c2_setup(rs_family(13, 12, (2, 6, 8, 12)))
    rep = audit_levels(inst, subsets_per_level=5)
    assert all(e.equality for e in rep.entries)
    assert all(e.db_measured >= e.db_lower for e in rep.entries)
    csv_text = rep.to_csv()
    assert csv_text.splitlines()[0] == "subset_size,co_lower,co_measured,db_lower,db_measured,equality"
    assert len(csv_text.splitlines()) == 1 + 1 + 5 + 5   # level 1 has a single 12-subset


def test_entropy_interpretation_never_exceeds_symbols():
    inst = c1_setup(hermitian_q4_family())
    e = bandwidth_audit(inst, range(5), 1, entropy=True)
    assert e.db_entropy <= e.db_measured
    ent = per_party_entropy(inst, 1)
    assert ent == [1] * 8


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.integers(0, 10), st.integers(1, 30))
def test_co_lower_bound_shape(ell, t, extra):
    m = t + extra
    assert co_lower(ell, t, m) == Fraction(ell * t, m - t)
    assert co_lower(ell, t, m + 1) <= co_lower(ell, t, m)


def test_multiplicative_rs_yes():
    fam = rs_family(13, 12, (2, 4, 5))
    inst = c1_setup(fam)
    assert inst.deltas[0] == 5
    assert check_multiplicative(inst) == "yes"


def test_multiplicative_hermitian_yes():
    inst = c1_setup(hermitian_nested(hermitian_curve(2), (1, 2, 3)))
    assert inst.deltas[0] == 4
    assert check_multiplicative(inst) == "yes"


def test_multiplicative_condition_unmet():
    inst = c2_setup(rs_family(13, 12, (2, 6, 8, 12)))
    assert inst.deltas[0] == inst.n
    assert check_multiplicative(inst) == "condition_unmet"


def test_multiplicative_unsupported():
    with pytest.raises(ValueError, match="unsupported"):
        check_multiplicative(c1_setup(hermitian_q4_family()))


def test_round2_half_up():
    assert round2(Fraction(1, 2)) == "0.50"
    assert round2(Fraction(1)) == "1"
    assert round2(Fraction(2, 3)) == "0.67"
    assert round2(Fraction(1, 8)) == "0.13"   # 0.125 rounds up
    assert round2(Fraction(8, 15)) == "0.53"


def test_parameter_table_known_cells():
    rows = {(r.family, r.t): r for r in parameter_table(16)}
    assert round2(rows["rs", 0].db_over_n) == "0.50"
    assert round2(rows["rs", 4].db_over_n) == "0.67"
    assert round2(rows["rs", 8].db_over_n) == "1"
    assert round2(rows["hermitian", 4].db_over_n) == "0.67"
    assert round2(rows["hermitian", 20].db_over_n) == "1"
    assert len(rows) == 15
    assert table_csv(parameter_table()).startswith("family,n,t,r,r_over_n,db_over_n\n")
