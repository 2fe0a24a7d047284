# coding: utf-8

# # Strong security of derived schemes
#
# Deriving a scheme from a longer code (secret in the first ell coordinates)
# protects each individual secret symbol beyond the plain privacy threshold.

from staircase.analysis import mi_rank_check
from staircase.codes import hermitian_curve
from staircase.massey import ag_strong_scheme, mds_strong_scheme

scheme, report, fam = mds_strong_scheme(11, 8, 3, 5, (5, 7))
print("MDS parents over GF(11): t, r, ell =", scheme.t, scheme.r, scheme.ell)
print(report.to_text())

# Three shares reveal nothing about the whole secret, four shares reveal
# nothing about any single symbol, five shares do.

print("leak I={0,1}, 3 shares:", mi_rank_check(scheme, [0, 1], [0, 1, 2]))
print("leak I={0},   4 shares:", mi_rank_check(scheme, [0], [0, 1, 2, 3]))
print("leak I={0},   5 shares:", mi_rank_check(scheme, [0], [0, 1, 2, 3, 4]))

# The same derivation from a Hermitian curve pays 2g in the bound.

ag, ag_report, _ = ag_strong_scheme(hermitian_curve(2), 7, 2, 5, (5, 6))
print("Hermitian u=2: t, r, ell =", ag.t, ag.r, ag.ell)
print(ag_report.to_text())
