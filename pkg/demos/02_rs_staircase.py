# coding: utf-8

# # A universal Reed-Solomon staircase scheme
#
# GF(13), 12 parties, 4 secret symbols per column, any 6 parties recover.
# The same shares serve contact sizes 6, 8 and 12, and each size downloads
# the least it can.

from fractions import Fraction
from itertools import combinations

import numpy as np

from staircase.analysis import audit_levels
from staircase.codes import rs_family
from staircase.scheme_c2 import c2_setup

inst = c2_setup(rs_family(13, 12, (2, 6, 8, 12)), deltas={6, 8, 12})
print("alpha =", inst.alpha, "column blocks =", inst.alphas, "row blocks =", inst.p)

# How much of each share a level downloads.

for j in range(1, inst.h + 1):
    d = inst.contact_size(j)
    print(f"level {j}: contact {d}, prefix {inst.prefix_rows(j)}/{inst.alpha} "
          f"DB = {inst.db(j)} CO = {inst.co(j)} bound {Fraction(inst.ell * inst.t, d - inst.t)}")

# The zero-staircase in the layout matrix.

rng = np.random.default_rng(1)
S = inst.field.random((inst.alpha, inst.ell), rng)
R = inst.field.random((inst.alpha, inst.k2), rng)
M = inst.layout(S, R)
print((M != 0).astype(int)[::6, ::1])

# Every 8-subset recovers the secret from 40 of 60 symbols per share.

shares = inst.share(S, seed=3)
ok = 0
for I in combinations(range(12), 8):
    got = inst.reconstruct({i: inst.preprocess(shares.share(i), 2) for i in I}, 2)
    ok += np.array_equal(got, S)
print("8-subsets recovered:", ok)

# The audit compares measured download against the lower bound on sampled subsets.

print(audit_levels(inst, subsets_per_level=3).to_csv())
