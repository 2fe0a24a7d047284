# coding: utf-8

# # A small Hermitian scheme over GF(4)
#
# Eight parties each hold two GF(4) symbols. Any 4 of them recover the
# one-symbol secret, a single party learns nothing, and 5 parties can each
# send only half of their share.

from itertools import combinations

import numpy as np

from staircase.analysis import bandwidth_audit, mi_rank_check
from staircase.codes import hermitian_q4_family
from staircase.scheme_c1 import c1_setup

inst = c1_setup(hermitian_q4_family())
print("n, ell, alpha =", inst.n, inst.ell, inst.alpha)
print("t, r, deltas =", inst.t, inst.r, inst.deltas)

# The generator: the first row spans the randomness code, the rest carry the secret.

print(inst.G.a)

# Share a secret. Rows of the share matrix are the two symbols per party.

rng = np.random.default_rng(0)
S = inst.field.random((inst.alpha, inst.ell), rng)
shares = inst.share(S, seed=42)
print("secret column:", S.ravel())
print("share matrix:\n", shares.matrix)

# Plain reconstruction from 4 full shares.

full = {i: shares.share(i) for i in (1, 3, 5, 7)}
print("recovered:", inst.reconstruct(full, inst.h).ravel())

# With 5 parties, each one only sends the first symbol.

light = {i: inst.preprocess(shares.share(i), 1) for i in (0, 2, 4, 6, 7)}
print("sent per party:", {i: v.tolist() for i, v in light.items()})
print("recovered:", inst.reconstruct(light, 1).ravel())

# Bandwidth bookkeeping in secret-alphabet units (one alphabet symbol = alpha field symbols).

for I, j in (((0, 1, 2, 3), 2), ((0, 2, 4, 6, 7), 1)):
    e = bandwidth_audit(inst, I, j)
    print(f"{len(I)} parties: DB = {e.db_measured}, CO = {e.co_measured}, lower bound {e.co_lower}")

# Privacy: no single party leaks anything, but some pairs do.

print("max leak from one party:", max(mi_rank_check(inst, [0], [i]) for i in range(8)))
leaky = [J for J in combinations(range(8), 2) if mi_rank_check(inst, [0], J) > 0]
print("leaking pairs:", len(leaky), "of 28, e.g.", leaky[:3])
