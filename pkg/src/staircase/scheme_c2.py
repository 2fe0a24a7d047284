"""Construction 2: one share format serving every contact size in ``deltas``.

Row block ``u`` (``p_u`` rows, starting at ``offset(u)``) of the message
matrix has columns::

    R (k2) | S (ell) | D_{u,1} | D_{u,2} | ... | D_{u,h-1}

where column block ``v`` spans generator rows ``[k^(h-v+1), k^(h-v))`` and is
nonzero only in blocks ``u <= h - v``.  Stacked over those blocks it stores a
rearranged copy of the "payload" of block ``w = h - v + 1``, namely
``M[rows_w, k2 : k2 + alpha_w]`` (that block's ``S`` and ``D`` entries).

Rearrangement: the payload is read row-major and written into the target
column-major.
"""
from __future__ import annotations

from math import lcm
from typing import Mapping

import numpy as np

from .codes import NestedCodeFamily, Thresholds, family_thresholds
from .linalg import GFMatrix
from .shares import InsufficientShares, ShareSet, StaircaseScheme

__all__ = ["C2Instance", "c2_setup", "c2_share", "c2_preprocess", "c2_reconstruct",
           "AlphaTooLarge", "InsufficientShares", "rearrange", "unrearrange"]

ALPHA_CAP = 2 ** 12


class AlphaTooLarge(ValueError):
    pass


def rearrange(src: np.ndarray, target_shape: tuple[int, int]) -> np.ndarray:
    """Row-major read of ``src``, column-major write into ``target_shape``."""
    if src.size != target_shape[0] * target_shape[1]:
        raise ValueError(f"cannot rearrange {src.shape} into {target_shape}")
    return src.reshape(-1, order="C").reshape(target_shape, order="F")


def unrearrange(target: np.ndarray, src_shape: tuple[int, int]) -> np.ndarray:
    return target.reshape(-1, order="F").reshape(src_shape, order="C")


class C2Instance(StaircaseScheme):
    construction = 2

    def __init__(self, family: NestedCodeFamily, thresholds: Thresholds, alpha_cap: int = ALPHA_CAP):
        self.family = family
        self.field = family.field
        self.G = family.generator
        self.n = family.n
        self.k2 = family.k2
        h = family.h
        if h < 1:
            raise ValueError(f"a scheme needs dims (k2, k1, ...); got {family.dims}")
        self.ell = family.k1 - family.k2
        if self.ell < 1:
            raise ValueError("need k1 > k2 (at least one secret component)")
        # alphas[j-1] = alpha_j = k^(j) - k2, decreasing, alphas[-1] = ell
        self.alphas = tuple(family.level_dim(j) - self.k2 for j in range(1, h + 1))
        alpha = lcm(*self.alphas)
        if alpha > alpha_cap:
            raise AlphaTooLarge(f"alpha = lcm{self.alphas} = {alpha} exceeds the cap {alpha_cap}")
        self.alpha = alpha
        self.t, self.r = thresholds.t, thresholds.r
        self.deltas = tuple(thresholds.deltas)
        self.thresholds = thresholds
        if len(self.deltas) != h:
            raise ValueError(f"expected {h} contact sizes, got {self.deltas}")
        if not 0 <= self.t < self.r <= self.n:
            raise ValueError(f"need 0 <= t < r <= n, got t={self.t}, r={self.r}, n={self.n}")
        if self.deltas[0] > self.n:
            raise ValueError(f"delta_1 = {self.deltas[0]} exceeds n = {self.n}")
        # prefix[j] = ell*alpha/alpha_j rows for j = 1..h, prefix[0] = 0
        self._prefix = (0,) + tuple(self.ell * alpha // a for a in self.alphas)
        self.p = tuple(self._prefix[j] - self._prefix[j - 1] for j in range(1, h + 1))
        assert self._prefix[h] == alpha

    def __repr__(self):
        return (f"C2Instance(q={self.field.q}, n={self.n}, ell={self.ell}, alpha={self.alpha}, "
                f"t={self.t}, r={self.r}, deltas={self.deltas})")

    def alpha_j(self, j: int) -> int:
        self._check_level(j)
        return self.alphas[j - 1]

    def offset(self, u: int) -> int:
        """First row of block ``u`` (= rows in blocks ``1..u-1``)."""
        return self._prefix[u - 1]

    def rows(self, u: int) -> slice:
        return slice(self._prefix[u - 1], self._prefix[u])

    def prefix_rows(self, j: int) -> int:
        self._check_level(j)
        return self._prefix[j]

    def level_dim(self, j: int) -> int:
        return self.family.level_dim(j)

    # -- staircase layout ------------------------------------------------------

    def _payload_cols(self, w: int) -> slice:
        return slice(self.k2, self.k2 + self.alphas[w - 1])

    def _target(self, w: int) -> tuple[slice, slice]:
        """Where block ``w``'s payload is stored (``w >= 2``)."""
        a = self.alphas
        return slice(0, self.offset(w)), slice(self.k2 + a[w - 1], self.k2 + a[w - 2])

    def _write_target(self, M: np.ndarray, w: int):
        rs, cs = self._target(w)
        M[rs, cs] = rearrange(M[self.rows(w), self._payload_cols(w)],
                              (rs.stop - rs.start, cs.stop - cs.start))

    def _read_target(self, M: np.ndarray, w: int):
        rs, cs = self._target(w)
        M[self.rows(w), self._payload_cols(w)] = unrearrange(
            M[rs, cs], (self.p[w - 1], self.alphas[w - 1]))

    def layout(self, S, R) -> np.ndarray:
        M = np.zeros((self.alpha, self.family.dims[-1]), dtype=np.int64)
        M[:, :self.k2] = R
        M[:, self.k2:self.k2 + self.ell] = S
        for w in range(self.h, 1, -1):
            self._write_target(M, w)
        return M

    def payload(self, M: np.ndarray, w: int) -> np.ndarray:
        return M[self.rows(w), self._payload_cols(w)].copy()

    # -- reconstruction --------------------------------------------------------

    def reconstruct(self, shares: Mapping[int, np.ndarray], j: int | None = None) -> np.ndarray:
        """Recover ``S`` from level-``j`` prefixes (or longer) of ``delta_j`` shares.

        Block rows are solved from ``j`` down to 1, each time subtracting the
        already-known staircase columns beyond ``k^(j)``; the payloads of the
        blocks above ``j`` are then read back out of the known columns.
        """
        j = self.level_for(len(shares)) if j is None else j
        parties, W = self._gather(shares, j)
        F = self.field
        k2 = self.k2
        K = self.level_dim(j)
        solver = self._solver(K, parties)
        Gsub = self.G.a[:, parties]
        M = np.zeros((self.alpha, self.family.dims[-1]), dtype=np.int64)
        for u in range(j, 0, -1):
            rs = self.rows(u)
            hi = k2 + self.alphas[u - 1]
            B = W[rs]
            if hi > K:
                B = F.sub(B, F.matmul(M[rs, K:hi], Gsub[K:hi]))
            X = solver.solve(GFMatrix._raw(F, np.ascontiguousarray(B))).a
            M[rs, k2:K] = X[:, k2:K]
            if u >= 2:
                self._write_target(M, u)
        for w in range(j + 1, self.h + 1):
            self._read_target(M, w)
        return M[:, k2:k2 + self.ell].copy()


def c2_setup(family: NestedCodeFamily, deltas=None, thresholds="designed",
             alpha_cap: int = ALPHA_CAP) -> C2Instance:
    """Build the instance.

    ``deltas`` (any order) must dominate the bound for each level; when
    omitted the bounds themselves are used.  ``thresholds`` is
    ``"designed"``, ``"enumerated"`` or a :class:`Thresholds`.
    """
    bound = family_thresholds(family, thresholds) if isinstance(thresholds, str) else thresholds
    if deltas is not None:
        chosen = tuple(sorted((int(d) for d in deltas), reverse=True))
        if len(chosen) != family.h:
            raise ValueError(f"family has {family.h} levels but {len(chosen)} contact sizes given")
        for j, (d, b) in enumerate(zip(chosen, bound.deltas), start=1):
            if d < b:
                raise ValueError(f"delta_{j} = {d} is below its distance bound {b}")
        if chosen[0] > family.n:
            raise ValueError(f"delta_1 = {chosen[0]} exceeds n = {family.n}")
        bound = Thresholds(bound.t, chosen[-1], chosen, bound.method)
    return C2Instance(family, bound, alpha_cap)


def c2_share(inst: C2Instance, S, seed: int, R=None) -> ShareSet:
    return inst.share(S, seed, R)


def c2_preprocess(inst: C2Instance, share, j: int) -> np.ndarray:
    return inst.preprocess(share, j)


def c2_reconstruct(inst: C2Instance, prepped: Mapping[int, np.ndarray], j: int) -> np.ndarray:
    return inst.reconstruct(prepped, j)
