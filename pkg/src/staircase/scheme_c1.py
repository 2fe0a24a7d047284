"""Construction 1: a single efficient contact size ``delta`` with alphabet
size ``alpha = k - k2``.

Layout of the message matrix multiplied by ``G = (G2; Gc; G3)``::

    ( R1 | S1 | S2^T )     ell rows
    ( R2 | S2 |  0   )     alpha - ell rows

Contacting ``delta`` parties, each sends only its first ``ell`` entries.
"""
from __future__ import annotations

from typing import Mapping

import numpy as np

from .codes import NestedCodeFamily, Thresholds, family_thresholds
from .linalg import GFMatrix
from .shares import InsufficientShares, ShareSet, StaircaseScheme

__all__ = ["C1Instance", "c1_setup", "c1_share", "c1_reconstruct_full", "c1_preprocess",
           "c1_reconstruct_efficient", "InsufficientShares"]


def _gm(F, a) -> GFMatrix:
    return GFMatrix._raw(F, np.ascontiguousarray(a))


class C1Instance(StaircaseScheme):
    construction = 1

    def __init__(self, family: NestedCodeFamily, thresholds: Thresholds):
        if family.h not in (1, 2):
            raise ValueError(f"construction 1 takes dims (k2, k1[, k]); got {family.dims}")
        self.family = family
        self.field = family.field
        self.G = family.generator
        self.n = family.n
        self.k2, self.k1 = family.k2, family.k1
        self.k = family.dims[-1]
        self.ell = self.k1 - self.k2
        self.alpha = self.k - self.k2
        if self.ell < 1:
            raise ValueError("need k1 > k2 (at least one secret component)")
        self.t, self.r = thresholds.t, thresholds.r
        self.deltas = tuple(thresholds.deltas)
        self.thresholds = thresholds
        if len(self.deltas) != family.h:
            raise ValueError(f"expected {family.h} contact sizes, got {self.deltas}")
        if not 0 <= self.t < self.r <= self.n:
            raise ValueError(f"need 0 <= t < r <= n, got t={self.t}, r={self.r}, n={self.n}")
        if self.deltas[0] > self.n:
            raise ValueError(f"delta = {self.deltas[0]} exceeds n = {self.n}")

    @property
    def delta(self) -> int:
        return self.deltas[0]

    def __repr__(self):
        return (f"C1Instance(q={self.field.q}, n={self.n}, ell={self.ell}, alpha={self.alpha}, "
                f"t={self.t}, r={self.r}, delta={self.delta})")

    def prefix_rows(self, j: int) -> int:
        self._check_level(j)
        return self.ell if j < self.h else self.alpha

    def level_dim(self, j: int) -> int:
        self._check_level(j)
        return self.k if j < self.h else self.k1

    def layout(self, S, R) -> np.ndarray:
        ell, k2, k1 = self.ell, self.k2, self.k1
        M = np.zeros((self.alpha, self.k), dtype=np.int64)
        M[:, :k2] = R
        M[:, k2:k1] = S
        M[:ell, k1:] = S[ell:].T
        return M

    def reconstruct(self, shares: Mapping[int, np.ndarray], j: int | None = None) -> np.ndarray:
        j = self.level_for(len(shares)) if j is None else j
        if j == self.h:
            return self._reconstruct_full(shares)
        return self._reconstruct_efficient(shares)

    def _reconstruct_full(self, shares):
        ell, k2, k1 = self.ell, self.k2, self.k1
        parties, W = self._gather(shares, self.h)
        solver = self._solver(k1, parties)
        F = self.field
        S = np.zeros((self.alpha, ell), dtype=np.int64)
        if self.alpha > ell:
            X2 = solver.solve(_gm(F, W[ell:])).a
            S[ell:] = X2[:, k2:k1]
            G3 = self.G.a[k1:][:, parties]
            top = F.sub(W[:ell], F.matmul(S[ell:].T, G3))
        else:
            top = W[:ell]
        S[:ell] = solver.solve(_gm(F, top)).a[:, k2:k1]
        return S

    def _reconstruct_efficient(self, shares):
        ell, k2, k1 = self.ell, self.k2, self.k1
        parties, W = self._gather(shares, 1)
        X = self._solver(self.k, parties).solve(_gm(self.field, W)).a
        S = np.zeros((self.alpha, ell), dtype=np.int64)
        S[:ell] = X[:, k2:k1]
        S[ell:] = X[:, k1:].T
        return S


def c1_setup(family: NestedCodeFamily, thresholds="designed") -> C1Instance:
    """Build the instance; ``thresholds`` is ``"designed"``, ``"enumerated"``
    or an explicit :class:`Thresholds`."""
    if isinstance(thresholds, str):
        thresholds = family_thresholds(family, thresholds)
    return C1Instance(family, thresholds)


def c1_share(inst: C1Instance, S, seed: int, R=None) -> ShareSet:
    return inst.share(S, seed, R)


def c1_reconstruct_full(inst: C1Instance, shares: Mapping[int, np.ndarray]) -> np.ndarray:
    return inst.reconstruct(shares, inst.h)


def c1_preprocess(inst: C1Instance, share) -> np.ndarray:
    return inst.preprocess(share, 1)


def c1_reconstruct_efficient(inst: C1Instance, prepped: Mapping[int, np.ndarray]) -> np.ndarray:
    if inst.h == 1:
        return inst.reconstruct(prepped, 1)
    return inst._reconstruct_efficient(prepped)
