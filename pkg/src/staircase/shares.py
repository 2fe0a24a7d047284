"""Pieces shared by both staircase constructions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .gf import FiniteField
from .linalg import GFMatrix, LinearSolver


class InsufficientShares(ValueError):
    pass


def make_rng(seed: int, block: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, block)``; blocks are independent."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(block)])))


@dataclass
class ShareSet:
    """Columns of the share matrix; ``matrix[:, i]`` is party ``i``'s share."""
    field: FiniteField
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    def share(self, i: int) -> np.ndarray:
        return self.matrix[:, i].copy()

    def subset(self, parties) -> dict[int, np.ndarray]:
        return {int(i): self.share(int(i)) for i in parties}

    def __eq__(self, other):
        return (isinstance(other, ShareSet) and self.field == other.field
                and np.array_equal(self.matrix, other.matrix))


class StaircaseScheme:
    """Interface common to both constructions.

    Levels are numbered ``1..h``.  Level ``j`` contacts ``deltas[j-1]`` parties
    and downloads the first ``prefix_rows(j)`` entries of each share; level
    ``h`` is plain reconstruction from ``r`` full shares.
    """

    construction: int
    field: FiniteField
    n: int
    ell: int
    alpha: int
    k2: int
    t: int
    r: int
    deltas: tuple[int, ...]
    G: GFMatrix

    @property
    def h(self) -> int:
        return len(self.deltas)

    def prefix_rows(self, j: int) -> int:
        raise NotImplementedError

    def level_dim(self, j: int) -> int:
        raise NotImplementedError

    def contact_size(self, j: int) -> int:
        self._check_level(j)
        return self.deltas[j - 1]

    def _check_level(self, j: int):
        if not 1 <= j <= self.h:
            raise ValueError(f"level {j} outside 1..{self.h}")

    def layout(self, S: np.ndarray, R: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def encode(self, S, R) -> np.ndarray:
        """Share matrix ``layout(S, R) @ G`` (alpha x n)."""
        S = self._check_secret(S)
        R = np.asarray(R, dtype=np.int64)
        if R.shape != (self.alpha, self.k2):
            raise ValueError(f"randomness must be {self.alpha}x{self.k2}, got {R.shape}")
        return self.field.matmul(self.layout(S, R), self.G.a)

    def _check_secret(self, S) -> np.ndarray:
        S = np.asarray(S, dtype=np.int64)
        if S.shape != (self.alpha, self.ell):
            raise ValueError(f"secret must be {self.alpha}x{self.ell}, got {S.shape}")
        if S.size and (S.min() < 0 or S.max() >= self.field.q):
            raise ValueError("secret entries outside the field")
        return S

    def share(self, S, seed: int, R=None, block: int = 0) -> ShareSet:
        S = self._check_secret(S)
        if R is None:
            R = self.field.random((self.alpha, self.k2), make_rng(seed, block))
        return ShareSet(self.field, self.encode(S, R))

    def preprocess(self, share, j: int) -> np.ndarray:
        self._check_level(j)
        share = np.asarray(share, dtype=np.int64)
        if share.shape != (self.alpha,):
            raise ValueError(f"share must have {self.alpha} entries, got {share.shape}")
        return share[:self.prefix_rows(j)].copy()

    def _gather(self, shares: Mapping[int, np.ndarray], j: int) -> tuple[list[int], np.ndarray]:
        self._check_level(j)
        parties = sorted(int(i) for i in shares)
        if len(set(parties)) != len(parties):
            raise ValueError("duplicate party index")
        if any(not 0 <= i < self.n for i in parties):
            raise ValueError(f"party index outside 0..{self.n - 1}")
        need = self.deltas[j - 1]
        if len(parties) < need:
            raise InsufficientShares(
                f"level {j} needs {need} shares, got {len(parties)} "
                f"(smallest usable contact size is r = {self.r})")
        rows = self.prefix_rows(j)
        cols = []
        for i in parties:
            v = np.asarray(shares[i], dtype=np.int64)
            if v.shape[0] < rows:
                raise ValueError(f"share of party {i} has {v.shape[0]} entries, level {j} needs {rows}")
            cols.append(v[:rows])
        return parties, np.stack(cols, axis=1)

    def reconstruct(self, shares: Mapping[int, np.ndarray], j: int | None = None) -> np.ndarray:
        raise NotImplementedError

    def _solver(self, k: int, parties: list[int]) -> LinearSolver:
        return LinearSolver(self.G[:k, :].columns(parties))

    # -- bandwidth accounting ------------------------------------------------

    def downloaded_symbols(self, j: int, contacted: int | None = None) -> int:
        """q-ary symbols transmitted at level ``j``."""
        contacted = self.contact_size(j) if contacted is None else contacted
        return contacted * self.prefix_rows(j)

    def db(self, j: int, contacted: int | None = None) -> Fraction:
        """Decoding bandwidth at level ``j`` in alphabet symbols (units of q^alpha)."""
        return Fraction(self.downloaded_symbols(j, contacted), self.alpha)

    def co(self, j: int, contacted: int | None = None) -> Fraction:
        return self.db(j, contacted) - self.ell

    def db_formula(self, j: int) -> Fraction:
        return Fraction(self.ell * self.contact_size(j), self.level_dim(j) - self.k2)

    def co_formula(self, j: int) -> Fraction:
        d = self.contact_size(j)
        k = self.level_dim(j)
        return Fraction(self.ell * (d - k + self.k2), k - self.k2)

    def level_for(self, available: int) -> int:
        """Cheapest level whose contact size fits in ``available`` shares."""
        usable = [j for j in range(1, self.h + 1) if self.deltas[j - 1] <= available]
        if not usable:
            raise InsufficientShares(
                f"{available} shares available; reconstruction needs at least r = {self.r}")
        return min(usable, key=lambda j: (self.db(j, self.deltas[j - 1]), j))

    # -- exact linear map ----------------------------------------------------

    @property
    def num_random(self) -> int:
        return self.alpha * self.k2

    @property
    def num_secret(self) -> int:
        return self.alpha * self.ell

    def secret_var(self, a: int, i: int) -> int:
        """Row of :meth:`linear_map` for secret entry ``S[a, i]``."""
        return self.num_random + a * self.ell + i

    def linear_map(self) -> np.ndarray:
        """Matrix ``L`` with ``vars @ L == shares``.

        Rows: ``R`` entries row-major, then ``S`` entries row-major.
        Columns: share 0's ``alpha`` entries, then share 1's, and so on.
        """
        cached = getattr(self, "_lmap", None)
        if cached is not None:
            return cached
        V = self.num_random + self.num_secret
        L = np.zeros((V, self.n * self.alpha), dtype=np.int64)
        zR = np.zeros((self.alpha, self.k2), dtype=np.int64)
        zS = np.zeros((self.alpha, self.ell), dtype=np.int64)
        for v in range(V):
            R, S = zR.copy(), zS.copy()
            if v < self.num_random:
                R.flat[v] = 1
            else:
                S.flat[v - self.num_random] = 1
            L[v] = self.encode(S, R).T.reshape(-1)
        self._lmap = L
        return L

    def share_columns(self, parties, rows: int | None = None) -> list[int]:
        """Columns of :meth:`linear_map` holding the first ``rows`` entries of the given shares."""
        rows = self.alpha if rows is None else rows
        return [i * self.alpha + a for i in parties for a in range(rows)]
