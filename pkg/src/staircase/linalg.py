"""Dense exact linear algebra over GF(q).

Row-vector convention throughout: a codeword is ``message @ G``.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .gf import FiniteField, FieldMismatchError

ENUMERATION_CAP = 2 ** 24


class InconsistentSystem(ValueError):
    """Raised when ``X @ A = B`` has no solution."""


class EnumerationCapExceeded(ValueError):
    pass


class GFMatrix:
    """A dense matrix over a finite field, stored as an int64 array of encodings."""

    __slots__ = ("field", "a")

    def __init__(self, field: FiniteField, data):
        a = np.array(data, dtype=np.int64)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {a.shape}")
        if a.size and (a.min() < 0 or a.max() >= field.q):
            raise ValueError(f"entries outside [0, {field.q})")
        self.field = field
        self.a = a

    @classmethod
    def _raw(cls, field, a) -> "GFMatrix":
        m = object.__new__(cls)
        m.field = field
        m.a = a
        return m

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls._raw(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field, n):
        return cls._raw(field, np.eye(n, dtype=np.int64))

    @classmethod
    def random(cls, field, rows, cols, rng: np.random.Generator):
        return cls._raw(field, field.random((rows, cols), rng))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def T(self) -> "GFMatrix":
        return GFMatrix._raw(self.field, self.a.T.copy())

    def _check(self, other: "GFMatrix"):
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other: "GFMatrix") -> "GFMatrix":
        self._check(other)
        return GFMatrix._raw(self.field, self.field.matmul(self.a, other.a))

    def __add__(self, other):
        self._check(other)
        return GFMatrix._raw(self.field, self.field.add(self.a, other.a))

    def __sub__(self, other):
        self._check(other)
        return GFMatrix._raw(self.field, self.field.sub(self.a, other.a))

    def __neg__(self):
        return GFMatrix._raw(self.field, self.field.neg(self.a))

    def scale(self, c: int) -> "GFMatrix":
        return GFMatrix._raw(self.field, self.field.mul(self.a, c))

    def __getitem__(self, key) -> "GFMatrix":
        sub = self.a[key]
        if sub.ndim != 2:
            raise IndexError("GFMatrix indexing must keep two dimensions")
        return GFMatrix._raw(self.field, sub.copy())

    def columns(self, idx: Sequence[int]) -> "GFMatrix":
        return GFMatrix._raw(self.field, self.a[:, list(idx)])

    def __eq__(self, other):
        return (isinstance(other, GFMatrix) and self.field == other.field
                and self.a.shape == other.a.shape and bool(np.array_equal(self.a, other.a)))

    __hash__ = None

    def __repr__(self):
        return f"GFMatrix({self.field!r}, {self.a.tolist()})"

    def is_zero(self) -> bool:
        return not self.a.any()

    def to_text(self) -> str:
        lines = [f"matrix {self.rows} {self.cols}"]
        lines += [" ".join(str(int(v)) for v in row) for row in self.a]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_lines(cls, field: FiniteField, lines: list[str]) -> tuple["GFMatrix", int]:
        """Parse a ``matrix <rows> <cols>`` block starting at ``lines[0]``.
        Returns the matrix and the number of lines consumed."""
        head = lines[0].split()
        if len(head) != 3 or head[0] != "matrix":
            raise ValueError(f"expected 'matrix <rows> <cols>', got {lines[0]!r}")
        rows, cols = int(head[1]), int(head[2])
        if len(lines) < 1 + rows:
            raise ValueError(f"matrix block truncated: expected {rows} rows")
        data = []
        for i, line in enumerate(lines[1:1 + rows]):
            vals = [int(v) for v in line.split()]
            if len(vals) != cols:
                raise ValueError(f"matrix row {i} has {len(vals)} entries, expected {cols}")
            data.append(vals)
        return cls(field, np.array(data, dtype=np.int64).reshape(rows, cols)), 1 + rows

    @classmethod
    def from_text(cls, field: FiniteField, text: str) -> "GFMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        return cls.from_lines(field, lines)[0]


def vstack(*ms: GFMatrix) -> GFMatrix:
    F = ms[0].field
    for m in ms[1:]:
        ms[0]._check(m)
    cols = max(m.cols for m in ms)
    parts = [m.a if m.rows else np.zeros((0, cols), dtype=np.int64) for m in ms]
    return GFMatrix._raw(F, np.vstack(parts))


def hstack(*ms: GFMatrix) -> GFMatrix:
    for m in ms[1:]:
        ms[0]._check(m)
    return GFMatrix._raw(ms[0].field, np.hstack([m.a for m in ms]))


def _rref_array(F: FiniteField, A: np.ndarray, ncols: int | None = None):
    """In-place reduced row echelon form over the first ``ncols`` columns.

    Pivot rule: leftmost column with a nonzero entry, first such row,
    pivot scaled to 1.
    """
    rows = A.shape[0]
    ncols = A.shape[1] if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        lead = A[r, c]
        if lead != 1:
            A[r] = F.mul(A[r], F.inv(lead))
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = F.sub(A[hit], F.mul(col[hit, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rref(M: GFMatrix) -> tuple[GFMatrix, list[int], int]:
    A, pivots = _rref_array(M.field, M.a.copy())
    return GFMatrix._raw(M.field, A), pivots, len(pivots)


def rank(M: GFMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    # eliminate along the shorter side
    a = M.a if M.rows <= M.cols else M.a.T
    return len(_rref_array(M.field, a.copy())[1])


def row_basis(M: GFMatrix) -> GFMatrix:
    R, _, r = rref(M)
    return R[:r, :] if r else GFMatrix.zeros(M.field, 0, M.cols)


def right_kernel(M: GFMatrix) -> GFMatrix:
    """Rows spanning ``{y : M @ y^T = 0}``."""
    F = M.field
    n = M.cols
    if M.rows == 0:
        return GFMatrix.identity(F, n)
    R, pivots, r = rref(M)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        K[i, f] = 1
        for row, pc in enumerate(pivots):
            K[i, pc] = F.neg(R.a[row, f])
    return GFMatrix._raw(F, K)


def left_kernel(M: GFMatrix) -> GFMatrix:
    """Rows spanning ``{x : x @ M = 0}``."""
    return right_kernel(M.T)


class LinearSolver:
    """Precomputed elimination for repeated solves of ``X @ A = B``.

    Returns *a* solution (free variables set to zero) and raises
    :class:`InconsistentSystem` when none exists.
    """

    def __init__(self, A: GFMatrix):
        F = A.field
        self.field = F
        self.k, self.n = A.shape
        # [A^T | I_n] reduced on the A^T block gives T with T A^T = rref(A^T)
        aug = np.hstack([A.a.T, np.eye(self.n, dtype=np.int64)])
        aug, pivots = _rref_array(F, aug, ncols=self.k)
        self.pivots = pivots
        self.rank = len(pivots)
        self._T = aug[:, self.k:]

    def solve(self, B: GFMatrix) -> GFMatrix:
        F = self.field
        if B.cols != self.n:
            raise ValueError(f"right-hand side has {B.cols} columns, expected {self.n}")
        TB = F.matmul(self._T, B.a.T)  # n x m
        if TB[self.rank:].any():
            raise InconsistentSystem("no X with X @ A = B")
        X = np.zeros((self.k, B.rows), dtype=np.int64)
        X[self.pivots] = TB[:self.rank]
        return GFMatrix._raw(F, X.T.copy())


def solve_any(A: GFMatrix, B: GFMatrix) -> GFMatrix:
    """Some ``X`` with ``X @ A = B``; :class:`InconsistentSystem` if none."""
    A._check(B)
    return LinearSolver(A).solve(B)


def in_row_space(M: GFMatrix, v: GFMatrix) -> bool:
    return rank(vstack(M, v)) == rank(M)


class LinearCode:
    """A linear code given by a full-row-rank generator matrix."""

    def __init__(self, generator: GFMatrix):
        if generator.rows and rank(generator) != generator.rows:
            raise ValueError("generator matrix must have full row rank")
        self.generator = generator

    @classmethod
    def from_rows(cls, M: GFMatrix) -> "LinearCode":
        return cls(row_basis(M))

    @classmethod
    def full(cls, field, n) -> "LinearCode":
        return cls(GFMatrix.identity(field, n))

    @classmethod
    def zero(cls, field, n) -> "LinearCode":
        return cls(GFMatrix.zeros(field, 0, n))

    @property
    def field(self):
        return self.generator.field

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    def __repr__(self):
        return f"LinearCode([{self.n}, {self.k}] over {self.field!r})"

    def contains(self, other: "LinearCode") -> bool:
        if other.k == 0:
            return True
        return rank(vstack(self.generator, other.generator)) == self.k

    def same_as(self, other: "LinearCode") -> bool:
        return self.k == other.k and self.contains(other)

    def is_degenerate(self) -> bool:
        return bool((~self.generator.a.any(axis=0)).any()) if self.k else self.n > 0

    def codewords(self, cap: int = ENUMERATION_CAP) -> np.ndarray:
        """All ``q**k`` codewords as rows of an int array."""
        F = self.field
        if F.q ** self.k > cap:
            raise EnumerationCapExceeded(f"q^k = {F.q}^{self.k} exceeds cap {cap}")
        return _span(F, self.generator.a)


def _span(F: FiniteField, G: np.ndarray) -> np.ndarray:
    words = np.zeros((1, G.shape[1]), dtype=np.int64)
    scalars = np.arange(F.q, dtype=np.int64)
    for g in G:
        multiples = F.mul(scalars[:, None], g[None, :])  # q x n
        words = F.add(words[None, :, :], multiples[:, None, :]).reshape(-1, G.shape[1])
    return words


def _index_list(I: Iterable[int], n: int) -> list[int]:
    I = sorted(set(int(i) for i in I))
    if not I:
        raise ValueError("index set must be nonempty")
    if I[0] < 0 or I[-1] >= n:
        raise ValueError(f"index set outside [0, {n})")
    return I


def restrict(C: LinearCode, I: Iterable[int]) -> LinearCode:
    """``{c_I : c in C}``, re-basised to full row rank."""
    I = _index_list(I, C.n)
    return LinearCode.from_rows(C.generator.columns(I))


def shorten(C: LinearCode, I: Iterable[int]) -> LinearCode:
    """``{c_I : c in C, c vanishes outside I}``."""
    I = _index_list(I, C.n)
    comp = [i for i in range(C.n) if i not in set(I)]
    if not comp or C.k == 0:
        return LinearCode.from_rows(C.generator.columns(I)) if C.k else LinearCode.zero(C.field, len(I))
    N = left_kernel(C.generator.columns(comp))
    if N.rows == 0:
        return LinearCode.zero(C.field, len(I))
    return LinearCode.from_rows((N @ C.generator).columns(I))


def dual(C: LinearCode) -> LinearCode:
    if C.k == 0:
        return LinearCode.full(C.field, C.n)
    return LinearCode(right_kernel(C.generator))


def complement_rows(C1: LinearCode, C2: LinearCode) -> GFMatrix:
    """Rows of ``C1``'s generator extending a basis of ``C2`` to one of ``C1``."""
    F = C1.field
    basis = C2.generator
    extra = []
    r = C2.k
    for i in range(C1.k):
        cand = vstack(basis, C1.generator[i:i + 1, :]) if basis.rows else C1.generator[i:i + 1, :]
        rk = rank(cand)
        if rk > r:
            basis, r = cand, rk
            extra.append(i)
    return C1.generator[extra, :] if extra else GFMatrix.zeros(F, 0, C1.n)


def min_distance_pair(C1: LinearCode, C2: LinearCode | None = None,
                      cap: int = ENUMERATION_CAP) -> int:
    """Exact ``d(C1, C2) = min{wt(c) : c in C1, c not in C2}`` by enumeration.

    ``C2=None`` means the zero code.  Raises if ``C2`` is not a subcode of
    ``C1`` or if ``q**dim(C1)`` exceeds ``cap``.
    """
    F = C1.field
    if C2 is None:
        C2 = LinearCode.zero(F, C1.n)
    if C2.n != C1.n:
        raise ValueError("codes have different lengths")
    if not C1.contains(C2):
        raise ValueError("C2 is not contained in C1")
    if C1.k == C2.k:
        raise ValueError("C1 = C2: the coset distance is undefined")
    if F.q ** C1.k > cap:
        raise EnumerationCapExceeded(f"q^k1 = {F.q}^{C1.k} exceeds cap {cap}")
    W2 = _span(F, C2.generator.a) if C2.k else np.zeros((1, C1.n), dtype=np.int64)
    Gc = complement_rows(C1, C2).a
    Wc = _span(F, Gc)[1:]  # skip the zero combination
    best = C1.n
    chunk = max(1, 2 ** 22 // (W2.shape[0] * C1.n))
    for s in range(0, Wc.shape[0], chunk):
        block = F.add(Wc[s:s + chunk, None, :], W2[None, :, :])
        best = min(best, int((block != 0).sum(axis=2).min()))
        if best == 1:
            break
    return best


def min_distance(C: LinearCode, cap: int = ENUMERATION_CAP) -> int:
    return min_distance_pair(C, None, cap)
