"""Nested code families: Reed-Solomon, one-point Hermitian, explicit matrices.

A family is a single generator matrix whose row prefixes generate the nested
codes.  ``dims = (k2, k1, k^(h-1), ..., k^(1))`` lists the prefix lengths in
ascending order, so the smallest code (the randomness code) comes first and
the largest code (the top level) last.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .gf import FiniteField, gf, prime_power
from .linalg import (GFMatrix, LinearCode, dual, min_distance_pair, rank,
                     ENUMERATION_CAP)


@dataclass(frozen=True)
class Thresholds:
    """Privacy ``t``, reconstruction ``r`` and one contact size per level.

    ``deltas[0]`` belongs to the top level and ``deltas[-1] == r`` to the
    ``C1`` level, so ``deltas`` is strictly decreasing.
    """
    t: int
    r: int
    deltas: tuple[int, ...]
    method: str = "designed"

    def __post_init__(self):
        if self.deltas[-1] != self.r:
            raise ValueError("the last contact size must equal r")
        if any(a <= b for a, b in zip(self.deltas, self.deltas[1:])):
            raise ValueError(f"contact sizes must be strictly decreasing: {self.deltas}")


@dataclass
class NestedCodeFamily:
    field: FiniteField
    generator: GFMatrix
    dims: tuple[int, ...]
    kind: str = "explicit"
    genus: int | None = None
    degrees: tuple[int, ...] | None = None
    points: list | None = None
    curve_u: int | None = None
    design: Thresholds | None = None
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.dims = tuple(int(k) for k in self.dims)
        # a single dimension is allowed for parent chains of strongly secure
        # schemes; the schemes themselves need at least two
        if not self.dims:
            raise ValueError("a code family needs at least one dimension")
        if self.dims[0] < 0 or any(a >= b for a, b in zip(self.dims, self.dims[1:])):
            raise ValueError(f"dims must be strictly increasing and nonnegative: {self.dims}")
        if self.generator.rows != self.dims[-1]:
            raise ValueError(f"generator has {self.generator.rows} rows, top dim is {self.dims[-1]}")
        if self.generator.field != self.field:
            raise ValueError("generator is over a different field")
        if rank(self.generator) != self.generator.rows:
            raise ValueError("generator matrix of the top code is not of full row rank")
        zero_cols = np.flatnonzero(~self.generator.a.any(axis=0))
        if zero_cols.size:
            raise ValueError(f"top code is degenerate: zero column(s) {zero_cols.tolist()}")
        if self.degrees is not None:
            self.degrees = tuple(int(d) for d in self.degrees)
            if len(self.degrees) != len(self.dims):
                raise ValueError("degrees and dims must have the same length")

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def h(self) -> int:
        """Number of levels above the randomness code (``C1`` counts as one)."""
        return len(self.dims) - 1

    @property
    def k2(self) -> int:
        return self.dims[0]

    @property
    def k1(self) -> int:
        return self.dims[1]

    def level_dim(self, j: int) -> int:
        """``k^(j)`` for ``j = 1..h``; ``j = h`` is ``k1`` and ``j = 1`` the top."""
        if not 1 <= j <= self.h:
            raise ValueError(f"level {j} outside 1..{self.h}")
        return self.dims[self.h - j + 1]

    def code(self, k: int) -> LinearCode:
        if k == 0:
            return LinearCode.zero(self.field, self.n)
        return LinearCode(self.generator[:k, :])

    def truncated(self, dims: Sequence[int]) -> "NestedCodeFamily":
        """The same generator viewed with a different (sub)sequence of dims."""
        dims = tuple(dims)
        degrees = None
        if self.degrees is not None:
            lookup = dict(zip(self.dims, self.degrees))
            if all(k in lookup for k in dims):
                degrees = tuple(lookup[k] for k in dims)
        return NestedCodeFamily(self.field, self.generator[:dims[-1], :], dims, self.kind,
                                self.genus, degrees, self.points, self.curve_u, None,
                                dict(self.meta))


# -- threshold parameters ---------------------------------------------------

def designed_thresholds(family: NestedCodeFamily) -> Thresholds:
    """Thresholds guaranteed by the Goppa-type bounds.

    With genus ``g`` and pole orders ``mu``: ``t = mu2 - 2g + 1``,
    ``r = mu1 + 1``, ``delta_j = mu^(j) + 1``.  Reed-Solomon is the ``g = 0``,
    ``mu = k - 1`` case, which gives ``t = k2``, ``r = k1``, ``delta_j = k^(j)``.
    """
    if family.design is not None:
        return family.design
    if family.degrees is None or family.genus is None:
        raise ValueError(f"family of kind {family.kind!r} has no designed parameters; "
                         "use enumerated thresholds")
    g = family.genus
    mus = family.degrees
    t = max(mus[0] - 2 * g + 1, 0) if family.k2 > 0 else 0
    deltas = tuple(mu + 1 for mu in reversed(mus[1:]))
    return Thresholds(t=t, r=deltas[-1], deltas=deltas, method="designed")


def enumerated_thresholds(family: NestedCodeFamily, cap: int = ENUMERATION_CAP) -> Thresholds:
    """Thresholds from exact coset distances (enumeration, capped)."""
    n = family.n
    C2 = family.code(family.k2)
    top = family.code(family.dims[-1])
    t = min_distance_pair(dual(C2), dual(top), cap) - 1
    deltas = tuple(n - min_distance_pair(family.code(family.level_dim(j)), C2, cap) + 1
                   for j in range(1, family.h + 1))
    return Thresholds(t=t, r=deltas[-1], deltas=deltas, method="enumerated")


def family_thresholds(family: NestedCodeFamily, method: str = "designed") -> Thresholds:
    if method == "designed":
        return designed_thresholds(family)
    if method == "enumerated":
        return enumerated_thresholds(family)
    raise ValueError(f"unknown threshold method {method!r}")


# -- Reed-Solomon -----------------------------------------------------------

def vandermonde(field: FiniteField, points: Sequence[int], k: int) -> GFMatrix:
    pts = np.asarray(points, dtype=np.int64)
    rows = [field.power(pts, i) for i in range(k)]
    return GFMatrix(field, np.array(rows, dtype=np.int64).reshape(k, len(pts)))


def rs_nested(field: FiniteField, points: Sequence[int], dims: Sequence[int]) -> NestedCodeFamily:
    """Nested Reed-Solomon codes: row ``i`` of the generator evaluates ``x**i``."""
    points = [int(p) for p in points]
    if len(set(points)) != len(points):
        raise ValueError("evaluation points must be distinct")
    if any(not 0 <= p < field.q for p in points):
        raise ValueError("evaluation point outside the field")
    dims = tuple(int(k) for k in dims)
    if dims[-1] > len(points):
        raise ValueError(f"top dimension {dims[-1]} exceeds length {len(points)}")
    G = vandermonde(field, points, dims[-1])
    return NestedCodeFamily(field, G, dims, kind="rs", genus=0,
                            degrees=tuple(k - 1 for k in dims), points=points)


def rs_family(q: int, n: int, dims: Sequence[int], first_point: int = 1) -> NestedCodeFamily:
    """RS family over GF(q) evaluated at the element codes ``first_point, ...``."""
    F = gf(q)
    if first_point + n > q:
        raise ValueError(f"GF({q}) has too few elements for {n} points from {first_point}")
    return rs_nested(F, range(first_point, first_point + n), dims)


# -- Hermitian curves -------------------------------------------------------

@dataclass(frozen=True)
class HermitianCurve:
    u: int
    field: FiniteField
    points: tuple[tuple[int, int], ...]

    @property
    def genus(self) -> int:
        return self.u * (self.u - 1) // 2

    @property
    def num_rational_points(self) -> int:
        """Affine points plus the single point at infinity."""
        return len(self.points) + 1


def hermitian_curve(u: int) -> HermitianCurve:
    """Affine points of ``y^u + y = x^(u+1)`` over GF(u^2), lexicographic by code."""
    prime_power(u)  # raises on non prime powers
    F = gf(u * u)
    xs = np.arange(F.q, dtype=np.int64)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    lhs = F.add(F.power(Y, u), Y)
    rhs = F.power(X, u + 1)
    ok = lhs == rhs
    pts = tuple((int(x), int(y)) for x, y in zip(X[ok], Y[ok]))
    if len(pts) != u ** 3:  # pragma: no cover - a sanity net for the field code
        raise AssertionError(f"found {len(pts)} affine points, expected {u ** 3}")
    return HermitianCurve(u, F, pts)


def hermitian_monomials(u: int, mu: int) -> list[tuple[int, int]]:
    """Exponents ``(i, j)`` of ``x^i y^j`` with ``j < u`` and pole order
    ``i*u + j*(u+1) <= mu``, sorted by pole order."""
    out = []
    for j in range(u):
        i = 0
        while i * u + j * (u + 1) <= mu:
            out.append((i, j))
            i += 1
    out.sort(key=lambda e: (e[0] * u + e[1] * (u + 1), e[1]))
    return out


def _select_points(curve: HermitianCurve, points) -> list[tuple[int, int]]:
    if points is None:
        return list(curve.points)
    if isinstance(points, int):
        if not 1 <= points <= len(curve.points):
            raise ValueError(f"curve has {len(curve.points)} affine points, asked for {points}")
        return list(curve.points[:points])
    pts = [tuple(int(c) for c in p) for p in points]
    bad = [p for p in pts if p not in set(curve.points)]
    if bad:
        raise ValueError(f"not points of the curve: {bad}")
    if len(set(pts)) != len(pts):
        raise ValueError("repeated evaluation points")
    return pts


def hermitian_evaluation(curve: HermitianCurve, mu: int, points) -> GFMatrix:
    F = curve.field
    pts = _select_points(curve, points)
    xs = np.array([p[0] for p in pts], dtype=np.int64)
    ys = np.array([p[1] for p in pts], dtype=np.int64)
    rows = [F.mul(F.power(xs, i), F.power(ys, j)) for i, j in hermitian_monomials(curve.u, mu)]
    if not rows:
        return GFMatrix.zeros(F, 0, len(pts))
    return GFMatrix(F, np.array(rows, dtype=np.int64))


def hermitian_code(curve: HermitianCurve, mu: int, points=None) -> LinearCode:
    """One-point code ``C(D, mu Q)``; dimension ``mu - g + 1`` in the valid range."""
    pts = _select_points(curve, points)
    g = curve.genus
    if not 2 * g - 2 < mu < len(pts):
        raise ValueError(f"pole order {mu} outside ({2 * g - 2}, {len(pts)})")
    return LinearCode(hermitian_evaluation(curve, mu, pts))


def hermitian_nested(curve: HermitianCurve, degrees: Sequence[int], points=None) -> NestedCodeFamily:
    """Nested one-point codes for pole orders ``mu2 < mu1 < ... < mu^(1)``."""
    pts = _select_points(curve, points)
    degrees = tuple(int(m) for m in degrees)
    g = curve.genus
    if any(a >= b for a, b in zip(degrees, degrees[1:])):
        raise ValueError(f"pole orders must be strictly increasing: {degrees}")
    if not 2 * g - 2 < degrees[0]:
        raise ValueError(f"smallest pole order must exceed 2g-2 = {2 * g - 2}")
    if not degrees[-1] < len(pts):
        raise ValueError(f"largest pole order must be below n = {len(pts)}")
    G = hermitian_evaluation(curve, degrees[-1], pts)
    dims = tuple(m - g + 1 for m in degrees)
    return NestedCodeFamily(curve.field, G, dims, kind="hermitian", genus=g,
                            degrees=degrees, points=pts, curve_u=curve.u)


# -- a fixed GF(4) Hermitian family -------------------------------------------

# GF(4) codes: 0, 1, w = 2, w-bar = 3 (w * w-bar = w + w-bar = 1)
HERMITIAN_Q4_MATRIX = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [2, 3, 1, 2, 3, 1, 0, 0],
    [0, 0, 0, 1, 1, 1, 2, 3],
    [3, 2, 1, 3, 2, 1, 0, 0],
]


def hermitian_q4_family() -> NestedCodeFamily:
    """Hermitian codes over GF(4) on the projective model ``x^3+y^3+z^3=0``,
    pole orders (2, 3, 4) at the point ``Q``; kept as a literal matrix."""
    F = gf(4)
    return NestedCodeFamily(F, GFMatrix(F, HERMITIAN_Q4_MATRIX), (2, 3, 4), kind="explicit",
                            genus=1, degrees=(2, 3, 4))
