"""Exact oracles: leakage, thresholds, strength, bandwidth, multiplicativity.

Information is measured in q-ary symbols and returned as exact rationals.
Divide by ``alpha`` to get alphabet symbols.  With a uniform secret and
uniform randomness every share projection of a linear scheme is uniform on
a subspace, so entropies are dimensions and mutual information is a rank
difference.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .codes import NestedCodeFamily, hermitian_monomials
from .gf import FiniteField
from .linalg import GFMatrix, rank
from .shares import StaircaseScheme, make_rng


def _rank(F: FiniteField, a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return rank(GFMatrix._raw(F, a))


# -- mutual information -------------------------------------------------------

def secret_rows(scheme: StaircaseScheme, components: Iterable[int]) -> list[int]:
    comps = sorted(set(int(i) for i in components))
    if any(not 0 <= i < scheme.ell for i in comps):
        raise ValueError(f"secret component outside 0..{scheme.ell - 1}")
    return [scheme.secret_var(a, i) for i in comps for a in range(scheme.alpha)]


def mi_rank_check(scheme: StaircaseScheme, I: Iterable[int], J: Iterable[int],
                  rows: int | None = None) -> int:
    """``I(S_I; X_J)`` in q-ary symbols, from ranks of the linear share map.

    ``I`` indexes secret components (columns of ``S``), ``J`` parties.  With
    ``rows`` only the first ``rows`` entries of each share are observed.
    ``0`` means no leakage.
    """
    J = sorted(set(int(j) for j in J))
    srows = secret_rows(scheme, I)
    if not J or not srows:
        return 0
    L = scheme.linear_map()
    LJ = L[:, scheme.share_columns(J, rows)]
    keep = np.ones(L.shape[0], dtype=bool)
    keep[srows] = False
    return _rank(scheme.field, LJ) - _rank(scheme.field, LJ[keep])


def _exact_log(count: int, q: int) -> int:
    e = 0
    while count > 1:
        if count % q:
            raise ArithmeticError(f"support size {count} is not a power of {q}")
        count //= q
        e += 1
    return e


def _uniform_entropy(keys: np.ndarray, q: int) -> int:
    """log_q of the support of a uniform empirical distribution (rows of ``keys``)."""
    _, counts = np.unique(keys, axis=0, return_counts=True)
    if (counts != counts[0]).any():
        raise ArithmeticError("distribution is not uniform on its support")
    return _exact_log(len(counts), q)


def enumerate_outcomes(scheme: StaircaseScheme, cap: int = 2 ** 24):
    """Every ``(S, R)`` and its share matrix, via :meth:`encode` (cached)."""
    cached = getattr(scheme, "_enum", None)
    if cached is not None:
        return cached
    q = scheme.field.q
    V = scheme.num_random + scheme.num_secret
    if q ** V > cap:
        raise ValueError(f"q^(alpha(k2+ell)) = {q}^{V} exceeds the enumeration cap {cap}")
    N = q ** V
    digits = (np.arange(N, dtype=np.int64)[:, None] // q ** np.arange(V, dtype=np.int64)) % q
    Ss = np.empty((N, scheme.alpha, scheme.ell), dtype=np.int64)
    Xs = np.empty((N, scheme.alpha, scheme.n), dtype=np.int64)
    for idx in range(N):
        R = digits[idx, :scheme.num_random].reshape(scheme.alpha, scheme.k2)
        S = digits[idx, scheme.num_random:].reshape(scheme.alpha, scheme.ell)
        Ss[idx] = S
        Xs[idx] = scheme.encode(S, R)
    scheme._enum = (Ss, Xs)
    return Ss, Xs


def mi_enumerate(scheme: StaircaseScheme, I: Iterable[int], J: Iterable[int],
                 cap: int = 2 ** 24) -> Fraction:
    """``I(S_I; X_J)`` in q-ary symbols by enumerating every secret and every
    randomness draw.  Independent of the linear-map machinery."""
    I = sorted(set(int(i) for i in I))
    J = sorted(set(int(j) for j in J))
    if not I or not J:
        return Fraction(0)
    Ss, Xs = enumerate_outcomes(scheme, cap)
    q = scheme.field.q
    s_keys = Ss[:, :, I].reshape(len(Ss), -1)
    x_keys = Xs[:, :, J].reshape(len(Xs), -1)
    hs = _uniform_entropy(s_keys, q)
    hx = _uniform_entropy(x_keys, q)
    hsx = _uniform_entropy(np.hstack([s_keys, x_keys]), q)
    return Fraction(hs + hx - hsx)


# -- thresholds ---------------------------------------------------------------

@dataclass
class ThresholdReport:
    r_min: int
    t_max: int
    method: str = "rank-exhaustive"


def thresholds_exhaustive(scheme: StaircaseScheme, max_n: int = 12) -> ThresholdReport:
    """Largest privacy and smallest reconstruction threshold over all subsets."""
    n = scheme.n
    if n > max_n:
        raise ValueError(f"exhaustive threshold scan limited to n <= {max_n}")
    allS = range(scheme.ell)
    full = scheme.alpha * scheme.ell
    t_max = n
    for m in range(1, n + 1):
        if any(mi_rank_check(scheme, allS, J) > 0 for J in combinations(range(n), m)):
            t_max = m - 1
            break
    r_min = None
    for m in range(max(t_max, 1), n + 1):
        if all(mi_rank_check(scheme, allS, J) == full for J in combinations(range(n), m)):
            r_min = m
            break
    if r_min is None:  # pragma: no cover - a scheme always reconstructs from all shares
        raise AssertionError("secret not determined by all shares")
    return ThresholdReport(r_min, t_max)


def sigma_max_scan(scheme: StaircaseScheme) -> int:
    """Largest ``sigma`` with zero leakage for all ``|I| + |J| <= sigma + 1``.

    Scans total sizes upward.  At the first violation it also asserts that
    every one-element enlargement of the violating pair still leaks.
    """
    ell, n = scheme.ell, scheme.n
    for s in range(2, ell + n + 1):
        for a in range(max(1, s - n), min(ell, s - 1) + 1):
            for I in combinations(range(ell), a):
                for J in combinations(range(n), s - a):
                    if mi_rank_check(scheme, I, J) > 0:
                        _assert_monotone(scheme, I, J)
                        return s - 2
    return ell + n - 1


def _assert_monotone(scheme, I, J):
    for x in set(range(scheme.n)) - set(J):
        assert mi_rank_check(scheme, I, J + (x,)) > 0, "leakage not monotone in J"
    for y in set(range(scheme.ell)) - set(I):
        assert mi_rank_check(scheme, I + (y,), J) > 0, "leakage not monotone in I"


# -- bandwidth ----------------------------------------------------------------

def co_lower(ell: int, t: int, m: int) -> Fraction:
    """Lower bound on communication overhead contacting ``m > t`` parties."""
    return Fraction(ell * t, m - t)


def db_lower(ell: int, t: int, m: int) -> Fraction:
    return Fraction(ell * m, m - t)


@dataclass
class BoundsEntry:
    subset: tuple[int, ...]
    level: int
    co_lower: Fraction
    co_measured: Fraction
    db_lower: Fraction
    db_measured: Fraction
    co_formula: Fraction
    db_entropy: Fraction

    @property
    def size(self) -> int:
        return len(self.subset)

    @property
    def equality(self) -> bool:
        return self.co_measured == self.co_lower


@dataclass
class BoundsReport:
    ell: int
    t: int
    r: int
    entries: list[BoundsEntry] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["subset_size", "co_lower", "co_measured", "db_lower", "db_measured", "equality"])
        for e in self.entries:
            w.writerow([e.size, e.co_lower, e.co_measured, e.db_lower, e.db_measured,
                        "yes" if e.equality else "no"])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"ell = {self.ell}  t = {self.t}  r = {self.r}"]
        for e in self.entries:
            lines.append(f"level {e.level} |I| = {e.size}: CO = {e.co_measured} (bound {e.co_lower}), "
                         f"DB = {e.db_measured} (bound {e.db_lower})")
        return "\n".join(lines) + "\n"


def per_party_entropy(scheme: StaircaseScheme, j: int) -> list[int]:
    """``H(E_j(c_i))`` in q-ary symbols for each party ``i``."""
    L = scheme.linear_map()
    rows = scheme.prefix_rows(j)
    return [_rank(scheme.field, L[:, scheme.share_columns([i], rows)]) for i in range(scheme.n)]


def bandwidth_audit(scheme: StaircaseScheme, I: Sequence[int], j: int, seed: int = 0,
                    entropy: bool = False) -> BoundsEntry:
    """Share a fixed pseudo-random secret, transmit level-``j`` prefixes from
    the parties in ``I``, reconstruct, and count what was sent."""
    I = tuple(sorted(int(i) for i in I))
    if len(I) != scheme.contact_size(j):
        raise ValueError(f"level {j} contacts {scheme.contact_size(j)} parties, got {len(I)}")
    F = scheme.field
    rng = make_rng(seed, 1)
    S = F.random((scheme.alpha, scheme.ell), rng)
    shares = scheme.share(S, seed)
    sent = {i: scheme.preprocess(shares.share(i), j) for i in I}
    if not np.array_equal(scheme.reconstruct(sent, j), S):
        raise AssertionError(f"reconstruction failed on {I} at level {j}")
    symbols = sum(len(v) for v in sent.values())
    db = Fraction(symbols, scheme.alpha)
    if entropy:
        ent = per_party_entropy(scheme, j)
        db_ent = Fraction(sum(ent[i] for i in I), scheme.alpha)
    else:
        db_ent = db
    return BoundsEntry(I, j, co_lower(scheme.ell, scheme.t, len(I)), db - scheme.ell,
                       db_lower(scheme.ell, scheme.t, len(I)), db, scheme.co_formula(j), db_ent)


def audit_levels(scheme: StaircaseScheme, subsets_per_level: int | None = None,
                 seed: int = 0) -> BoundsReport:
    """One audit entry per level and subset (all subsets when ``None``)."""
    rep = BoundsReport(scheme.ell, scheme.t, scheme.r)
    for j in range(1, scheme.h + 1):
        it = combinations(range(scheme.n), scheme.contact_size(j))
        for c, I in enumerate(it):
            if subsets_per_level is not None and c >= subsets_per_level:
                break
            rep.entries.append(bandwidth_audit(scheme, I, j, seed))
    return rep


# -- multiplicativity -----------------------------------------------------------

def _reduce_hermitian(u: int, i: int, j: int) -> dict[tuple[int, int], int]:
    """``x^i y^j`` rewritten with ``y^u = x^(u+1) - y`` (over characteristic p
    of GF(u^2); coefficients as integers mod p)."""
    p = _char_of(u)
    poly = {(i, j): 1}
    while True:
        high = [(a, b) for (a, b) in poly if b >= u]
        if not high:
            return {k: v for k, v in poly.items() if v % p}
        a, b = high[0]
        c = poly.pop((a, b))
        for key, coef in (((a + u + 1, b - u), c), ((a, b - u + 1), -c)):
            poly[key] = (poly.get(key, 0) + coef) % p


def _char_of(u: int) -> int:
    from .gf import prime_power
    return prime_power(u)[0]


def _product_coefficients(F: FiniteField, monos: list, u: int | None, basis: list):
    """Rows: coordinate vectors of all pairwise monomial products in ``basis``."""
    index = {m: c for c, m in enumerate(basis)}
    rows = []
    for a in range(len(monos)):
        for b in range(a, len(monos)):
            if u is None:
                prod = {(monos[a][0] + monos[b][0], 0): 1}
            else:
                prod = _reduce_hermitian(u, monos[a][0] + monos[b][0], monos[a][1] + monos[b][1])
            row = np.zeros(len(basis), dtype=np.int64)
            for m, c in prod.items():
                row[index[m]] = F.from_coeffs([c])
            rows.append(row)
    return np.array(rows, dtype=np.int64)


def check_multiplicative(source, delta1: int | None = None) -> str:
    """``"yes"``, ``"no"`` or ``"condition_unmet"``.

    ``source`` is a scheme or a family built by the RS or Hermitian
    factories.  When ``2*delta1 - 2 < n`` the products of pairs of top-level
    codewords live in the span of evaluations of degree-``2 mu^(1)``
    functions; the answer is ``yes`` exactly when that evaluation map has a
    trivial kernel on the span of the products, so coordinate-wise products
    of shares determine the product message.
    """
    family: NestedCodeFamily = getattr(source, "family", source)
    if family.kind not in ("rs", "hermitian"):
        raise ValueError(f"multiplicativity check unsupported for family kind {family.kind!r}")
    mu_top = family.degrees[-1]
    if delta1 is None:
        delta1 = source.deltas[0] if hasattr(source, "deltas") else mu_top + 1
    n = family.n
    if 2 * delta1 - 2 >= n:
        return "condition_unmet"
    F = family.field
    if family.kind == "rs":
        u = None
        monos = [(i, 0) for i in range(family.dims[-1])]
        basis = [(i, 0) for i in range(2 * mu_top + 1)]
        xs = np.asarray(family.points, dtype=np.int64)
        ys = np.zeros_like(xs)
    else:
        u = family.curve_u
        monos = hermitian_monomials(u, mu_top)
        basis = hermitian_monomials(u, 2 * mu_top)
        xs = np.array([p[0] for p in family.points], dtype=np.int64)
        ys = np.array([p[1] for p in family.points], dtype=np.int64)
    coef = _product_coefficients(F, monos, u, basis)
    ev = np.array([F.mul(F.power(xs, a), F.power(ys, b)) for a, b in basis], dtype=np.int64)
    products_at_points = F.matmul(coef, ev)
    # sanity: the reduced products evaluate to the actual coordinate-wise products
    G = F.matmul(np.eye(len(monos), dtype=np.int64), np.array(
        [F.mul(F.power(xs, a), F.power(ys, b)) for a, b in monos], dtype=np.int64))
    direct = np.array([F.mul(G[a], G[b]) for a in range(len(monos)) for b in range(a, len(monos))])
    if not np.array_equal(direct, products_at_points):  # pragma: no cover
        raise AssertionError("monomial reduction disagrees with direct products")
    return "yes" if _rank(F, coef) == _rank(F, products_at_points) else "no"


# -- the q = 16 parameter table -------------------------------------------------

def round2(x: Fraction) -> str:
    """Round half up to two decimals, exactly on the rational.  Whole numbers
    print bare (``1`` rather than ``1.00``)."""
    scaled = x * 100
    hundredths = scaled.numerator // scaled.denominator
    if scaled - hundredths >= Fraction(1, 2):
        hundredths += 1
    if hundredths % 100 == 0:
        return str(hundredths // 100)
    return f"{hundredths // 100}.{hundredths % 100:02d}"


@dataclass(frozen=True)
class TableRow:
    family: str
    n: int
    ell: int
    genus: int
    t: int
    r: int

    @property
    def r_over_n(self) -> Fraction:
        return Fraction(self.r, self.n)

    @property
    def db_over_n(self) -> Fraction:
        # contact every party: DB = ell * n / (n - t - 2g)
        return Fraction(self.ell, self.n - self.t - 2 * self.genus)


def parameter_table(q: int = 16) -> list[TableRow]:
    """Rate-1/2 schemes over GF(q), q a square: RS of length q and Hermitian
    of length q^(3/2), contacting all parties."""
    u = int(round(q ** 0.5))
    if u * u != q:
        raise ValueError("q must be a square")
    rows = []
    n, ell = q, q // 2
    for t in range(0, n - ell + 1):
        rows.append(TableRow("rs", n, ell, 0, t, t + ell))
    # Hermitian t advances by u so that r/n moves in the same 1/q steps
    n, g = u ** 3, u * (u - 1) // 2
    ell = n // 2
    for t in range(0, n - ell - 2 * g + 1, u):
        rows.append(TableRow("hermitian", n, ell, g, t, t + ell + 2 * g))
    return rows


def table_csv(rows: list[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "n", "t", "r", "r_over_n", "db_over_n"])
    for row in rows:
        w.writerow([row.family, row.n, row.t, row.r, round2(row.r_over_n), round2(row.db_over_n)])
    return buf.getvalue()
