"""Strongly secure schemes from codes of length ``ell + n``.

A parent family ``D1 = D^(h) < ... < D^(1)`` in ``F^(ell+n)`` yields the
share codes by dropping the first ``ell`` ("secret") coordinates:

* ``C2`` = codewords of ``D1`` vanishing on the secret coordinates,
* ``C1`` and ``C^(j)`` = plain restrictions of ``D1`` and ``D^(j)``.

``G_i`` (one per secret coordinate) is ``D1`` shortened at coordinate ``i``,
and ``min_i d(G_i^perp) - 1`` lower-bounds the strength.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import (HermitianCurve, NestedCodeFamily, Thresholds, hermitian_evaluation,
                    rs_nested, _select_points)
from .gf import gf
from .linalg import (GFMatrix, LinearCode, dual, min_distance_pair, rank, rref, shorten,
                     EnumerationCapExceeded, ENUMERATION_CAP)
from .scheme_c2 import C2Instance, c2_setup


class MasseyConditionError(ValueError):
    pass


@dataclass
class MasseyFamily:
    parents: NestedCodeFamily
    ell: int
    derived: NestedCodeFamily
    components: list[LinearCode]

    @property
    def n(self) -> int:
        return self.derived.n


def massey_derive(parents: NestedCodeFamily, ell: int, design: Thresholds | None = None) -> MasseyFamily:
    """Share-code family from parents whose ``dims = (d_h, ..., d_1)`` ascend.

    ``parents.dims[0]`` is ``dim D1``; the remaining entries are the larger
    parents.  The derived dims are ``(dim D1 - ell, dim D1, ..., dim D^(1))``.
    """
    F = parents.field
    total = parents.n
    n = total - ell
    if not 1 <= ell < total:
        raise ValueError(f"need 1 <= ell < length, got ell={ell}, length={total}")
    dD1 = parents.dims[0]
    D1 = parents.generator[:dD1, :]
    R, pivots, rk = rref(D1)
    # condition 1: the secret coordinates of D1 carry the full space F^ell
    if pivots[:ell] != list(range(ell)):
        raise MasseyConditionError("restriction of D1 to the secret coordinates is not the full space")
    top = R.a[:ell]                 # (I | Gc)
    bottom = R.a[ell:rk]            # (0 | G2)
    ext = parents.generator.a[dD1:].copy()
    if ext.shape[0]:
        # clear the secret coordinates of the extension rows
        ext = F.sub(ext, F.matmul(ext[:, :ell], top))
    full = np.vstack([bottom, top, ext])[:, ell:]
    dims = (dD1 - ell,) + tuple(parents.dims)
    derived_G = GFMatrix(F, full)
    # condition 2: nothing of D^(1) is lost when dropping the secret coordinates
    if rank(derived_G) != parents.dims[-1]:
        raise MasseyConditionError("restriction of the top parent to the share coordinates loses dimension")
    if dims[0] == dims[1]:  # pragma: no cover - excluded by condition 1 with ell >= 1
        raise MasseyConditionError("derived C2 equals C1")
    derived = NestedCodeFamily(F, derived_G, dims, kind="massey", design=design,
                               meta={"parent_kind": parents.kind, "ell": ell})
    comps = [shorten(LinearCode(D1), [c for c in range(total) if c != i]) for i in range(ell)]
    return MasseyFamily(parents, ell, derived, comps)


@dataclass
class StrengthReport:
    component_distances: list[int | None]
    t_max: int | None
    ell: int
    sigma_max: int | None = None
    designed_lower: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def sigma_lower(self) -> int | None:
        if any(d is None for d in self.component_distances):
            return self.designed_lower
        return min(self.component_distances) - 1

    @property
    def sigma_upper(self) -> int | None:
        return None if self.t_max is None else self.t_max + self.ell - 1

    def consistent(self) -> bool:
        lo, hi, mx = self.sigma_lower, self.sigma_upper, self.sigma_max
        ok = True
        if lo is not None and mx is not None:
            ok &= lo <= mx
        if hi is not None and mx is not None:
            ok &= mx <= hi
        return ok

    def to_text(self) -> str:
        def show(v):
            return "not computed" if v is None else str(v)
        lines = ["strength report",
                 f"sigma_lower = {show(self.sigma_lower)}",
                 f"sigma_upper = {show(self.sigma_upper)}",
                 f"sigma_max = {show(self.sigma_max)}"]
        if self.designed_lower is not None:
            lines.append(f"designed_lower = {self.designed_lower}")
        for i, d in enumerate(self.component_distances, start=1):
            lines.append(f"d(G_{i}^perp) = {show(d)}")
        lines += [f"# {note}" for note in self.notes]
        return "\n".join(lines) + "\n"


def component_distances(fam: MasseyFamily, cap: int = ENUMERATION_CAP) -> list[int | None]:
    out = []
    for Gi in fam.components:
        try:
            out.append(min_distance_pair(dual(Gi), None, cap))
        except EnumerationCapExceeded:
            out.append(None)
    return out


def strength_report(scheme: C2Instance, fam: MasseyFamily, designed_lower: int | None = None,
                    scan: bool = True, t_max: int | None = None) -> StrengthReport:
    from .analysis import sigma_max_scan, thresholds_exhaustive
    if t_max is None and scheme.n <= 12:
        t_max = thresholds_exhaustive(scheme).t_max
    rep = StrengthReport(component_distances(fam), t_max, scheme.ell, designed_lower=designed_lower)
    if scan:
        rep.sigma_max = sigma_max_scan(scheme)
    return rep


# -- instantiations ----------------------------------------------------------

def _deltas_for(r: int, n: int, deltas) -> tuple[int, ...]:
    ds = tuple(sorted({int(d) for d in deltas} | {r}, reverse=True))
    if ds[-1] != r or ds[0] > n:
        raise ValueError(f"contact sizes must lie in [r, n] = [{r}, {n}], got {ds}")
    return ds


def mds_strong_scheme(q: int, n: int, t: int, r: int, deltas=(), scan: bool = True,
                      ) -> tuple[C2Instance, StrengthReport, MasseyFamily]:
    """Nested RS parents of length ``ell + n`` with ``dim D1 = r``.

    The resulting scheme has ``ell = r - t``, optimal bandwidth at every
    contact size, and strength ``r - 1``.
    """
    if not 0 <= t < r <= n:
        raise ValueError(f"need 0 <= t < r <= n, got t={t}, r={r}, n={n}")
    ell = r - t
    if ell + n > q:
        raise ValueError(f"need ell + n <= q, got {ell} + {n} > {q}")
    ds = _deltas_for(r, n, deltas)
    F = gf(q)
    parents = rs_nested(F, list(range(ell + n)), tuple(reversed(ds)))
    design = Thresholds(t=t, r=r, deltas=ds)
    fam = massey_derive(parents, ell, design)
    scheme = c2_setup(fam.derived, ds, design)
    rep = strength_report(scheme, fam, designed_lower=r - 1, scan=scan)
    return scheme, rep, fam


def _order_points_for_secret(curve: HermitianCurve, mu1: int, pts: list, ell: int) -> list:
    """Greedy: pick the first ``ell`` points whose columns of ``C(., mu1 Q)`` are independent."""
    G = hermitian_evaluation(curve, mu1, pts)
    chosen = []
    for c in range(len(pts)):
        if rank(G.columns(chosen + [c])) == len(chosen) + 1:
            chosen.append(c)
            if len(chosen) == ell:
                break
    if len(chosen) < ell:
        raise MasseyConditionError("no point ordering gives the full space on the secret coordinates")
    rest = [c for c in range(len(pts)) if c not in chosen]
    return [pts[c] for c in chosen + rest]


def ag_strong_scheme(curve: HermitianCurve, n: int, t: int, r: int, deltas=(), scan: bool = True,
                     ) -> tuple[C2Instance, StrengthReport, MasseyFamily]:
    """Hermitian one-point parents with ``mu1 = r - 1`` and ``mu^(j) = delta_j - 1``."""
    g = curve.genus
    ell = r - t - 2 * g
    if ell < 1:
        raise ValueError(f"ell = r - t - 2g = {ell} must be positive")
    if not 0 <= t < r <= n:
        raise ValueError(f"need 0 <= t < r <= n, got t={t}, r={r}, n={n}")
    if curve.num_rational_points < ell + n + 1:
        raise ValueError(f"curve has {curve.num_rational_points} rational points, "
                         f"need ell + n + 1 = {ell + n + 1}")
    ds = _deltas_for(r, n, deltas)
    mus = tuple(d - 1 for d in reversed(ds))
    if not 2 * g - 2 < mus[0] - ell:
        raise ValueError("mu1 - ell must exceed 2g - 2")
    pts = _order_points_for_secret(curve, mus[0], _select_points(curve, ell + n), ell)
    G = hermitian_evaluation(curve, mus[-1], pts)
    parents = NestedCodeFamily(curve.field, G, tuple(m - g + 1 for m in mus), kind="hermitian",
                               genus=g, degrees=mus, points=pts, curve_u=curve.u)
    design = Thresholds(t=t, r=r, deltas=ds)
    fam = massey_derive(parents, ell, design)
    scheme = c2_setup(fam.derived, ds, design)
    rep = strength_report(scheme, fam, designed_lower=r - 2 * g - 1, scan=scan)
    return scheme, rep, fam
