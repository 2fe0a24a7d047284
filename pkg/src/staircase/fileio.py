"""Text formats: families, scheme bundles, share files, descriptors, byte secrets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .codes import (NestedCodeFamily, Thresholds, hermitian_q4_family, hermitian_curve,
                    hermitian_nested, rs_nested)
from .gf import FiniteField, gf, parse_field_header
from .linalg import GFMatrix
from .massey import MasseyFamily, ag_strong_scheme, massey_derive, mds_strong_scheme
from .scheme_c1 import C1Instance, c1_setup
from .scheme_c2 import C2Instance, c2_setup
from .shares import StaircaseScheme


class FormatError(ValueError):
    pass


def _ints(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(v) for v in text.replace(" ", "").split(","))


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _kv_tokens(line: str) -> dict[str, str]:
    kv = {}
    for tok in line.split():
        if "=" not in tok:
            raise FormatError(f"expected key=value, got {tok!r} in {line!r}")
        k, v = tok.split("=", 1)
        kv[k] = v
    return kv


# -- families -----------------------------------------------------------------

def family_to_text(fam: NestedCodeFamily) -> str:
    out = [fam.field.header(), f"kind {fam.kind}", f"n {fam.n}",
           "dims " + ",".join(map(str, fam.dims))]
    if fam.genus is not None:
        out.append(f"genus {fam.genus}")
    if fam.degrees is not None:
        out.append("degrees " + ",".join(map(str, fam.degrees)))
    if fam.curve_u is not None:
        out.append(f"curve_u {fam.curve_u}")
    if fam.points is not None:
        if fam.kind == "hermitian":
            out.append("points " + " ".join(f"{x},{y}" for x, y in fam.points))
        else:
            out.append("points " + ",".join(map(str, fam.points)))
    if fam.design is not None:
        out.append(thresholds_line(fam.design, "design"))
    return "\n".join(out) + "\n" + fam.generator.to_text()


def family_from_text(text: str) -> NestedCodeFamily:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty family file")
    F = parse_field_header(lines[0])
    info: dict[str, str] = {}
    i = 1
    while i < len(lines) and not lines[i].startswith("matrix"):
        key, _, val = lines[i].partition(" ")
        info[key] = val.strip()
        i += 1
    if i == len(lines):
        raise FormatError("family file has no matrix block")
    G, _ = GFMatrix.from_lines(F, lines[i:])
    for key in ("n", "dims"):
        if key not in info:
            raise FormatError(f"family file missing {key!r}")
    if int(info["n"]) != G.cols:
        raise FormatError(f"n = {info['n']} but the matrix has {G.cols} columns")
    kind = info.get("kind", "explicit")
    points = None
    if "points" in info:
        if kind == "hermitian":
            points = [tuple(int(c) for c in p.split(",")) for p in info["points"].split()]
        else:
            points = list(_ints(info["points"]))
    design = thresholds_from_line(info["design"]) if "design" in info else None
    return NestedCodeFamily(
        F, G, _ints(info["dims"]), kind=kind,
        genus=int(info["genus"]) if "genus" in info else None,
        degrees=_ints(info["degrees"]) if "degrees" in info else None,
        points=points, curve_u=int(info["curve_u"]) if "curve_u" in info else None,
        design=design)


def thresholds_line(th: Thresholds, key: str = "thresholds") -> str:
    return f"{key} t={th.t} r={th.r} deltas={','.join(map(str, th.deltas))} method={th.method}"


def thresholds_from_line(text: str) -> Thresholds:
    kv = _kv_tokens(text.split(None, 1)[1] if text.startswith(("thresholds", "design")) else text)
    try:
        return Thresholds(int(kv["t"]), int(kv["r"]), _ints(kv["deltas"]), kv.get("method", "designed"))
    except KeyError as exc:
        raise FormatError(f"threshold line missing {exc.args[0]!r}") from None


# -- descriptors ----------------------------------------------------------------

DESCRIPTOR_KEYS = {"family", "q", "n", "dims", "degrees", "genus", "points", "u", "deltas",
                   "construction", "thresholds", "t", "r", "seed", "alpha_cap"}
FAMILY_KINDS = ("rs", "hermitian", "massey-rs", "massey-hermitian", "explicit-matrix")


@dataclass
class SchemeDescriptor:
    family: str
    field: FiniteField | None
    values: dict[str, str]
    matrix: GFMatrix | None = None

    def get(self, key, default=None):
        return self.values.get(key, default)

    def need(self, key) -> str:
        if key not in self.values:
            raise FormatError(f"descriptor for family {self.family!r} needs key {key!r}")
        return self.values[key]

    def int(self, key, default=None) -> int:
        if key not in self.values:
            if default is None:
                self.need(key)
            return default
        try:
            return int(self.values[key])
        except ValueError:
            raise FormatError(f"key {key!r}: expected an integer, got {self.values[key]!r}") from None

    def ints(self, key) -> tuple[int, ...]:
        try:
            return _ints(self.need(key))
        except ValueError:
            raise FormatError(f"key {key!r}: expected a comma-separated integer list") from None

    @property
    def construction(self) -> int:
        c = self.int("construction", 2 if self.family.startswith("massey") else 1)
        if c not in (1, 2):
            raise FormatError(f"key 'construction': expected 1 or 2, got {c}")
        return c

    @property
    def seed(self) -> int:
        return self.int("seed", 0)


def parse_descriptor(text: str) -> SchemeDescriptor:
    values: dict[str, str] = {}
    field = None
    matrix_lines: list[str] = []
    lines = _lines(text)
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("field ") or line == "field":
            try:
                field = parse_field_header(line)
            except ValueError as exc:
                raise FormatError(f"key 'field': {exc}") from None
            i += 1
            continue
        if line.startswith("matrix"):
            matrix_lines = lines[i:]
            break
        if "=" not in line:
            raise FormatError(f"expected 'key = value', got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in DESCRIPTOR_KEYS:
            raise FormatError(f"unknown key {key!r}")
        values[key] = val
        i += 1
    if "family" not in values:
        raise FormatError("descriptor needs key 'family'")
    kind = values["family"]
    if kind not in FAMILY_KINDS:
        raise FormatError(f"key 'family': unknown kind {kind!r} (expected one of {', '.join(FAMILY_KINDS)})")
    if "q" in values:
        try:
            fq = gf(int(values["q"]))
        except ValueError as exc:
            raise FormatError(f"key 'q': {exc}") from None
        if field is not None and field != fq:
            raise FormatError("key 'q' disagrees with the field header")
        field = fq
    matrix = None
    if matrix_lines:
        if field is None:
            raise FormatError("a matrix block needs a field header or key 'q'")
        try:
            matrix, used = GFMatrix.from_lines(field, matrix_lines)
        except ValueError as exc:
            raise FormatError(f"matrix block: {exc}") from None
        if used != len(matrix_lines):
            raise FormatError("unexpected text after the matrix block")
    return SchemeDescriptor(kind, field, values, matrix)


@dataclass
class Built:
    scheme: StaircaseScheme
    family: NestedCodeFamily
    massey: MasseyFamily | None = None


def build_from_descriptor(desc: SchemeDescriptor) -> Built:
    kind = desc.family
    method = desc.get("thresholds", "designed")
    if method not in ("designed", "enumerated"):
        raise FormatError(f"key 'thresholds': expected designed or enumerated, got {method!r}")
    if kind in ("massey-rs", "massey-hermitian"):
        n, t, r = desc.int("n"), desc.int("t"), desc.int("r")
        deltas = desc.ints("deltas") if "deltas" in desc.values else ()
        if kind == "massey-rs":
            scheme, _, fam = mds_strong_scheme(desc.int("q"), n, t, r, deltas, scan=False)
        else:
            scheme, _, fam = ag_strong_scheme(hermitian_curve(desc.int("u")), n, t, r, deltas, scan=False)
        return Built(scheme, fam.derived, fam)
    if kind == "rs":
        F = desc.field or gf(desc.int("q"))
        n = desc.int("n")
        pts = desc.ints("points") if "points" in desc.values else (
            tuple(range(1, n + 1)) if n < F.q else tuple(range(n)))
        fam = rs_nested(F, pts, desc.ints("dims"))
    elif kind == "hermitian":
        curve = hermitian_curve(desc.int("u"))
        fam = hermitian_nested(curve, desc.ints("degrees"), desc.int("n", len(curve.points)))
    else:
        if desc.matrix is None:
            raise FormatError("family 'explicit-matrix' needs a matrix block")
        if "n" in desc.values and desc.int("n") != desc.matrix.cols:
            raise FormatError(f"key 'n' = {desc.int('n')} but the matrix has {desc.matrix.cols} columns")
        fam = NestedCodeFamily(desc.field, desc.matrix, desc.ints("dims"), kind="explicit",
                               genus=desc.int("genus") if "genus" in desc.values else None,
                               degrees=desc.ints("degrees") if "degrees" in desc.values else None)
    if desc.construction == 1:
        scheme = c1_setup(fam, method)
    else:
        deltas = desc.ints("deltas") if "deltas" in desc.values else None
        scheme = c2_setup(fam, deltas, method, desc.int("alpha_cap", 4096))
    return Built(scheme, fam)


def hermitian_q4_descriptor() -> str:
    fam = hermitian_q4_family()
    return ("# GF(4) Hermitian family, construction 1\n"
            "family = explicit-matrix\nconstruction = 1\n"
            f"{fam.field.header()}\nn = 8\ndims = 2,3,4\ngenus = 1\ndegrees = 2,3,4\n"
            + fam.generator.to_text())


# -- bundles --------------------------------------------------------------------

def scheme_to_text(scheme: StaircaseScheme, massey_ell: int | None = None) -> str:
    out = [scheme.field.header(), f"scheme c{scheme.construction}",
           f"n={scheme.n} ell={scheme.ell} alpha={scheme.alpha} t={scheme.t} r={scheme.r}",
           thresholds_line(scheme.thresholds)]
    if scheme.construction == 2:
        out.append("delta_set " + ",".join(map(str, scheme.deltas)))
        out.append("alpha_j " + ",".join(map(str, scheme.alphas)))
    if massey_ell is not None:
        out.append(f"massey ell={massey_ell}")
    return "\n".join(out) + "\n"


def write_bundle(path: Path, built: Built, descriptor_text: str | None = None):
    path.mkdir(parents=True, exist_ok=True)
    (path / "family.txt").write_text(family_to_text(built.family))
    ell = built.massey.ell if built.massey else None
    (path / "scheme.txt").write_text(scheme_to_text(built.scheme, ell))
    if built.massey is not None:
        (path / "parents.txt").write_text(family_to_text(built.massey.parents))
    if descriptor_text is not None:
        (path / "descriptor.txt").write_text(descriptor_text)


def read_bundle(path: Path) -> Built:
    path = Path(path)
    for name in ("family.txt", "scheme.txt"):
        if not (path / name).is_file():
            raise FormatError(f"bundle {path} is missing {name}")
    fam = family_from_text((path / "family.txt").read_text())
    lines = _lines((path / "scheme.txt").read_text())
    F = parse_field_header(lines[0])
    if F != fam.field:
        raise FormatError("scheme and family files disagree on the field")
    construction = {"scheme c1": 1, "scheme c2": 2}.get(lines[1])
    if construction is None:
        raise FormatError(f"unknown scheme line {lines[1]!r}")
    th = None
    massey_ell = None
    for line in lines[2:]:
        if line.startswith("thresholds"):
            th = thresholds_from_line(line)
        elif line.startswith("massey"):
            massey_ell = int(_kv_tokens(line.split(None, 1)[1])["ell"])
    if th is None:
        raise FormatError("scheme file has no thresholds line")
    scheme = C1Instance(fam, th) if construction == 1 else C2Instance(fam, th)
    massey = None
    if massey_ell is not None:
        parents = family_from_text((path / "parents.txt").read_text())
        massey = massey_derive(parents, massey_ell, fam.design)
        if not np.array_equal(massey.derived.generator.a, fam.generator.a):
            raise FormatError("parents.txt does not derive family.txt")
    return Built(scheme, fam, massey)


# -- share files ------------------------------------------------------------------

@dataclass
class ShareFile:
    party: int            # 0-based
    blocks: np.ndarray    # (num_blocks, entries)
    level: int | None = None   # None for full shares

    def __post_init__(self):
        self.blocks = np.asarray(self.blocks, dtype=np.int64).reshape(len(self.blocks), -1)


def share_file_text(scheme: StaircaseScheme, sf: ShareFile) -> str:
    out = [scheme.field.header(), f"scheme c{scheme.construction}",
           f"n={scheme.n} ell={scheme.ell} alpha={scheme.alpha} t={scheme.t} r={scheme.r} "
           f"delta={scheme.deltas[0]}"]
    if scheme.construction == 2:
        out.append("delta_set " + ",".join(map(str, scheme.deltas)))
        out.append("alpha_j " + ",".join(map(str, scheme.alphas)))
    if sf.level is not None:
        out.append(f"prep level={sf.level} rows={scheme.prefix_rows(sf.level)}")
    out.append(f"party {sf.party + 1}")
    out.append(f"blocks {len(sf.blocks)}")
    out += [" ".join(map(str, row)) for row in sf.blocks]
    return "\n".join(out) + "\n"


def parse_share_file(text: str, scheme: StaircaseScheme) -> ShareFile:
    lines = _lines(text)
    if len(lines) < 4:
        raise FormatError("share file truncated")
    F = parse_field_header(lines[0])
    if F != scheme.field:
        raise FormatError("share file field differs from the bundle")
    if lines[1] != f"scheme c{scheme.construction}":
        raise FormatError(f"share file is for {lines[1]!r}, bundle is construction {scheme.construction}")
    params = _kv_tokens(lines[2])
    for key, val in (("n", scheme.n), ("ell", scheme.ell), ("alpha", scheme.alpha)):
        if int(params.get(key, -1)) != val:
            raise FormatError(f"share file parameter {key} = {params.get(key)} differs from the bundle ({val})")
    level = None
    i = 3
    party = nblocks = None
    while i < len(lines):
        line = lines[i]
        i += 1
        if line.startswith(("delta_set", "alpha_j")):
            continue
        if line.startswith("prep"):
            level = int(_kv_tokens(line.split(None, 1)[1])["level"])
        elif line.startswith("party"):
            party = int(line.split()[1]) - 1
        elif line.startswith("blocks"):
            nblocks = int(line.split()[1])
            break
        else:
            raise FormatError(f"unexpected line {line!r}")
    if party is None or nblocks is None:
        raise FormatError("share file needs 'party' and 'blocks' lines")
    if not 0 <= party < scheme.n:
        raise FormatError(f"party {party + 1} outside 1..{scheme.n}")
    width = scheme.alpha if level is None else scheme.prefix_rows(level)
    rows = lines[i:i + nblocks]
    if len(rows) != nblocks:
        raise FormatError(f"expected {nblocks} blocks, found {len(rows)}")
    data = []
    for r in rows:
        vals = [int(v) for v in r.split()]
        if len(vals) != width:
            raise FormatError(f"block has {len(vals)} entries, expected {width}")
        if any(not 0 <= v < F.q for v in vals):
            raise FormatError("share entry outside the field")
        data.append(vals)
    return ShareFile(party, np.array(data, dtype=np.int64).reshape(nblocks, width), level)


# -- bytes <-> field blocks -------------------------------------------------------

def digits_per_byte(q: int) -> int:
    d = 1
    while q ** d < 256:
        d += 1
    return d


def bytes_to_blocks(data: bytes, scheme: StaircaseScheme) -> list[np.ndarray]:
    """4-byte little-endian length, then each byte as little-endian base-q
    digits, zero-padded to whole ``alpha x ell`` blocks (row-major)."""
    q = scheme.field.q
    d = digits_per_byte(q)
    payload = len(data).to_bytes(4, "little") + bytes(data)
    b = np.frombuffer(payload, dtype=np.uint8).astype(np.int64)
    syms = ((b[:, None] // q ** np.arange(d, dtype=np.int64)) % q).reshape(-1)
    per = scheme.alpha * scheme.ell
    nblocks = math.ceil(len(syms) / per)
    padded = np.zeros(nblocks * per, dtype=np.int64)
    padded[:len(syms)] = syms
    return [padded[k * per:(k + 1) * per].reshape(scheme.alpha, scheme.ell) for k in range(nblocks)]


def blocks_to_bytes(blocks: list[np.ndarray], q: int) -> bytes:
    d = digits_per_byte(q)
    syms = np.concatenate([np.asarray(B).reshape(-1) for B in blocks]) if blocks else np.zeros(0, np.int64)
    usable = len(syms) // d * d
    vals = (syms[:usable].reshape(-1, d) * q ** np.arange(d, dtype=np.int64)).sum(axis=1)
    if len(vals) < 4:
        raise FormatError("decoded data too short for the length prefix")
    raw = vals.tolist()
    head = raw[:4]
    if any(v > 255 for v in head):
        raise FormatError("corrupt length prefix")
    length = int.from_bytes(bytes(head), "little")
    if 4 + length > len(raw):
        raise FormatError(f"length prefix says {length} bytes, only {len(raw) - 4} decoded")
    body = raw[4:4 + length]
    if any(v > 255 for v in body):
        raise FormatError("decoded digit group is not a byte")
    return bytes(body)
