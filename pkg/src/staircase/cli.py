"""Command-line front end.

    staircase gen -c DESCRIPTOR -o BUNDLE
    staircase split -b BUNDLE -i SECRET --seed N [-o DIR]
    staircase prep -b BUNDLE --level J SHARE... [-o DIR]
    staircase reconstruct -b BUNDLE SHARE... [--level J|auto] [-o OUT]
    staircase verify -b BUNDLE --suite NAME [--shares SHARE...]
    staircase table --preset fig-hermitian

Exit codes: 0 success, 1 verification or consistency failure, 2 usage or
parameter error.
"""
from __future__ import annotations

import argparse
import sys
from itertools import combinations
from math import comb
from pathlib import Path

import numpy as np

from . import analysis
from .fileio import (FormatError, ShareFile, blocks_to_bytes, build_from_descriptor,
                     bytes_to_blocks, parse_descriptor, parse_share_file, read_bundle,
                     share_file_text, write_bundle)
from .linalg import GFMatrix, InconsistentSystem
from .massey import strength_report
from .shares import InsufficientShares

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUITES = ("thresholds", "privacy", "bandwidth", "strong", "multiplicative", "consistency", "all")


class VerificationFailure(Exception):
    pass


def _err(msg: str):
    print(f"error: {msg}", file=sys.stderr)


def cmd_gen(args) -> int:
    text = Path(args.c).read_text(encoding="utf-8")
    built = build_from_descriptor(parse_descriptor(text))
    write_bundle(Path(args.o), built, text)
    s = built.scheme
    print(f"bundle {args.o}: construction {s.construction}, q={s.field.q}, n={s.n}, "
          f"ell={s.ell}, alpha={s.alpha}, t={s.t}, r={s.r}, deltas={','.join(map(str, s.deltas))}")
    return EXIT_OK


def split_bytes(scheme, data: bytes, seed: int) -> list[ShareFile]:
    """Library equivalent of ``split``: one :class:`ShareFile` per party."""
    blocks = bytes_to_blocks(data, scheme)
    mats = [scheme.share(B, seed, block=b).matrix for b, B in enumerate(blocks)]
    return [ShareFile(i, np.stack([M[:, i] for M in mats])) for i in range(scheme.n)]


def cmd_split(args) -> int:
    built = read_bundle(Path(args.b))
    s = built.scheme
    data = Path(args.i).read_bytes() if args.i != "-" else sys.stdin.buffer.read()
    out = Path(args.o) if args.o else Path(args.b) / "shares"
    out.mkdir(parents=True, exist_ok=True)
    files = split_bytes(s, data, args.seed)
    for sf in files:
        (out / f"share_{sf.party + 1}.txt").write_text(share_file_text(s, sf))
    print(f"{len(data)} bytes -> {len(files[0].blocks)} block(s) x {s.n} shares in {out}")
    return EXIT_OK


def _load_shares(scheme, paths) -> list[ShareFile]:
    files = [parse_share_file(Path(p).read_text(encoding="utf-8"), scheme) for p in paths]
    parties = [f.party for f in files]
    if len(set(parties)) != len(parties):
        raise FormatError("the same party appears twice")
    if len({len(f.blocks) for f in files}) > 1:
        raise FormatError("share files hold different numbers of blocks")
    return files


def cmd_prep(args) -> int:
    built = read_bundle(Path(args.b))
    s = built.scheme
    out = Path(args.o) if args.o else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    for sf in _load_shares(s, args.shares):
        if sf.level is not None:
            raise FormatError(f"party {sf.party + 1}: already preprocessed")
        blocks = np.stack([s.preprocess(b, args.level) for b in sf.blocks])
        (out / f"prep_{sf.party + 1}_level{args.level}.txt").write_text(
            share_file_text(s, ShareFile(sf.party, blocks, args.level)))
    return EXIT_OK


def reconstruct_bytes(scheme, files: list[ShareFile], level: int | None = None) -> tuple[bytes, int]:
    """Library equivalent of ``reconstruct``; returns the bytes and the level used."""
    levels = {f.level for f in files}
    if len(levels) > 1:
        raise FormatError("mixed preprocessing levels")
    fixed = levels.pop()
    if fixed is not None:
        if level is not None and level != fixed:
            raise FormatError(f"share files are preprocessed for level {fixed}, not {level}")
        level = fixed
    if level is None:
        level = scheme.level_for(len(files))
    nblocks = len(files[0].blocks)
    out = []
    for b in range(nblocks):
        sent = {f.party: scheme.preprocess(f.blocks[b], level) if f.level is None else f.blocks[b]
                for f in files}
        out.append(scheme.reconstruct(sent, level))
    return blocks_to_bytes(out, scheme.field.q), level


def bandwidth_lines(scheme, level: int, contacted: int, nblocks: int = 1) -> list[str]:
    qary = scheme.downloaded_symbols(level, contacted)
    db = scheme.db(level, contacted)
    co = db - scheme.ell
    return [f"level {level}: contacted {contacted} parties, {scheme.prefix_rows(level)} of "
            f"{scheme.alpha} symbols each",
            f"DB = {qary} q-ary symbols = {db} alphabet symbols per block",
            f"CO = {co * scheme.alpha} q-ary symbols = {co} alphabet symbols per block",
            f"blocks = {nblocks}"]


def cmd_reconstruct(args) -> int:
    built = read_bundle(Path(args.b))
    s = built.scheme
    files = _load_shares(s, args.shares)
    level = None if args.level in (None, "auto") else int(args.level)
    used = level
    if used is None:
        fixed = {f.level for f in files}.pop()
        used = fixed if fixed is not None else s.level_for(len(files))
    need = s.contact_size(used)
    if len(files) < need:
        raise InsufficientShares(f"level {used} needs {need} shares, got {len(files)} "
                                 f"(smallest usable contact size is r = {s.r})")
    if not args.use_all:
        # contact exactly delta_j parties; the surplus is never downloaded
        files = sorted(files, key=lambda f: f.party)[:need]
    data, used = reconstruct_bytes(s, files, used)
    for line in bandwidth_lines(s, used, len(files), len(files[0].blocks)):
        print(line, file=sys.stderr)
    if args.o:
        Path(args.o).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    return EXIT_OK


# -- verification suites ---------------------------------------------------------

def _subsets(n: int, m: int, limit: int):
    """All m-subsets when there are at most ``limit``; else a deterministic sample."""
    total = comb(n, m)
    if total <= limit:
        yield from combinations(range(n), m)
        return
    rng = np.random.default_rng(m)
    for _ in range(limit):
        yield tuple(sorted(rng.choice(n, m, replace=False).tolist()))


# each suite returns True (pass), False (fail) or None (skipped)

def suite_thresholds(built, out) -> bool | None:
    s = built.scheme
    try:
        rep = analysis.thresholds_exhaustive(s)
    except ValueError as exc:
        out(f"thresholds: skipped ({exc})")
        return None
    ok = rep.t_max >= s.t and rep.r_min <= s.r
    out(f"thresholds: t = {s.t} (t_max = {rep.t_max}), r = {s.r} (r_min = {rep.r_min})")
    return ok


def suite_privacy(built, out, limit: int = 2000) -> bool:
    s = built.scheme
    ok = True
    for m in range(1, s.t + 1):
        for J in _subsets(s.n, m, limit):
            if analysis.mi_rank_check(s, range(s.ell), J):
                out(f"privacy: parties {[j + 1 for j in J]} leak")
                ok = False
    out(f"privacy: no leakage from any {s.t} shares" if ok else "privacy: FAILED")
    return ok


def suite_bandwidth(built, out, limit: int = 500) -> bool:
    s = built.scheme
    ok = True
    for j in range(1, s.h + 1):
        d = s.contact_size(j)
        entries = [analysis.bandwidth_audit(s, I, j, seed=c) for c, I in enumerate(_subsets(s.n, d, limit))]
        good = all(e.co_measured == e.co_formula and e.co_measured >= e.co_lower for e in entries)
        e = entries[0]
        out(f"bandwidth: level {j}, |I| = {d}: CO = {e.co_measured} (formula {e.co_formula}, "
            f"bound {e.co_lower}) over {len(entries)} subset(s)")
        ok &= good
    return ok


def suite_strong(built, out) -> bool:
    s = built.scheme
    if built.massey is None:
        smax = analysis.sigma_max_scan(s)
        out(f"strong: sigma_max = {smax}")
        return True
    designed = s.t + s.ell - 1
    rep = strength_report(s, built.massey, designed_lower=designed)
    for line in rep.to_text().splitlines():
        out("strong: " + line)
    lo = rep.sigma_lower
    return rep.consistent() and (lo is None or lo >= designed)


def suite_multiplicative(built, out) -> bool | None:
    try:
        verdict = analysis.check_multiplicative(built.scheme)
    except ValueError as exc:
        out(f"multiplicative: skipped ({exc})")
        return None
    out(f"multiplicative: {verdict}")
    return verdict != "no"


def suite_consistency(built, out, files) -> bool | None:
    s = built.scheme
    if not files:
        out("consistency: skipped (no share files given)")
        return None
    parties = [f.party for f in files]
    if any(f.level is not None for f in files):
        out("consistency: skipped (preprocessed shares)")
        return None
    solver = s._solver(s.G.rows, parties)
    for b in range(len(files[0].blocks)):
        W = np.stack([f.blocks[b] for f in files], axis=1)
        try:
            solver.solve(GFMatrix._raw(s.field, W))
        except InconsistentSystem:
            out(f"consistency: block {b} is not a valid share matrix")
            return False
    out(f"consistency: {len(files)} share files agree")
    return True


def cmd_verify(args) -> int:
    built = read_bundle(Path(args.b))
    files = _load_shares(built.scheme, args.shares) if args.shares else []
    names = [n for n in SUITES if n != "all"] if args.suite == "all" else [args.suite]
    ok_all = True
    for name in names:
        if name == "consistency":
            ok = suite_consistency(built, print, files)
        else:
            ok = globals()[f"suite_{name}"](built, print)
        print(f"{name}: {'SKIP' if ok is None else 'PASS' if ok else 'FAIL'}")
        ok_all &= ok is not False
    return EXIT_OK if ok_all else EXIT_FAIL


def cmd_table(args) -> int:
    sys.stdout.write(analysis.table_csv(analysis.parameter_table(args.q)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="staircase",
                                description="Bandwidth-efficient secret sharing over nested codes.")
    sp = p.add_subparsers(dest="command", required=True)

    g = sp.add_parser("gen", help="build a scheme bundle from a descriptor")
    g.add_argument("-c", required=True, metavar="DESCRIPTOR")
    g.add_argument("-o", required=True, metavar="BUNDLE_DIR")
    g.set_defaults(func=cmd_gen)

    s = sp.add_parser("split", help="split a byte secret into share files")
    s.add_argument("-b", required=True, metavar="BUNDLE_DIR")
    s.add_argument("-i", required=True, metavar="SECRET_FILE", help="'-' reads stdin")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("-o", metavar="OUT_DIR", help="default: BUNDLE_DIR/shares")
    s.set_defaults(func=cmd_split)

    pp = sp.add_parser("prep", help="cut shares down to what a level downloads")
    pp.add_argument("-b", required=True, metavar="BUNDLE_DIR")
    pp.add_argument("--level", type=int, required=True)
    pp.add_argument("shares", nargs="+")
    pp.add_argument("-o", metavar="OUT_DIR")
    pp.set_defaults(func=cmd_prep)

    r = sp.add_parser("reconstruct", help="recover the secret from share files")
    r.add_argument("-b", required=True, metavar="BUNDLE_DIR")
    r.add_argument("shares", nargs="+")
    r.add_argument("--level", default="auto", help="level number or 'auto'")
    r.add_argument("-o", metavar="OUT_FILE", help="default: stdout")
    r.add_argument("--use-all", action="store_true",
                   help="solve with every given share so that tampering shows up as an inconsistency")
    r.set_defaults(func=cmd_reconstruct)

    v = sp.add_parser("verify", help="run verification suites on a bundle")
    v.add_argument("-b", required=True, metavar="BUNDLE_DIR")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--shares", nargs="*", default=[])
    v.set_defaults(func=cmd_verify)

    t = sp.add_parser("table", help="parameter table for rate-1/2 schemes")
    t.add_argument("--preset", choices=["fig-hermitian"], default="fig-hermitian")
    t.add_argument("--q", type=int, default=16, help=argparse.SUPPRESS)
    t.set_defaults(func=cmd_table)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InconsistentSystem as exc:
        _err(f"inconsistent shares: {exc}")
        return EXIT_FAIL
    except (FormatError, InsufficientShares, ValueError, OSError) as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
