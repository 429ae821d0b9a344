"""Command-line surface.

Subcommands: compute (characteristic numbers), gw (Gromov-Witten tables),
descendant (a single tangency-descendant invariant), hurwitz, metric, and
verify (built-in consistency suites).  Values are always exact: "p/q", or
the bare integer when q = 1.  Output is deterministic byte-for-byte for
fixed inputs, across cold and warm caches.

Exit codes: 2 usage, 1 verification mismatch, 3 missing seed data or an
out-of-scope request (genus 2 below degree 4).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cache import CacheFile, default_cache_dir
from .descend import DescendantEngine, DescendantSpec, genus0_tangency_potential, genus1_tangency_potential
from .geometry import GeometryError, TargetGeometry, builtin_geometry, load_geometry
from .gw import GWTable, InsufficientSeeds, SeedConflict, wdvv_solve
from .metric import deformed_metric
from .oracles import cross_check, hurwitz_bruteforce
from .planecurves import (
    charnum_genus0,
    charnum_genus1,
    charnum_genus1_virtual_route,
    charnum_genus2,
)
from .quadric import hurwitz as hurwitz_table
from .quadric import quadric_genus0, quadric_genus1
from .seeds import (
    default_genus1_seed_name,
    default_gw_seeds,
    load_genus1_seeds,
    load_virtual2,
    packaged_seed_text,
    read_seed_file,
)
from .series import SeriesTable, format_rat

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_MISSING_SEEDS = 3


def _geometry(name_or_path: str) -> TargetGeometry:
    try:
        return builtin_geometry(name_or_path)
    except GeometryError:
        p = Path(name_or_path)
        if p.exists():
            return load_geometry(p.read_text())
        raise


def _emit(records: list[dict], fields: list[str], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(records, sort_keys=True, separators=(",", ":")) + "\n")
    elif fmt == "csv":
        out.write(",".join(fields) + "\n")
        for r in records:
            out.write(",".join(_csv_cell(r[f]) for f in fields) + "\n")
    elif fmt == "md":
        widths = [max(len(f), *(len(_csv_cell(r[f])) for r in records)) if records else len(f) for f in fields]
        out.write("| " + " | ".join(f.ljust(w) for f, w in zip(fields, widths)) + " |\n")
        out.write("|" + "|".join("-" * (w + 2) for w in widths) + "|\n")
        for r in records:
            out.write("| " + " | ".join(_csv_cell(r[f]).ljust(w) for f, w in zip(fields, widths)) + " |\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _csv_cell(v) -> str:
    if isinstance(v, list):
        return ";".join(map(str, v))
    return str(v)


def _char_records(table: SeriesTable, geom: TargetGeometry) -> list[dict]:
    records = []
    for (deg, mono), val in sorted(table.entries.items()):
        d = deg[0] if len(deg) == 1 else list(deg)
        records.append({"d": d, "a": mono[0], "b": mono[1], "c": mono[2], "value": format_rat(val)})
    return records


def _gw_records(gw: GWTable) -> list[dict]:
    records = []
    for (beta, key), val in sorted(gw.entries.items()):
        d = beta[0] if len(beta) == 1 else list(beta)
        ins = " ".join(
            f"T{i}^{key.count(i)}" if key.count(i) > 1 else f"T{i}" for i in sorted(set(key))
        )
        records.append({"d": d, "insertions": ins or "-", "value": format_rat(val)})
    return records


def _genus1_seed_table(geom, args):
    if args.seeds:
        return load_genus1_seeds(read_seed_file(args.seeds), geom)
    name = default_genus1_seed_name(geom)
    if name is None:
        raise FileNotFoundError(f"genus-1 seeds for {geom.name} (pass --seeds <path>)")
    return load_genus1_seeds(packaged_seed_text(name), geom)


def cmd_compute(args, out) -> int:
    geom = _geometry(args.target)
    if geom.name == "p2":
        dmax = int(args.dmax)
        if args.genus == 2 and dmax < 4:
            sys.stderr.write(
                "out of enumerative scope: genus-2 output needs d >= 4 (the degree-2 and "
                "degree-3 degenerate-cover terms are never evaluated)\n"
            )
            return EXIT_MISSING_SEEDS
        gw = wdvv_solve(geom, default_gw_seeds(geom), dmax)
        g0 = charnum_genus0(gw, dmax)
        if args.genus == 0:
            table = g0
        else:
            try:
                seeds = _genus1_seed_table(geom, args)
            except FileNotFoundError as e:
                sys.stderr.write(f"missing seed file: {e}\n")
                return EXIT_MISSING_SEEDS
            seeds_by_d = {b[0]: v for b, v in seeds.items()}
            for d in range(1, dmax + 1):
                if d not in seeds_by_d:
                    sys.stderr.write(f"missing seed file entry: genus-1 degree {d}\n")
                    return EXIT_MISSING_SEEDS
            g1 = charnum_genus1(g0, seeds_by_d, dmax)
            if args.genus == 1:
                table = g1
            else:
                if not args.virtual2:
                    sys.stderr.write(
                        "missing seed file: genus-2 virtual numbers "
                        "(pass --virtual2 <path>; records d;a,b,c;p/q)\n"
                    )
                    return EXIT_MISSING_SEEDS
                virtual2 = load_virtual2(read_seed_file(args.virtual2), dmax)
                table = charnum_genus2(g0, g1, virtual2, dmax)
    elif geom.name == "p1xp1":
        if args.genus > 1:
            sys.stderr.write("p1xp1 supports genus 0 and 1 only\n")
            return EXIT_USAGE
        d1, d2 = (int(x) for x in str(args.dmax).split(","))
        total = d1 + d2
        gw = wdvv_solve(geom, default_gw_seeds(geom), total)
        g0 = quadric_genus0(gw, total)
        if args.genus == 0:
            table = g0
        else:
            try:
                seeds = _genus1_seed_table(geom, args)
            except FileNotFoundError as e:
                sys.stderr.write(f"missing seed file: {e}\n")
                return EXIT_MISSING_SEEDS
            for beta in (b for t in range(1, total + 1) for b in geom.curve_classes(t)):
                if tuple(beta) not in seeds:
                    sys.stderr.write(f"missing seed file entry: genus-1 bidegree {beta}\n")
                    return EXIT_MISSING_SEEDS
            table = quadric_genus1(geom, gw, g0, seeds, total)
        table = table.filter_keys(lambda deg, mono: deg[0] <= d1 and deg[1] <= d2)
    else:
        sys.stderr.write("compute supports --target p2 or p1xp1\n")
        return EXIT_USAGE
    _emit(_char_records(table, geom), ["d", "a", "b", "c", "value"], args.format, out)
    return EXIT_OK


def cmd_gw(args, out) -> int:
    geom = _geometry(args.target)
    if geom.name == "p1xp1":
        d1, d2 = (int(x) for x in str(args.dmax).split(","))
        dmax = d1 + d2
    else:
        dmax = int(args.dmax)
    seeds = default_gw_seeds(geom)
    if args.seeds:
        from .gw import parse_seed_records

        seeds = parse_seed_records(read_seed_file(args.seeds), geom)
    gw = wdvv_solve(geom, seeds, dmax)
    _emit(_gw_records(gw), ["d", "insertions", "value"], args.format, out)
    return EXIT_OK


SPEC_RE = re.compile(r"tau(\d+)\(T(\d+)\)(?:\^(\d+))?")


def parse_descendant(text: str):
    """`tau0(T2)^4 tau1(T1)^1 @ g=0 d=2 target=p2` -> (spec pieces, options)."""
    if "@" not in text:
        raise ValueError("expected 'tau...(...) @ g=.. d=.. target=..'")
    head, tail = text.split("@")
    insertions = []
    for m in SPEC_RE.finditer(head):
        power = int(m.group(3) or 1)
        insertions.extend([(int(m.group(1)), int(m.group(2)))] * power)
    if not insertions:
        raise ValueError(f"no insertions parsed from {head!r}")
    opts = dict(kv.split("=") for kv in tail.split())
    genus = int(opts.get("g", "0"))
    degrees = tuple(int(x) for x in opts["d"].split(","))
    return genus, degrees, tuple(insertions), opts.get("target", "p2")


def cmd_descendant(args, out) -> int:
    genus, degrees, insertions, target = parse_descendant(args.spec)
    geom = _geometry(args.target or target)
    dmax = sum(degrees)
    if genus == 0:
        gw = wdvv_solve(geom, default_gw_seeds(geom), dmax)
        engine = DescendantEngine(geom, gw)
        cache = None
        if not args.no_cache:
            cache_path = Path(args.cache) if args.cache else default_cache_dir() / f"{geom.name}.cache"
            cache = CacheFile(cache_path, geom.fingerprint())
            cache.load()
            engine.memo.update(cache.seed_memo())
        value = engine.value(DescendantSpec(0, degrees, insertions))
        if cache is not None:
            cache.absorb(engine.memo)
            cache.save()
    elif genus == 1:
        if any(m > 1 for m, _ in insertions):
            sys.stderr.write(
                "genus-1 invariants are available for psi powers <= 1 only "
                "(no higher-power genus-1 recursion is implemented)\n"
            )
            return EXIT_USAGE
        gw = wdvv_solve(geom, default_gw_seeds(geom), dmax)
        g0 = genus0_tangency_potential(geom, gw, dmax)
        try:
            seeds = _genus1_seed_table(geom, args)
        except FileNotFoundError as e:
            sys.stderr.write(f"missing seed file: {e}\n")
            return EXIT_MISSING_SEEDS
        g1 = genus1_tangency_potential(geom, g0, seeds, dmax)
        value = _extract_first_descendant(geom, g1, degrees, insertions)
    else:
        sys.stderr.write("descendant supports genus 0 and 1\n")
        return EXIT_USAGE
    out.write(format_rat(value) + "\n")
    return EXIT_OK


def _extract_first_descendant(geom, g1: SeriesTable, beta, insertions):
    from .descend import TangencySpace, dimension_valid, reduce_special

    red = reduce_special(geom, DescendantSpec(1, beta, insertions))
    if red[0] == "value":
        return red[1]
    _, factor, spec = red
    if not dimension_valid(geom, spec):
        return Fraction(0)
    ts = TangencySpace(geom)
    counts_x = [0] * len(ts.nondiv)
    counts_y = [0] * (geom.rank - 1)
    for m, c in spec.insertions:
        if m == 0:
            counts_x[ts.nondiv.index(c)] += 1
        else:
            counts_y[c - 1] += 1
    return factor * g1.coeff(spec.beta, tuple(counts_x) + tuple(counts_y))


def cmd_hurwitz(args, out) -> int:
    table = hurwitz_table(args.gmax, int(args.dmax))
    records = [
        {"g": g, "d": d, "b": b, "value": format_rat(v)} for (g, d, b), v in sorted(table.items())
    ]
    _emit(records, ["g", "d", "b", "value"], args.format, out)
    return EXIT_OK


def cmd_metric(args, out) -> int:
    geom = _geometry(args.target)
    lower, upper = deformed_metric(geom)
    matrix = upper if args.which == "upper" else lower
    out.write(matrix.to_text() + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    failures = run_verify_suite(args.suite, out)
    if failures:
        out.write(f"FAIL {args.suite}: {failures} mismatch(es)\n")
        return EXIT_MISMATCH
    out.write(f"ok {args.suite}\n")
    return EXIT_OK


def run_verify_suite(suite: str, out) -> int:
    failures = 0
    if suite == "hurwitz":
        table = hurwitz_table(1, 4)
        for g in (0, 1):
            for d in range(1, 5):
                b = 2 * d + 2 * g - 2
                want = hurwitz_bruteforce(d, b).count
                got = table.get((g, d, b), Fraction(0))
                if want != got:
                    failures += 1
                    out.write(f"mismatch g={g} d={d} b={b}: recursion {got} brute force {want}\n")
    elif suite == "p2-genus0":
        geom = builtin_geometry("p2")
        gw = wdvv_solve(geom, default_gw_seeds(geom), 3)
        g0 = charnum_genus0(gw, 3)
        engine = DescendantEngine(geom, gw)
        from .planecurves import tangency_expand

        pipeline, direct = {}, {}
        for (deg, mono), val in g0.entries.items():
            pipeline[(deg[0],) + mono] = val
        for d in (1, 2, 3):
            for key in pipeline:
                if key[0] != d:
                    continue
                a, b, c = key[1:]
                total = sum(
                    (mult * engine.value(spec) for spec, mult in tangency_expand(a, b, c, d)),
                    Fraction(0),
                )
                direct[key] = total
        for key, va, vb in cross_check(pipeline, direct):
            failures += 1
            out.write(f"mismatch at {key}: pipeline {va} recursion {vb}\n")
    elif suite == "p2-genus1":
        geom = builtin_geometry("p2")
        gw = wdvv_solve(geom, default_gw_seeds(geom), 3)
        g0 = charnum_genus0(gw, 3)
        seeds = load_genus1_seeds(packaged_seed_text("p2-genus1"), geom)
        seeds_by_d = {b[0]: v for b, v in seeds.items()}
        direct = charnum_genus1(g0, seeds_by_d, 3, check_overdetermined=True)
        virtual = charnum_genus1_virtual_route(geom, gw, g0, seeds_by_d, 3)
        for key, va, vb in cross_check(direct.entries, virtual.entries):
            failures += 1
            out.write(f"mismatch at {key}: direct {va} virtual route {vb}\n")
    elif suite == "metric":
        for name in ("p1", "p2", "p3", "p1xp1", "gr24"):
            geom = builtin_geometry(name)
            lower, upper = deformed_metric(geom)
            if not lower.matmul(upper).is_identity():
                failures += 1
                out.write(f"{name}: gamma . gamma^(-1) is not the identity\n")
            failures += _metric_term_check(geom, lower, out)
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return failures


def _metric_term_check(geom, lower, out) -> int:
    """Independent term-by-term recomputation of gamma_ij coefficients."""
    from math import factorial

    bad = 0
    r = geom.rank
    for i in range(r):
        for j in range(r):
            for mono, coef in lower.entry(i, j).items():
                classes = [k + 1 for k in range(r - 1) for _ in range(mono[k])]
                vec = geom.cup_classes(classes + [i, j])
                val = geom.integral(vec) * Fraction(-2) ** sum(mono)
                for e in mono:
                    val /= factorial(e)
                if val != coef:
                    bad += 1
                    out.write(f"{geom.name}: gamma_{i}{j} at {mono}: {coef} vs {val}\n")
    return bad


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charnum", description=__doc__)
    ap.add_argument("--version", action="version", version=f"charnum {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seeds=True):
        p.add_argument("--format", choices=("json", "csv", "md"), default="json")
        if seeds:
            p.add_argument("--seeds", help="seed-file path overriding packaged data")

    p = sub.add_parser("compute", help="characteristic numbers")
    p.add_argument("--target", required=True)
    p.add_argument("--genus", type=int, choices=(0, 1, 2), required=True)
    p.add_argument("--dmax", required=True, help="max degree, or D1,D2 for p1xp1")
    p.add_argument("--virtual2", help="genus-2 virtual seed file (records d;a,b,c;p/q)")
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("gw", help="genus-0 Gromov-Witten invariants")
    p.add_argument("--target", required=True)
    p.add_argument("--dmax", required=True)
    common(p)
    p.set_defaults(func=cmd_gw)

    p = sub.add_parser("descendant", help="one tangency-descendant invariant")
    p.add_argument("spec", help="e.g. 'tau0(T2)^4 tau1(T1)^1 @ g=0 d=2 target=p2'")
    p.add_argument("--target", help="overrides the target named in the invariant string")
    p.add_argument("--cache", help="cache file path")
    p.add_argument("--no-cache", action="store_true")
    common(p)
    p.set_defaults(func=cmd_descendant)

    p = sub.add_parser("hurwitz", help="simple Hurwitz numbers")
    p.add_argument("--dmax", required=True)
    p.add_argument("--gmax", type=int, default=1, choices=(0, 1))
    common(p, seeds=False)
    p.set_defaults(func=cmd_hurwitz)

    p = sub.add_parser("metric", help="the deformed pairing of a target")
    p.add_argument("--target", required=True)
    p.add_argument("--which", choices=("upper", "lower"), default="upper")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("verify", help="independent consistency suites")
    p.add_argument("--suite", required=True, choices=("hurwitz", "p2-genus0", "p2-genus1", "metric"))
    p.set_defaults(func=cmd_verify)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except InsufficientSeeds as e:
        sys.stderr.write(f"insufficient seed data: {e}\n")
        return EXIT_MISSING_SEEDS
    except SeedConflict as e:
        sys.stderr.write(f"seed data fails verification: {e}\n")
        return EXIT_MISMATCH
    except (GeometryError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except FileNotFoundError as e:
        sys.stderr.write(f"missing seed file: {e}\n")
        return EXIT_MISSING_SEEDS


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
