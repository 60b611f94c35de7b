"""Command-line surface.

Every subcommand speaks two dialects: line-oriented plain text (default) and
a single JSON document (``--json``).  Counts are always decimal strings in
JSON so nothing downstream has to trust its integer width.  Report-shaped
commands (``dist``, ``scan``, ``eulerian``) additionally take ``--out DIR``
and drop a JSON + CSV + PNG triple there.

Exit codes: 0 success, 2 usage error, 3 word budget exceeded, 4 integrity
error (a cross-check that should never fail, failed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .bijections import phi, psi, tau, theta
from .cache import ResultCache
from .core import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    IntegrityError,
    count_words,
    format_multiset,
    format_word,
    parse_multiset,
    parse_word,
    word_multiset,
)
from .eulerian import a_table, verify_gf, verify_pde
from .extendability import (
    classical_instability_witness,
    consecutive_instability_witness,
    extendability_report,
    extendable_indices,
)
from .patterns import count_occurrences, distribution, format_pattern, parse_pattern
from .stability import is_i_stable_on, is_stable_on, scan

_BIJECTIONS = {"psi": psi, "phi": phi, "theta": theta, "tau": tau}


def _emit(args, document: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(document, sort_keys=True, separators=(",", ":")))
    else:
        for line in lines:
            print(line)


def _open_cache(args) -> ResultCache | None:
    return ResultCache(args.cache) if getattr(args, "cache", None) else None


def _write_report(out_dir: str, stem: str, document: dict, csv_text: str, render) -> None:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / f"{stem}.json").write_text(
        json.dumps(document, sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )
    (directory / f"{stem}.csv").write_text(csv_text, encoding="utf-8")
    render(directory / f"{stem}.png")


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_count(args) -> int:
    pattern = parse_pattern(args.pattern)
    word = parse_word(args.word)
    value = count_occurrences(pattern, word)
    _emit(
        args,
        {
            "pattern": format_pattern(pattern),
            "word": format_word(word),
            "count": str(value),
        },
        [str(value)],
    )
    return 0


def _cmd_dist(args) -> int:
    pattern = parse_pattern(args.pattern)
    M = parse_multiset(args.multiset)
    dist = distribution(
        M, pattern, budget=args.budget, threads=args.threads, cache=_open_cache(args)
    )
    document = dist.to_json_dict()
    lines = [f"{s}\t{dist.counts[s]}" for s in sorted(dist.counts)]
    if args.out:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["s", "count"])
        for s in sorted(dist.counts):
            writer.writerow([s, dist.counts[s]])
        from .report import render_distribution

        _write_report(
            args.out,
            "distribution",
            document,
            buf.getvalue(),
            lambda path: render_distribution(dist, path),
        )
    _emit(args, document, lines)
    return 0


def _cmd_stability(args) -> int:
    pattern = parse_pattern(args.pattern)
    M = parse_multiset(args.multiset)
    if args.s is None:
        verdict = is_stable_on(
            M, pattern, budget=args.budget, threads=args.threads, cache=_open_cache(args)
        )
    else:
        verdict = is_i_stable_on(
            M,
            pattern,
            args.s,
            budget=args.budget,
            threads=args.threads,
            cache=_open_cache(args),
        )
    lines = [f"verdict: {verdict.verdict}"]
    if verdict.witness is not None:
        w = verdict.witness
        lines += [
            f"witness multiset: {format_multiset(w.multiset)}",
            f"s: {w.s}",
            f"count canonical: {w.count_canonical}",
            f"count witness: {w.count_other}",
        ]
    _emit(args, verdict.to_json_dict(), lines)
    return 0


def _cmd_scan(args) -> int:
    report = scan(
        args.family,
        args.max_size,
        args.max_letters,
        s=args.s,
        budget=args.budget,
        threads=args.threads,
        cache=_open_cache(args),
    )
    document = report.to_json_dict()
    if args.out:
        from .report import render_scan

        _write_report(
            args.out,
            "scan",
            document,
            report.to_csv(),
            lambda path: render_scan(report, path),
        )
    _emit(args, document, report.to_csv().rstrip("\n").split("\n"))
    return 0


def _cmd_bijection(args) -> int:
    mapping = _BIJECTIONS[args.map]
    word = parse_word(args.word)
    image = mapping(word, args.index)
    document = {
        "map": args.map,
        "i": args.index,
        "word": format_word(word),
        "image": format_word(image),
        "image_multiset": list(word_multiset(image).multiplicities) if image else [],
        "check": None,
    }
    lines = [format_word(image)]
    if args.check:
        pattern = parse_pattern(args.check)
        before = count_occurrences(pattern, word)
        after = count_occurrences(pattern, image)
        document["check"] = {
            "pattern": format_pattern(pattern),
            "count_word": str(before),
            "count_image": str(after),
            "preserved": before == after,
        }
        status = "preserved" if before == after else "NOT preserved"
        lines.append(f"check {format_pattern(pattern)}: {before} -> {after} ({status})")
    _emit(args, document, lines)
    return 0


def _cmd_extend(args) -> int:
    pattern = parse_pattern(args.pattern)
    indices = extendable_indices(pattern)
    chosen = indices if args.index is None else [args.index]
    reports = [extendability_report(pattern, i) for i in chosen]
    document = {
        "pattern": format_pattern(pattern),
        "extendable_indices": indices,
        "reports": [r.to_json_dict() for r in reports],
    }
    lines = [f"extendable indices: {' '.join(map(str, indices))}"]
    for r in reports:
        lines.append(
            f"i={r.index}: extended multiset {format_multiset(r.extended_multiset)}, "
            f"extended permutation {format_word(r.extended_permutation)}"
        )
    _emit(args, document, lines)
    return 0


def _cmd_witness(args) -> int:
    pattern = parse_pattern(args.pattern)
    if pattern.is_classical and pattern.has_distinct_letters and pattern.length >= 3:
        pair = classical_instability_witness(
            pattern, budget=args.budget, threads=args.threads
        )
    elif (
        pattern.is_consecutive
        and pattern.has_distinct_letters
        and not pattern.is_monotone
    ):
        pair = consecutive_instability_witness(
            pattern, budget=args.budget, threads=args.threads
        )
    else:
        raise ValueError(
            "witness construction needs a classical distinct-letter pattern of "
            "length >= 3 or a non-monotone consecutive distinct-letter pattern"
        )
    if pair is None:
        document = {
            "pattern": format_pattern(pattern),
            "applicable": False,
            "reason": "extended permutation has no repeated letter",
        }
        _emit(args, document, ["not applicable: extended permutation has no repeated letter"])
        return 0
    document = pair.to_json_dict()
    document["applicable"] = True
    lines = [
        f"multiset: {format_multiset(pair.multiset)}",
        f"rearranged: {format_multiset(pair.rearranged)}",
        f"s: {pair.s}",
        f"count: {pair.count}",
        f"count rearranged: {pair.count_rearranged}",
    ]
    _emit(args, document, lines)
    return 0


def _cmd_eulerian(args) -> int:
    table = a_table(args.max_m)
    document = table.to_json_dict()
    if args.out:
        from .report import render_atable

        _write_report(
            args.out,
            "eulerian",
            document,
            table.to_csv(),
            lambda path: render_atable(table, path),
        )
    _emit(args, document, table.to_csv().rstrip("\n").split("\n"))
    return 0


def _cmd_verify_gf(args) -> int:
    M = parse_multiset(args.multiset)
    agree, series_value, brute_value = verify_gf(
        args.which,
        M,
        args.s,
        budget=args.budget,
        threads=args.threads,
        cache=_open_cache(args),
    )
    document = {
        "which": args.which,
        "multiset": list(M.multiplicities),
        "s": args.s,
        "series": str(series_value),
        "bruteforce": str(brute_value),
        "match": agree,
    }
    line = (
        f"PASS {series_value} == {brute_value}"
        if agree
        else f"FAIL series {series_value} != bruteforce {brute_value}"
    )
    _emit(args, document, [line])
    return 0


def _cmd_verify_pde(args) -> int:
    holds, first_bad = verify_pde(args.xdeg, args.ydeg, args.zdeg)
    document = {
        "x_deg": args.xdeg,
        "y_deg": args.ydeg,
        "z_deg": args.zdeg,
        "holds": holds,
        "first_failure": None if first_bad is None else list(first_bad),
    }
    line = "PASS" if holds else f"FAIL at x^{first_bad[0]} y^{first_bad[1]} z^{first_bad[2]}"
    _emit(args, document, [line])
    return 0


def _cmd_cache(args) -> int:
    if not args.cache:
        raise ValueError("the cache subcommand needs --cache PATH")
    store = ResultCache(args.cache)
    if args.action == "stats":
        stats = store.stats()
        lines = [
            f"path: {stats['path']}",
            f"entries: {stats['entries']}",
            f"distributions: {stats['distributions']}",
        ] + [
            f"{name}: {stats['by_provenance'][name]}"
            for name in sorted(stats["by_provenance"])
        ]
        _emit(args, stats, lines)
    else:
        store.clear()
        _emit(args, {"cleared": True, "path": str(store.path)}, ["cleared"])
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--cache", metavar="PATH", help="persistent result cache file")
    common.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        metavar="WORDS",
        help="word-enumeration ceiling (default %(default)s)",
    )
    common.add_argument(
        "--threads", type=int, default=1, metavar="N", help="worker threads (default 1)"
    )

    parser = argparse.ArgumentParser(
        prog="permstab",
        description="Pattern-count distributions over multiset words: stability "
        "tests, bijections, witnesses, and ascent-count tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="occurrences of a pattern in a word")
    p.add_argument("pattern")
    p.add_argument("word")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser(
        "dist", parents=[common], help="occurrence-count distribution over a multiset"
    )
    p.add_argument("pattern")
    p.add_argument("multiset")
    p.add_argument("--out", metavar="DIR", help="write JSON/CSV/PNG report files")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser(
        "stability",
        parents=[common],
        help="compare distributions across a whole multiplicity orbit",
    )
    p.add_argument("pattern")
    p.add_argument("multiset")
    p.add_argument("--s", type=int, default=None, help="compare only this occurrence count")
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser(
        "scan", parents=[common], help="hunt instability witnesses for a pattern family"
    )
    p.add_argument("--family", required=True, help="consecutive:3, classical:3-4, or a comma list")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--max-letters", type=int, required=True)
    p.add_argument("--s", type=int, default=None, help="restrict to one occurrence count")
    p.add_argument("--out", metavar="DIR", help="write JSON/CSV/PNG report files")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("bijection", parents=[common], help="apply one of the letter-swap maps")
    p.add_argument("map", choices=sorted(_BIJECTIONS))
    p.add_argument("index", type=int)
    p.add_argument("word")
    p.add_argument("--check", metavar="PATTERN", help="report the count on both sides")
    p.set_defaults(func=_cmd_bijection)

    p = sub.add_parser(
        "extend", parents=[common], help="extendable indices and extension reports"
    )
    p.add_argument("pattern")
    p.add_argument("--index", type=int, default=None)
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser(
        "witness", parents=[common], help="construct an instability witness pair"
    )
    p.add_argument("pattern")
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser(
        "eulerian", parents=[common], help="doubled-letter ascent table A(m,k,s)"
    )
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--out", metavar="DIR", help="write JSON/CSV/PNG report files")
    p.set_defaults(func=_cmd_eulerian)

    p = sub.add_parser(
        "verify-gf",
        parents=[common],
        help="check a generating-function coefficient against brute force",
    )
    p.add_argument("which", choices=["12", "21"])
    p.add_argument("multiset")
    p.add_argument("s", type=int)
    p.set_defaults(func=_cmd_verify_gf)

    p = sub.add_parser(
        "verify-pde",
        parents=[common],
        help="check the three-variable ascent series against its PDE",
    )
    p.add_argument("--xdeg", type=int, required=True)
    p.add_argument("--ydeg", type=int, required=True)
    p.add_argument("--zdeg", type=int, required=True)
    p.set_defaults(func=_cmd_verify_pde)

    p = sub.add_parser("cache", parents=[common], help="inspect or reset the result cache")
    p.add_argument("action", choices=["stats", "clear"])
    p.set_defaults(func=_cmd_cache)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
