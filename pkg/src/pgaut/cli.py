"""Command line front end for corpus checking and verification."""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .automorphism import automorphism_group, inner_automorphisms, p_part
from .engine import consistency_check, enumerate_group
from .harness import classify, report_csv, report_json, run_corpus
from .presentation import PresentationError, parse_corpus
from .structure import (
    center,
    derived_subgroup,
    frattini,
    maximal_subgroups,
    omega1,
    second_center,
)
from .webb import webb_maps

BUILTIN_FILES = ("order8.pc", "order16.pc", "order27.pc", "order125.pc")


def builtin_texts() -> list[str]:
    """Text of the packaged corpus files, in fixed order."""
    root = resources.files("pgaut") / "data"
    return [(root / fname).read_text() for fname in BUILTIN_FILES]


def _load(paths: list[str]) -> list:
    groups = []
    for path in paths:
        groups.extend(parse_corpus(Path(path).read_text()))
    return groups


def _select(groups, name: str | None):
    if name is None:
        return groups
    picked = [g for g in groups if g.name == name]
    if not picked:
        sys.exit(f"no group named {name!r} in the given file")
    return picked


def cmd_check(args) -> int:
    bad = 0
    for pres in _load(args.files):
        G = enumerate_group(pres)
        rep = consistency_check(G)
        status = "ok" if rep.consistent else "FAIL"
        print(f"{pres.name}: order {G.size}, consistency {status}")
        if not rep.consistent:
            bad += 1
            for line in rep.failures():
                print(f"  {line}")
    return 1 if bad else 0


def cmd_structure(args) -> int:
    for pres in _select(_load(args.files), args.group):
        G = enumerate_group(pres)
        Z = center(G)
        rows = [
            ("order", G.size),
            ("centre", Z.order),
            ("derived", derived_subgroup(G).order),
            ("frattini", frattini(G).order),
            ("second centre", second_center(G).order),
            ("omega1(centre)", omega1(Z).order),
            ("maximal subgroups", len(maximal_subgroups(G))),
        ]
        print(f"{G.name} (p={G.p}, rank {G.n})")
        for label, value in rows:
            print(f"  {label}: {value}")
    return 0


def cmd_classify(args) -> int:
    for pres in _load(args.files):
        G = enumerate_group(pres)
        cls = classify(G)
        on = [k for k, v in cls.flags().items() if v]
        print(f"{G.name}: bucket={cls.bucket} " + " ".join(sorted(on)))
    return 0


def cmd_webb(args) -> int:
    for pres in _select(_load(args.files), args.group):
        G = enumerate_group(pres)
        print(f"{G.name}: maximal subgroups and Webb maps")
        for M in maximal_subgroups(G):
            if not center(G) <= M:
                print(f"  M order {M.order}: centre not inside, skipped")
                continue
            maps = webb_maps(G, M)
            verdict = maps.im_tau != maps.ker_gamma
            print(
                f"  M order {M.order}: |im tau|={maps.im_tau.order} "
                f"|ker tau|={maps.ker_tau.order} "
                f"|im gamma|={maps.im_gamma.order} "
                f"|ker gamma|={maps.ker_gamma.order} "
                f"non-inner={'yes' if verdict else 'no'}"
            )
    return 0


def cmd_aut(args) -> int:
    for pres in _select(_load(args.files), args.group):
        G = enumerate_group(pres)
        ag = automorphism_group(G)
        inn = inner_automorphisms(G).shape[0]
        out = ag.order // inn
        print(
            f"{G.name}: |Aut|={ag.order} |Inn|={inn} |Out|={out} "
            f"p-part={p_part(ag.order, G.p)} "
            f"divides={'yes' if ag.order % G.size == 0 else 'no'}"
        )
    return 0


def cmd_verify(args) -> int:
    texts = []
    if args.builtin:
        texts.extend(builtin_texts())
    for path in args.files:
        texts.append(Path(path).read_text())
    if not texts:
        sys.exit("nothing to verify: pass files or --builtin")
    report = run_corpus(texts, jobs=args.jobs)
    summary = report["summary"]
    for rec in report["groups"]:
        nfail = sum(1 for c in rec["checks"] if not c["pass"])
        status = "ERROR" if rec["error"] else ("FAIL" if nfail else "ok")
        print(
            f"{rec['name']}: {status} order={rec['order']} "
            f"bucket={rec.get('bucket', '-')} checks={len(rec['checks'])} "
            f"failed={nfail} skips={len(rec['skips'])}"
            + (f" error={rec['error']}" if rec["error"] else "")
        )
    print(
        f"total {summary['total']} groups, "
        f"failed checks {summary['failed_checks']}, "
        f"errors {summary['errors']}, buckets {summary['buckets']}"
    )
    if args.report:
        Path(args.report).write_text(report_json(report))
        print(f"report written to {args.report}")
    if args.csv:
        Path(args.csv).write_text(report_csv(report))
        print(f"csv written to {args.csv}")
    return 1 if summary["failed_checks"] else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pgaut",
        description="p-group workbench: pc presentations, automorphism "
        "oracles, and divisibility verification",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="parse and consistency-check a corpus file")
    sp.add_argument("files", nargs="+")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("structure", help="print key subgroup orders")
    sp.add_argument("files", nargs="+")
    sp.add_argument("-g", "--group")
    sp.set_defaults(fn=cmd_structure)

    sp = sub.add_parser("classify", help="print classification flags")
    sp.add_argument("files", nargs="+")
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("webb", help="Webb map data per maximal subgroup")
    sp.add_argument("files", nargs="+")
    sp.add_argument("-g", "--group")
    sp.set_defaults(fn=cmd_webb)

    sp = sub.add_parser("aut", help="automorphism group orders")
    sp.add_argument("files", nargs="+")
    sp.add_argument("-g", "--group")
    sp.set_defaults(fn=cmd_aut)

    sp = sub.add_parser("verify", help="run the verification chains")
    sp.add_argument("files", nargs="*")
    sp.add_argument("--builtin", action="store_true",
                    help="include the packaged corpus")
    sp.add_argument("--report", help="write a JSON report here")
    sp.add_argument("--csv", help="write a CSV summary here")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(fn=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (PresentationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
