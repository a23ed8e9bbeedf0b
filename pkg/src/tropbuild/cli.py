"""Command-line surface: enumeration, retraction, verification.

Exit codes: 0 success, 1 verification failure, 2 invalid flags,
3 retraction refused (torus-unstable input), 4 iteration cap hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .building import building_to_json, normalize
from .grass import grass_from_json, trop_pluecker
from .kottwitz import (
    HodgeDatum,
    enumerate_kottwitz,
    hasse_edges,
    is_hn_decomposable,
    is_strongly_regular,
    kottwitz_to_json,
    stratum_dim,
)
from .retract import (
    MaxIterationsExceeded,
    NonUniqueMaximizer,
    NotSemistableForTorus,
    NotStable,
    RetractionConfig,
    apartment_retract,
    global_retract,
    retraction_certificate,
)
from .svgplot import polygon_svg
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_NOT_STABLE = 3
EXIT_MAX_ITERATIONS = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropbuild",
        description="Newton-polygon combinatorics and building retractions for Gr(d, n)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pk = sub.add_parser("kottwitz", help="enumerate and classify Newton points")
    pk.add_argument("--n", type=int, required=True)
    pk.add_argument("--d", type=int, required=True)
    pk.add_argument("--classify", action="store_true", help="print classification table")
    pk.add_argument("--hasse", action="store_true", help="print covering relations")
    pk.add_argument("--svg", type=Path, metavar="PATH", help="write polygon plot")
    pk.add_argument("--json", type=Path, metavar="PATH", help="write JSON export")

    pr = sub.add_parser("retract", help="retract a point file to the building")
    pr.add_argument("--point", type=Path, required=True, metavar="FILE")
    pr.add_argument("--apartment-only", action="store_true",
                    help="standard-frame apartment retraction only")
    pr.add_argument("--config", type=Path, metavar="FILE",
                    help="JSON with frame_depth/max_iterations/verify_depth")
    pr.add_argument("--out", type=Path, metavar="PATH", help="write result JSON here")

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("--suite", choices=SUITES + ("all",), required=True)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--out", type=Path, metavar="PATH", help="write report JSON here")
    return parser


def _cmd_kottwitz(args) -> int:
    try:
        h = HodgeDatum(args.n, args.d)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    K = enumerate_kottwitz(h)
    rows = []
    for v in K:
        rows.append({
            "slopes": v.to_json(),
            "basic": v.is_basic(),
            "hn_decomposable": is_hn_decomposable(v, h),
            "strongly_regular": is_strongly_regular(v, h),
            "stratum_dim": stratum_dim(v, h),
        })
    if args.classify:
        header = f"{'slopes':<40} {'basic':<6} {'hn_dec':<7} {'str_reg':<8} dim"
        print(header)
        for r in rows:
            print(f"{'(' + ', '.join(r['slopes']) + ')':<40} "
                  f"{str(r['basic']).lower():<6} {str(r['hn_decomposable']).lower():<7} "
                  f"{str(r['strongly_regular']).lower():<8} {r['stratum_dim']}")
    else:
        for r in rows:
            print("(" + ", ".join(r["slopes"]) + ")")
    edges = hasse_edges(K) if (args.hasse or args.json) else None
    if args.hasse:
        index = {v: i for i, v in enumerate(K)}
        print("hasse edges (indices into the list above):")
        for a, b in edges:
            print(f"  {index[a]} < {index[b]}")
    if args.json:
        doc = json.loads(kottwitz_to_json(K, h, edges))
        doc["classification"] = rows
        args.json.write_text(json.dumps(doc, sort_keys=True) + "\n")
        print(f"wrote {args.json}")
    if args.svg:
        args.svg.write_text(polygon_svg(K, h))
        print(f"wrote {args.svg}")
    return EXIT_OK


def _cmd_retract(args) -> int:
    try:
        x = grass_from_json(args.point.read_text())
    except (OSError, ValueError, KeyError) as e:
        print(f"error reading point file: {e}", file=sys.stderr)
        return EXIT_USAGE
    cfg_kwargs = {}
    if args.config:
        try:
            cfg_kwargs = json.loads(args.config.read_text())
        except (OSError, ValueError) as e:
            print(f"error reading config: {e}", file=sys.stderr)
            return EXIT_USAGE
    try:
        cfg = RetractionConfig(**cfg_kwargs)
    except (TypeError, ValueError) as e:
        print(f"bad config: {e}", file=sys.stderr)
        return EXIT_USAGE
    h = HodgeDatum(x.n, x.d)
    if args.apartment_only:
        try:
            u = apartment_retract(trop_pluecker(x), h)
        except (NotSemistableForTorus, NonUniqueMaximizer) as e:
            print(f"not retractable: {e}", file=sys.stderr)
            return EXIT_NOT_STABLE
        doc = {"apartment_coords": [str(c) for c in u]}
        out = json.dumps(doc, sort_keys=True)
    else:
        try:
            z = global_retract(x, cfg, h)
        except NotStable as e:
            print(f"not stable: {e}", file=sys.stderr)
            return EXIT_NOT_STABLE
        except MaxIterationsExceeded as e:
            print(f"no fixed point: {e}", file=sys.stderr)
            return EXIT_MAX_ITERATIONS
        doc = {
            "point": json.loads(building_to_json(normalize(z))),
            "certificate": retraction_certificate(x, z, cfg, h),
        }
        out = json.dumps(doc, sort_keys=True)
    if args.out:
        args.out.write_text(out + "\n")
        print(f"wrote {args.out}")
    else:
        print(out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    reports = run_suite(args.suite, args.seed)
    doc = [r.to_doc() for r in reports]
    payload = json.dumps(doc[0] if len(doc) == 1 else doc, sort_keys=True)
    if args.out:
        args.out.write_text(payload + "\n")
    print(payload)
    ok = all(r.ok for r in reports)
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "kottwitz":
        return _cmd_kottwitz(args)
    if args.command == "retract":
        return _cmd_retract(args)
    if args.command == "verify":
        return _cmd_verify(args)
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
