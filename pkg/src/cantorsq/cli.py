"""Command line interface.

Subcommands: decompose, image, gap-check, verify-lemmas, cover-report,
verify.  Default output is stable single-line JSON for scripting;
``--output human`` renders the same content as text with 30-significant-
digit decimal previews next to the exact rationals.

Exit codes: 0 success, 1 verification failure, 2 usage error (bad
arguments, out-of-range values, thin regime, resource caps).  Caps can
also be set via the environment: CANTORSQ_BOX_CAP, CANTORSQ_LEVEL_CAP.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .decompose import (
    Band,
    Certificate,
    band_interval,
    decompose_four,
    verify_certificate,
)
from .errors import (
    CapExceeded,
    InternalInconsistencyError,
    SearchExhausted,
    ThinRegimeError,
)
from .ifs import (
    ALL_LEFT,
    DEFAULT_LEVEL_CAP,
    CantorParams,
    level_left_endpoints,
    make_params,
)
from .images import (
    DEFAULT_BOX_CAP,
    ImageRequest,
    MapKind,
    cover_report,
    enumeration_count,
    gap_check,
    image,
)
from .lemmas import (
    TripleBox,
    cond_overlap,
    overlap_chain_margins,
    verify_overlap_lemma,
)
from .numerics import Interval, IntervalUnion, Rational, decimal_preview, rat

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2

PREVIEW_DIGITS = 30


@dataclass(frozen=True)
class CliConfig:
    alpha: Rational
    depth: int
    max_level: int
    box_cap: int
    level_cap: int
    output: str
    seed: int


def _env_cap(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError("%s must be an integer, got %r" % (name, raw)) from exc


def _build_config(args: argparse.Namespace) -> CliConfig:
    box_cap = args.box_cap
    if box_cap is None:
        box_cap = _env_cap("CANTORSQ_BOX_CAP", DEFAULT_BOX_CAP)
    level_cap = args.level_cap
    if level_cap is None:
        level_cap = _env_cap("CANTORSQ_LEVEL_CAP", DEFAULT_LEVEL_CAP)
    return CliConfig(
        alpha=rat(args.alpha),
        depth=getattr(args, "depth", 40),
        max_level=getattr(args, "max_level", 5),
        box_cap=box_cap,
        level_cap=level_cap,
        output=args.output,
        seed=args.seed,
    )


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _preview(value: Rational) -> str:
    return decimal_preview(value, PREVIEW_DIGITS)


def _ternary(prefix: str, tail: str) -> str:
    digits = prefix.translate(str.maketrans("12", "02"))
    repeating = "0" if tail == ALL_LEFT else "2"
    return "0." + digits + "(" + repeating + "...)"


def cmd_decompose(config: CliConfig, args: argparse.Namespace) -> int:
    params = make_params(config.alpha)
    if args.ternary and params.alpha != 3:
        raise ValueError("--ternary requires alpha = 3")
    x = rat(args.x)
    cert = decompose_four(params, x, config.depth)
    result = verify_certificate(params, cert)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(cert.canonical_json())
    if config.output == "json":
        print(cert.canonical_json(), end="")
    else:
        lines = [
            "x        = %s ~ %s" % (cert.x, _preview(cert.x)),
            "alpha    = %s (ratio %s), depth %d, scaling %d, case %s"
            % (cert.alpha, params.ratio, cert.depth, cert.scaling, cert.case),
        ]
        for pos, (point, value) in enumerate(zip(cert.points, cert.values), 1):
            label = "fourth " if pos == 4 else "point %d" % pos
            lines.append(
                "%s: prefix %-12s tail %s  value %s ~ %s"
                % (label, point.prefix or "(empty)", point.tail, value,
                   _preview(value))
            )
            if args.ternary:
                lines.append("         ternary %s" % _ternary(point.prefix, point.tail))
        lines.append("residual = %s ~ %s" % (cert.residual, _preview(cert.residual)))
        lines.append("bound    = %s ~ %s" % (cert.bound, _preview(cert.bound)))
        lines.append("verified : %s" % ("yes" if result.ok else "NO"))
        for reason in result.reasons:
            lines.append("  reason : %s" % reason)
        print("\n".join(lines))
    return EXIT_OK if result.ok else EXIT_VERIFY


def cmd_image(config: CliConfig, args: argparse.Namespace) -> int:
    params = make_params(config.alpha)
    request = ImageRequest(params, args.level, args.arity, MapKind(args.map))
    started = time.perf_counter()
    union = image(request, config.box_cap)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    payload = {
        "alpha": str(params.alpha),
        "level": args.level,
        "arity": args.arity,
        "map": request.map_kind.value,
        "union": union.to_json(),
        "measure": str(union.measure()),
        "boxes_enumerated": enumeration_count(request),
        "elapsed_ms": round(elapsed_ms, 3),
    }
    if config.output == "json":
        _emit_json(payload)
    else:
        print(
            "image of level-%d set, arity %d, map %s (alpha %s)"
            % (args.level, args.arity, request.map_kind.value, params.alpha)
        )
        for part in union.parts:
            print(
                "  [%s, %s] ~ [%s, %s]"
                % (part.lo, part.hi, _preview(part.lo), _preview(part.hi))
            )
        print(
            "measure %s ~ %s, %d boxes, %.3f ms"
            % (union.measure(), _preview(union.measure()),
               payload["boxes_enumerated"], elapsed_ms)
        )
    return EXIT_OK


def cmd_gap_check(config: CliConfig, args: argparse.Namespace) -> int:
    params = make_params(config.alpha)
    gap = gap_check(params, config.box_cap)
    payload = {
        "alpha": str(params.alpha),
        "ratio": str(params.ratio),
        "gap": None if gap is None else gap.to_json(),
        "checked_level": 1,
    }
    if config.output == "json":
        _emit_json(payload)
    elif gap is None:
        print(
            "no gap: alpha %s is in the thick regime (ratio %s >= 1/3)"
            % (params.alpha, params.ratio)
        )
    else:
        print(
            "gap (%s, %s) ~ (%s, %s): verified free of four-square sums "
            "at level 1" % (gap.lo, gap.hi, _preview(gap.lo), _preview(gap.hi))
        )
    return EXIT_OK


def _lemma_sweep(params: CantorParams, config: CliConfig,
                 max_level: int, random_boxes: int) -> dict:
    levels = []
    min_chain = None
    min_join = None
    failures = 0
    for level in range(1, max_level + 1):
        endpoints = level_left_endpoints(params, level, config.level_cap)
        checked = eligible = level_failures = 0
        for combo in combinations_with_replacement(endpoints, 3):
            # Descending lefts: the margins' canonical orientation.
            box = TripleBox(tuple(reversed(combo)), level)
            checked += 1
            if not cond_overlap(params, box):
                continue
            eligible += 1
            if not verify_overlap_lemma(params, box):
                level_failures += 1
            margins = overlap_chain_margins(params, box)
            if min_chain is None:
                min_chain = list(margins.chain)
                min_join = margins.join
            else:
                min_chain = [min(old, new) for old, new
                             in zip(min_chain, margins.chain)]
                min_join = min(min_join, margins.join)
        failures += level_failures
        levels.append(
            {"level": level, "boxes": checked, "eligible": eligible,
             "closure_failures": level_failures}
        )
    random_report = None
    if random_boxes:
        rng = random.Random(config.seed)
        sampled = eligible = sample_failures = 0
        for _ in range(random_boxes):
            level = rng.randint(1, max_level + 3)
            endpoints = level_left_endpoints(params, level, config.level_cap)
            box = TripleBox(
                tuple(sorted((rng.choice(endpoints) for _ in range(3)),
                             reverse=True)),
                level,
            )
            sampled += 1
            if not cond_overlap(params, box):
                continue
            eligible += 1
            if not verify_overlap_lemma(params, box):
                sample_failures += 1
        failures += sample_failures
        random_report = {
            "seed": config.seed,
            "sampled": sampled,
            "eligible": eligible,
            "closure_failures": sample_failures,
        }
    return {
        "alpha": str(params.alpha),
        "ratio": str(params.ratio),
        "max_level": max_level,
        "levels": levels,
        "min_chain_margins": None if min_chain is None
        else [str(m) for m in min_chain],
        "min_join_margin": None if min_join is None else str(min_join),
        "random": random_report,
        "all_pass": failures == 0,
    }


def cmd_verify_lemmas(config: CliConfig, args: argparse.Namespace) -> int:
    params = make_params(config.alpha)
    payload = _lemma_sweep(params, config, config.max_level, args.random_boxes)
    if config.output == "json":
        _emit_json(payload)
    else:
        print("subdivision lemma sweep, alpha %s, levels 1..%d"
              % (params.alpha, config.max_level))
        for row in payload["levels"]:
            print("  level %d: %d boxes, %d eligible, %d closure failures"
                  % (row["level"], row["boxes"], row["eligible"],
                     row["closure_failures"]))
        if payload["min_chain_margins"] is not None:
            print("  min chain margins: %s" % ", ".join(payload["min_chain_margins"]))
            print("  min join margin  : %s" % payload["min_join_margin"])
        if payload["random"] is not None:
            row = payload["random"]
            print("  random: %d sampled (seed %d), %d eligible, %d failures"
                  % (row["sampled"], row["seed"], row["eligible"],
                     row["closure_failures"]))
        print("  all pass: %s" % payload["all_pass"])
    return EXIT_OK if payload["all_pass"] else EXIT_VERIFY


def cmd_cover_report(config: CliConfig, args: argparse.Namespace) -> int:
    params = make_params(config.alpha)
    bands = IntervalUnion(
        [band_interval(params, Band.LOW), band_interval(params, Band.MAIN)]
    )
    full = IntervalUnion([Interval(0, 4)])
    reports = (
        ("three-square-bands", cover_report(params, bands, 3, config.max_level,
                                            box_cap=config.box_cap)),
        ("four-square-range", cover_report(params, full, 4, config.max_level,
                                           box_cap=config.box_cap)),
    )
    payload = {
        "alpha": str(params.alpha),
        "max_level": config.max_level,
        "claims": [dict(report.to_json(), name=name) for name, report in reports],
        "all_pass": all(report.passed for _, report in reports),
    }
    if config.output == "json":
        _emit_json(payload)
    else:
        print("containment report, alpha %s, levels 1..%d"
              % (params.alpha, config.max_level))
        for name, report in reports:
            rows = " ".join("%d:%s" % (lvl, "ok" if ok else "FAIL")
                            for lvl, ok in report.rows)
            print("  %-20s arity %d  %s" % (name, report.arity, rows))
        print("  all pass: %s" % payload["all_pass"])
    return EXIT_OK if payload["all_pass"] else EXIT_VERIFY


def cmd_verify(config: CliConfig, args: argparse.Namespace) -> int:
    with open(args.certificate, "r", encoding="ascii") as fh:
        data = json.load(fh)
    cert = Certificate.from_json_dict(data)
    params = make_params(cert.alpha)
    result = verify_certificate(params, cert)
    payload = {
        "valid": result.ok,
        "reasons": list(result.reasons),
        "x": str(cert.x),
        "alpha": str(cert.alpha),
    }
    if config.output == "json":
        _emit_json(payload)
    else:
        print("certificate for x = %s (alpha %s): %s"
              % (cert.x, cert.alpha, "valid" if result.ok else "INVALID"))
        for reason in result.reasons:
            print("  reason: %s" % reason)
    return EXIT_OK if result.ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--alpha", default="3",
        help="set parameter alpha > 1, as 'p/q', an integer, or a "
             "terminating decimal (default 3)",
    )
    common.add_argument("--output", choices=("json", "human"), default="json",
                        help="output format (default json)")
    common.add_argument("--box-cap", type=int, default=None,
                        help="max boxes per image enumeration")
    common.add_argument("--level-cap", type=int, default=None,
                        help="max basic intervals per level enumeration")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized sweeps (default 0)")

    parser = argparse.ArgumentParser(
        prog="cantorsq",
        description="Exact arithmetic on middle-1/alpha Cantor sets: set "
                    "images, subdivision audits, and verifiable four-square "
                    "decomposition certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common],
                       help="decompose x in [0,4] into four squares")
    p.add_argument("--x", required=True, help="the value to decompose")
    p.add_argument("--depth", type=int, default=40,
                   help="subdivision depth (default 40)")
    p.add_argument("--out", default=None,
                   help="also write the certificate to this file")
    p.add_argument("--ternary", action="store_true",
                   help="with --output human and alpha 3, show ternary digits")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("image", parents=[common],
                       help="exact image of a level-set power")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--arity", type=int, default=4)
    p.add_argument("--map", choices=[k.value for k in MapKind], default="sq")
    p.set_defaults(func=cmd_image)

    p = sub.add_parser("gap-check", parents=[common],
                       help="report the four-square gap below the thick regime")
    p.set_defaults(func=cmd_gap_check)

    p = sub.add_parser("verify-lemmas", parents=[common],
                       help="exhaustively audit the subdivision lemma")
    p.add_argument("--max-level", type=int, default=5, dest="max_level")
    p.add_argument("--random-boxes", type=int, default=0,
                   help="additionally sample this many random deeper boxes")
    p.set_defaults(func=cmd_verify_lemmas)

    p = sub.add_parser("cover-report", parents=[common],
                       help="per-level containment of the known bands")
    p.add_argument("--max-level", type=int, default=5, dest="max_level")
    p.set_defaults(func=cmd_cover_report)

    p = sub.add_parser("verify", parents=[common],
                       help="re-verify a certificate file")
    p.add_argument("certificate", help="path to a certificate JSON file")
    p.set_defaults(func=cmd_verify)
    return parser


def _emit_error(kind: str, exc: Exception) -> None:
    print(json.dumps(
        {"error": {"kind": kind, "message": str(exc)}},
        sort_keys=True, separators=(",", ":"),
    ))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _build_config(args)
        return args.func(config, args)
    except InternalInconsistencyError as exc:
        _emit_error("internal", exc)
        return EXIT_VERIFY
    except (CapExceeded, ThinRegimeError, SearchExhausted, ValueError,
            TypeError, OSError) as exc:
        _emit_error("usage", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
