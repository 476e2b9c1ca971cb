"""Command-line entry point.

One binary, subcommand style: data goes to stdout as NDJSON (or a pretty
rendering with --format pretty), diagnostics go to stderr.  Exit codes:
0 success, 1 usage or file error, 2 failed check or Unknown verdict.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import enumeration, metric, products, strategies
from .game import GameVariant, run_game, solve_game
from .invariants import invariant_report
from .space import TopologyError, load_space, space_from_json, space_to_json


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2; usage errors are 1 here
        raise UsageError(message)


def _emit(stream, obj, fmt):
    if fmt == "pretty":
        stream.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")
    else:
        stream.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _variant(name: str) -> GameVariant:
    return {v.value: v for v in GameVariant}[name]


def _load_space_arg(path):
    try:
        return load_space(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def build_parser() -> _Parser:
    parser = _Parser(prog="openpoint")
    parser.add_argument("--format", choices=["ndjson", "pretty"], default="ndjson")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a space file, print its canonical form")
    p.add_argument("space")

    p = sub.add_parser("invariants", help="compute d, delta, gd, pi, w, t for a space")
    p.add_argument("space")

    p = sub.add_parser("solve", help="emit the optimal-play table of a space")
    p.add_argument("space")
    p.add_argument("--variant", choices=[v.value for v in GameVariant],
                   default=GameVariant.RESTRICTED.value)

    p = sub.add_parser("play", help="play one game, interactively or between policies")
    p.add_argument("spaces", nargs="+",
                   help="a space file; several files mean their product")
    p.add_argument("--pI", dest="chooser", default="optimal",
                   choices=["optimal", "pi-base", "product", "aggregate"])
    p.add_argument("--pII", dest="picker", default="interactive",
                   choices=["interactive", "random", "first", "stall", "optimal", "dense"])
    p.add_argument("--dense-set", default=None,
                   help="comma-separated labels for the dense picker")
    p.add_argument("--variant", choices=[v.value for v in GameVariant],
                   default=GameVariant.RESTRICTED.value)
    p.add_argument("--ledger", default=None,
                   help="write the aggregate strategy's phase ledger here")

    p = sub.add_parser("enumerate", help="stream every topology of a given size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["labeled", "unlabeled"], default="labeled")
    p.add_argument("--method", choices=["family", "preorder", "both"], default="preorder")
    p.add_argument("--out", default=None)

    p = sub.add_parser("suite", help="run verification checks over the exhaustive corpus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--checks", default="all")
    p.add_argument("--report", default=None)

    p = sub.add_parser("product", help="materialize the product of space files")
    p.add_argument("spaces", nargs="+")
    p.add_argument("-o", "--out", default=None)

    p = sub.add_parser("fan-check", help="search the fan-tightness condition on factors")
    p.add_argument("spec", help='JSON file {"factors": [space-or-path, ...]}')
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--pool", choices=["boxes", "all"], default="boxes")
    p.add_argument("--reading", choices=["a", "union"], default="a")

    p = sub.add_parser("greedy", help="run the greedy dense sequence on a metric file")
    p.add_argument("metric")
    p.add_argument("--start", default=None, help="label of the first pick")

    return parser


def cmd_validate(args, out):
    space = _load_space_arg(args.space)
    _emit(out, space_to_json(space), args.format)
    return 0


def cmd_invariants(args, out):
    space = _load_space_arg(args.space)
    _emit(out, invariant_report(space).as_record(space), args.format)
    return 0


def cmd_solve(args, out):
    space = _load_space_arg(args.space)
    table = solve_game(space, _variant(args.variant))
    for rec in table.records():
        _emit(out, rec, args.format)
    return 0


def _build_chooser(args, spaces_list, prod):
    name = args.chooser
    if name in ("product", "aggregate") and prod is None:
        raise UsageError(f"--pI {name} needs at least two space files")
    if name == "optimal":
        space = prod.space if prod else spaces_list[0]
        return strategies.optimal_chooser(space, _variant(args.variant)), None
    if name == "pi-base":
        space = prod.space if prod else spaces_list[0]
        return strategies.pi_base_chooser(space), None
    if name == "product":
        if len(spaces_list) != 2:
            raise UsageError("--pI product wants exactly two space files")
        return strategies.product_chooser(
            spaces_list[0], spaces_list[1], prod=prod, variant=_variant(args.variant)
        ), None
    agg = strategies.aggregate_chooser(
        spaces_list, prod=prod, variant=_variant(args.variant)
    )
    return agg, agg


def _build_picker(args, space):
    from .game import first_point_picker, optimal_picker, random_picker, stalling_picker

    if args.picker == "random":
        return random_picker
    if args.picker == "first":
        return first_point_picker
    if args.picker == "stall":
        return stalling_picker(space)
    if args.picker == "optimal":
        return optimal_picker(space, _variant(args.variant))
    if args.picker == "dense":
        mask = space.full
        if args.dense_set is not None:
            mask = space.mask_of(args.dense_set.split(","))
        return strategies.dense_point_picker(space, mask)
    return None  # interactive


def _interactive_picker(space, err, stdin):
    def pick(closed, offered, stage, rng=None):
        while True:
            err.write(f"offered open: {sorted(space.label_set(offered))}\n")
            err.write("pick a point: ")
            err.flush()
            line = stdin.readline()
            if not line:
                raise UsageError("input ended before the game did")
            label = line.strip()
            try:
                mask = space.mask_of([label])
            except TopologyError:
                err.write(f"unknown point {label!r}; try again\n")
                continue
            if mask & offered:
                return mask
            err.write(f"{label} is outside the offered open; try again\n")

    return pick


def cmd_play(args, out, err, stdin):
    import random

    spaces_list = [_load_space_arg(p) for p in args.spaces]
    prod = products.product(spaces_list) if len(spaces_list) > 1 else None
    space = prod.space if prod else spaces_list[0]
    chooser, agg = _build_chooser(args, spaces_list, prod)
    if args.ledger is not None and agg is None:
        raise UsageError("--ledger only applies to the aggregate strategy")
    picker = _build_picker(args, space)
    if picker is None:
        picker = _interactive_picker(space, err, stdin)

    def emit_step(stage, step):
        _emit(out, {
            "stage": stage,
            "offered": sorted(space.label_set(step.offered)),
            "picked": sorted(space.label_set(step.picks)),
            "closure": sorted(space.label_set(step.closure_after)),
        }, args.format)

    transcript, final_state = run_game(
        space, chooser, picker, _variant(args.variant),
        rng=random.Random(args.seed), on_step=emit_step,
    )
    gd = solve_game(space, _variant(args.variant)).gd
    _emit(out, {
        "length": transcript.length,
        "gd": gd,
        "matched_gd": transcript.length == gd,
    }, args.format)
    if args.ledger is not None:
        with open(args.ledger, "w", encoding="utf-8") as fh:
            for rec in agg.ledger_of(final_state).records():
                fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
    return 0


def cmd_enumerate(args, out):
    if args.mode == "labeled":
        stream = enumeration.enumerate_labeled(args.n, method=args.method)
    else:
        stream = enumeration.enumerate_unlabeled(args.n)
    sink = open(args.out, "w", encoding="utf-8") if args.out else out
    try:
        for space in stream:
            _emit(sink, space_to_json(space), args.format)
    finally:
        if args.out:
            sink.close()
    return 0


def cmd_suite(args, out, err):
    ok, records = enumeration.verify_suite(
        args.n, checks=args.checks, seed=args.seed, jobs=args.jobs
    )
    sink = open(args.report, "w", encoding="utf-8") if args.report else out
    try:
        for rec in records:
            _emit(sink, rec, args.format)
    finally:
        if args.report:
            sink.close()
    passed = sum(1 for r in records if r["status"] == "pass")
    err.write(f"{passed}/{len(records)} checks passed\n")
    return 0 if ok else 2


def cmd_product(args, out):
    spaces_list = [_load_space_arg(p) for p in args.spaces]
    prod = products.product(spaces_list)
    obj = space_to_json(prod.space)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(obj, fh)
            fh.write("\n")
    else:
        _emit(out, obj, args.format)
    return 0


def cmd_fan_check(args, out):
    try:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.spec}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.spec} is not valid JSON: {exc}") from exc
    raw = spec.get("factors")
    if not raw:
        raise UsageError('fan-check spec needs a non-empty "factors" list')
    factors = [
        _load_space_arg(f) if isinstance(f, str) else space_from_json(f)
        for f in raw
    ]
    verdict = products.fan_tightness_check(
        factors, args.kappa, candidate_policy=args.pool, reading=args.reading
    )
    _emit(out, {
        "status": verdict.status.value,
        "kappa": verdict.kappa,
        "reading": verdict.reading,
        "cells": len(verdict.witness),
        "unknown_cells": len(verdict.unknown_cells),
    }, args.format)
    sub_cache = {}
    for (gamma, u), family in sorted(verdict.witness.items()):
        if gamma not in sub_cache:
            sub_cache[gamma] = products.product([factors[g] for g in gamma])
        sub = sub_cache[gamma].space
        _emit(out, {
            "gamma": list(gamma),
            "open": sorted(sub.label_set(u)),
            "family": [sorted(sub.label_set(v)) for v in family],
        }, args.format)
    return 0 if verdict.holds else 2


def cmd_greedy(args, out):
    try:
        m = metric.load_metric(args.metric)
    except OSError as exc:
        raise UsageError(f"cannot read {args.metric}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.metric} is not valid JSON: {exc}") from exc
    start = 0
    if args.start is not None:
        if args.start not in m.labels:
            raise UsageError(f"unknown start point {args.start!r}")
        start = m.labels.index(args.start)
    run = metric.greedy_dense_sequence(m, start=start)
    for stage, point in enumerate(run.order):
        _emit(out, {
            "stage": stage,
            "point": m.labels[point],
            "radius": str(run.radii[stage - 1]) if stage else None,
        }, args.format)
    return 0


def run(argv, out=None, err=None, stdin=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    stdin = stdin or sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "validate":
            return cmd_validate(args, out)
        if args.command == "invariants":
            return cmd_invariants(args, out)
        if args.command == "solve":
            return cmd_solve(args, out)
        if args.command == "play":
            return cmd_play(args, out, err, stdin)
        if args.command == "enumerate":
            return cmd_enumerate(args, out)
        if args.command == "suite":
            return cmd_suite(args, out, err)
        if args.command == "product":
            return cmd_product(args, out)
        if args.command == "fan-check":
            return cmd_fan_check(args, out)
        if args.command == "greedy":
            return cmd_greedy(args, out)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except TopologyError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run(None))
