#!/usr/bin/env python
import argparse
import itertools
import logging
import sys

import numpy as np

from . import convert, set_debug, utils
from .corpus import CorpusEntry, load_corpus, parse_entry
from .graph import CommGraph
from .group import (
    InvalidGroupSpec,
    OrderCapExceeded,
    is_normal_subset,
    is_simple,
    is_subgroup,
    normal_subset_stabilizer,
)
from .oracle import oracle_diff
from .quatval import (
    DEFAULT_SAMPLE_BOUND,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    run_all,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAP = 3
EXIT_CHECK_FAILED = 4

MAX_STABILIZER_CLASSES = 16


def _entry(entry):
    return entry if isinstance(entry, CorpusEntry) else parse_entry(entry)


def _settings(args):
    return {
        "max_order": args.max_order,
        "workers": args.workers,
        "timing": not args.no_timing,
    }


def run_analyze(entry, settings=None):
    settings = utils.resolve_settings(settings)
    group = _entry(entry).build(max_order=settings["max_order"])
    return CommGraph(group, settings).report()


def run_balanced(entry, settings=None):
    settings = utils.resolve_settings(settings)
    graph = CommGraph(_entry(entry).build(max_order=settings["max_order"]), settings)
    witness = graph.find_balanced_pair()
    return {
        "group": graph.group.name,
        "order": graph.group.order,
        "balanced": witness is not None,
        "witness": witness,
        "skipped_pairs": graph.skipped_pairs,
    }


def run_diam(entry, settings=None):
    settings = utils.resolve_settings(settings)
    graph = CommGraph(_entry(entry).build(max_order=settings["max_order"]), settings)
    record = {}
    with utils.stopwatch(record):
        components = len(graph.components())
        diameter = graph.diameter()
    d = {
        "group": graph.group.name,
        "order": graph.group.order,
        "components": components,
        "diameter": diameter,
    }
    if settings["timing"]:
        d["millis"] = record["millis"]
    return d


def run_oracle_diff(entry, cap=None, max_order=None):
    group = _entry(entry).build(max_order=max_order)
    return oracle_diff(CommGraph(group), cap=cap)


def run_uhyp(samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED, bound=DEFAULT_SAMPLE_BOUND):
    return run_all(samples=samples, seed=seed, bound=bound)


def run_stabilizers(entry, max_order=None):
    """
    For every proper nonempty union of conjugacy classes, check that its
    stabilizer {x : xA in A} is a proper normal subgroup, trivial when the
    group is simple.
    """
    group = _entry(entry).build(max_order=max_order)
    if group.class_count > MAX_STABILIZER_CLASSES:
        raise OrderCapExceeded(
            f"{group.name}: {group.class_count} classes, "
            f"at most {MAX_STABILIZER_CLASSES} supported"
        )
    simple = is_simple(group)
    violations = []
    subsets = 0
    for r in range(1, group.class_count):
        for classes in itertools.combinations(range(group.class_count), r):
            subset = np.flatnonzero(np.isin(group.class_of, classes))
            stabilizer = normal_subset_stabilizer(group, subset)
            subsets += 1
            ok = (
                is_subgroup(group, stabilizer)
                and is_normal_subset(group, stabilizer)
                and len(stabilizer) < group.order
                and (not simple or len(stabilizer) == 1)
            )
            if not ok:
                violations.append(
                    {"classes": list(classes), "stabilizer": stabilizer.tolist()}
                )
    if violations:
        logger.warning(f"{group.name}: {len(violations)} stabilizer violations")
    return {
        "group": group.name,
        "order": group.order,
        "classes": group.class_count,
        "simple": simple,
        "subsets": subsets,
        "violations": violations,
    }


def run_corpus(path, settings=None):
    return [run_analyze(entry, settings) for entry in load_corpus(path)]


def _add_common(parser):
    parser.add_argument(
        "--max-order", type=int, help="Enumeration cap on the group order."
    )
    parser.add_argument("--workers", type=int, help="Threads for BFS rows.")
    parser.add_argument(
        "--no-timing", action="store_true", help="Omit wall-clock timings."
    )
    parser.add_argument("--indent", type=int, help="Indent level for JSON.")
    parser.add_argument("--output", help="Write the report here instead of stdout.")
    parser.add_argument("--verbose", action="store_true")


def parse_args(args_raw):
    parser = argparse.ArgumentParser("commgraph")
    commands = parser.add_subparsers(dest="command", required=True)

    for name in ("analyze", "balanced", "diam", "oracle-diff", "stabilizers"):
        sub = commands.add_parser(name)
        sub.add_argument("entry", help="a5, s6, psl2_7, q8, d12, z6 or file:<path>")
        _add_common(sub)
        if name == "analyze":
            sub.add_argument("--format", choices=["csv", "json"], default="json")
        if name == "oracle-diff":
            sub.add_argument("--oracle", type=int, help="Oracle cap on the group order.")

    sub = commands.add_parser("corpus")
    sub.add_argument("file", help="One entry per line.")
    _add_common(sub)
    sub.add_argument("--format", choices=["csv", "json"], default="csv")

    sub = commands.add_parser("uhyp")
    sub.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--bound", type=int, default=DEFAULT_SAMPLE_BOUND)
    _add_common(sub)

    return parser.parse_args(args_raw)


def _dispatch(args):
    """Run the command; returns the data to emit and the exit code."""
    if args.command == "analyze":
        return run_analyze(args.entry, _settings(args)), EXIT_OK
    if args.command == "balanced":
        return run_balanced(args.entry, _settings(args)), EXIT_OK
    if args.command == "diam":
        return run_diam(args.entry, _settings(args)), EXIT_OK
    if args.command == "oracle-diff":
        diff = run_oracle_diff(args.entry, cap=args.oracle, max_order=args.max_order)
        return diff, EXIT_OK if diff.passed else EXIT_CHECK_FAILED
    if args.command == "stabilizers":
        result = run_stabilizers(args.entry, max_order=args.max_order)
        return result, EXIT_CHECK_FAILED if result["violations"] else EXIT_OK
    if args.command == "corpus":
        return run_corpus(args.file, _settings(args)), EXIT_OK
    reports = run_uhyp(args.samples, args.seed, args.bound)
    passed = all(r.passed for r in reports)
    result = {
        "samples": args.samples,
        "seed": args.seed,
        "bound": args.bound,
        "passed": passed,
        "reports": reports,
    }
    return result, EXIT_OK if passed else EXIT_CHECK_FAILED


def _emit(args, result):
    fmt = getattr(args, "format", "json")
    if fmt == "csv":
        reports = result if isinstance(result, list) else [result]
        text = convert.to_csv(reports)
    else:
        text = convert.to_json(result, indent=args.indent) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fp:
            fp.write(text)


def main(args_raw=None):
    args = parse_args(sys.argv[1:] if args_raw is None else args_raw)
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    set_debug(1 if args.verbose else 0)

    try:
        result, code = _dispatch(args)
    except OrderCapExceeded as e:
        print(f"commgraph: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InvalidGroupSpec, ValueError, OSError) as e:
        print(f"commgraph: {e}", file=sys.stderr)
        return EXIT_INVALID

    _emit(args, result)
    return code


if __name__ == "__main__":
    sys.exit(main())
