"""Command line entry point: ``transum summarize|sweep|evaluate|dump-hypergraph|solve``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .errors import InputError, InvariantError
from .pipeline import Config, evaluate, prepare, read_config_file, summarize, sweep
from .themegraph import Hypergraph
from .transversal import tc_transum, tl_transum

log = logging.getLogger("transum")

# flag dest -> Config field
CONFIG_FLAGS = {
    "mode": "mode",
    "target_length": "target_length",
    "gamma": "gamma",
    "lam": "lam",
    "delta": "delta",
    "mu": "mu",
    "epsilon0": "epsilon0",
    "beta": "beta",
    "min_terms": "min_terms",
    "max_cluster_frac": "max_cluster_frac",
    "max_iterations": "max_iterations",
    "stoplist": "stoplist",
    "seed": "seed",
}


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("pipeline parameters")
    g.add_argument("--config", help="flat key=value file; command line flags take precedence")
    g.add_argument("--mode", choices=("length", "coverage"))
    g.add_argument("--target-length", type=float, help="word budget in length mode (default 250)")
    g.add_argument("--gamma", type=float, help="target coverage in coverage mode (default 0.7)")
    g.add_argument("--lambda", dest="lam", type=float, help="query weight in hyperedge weights (default 0.4)")
    g.add_argument("--delta", type=float, help="topic tagging threshold (default 0.85)")
    g.add_argument("--mu", type=float, help="isf threshold for singleton topics (default 1.98)")
    g.add_argument("--epsilon0", type=float, help="initial DBSCAN radius (default 0.9)")
    g.add_argument("--beta", type=float, help="radius shrink factor (default 0.95)")
    g.add_argument("--min-terms", type=int, help="DBSCAN minimum neighborhood size (default 3)")
    g.add_argument("--max-cluster-frac", type=float, help="max topic size as a fraction of terms (default 0.1)")
    g.add_argument("--max-iterations", type=int, help="SEMCOT iteration guard (default 200)")
    g.add_argument("--stoplist", help="stoplist file, one word per line (default: bundled list)")
    g.add_argument("--seed", type=int, help="bootstrap seed (default 0)")


def config_from_args(args: argparse.Namespace) -> Config:
    values = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for dest, field in CONFIG_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            values[field] = value
    return Config(**values)


def _query(args) -> str | None:
    if args.query_file:
        return Path(args.query_file).read_text(encoding="utf-8").strip()
    return args.query


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def cmd_summarize(args) -> int:
    config = config_from_args(args)
    report = summarize(args.corpus, _query(args), config)
    if args.report:
        _write(args.report, report.to_json())
    _write(args.output, report.summary_text)
    log.info(
        "%d sentences, %g words, coverage %.3f",
        len(report.selected),
        report.total_length,
        report.coverage_fraction,
    )
    return 0


def _parse_grid(text: str) -> list[float]:
    """``0.1,0.5,0.9`` or ``start:stop:step`` (stop inclusive)."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        n = int(round((stop - start) / step))
        return [round(start + k * step, 10) for k in range(n + 1)]
    return [float(x) for x in text.split(",") if x.strip()]


def cmd_sweep(args) -> int:
    config = config_from_args(args)
    try:
        grid = _parse_grid(args.grid)
    except ValueError as exc:
        raise InputError(f"bad grid {args.grid!r}") from exc
    rows = sweep(args.corpus_set, args.references, args.param, grid, config)
    out = sys.stdout if args.output in (None, "-") else open(args.output, "w", newline="")
    try:
        writer = csv.DictWriter(out, fieldnames=[args.param, "rouge2", "rougeSU4", "mean_length"])
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_evaluate(args) -> int:
    result = evaluate(
        args.candidates,
        args.references,
        bootstrap=args.bootstrap,
        iterations=args.iterations,
        seed=args.seed,
        jackknife=not args.no_jackknife,
    )
    if args.csv:
        lines = ["corpus,rouge2,rougeSU4"]
        lines += [f"{cid},{r['rouge2']},{r['rougeSU4']}" for cid, r in result["per_corpus"].items()]
        lines.append(f"mean,{result['mean']['rouge2']},{result['mean']['rougeSU4']}")
        _write(args.csv, "\n".join(lines))
    _write(args.output, json.dumps(result, indent=2, sort_keys=True))
    return 0


def cmd_dump(args) -> int:
    config = config_from_args(args)
    p = prepare(args.corpus, _query(args), config)
    _write(args.output, p.graph.to_json())
    if args.topics:
        _write(args.topics, p.assignment.to_json(p.vocab))
    return 0


def cmd_solve(args) -> int:
    graph = Hypergraph.from_json(Path(args.hypergraph).read_text(encoding="utf-8"))
    if args.mode == "coverage":
        gamma = 0.7 if args.gamma is None else args.gamma
        summary = tc_transum(graph, gamma)
        target = {"gamma": gamma}
    else:
        length = 250 if args.target_length is None else args.target_length
        summary = tl_transum(graph, length)
        target = {"target_length": length}
    out = {
        "mode": args.mode,
        **target,
        "sentence_ids": list(summary.sentence_ids),
        "total_length": summary.total_length,
        "covered_weight": summary.covered_weight,
        "coverage_fraction": summary.coverage_fraction,
        "trace": [
            {"sent_id": s.sentence_id, "ratio": s.ratio, "gain": s.gain} for s in summary.trace
        ],
    }
    _write(args.output, json.dumps(out, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transum", description="Query-oriented summarization with hypergraph transversals."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="summarize one corpus")
    p.add_argument("corpus", help="directory of .txt documents or JSON manifest")
    p.add_argument("--query")
    p.add_argument("--query-file")
    p.add_argument("-o", "--output", help="summary .txt (default stdout)")
    p.add_argument("--report", help="write the JSON run report here")
    _add_config_flags(p)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("sweep", help="ROUGE scores over a parameter grid")
    p.add_argument("corpus_set", help="directory with one corpus directory per id")
    p.add_argument("references", help="directory with one reference directory per id")
    p.add_argument("--param", required=True, choices=("delta", "lambda", "gamma"))
    p.add_argument("--grid", required=True, help="comma list or start:stop:step")
    p.add_argument("-o", "--output", help="CSV file (default stdout)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("evaluate", help="ROUGE-2 / ROUGE-SU4 of candidate summaries")
    p.add_argument("candidates", help="directory of <id>.txt candidate summaries")
    p.add_argument("references", help="directory of <id>/ reference directories")
    p.add_argument("--bootstrap", action="store_true", help="add 95%% bootstrap intervals")
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-jackknife", action="store_true")
    p.add_argument("--csv", help="also write per-corpus scores as CSV")
    p.add_argument("-o", "--output", help="JSON file (default stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("dump-hypergraph", help="write the sentence hypergraph as JSON")
    p.add_argument("corpus")
    p.add_argument("--query")
    p.add_argument("--query-file")
    p.add_argument("-o", "--output")
    p.add_argument("--topics", help="also write topics as JSON {topic_id: [terms]}")
    _add_config_flags(p)
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("solve", help="run a transversal solver on a hypergraph JSON")
    p.add_argument("hypergraph")
    p.add_argument("--mode", choices=("length", "coverage"), default="length")
    p.add_argument("--target-length", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except (InputError, OSError, UnicodeDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
