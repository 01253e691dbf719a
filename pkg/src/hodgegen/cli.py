"""Command-line driver: generation, pipelines, oracle checks, experiments.

Every subcommand is a pure function of its input bytes and flags, so
repeated invocations reproduce outputs byte for byte; the manifest written
next to each output records flags, seeds, paths and wall time (the one
place a timestamp appears).  Exit codes: 0 success, 1 verification
failure, 2 generation too sparse, 3 relaxation hit the iteration cap,
4 rank-deficient harmonics, 64 usage or input-format errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time

from . import __version__
from .complex import load_sc, save_sc
from .cyclebasis import (
    LABEL_REL,
    PIVOT_TOL,
    PipelineConfig,
    chain_from_json_cycle,
    result_to_json,
    run_centralized,
)
from .errors import (
    HodgegenError,
    MaxIterationsExceeded,
    NotACycle,
    RankDeficientHarmonics,
    ScFormatError,
    TooSparse,
)
from .geomgraph import (
    GeomConfig,
    excess_cycles_experiment,
    generate,
    iterations_experiment,
    iterations_vs_n_experiment,
)
from .netsim import SimConfig, run_full_pipeline
from .oracle import betti1, verify_generating_set

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_TOO_SPARSE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_RANK_DEFICIENT = 4
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems through the exit-code contract."""

    def error(self, message):
        raise _UsageError(message)


def _parse_range(text: str) -> list[int]:
    """a:b:s inclusive range, or a single integer."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            a, b = int(parts[0]), int(parts[1])
            return list(range(a, b + 1))
        if len(parts) == 3:
            a, b, s = (int(p) for p in parts)
            if s <= 0:
                raise ValueError
            return list(range(a, b + 1, s))
    except ValueError:
        pass
    raise _UsageError(f"bad range '{text}', expected a, a:b or a:b:s")


def _parse_root(text: str):
    if text == "max-id":
        return None
    try:
        return int(text)
    except ValueError:
        raise _UsageError(f"bad --root '{text}', expected max-id or an integer")


def _load_complex(path: str):
    try:
        return load_sc(path)
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}")
    except ScFormatError as exc:
        raise _UsageError(f"{path}: {exc}")


def _write_text(path: str, text: str):
    with open(path, "w") as fh:
        fh.write(text)


def _write_json(path: str, doc) -> None:
    _write_text(path, json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _write_manifest(out_path: str, subcommand: str, flags: dict,
                    inputs: list, outputs: list, started: float):
    doc = {
        "subcommand": subcommand,
        "flags": {k: v for k, v in sorted(flags.items())},
        "seeds": [v for k, v in sorted(flags.items()) if "seed" in k],
        "inputs": inputs,
        "outputs": outputs,
        "version": __version__,
        "wall_time_s": round(time.time() - started, 3),
    }
    _write_json(out_path + ".manifest.json", doc)


def _write_rows_csv(path: str, fieldnames: list, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def _flags_of(args, names) -> dict:
    return {name: getattr(args, name.replace("-", "_")) for name in names}


def _cmd_gen(args) -> int:
    started = time.time()
    try:
        cfg = GeomConfig(n=args.n, avg_degree=args.avg_degree, seed=args.seed)
    except ValueError as exc:
        raise _UsageError(str(exc))
    K = generate(cfg)
    save_sc(K, args.out)
    _write_manifest(args.out, "gen",
                    _flags_of(args, ["n", "avg-degree", "seed", "out"]),
                    [], [args.out], started)
    print(f"wrote {args.out}: {K.vertex_count} vertices, "
          f"{K.edge_count} edges, {K.triangle_count} triangles")
    return EXIT_OK


def _cmd_run(args) -> int:
    started = time.time()
    K = _load_complex(args.input)
    cfg = PipelineConfig(
        epsilon=args.epsilon, delta=args.delta, max_iterations=args.max_iters,
        seed=args.seed, root=_parse_root(args.root),
        label_rel=args.label_tol, pivot_tol=args.pivot_tol,
    )
    outputs = [args.out]
    if args.mode == "centralized":
        result = run_centralized(K, cfg)
        cost = None
    else:
        scfg = SimConfig(scheduling=args.scheduling, seed=args.sim_seed,
                         residual_check_period=args.residual_period,
                         transcript=args.transcript is not None)
        result, cost = run_full_pipeline(K, cfg, scfg)
    _write_json(args.out, result_to_json(result))
    if cost is not None:
        cost_path = args.cost
        if cost_path is None:
            base = args.out[:-5] if args.out.endswith(".json") else args.out
            cost_path = base + ".cost.csv"
        _write_text(cost_path, cost.to_csv_text())
        outputs.append(cost_path)
        if args.transcript is not None:
            _write_text(args.transcript,
                        "\n".join(cost.transcript) + "\n" if cost.transcript
                        else "")
            outputs.append(args.transcript)
    _write_manifest(args.out, "run",
                    _flags_of(args, ["input", "mode", "scheduling", "epsilon",
                                     "delta", "max-iters", "seed", "sim-seed",
                                     "root", "label-tol", "pivot-tol",
                                     "residual-period", "out"]),
                    [args.input], outputs, started)
    print(f"betti1_estimate={result.betti1_estimate} "
          f"iterations={result.iterations_per_harmonic}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    started = time.time()
    K = _load_complex(args.input)
    b1 = betti1(K)
    print(b1)
    if args.out:
        _write_json(args.out, {"betti1": b1})
        _write_manifest(args.out, "oracle", _flags_of(args, ["input", "out"]),
                        [args.input], [args.out], started)
    return EXIT_OK


def _cmd_verify(args) -> int:
    K = _load_complex(args.input)
    try:
        with open(args.result) as fh:
            doc = json.load(fh)
        cycles = doc["cycles"]
        chains = [chain_from_json_cycle(K, c) for c in cycles]
    except OSError as exc:
        raise _UsageError(f"cannot read {args.result}: {exc}")
    except (KeyError, ValueError, TypeError) as exc:
        raise _UsageError(f"{args.result}: malformed result document ({exc})")
    try:
        report = verify_generating_set(K, chains)
    except NotACycle as exc:
        print(f"FAIL: {exc}")
        return EXIT_VERIFY_FAILED
    print(report)
    return EXIT_OK if report.ok else EXIT_VERIFY_FAILED


def _cmd_experiment(args) -> int:
    started = time.time()
    if args.which == "excess-cycles":
        rows = excess_cycles_experiment(
            _parse_range(args.n_range), trials=args.trials,
            avg_degree=args.avg_degree, seed_base=args.seed_base,
            mode=args.mode, scheduling=args.scheduling, epsilon=args.epsilon,
        )
        fields = ["n", "seed", "b1", "card_P", "excess",
                  "iterations", "messages_total", "error"]
        flags = _flags_of(args, ["n-range", "avg-degree", "trials", "seed-base",
                                 "mode", "scheduling", "epsilon", "out"])
    elif args.which == "iterations":
        digits = _parse_range(args.digits)
        rows = iterations_experiment(
            n=args.n, avg_degree=args.avg_degree, geom_seed=args.geom_seed,
            digits=digits, trials=args.trials, seed_base=args.seed_base,
        )
        fields = ["n", "seed", "digits", "iterations", "error"]
        flags = _flags_of(args, ["n", "avg-degree", "geom-seed", "digits",
                                 "trials", "seed-base", "out"])
    else:
        rows = iterations_vs_n_experiment(
            _parse_range(args.n_range), avg_degree=args.avg_degree,
            digits=args.digits, trials=args.trials, seed_base=args.seed_base,
        )
        fields = ["n", "seed", "digits", "iterations", "error"]
        flags = _flags_of(args, ["n-range", "avg-degree", "digits", "trials",
                                 "seed-base", "out"])
    _write_rows_csv(args.out, fields, rows)
    _write_manifest(args.out, f"experiment {args.which}", flags,
                    [], [args.out], started)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="hodgegen",
                     description="Homology generating sets from harmonic "
                                 "1-forms, centralized or simulated.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a geometric flag 2-complex")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--avg-degree", type=float, default=6.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("run", help="run a pipeline on a .sc file")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=["centralized", "distributed"],
                   default="centralized")
    p.add_argument("--scheduling", choices=["sync", "async"], default="sync")
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sim-seed", type=int, default=0,
                   help="async delay stream seed (distributed mode)")
    p.add_argument("--root", default="max-id", help="max-id or a vertex id")
    p.add_argument("--label-tol", type=float, default=LABEL_REL,
                   help="relative gap closing two cycle labels together")
    p.add_argument("--pivot-tol", type=float, default=PIVOT_TOL)
    p.add_argument("--residual-period", type=int, default=1)
    p.add_argument("--cost", default=None,
                   help="cost CSV path (default: next to --out)")
    p.add_argument("--transcript", default=None,
                   help="write per-message transcript here (distributed)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("oracle", help="print the exact first Betti number")
    p.add_argument("--input", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("verify", help="check a result against the oracle")
    p.add_argument("--input", required=True)
    p.add_argument("--result", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("experiment", help="run a trend experiment to CSV")
    exp = p.add_subparsers(dest="which", required=True)

    q = exp.add_parser("excess-cycles")
    q.add_argument("--n-range", required=True, help="a, a:b or a:b:s inclusive")
    q.add_argument("--avg-degree", type=float, default=6.0)
    q.add_argument("--trials", type=int, default=20)
    q.add_argument("--seed-base", type=int, default=0)
    q.add_argument("--mode", choices=["centralized", "distributed"],
                   default="distributed")
    q.add_argument("--scheduling", choices=["sync", "async"], default="sync")
    q.add_argument("--epsilon", type=float, default=1e-6)
    q.add_argument("--out", required=True)
    q.set_defaults(func=_cmd_experiment)

    q = exp.add_parser("iterations")
    q.add_argument("--n", type=int, default=200)
    q.add_argument("--avg-degree", type=float, default=6.0)
    q.add_argument("--geom-seed", type=int, default=0)
    q.add_argument("--digits", default="2:8", help="a:b inclusive")
    q.add_argument("--trials", type=int, default=100)
    q.add_argument("--seed-base", type=int, default=0)
    q.add_argument("--out", required=True)
    q.set_defaults(func=_cmd_experiment)

    q = exp.add_parser("iterations-vs-n")
    q.add_argument("--n-range", required=True)
    q.add_argument("--avg-degree", type=float, default=6.0)
    q.add_argument("--digits", type=int, default=6)
    q.add_argument("--trials", type=int, default=20)
    q.add_argument("--seed-base", type=int, default=0)
    q.add_argument("--out", required=True)
    q.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    level = os.environ.get("HODGE_LOG", "").lower()
    if level in ("debug", "info"):
        logging.basicConfig(level=getattr(logging, level.upper()))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooSparse as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_SPARSE
    except MaxIterationsExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except RankDeficientHarmonics as exc:
        print(f"error: {exc}; a different --seed usually breaks the "
              f"degeneracy", file=sys.stderr)
        return EXIT_RANK_DEFICIENT
    except HodgegenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint():  # console script target
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
