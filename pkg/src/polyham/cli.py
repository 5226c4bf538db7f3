"""Command-line entry point.

Subcommands cover dataset generation, polynomial sampling and statistical
verification, the search pipelines, the metric reductions, and a small
timing harness.  Output is JSON lines (one record per line, sorted keys) or
CSV for ``bench``; ``--pretty`` switches to indented JSON for humans.

Every randomized run is reproducible from (seed, flags, input files); when
``--seed`` is absent the POLYHAM_SEED environment variable is used, then 0.

Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 resource or
budget error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import neighbors, probpoly, reductions
from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    InvalidParametersError,
    ParseError,
    ResourceBudgetError,
    VerificationError,
)
from .neighbors import ClosestPairConfig
from .probpoly import ThresholdSpec
from .vectors import BitVector, Dataset, dump_dataset, load_dataset

__all__ = ["main", "run"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("POLYHAM_SEED")
    return int(env) if env else 0


def _emit(args, records) -> None:
    text_parts = []
    for rec in records:
        if args.pretty:
            text_parts.append(json.dumps(rec, indent=2, sort_keys=True))
        else:
            text_parts.append(json.dumps(rec, sort_keys=True, separators=(",", ":")))
    text = "\n".join(text_parts) + "\n"
    _write_out(args, text)


def _write_out(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"not a rational number: {text!r}") from None


def _int_or_auto(text: str):
    return "auto" if text == "auto" else int(text)


def _config(args, seed: int) -> ClosestPairConfig:
    budget = 0 if getattr(args, "brute_force", False) else args.budget
    return ClosestPairConfig(
        s=args.s,
        rounds=args.rounds,
        monomial_budget=budget,
        seed=seed,
        threads=args.threads,
        use_four_russians=getattr(args, "four_russians", False),
    )


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s", type=_int_or_auto, default="auto", help="group size or 'auto'")
    p.add_argument(
        "--rounds", type=_int_or_auto, default="auto", help="amplification rounds or 'auto'"
    )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=neighbors.MONOMIAL_BUDGET_DEFAULT)
    p.add_argument("--brute-force", action="store_true", help="force exact brute force")
    p.add_argument("--oracle", action="store_true", help="also run brute force and report agreement")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--four-russians", action="store_true")
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("text01", "hex"), default="text01")


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    seed = _resolve_seed(args)
    rng = np.random.default_rng(seed)
    if args.kind == "planted":
        if args.planted_distance is None:
            raise _UsageError("planted datasets need --planted-distance")
        if not 0 <= args.planted_distance < args.d:
            raise InvalidParametersError(
                f"planted distance must be in [0, d), got {args.planted_distance}"
            )
    red = [BitVector.random(rng, args.d) for _ in range(args.n)]
    blue = [BitVector.random(rng, args.d) for _ in range(args.n)]
    if args.kind == "planted":
        ri = int(rng.integers(0, args.n))
        bi = int(rng.integers(0, args.n))
        flip = 0
        for pos in rng.permutation(args.d)[: args.planted_distance]:
            flip |= 1 << int(pos)
        blue[bi] = BitVector(args.d, red[ri].bits ^ flip)
    ds = Dataset(args.d, tuple(red), tuple(blue))
    _write_out(args, dump_dataset(ds, args.format))
    return 0


# ---------------------------------------------------------------------------
# sample-poly / verify-error
# ---------------------------------------------------------------------------


def _cmd_sample_poly(args) -> int:
    seed = _resolve_seed(args)
    rng = np.random.default_rng(seed)
    spec = ThresholdSpec(args.n, _fraction(args.theta), _fraction(args.eps))
    circuit = probpoly.sample_threshold(spec, rng)
    bound = probpoly.degree_bound(args.n, spec.eps)
    record = {
        "n": args.n,
        "theta": str(spec.theta),
        "eps": str(spec.eps),
        "seed": seed,
        "kind": circuit.kind,
        "recursion_depth": circuit.depth(),
        "structural_degree": circuit.structural_degree(),
        "degree_bound": bound,
    }
    if args.expand:
        poly = probpoly.expand_circuit(circuit, budget=args.budget)
        record["degree"] = poly.degree()
        record["monomial_count"] = poly.monomial_count()
        record["polynomial"] = poly.dump_lines()
    _emit(args, [record])
    return 0


def _cmd_verify_error(args) -> int:
    seed = _resolve_seed(args)
    rng = np.random.default_rng(seed)
    spec = ThresholdSpec(args.n, _fraction(args.theta), _fraction(args.eps))
    inputs = probpoly.boundary_inputs(args.n, spec.theta)
    inputs += [BitVector.random(rng, args.n) for _ in range(args.random_inputs)]
    reports = probpoly.measure_threshold_error(spec, inputs, args.trials, rng)
    eps = float(spec.eps)
    sigma = math.sqrt(max(eps * (1 - eps), 1e-12) / args.trials)
    floor = 1 - eps - 3 * sigma
    records = [
        {
            "weight": r.weight,
            "agreement": r.agreement,
            "trials": r.trials,
            "required": floor,
            "ok": r.agreement >= floor,
        }
        for r in reports
    ]
    _emit(args, records)
    if not all(r["ok"] for r in records):
        raise VerificationError("agreement below 1 - eps - 3*sigma on some input")
    return 0


# ---------------------------------------------------------------------------
# search commands
# ---------------------------------------------------------------------------


def _load_ds(args) -> Dataset:
    return load_dataset(_read(args.input), args.format)


def _cmd_closest_pair(args) -> int:
    seed = _resolve_seed(args)
    ds = _load_ds(args)
    cfg = _config(args, seed)
    rng = np.random.default_rng(seed)
    records = []
    if args.k is not None:
        res = neighbors.bichromatic_close_pair(ds, args.k, cfg, rng)
        rec = {"command": "closest-pair", "k": args.k, "found": res is not None}
        if res is not None:
            rec.update(red=res[0], blue=res[1])
        records.append(rec)
    else:
        ri, bi, dist = neighbors.closest_pair(ds, cfg, rng)
        rec = {"command": "closest-pair", "red": ri, "blue": bi, "dist": dist}
        if args.oracle:
            ori, obi, odist = neighbors.closest_pair_bruteforce(ds)
            rec["oracle_dist"] = odist
            rec["agrees"] = (ri, bi, dist) == (ori, obi, odist)
        records.append(rec)
    meta = {"seed": seed, "n_red": len(ds.red), "n_blue": len(ds.blue), "dim": ds.dim}
    meta.update(
        neighbors.pipeline_info(max(len(ds.red), len(ds.blue)), ds.dim, cfg)
    )
    records.append({"meta": meta})
    _emit(args, records)
    return 0


def _load_vectors(path: str, format: str) -> list[BitVector]:
    ds = load_dataset(_read(path), format)
    return list(ds.red) + list(ds.blue)


def _cmd_batch_nn(args) -> int:
    seed = _resolve_seed(args)
    db = _load_vectors(args.db, args.format)
    queries = _load_vectors(args.queries, args.format)
    cfg = _config(args, seed)
    rng = np.random.default_rng(seed)
    res = neighbors.batch_nn(db, queries, cfg, rng)
    records = [
        {"query": q, "nn": i, "dist": d} for q, i, d in res.entries
    ]
    if args.oracle:
        oracle = neighbors.batch_nn_bruteforce(db, queries)
        agree = sum(
            int(a[2] == b[2]) for a, b in zip(res.entries, oracle.entries)
        )
        res.meta["oracle_distance_matches"] = agree
        res.meta["oracle_total"] = len(res.entries)
    records.append({"meta": res.meta})
    _emit(args, records)
    return 0


def _cmd_l1_batch_nn(args) -> int:
    seed = _resolve_seed(args)
    db = reductions.load_int_vectors(_read(args.db))
    queries = reductions.load_int_vectors(_read(args.queries))
    cfg = _config(args, seed)
    rng = np.random.default_rng(seed)
    res = reductions.l1_batch_nn(db, queries, cfg, rng)
    records = [{"query": q, "nn": i, "dist": d} for q, i, d in res.entries]
    if args.oracle:
        oracle = reductions.l1_batch_nn_bruteforce(db, queries)
        res.meta["oracle_distance_matches"] = sum(
            int(a[2] == b[2]) for a, b in zip(res.entries, oracle.entries)
        )
        res.meta["oracle_total"] = len(res.entries)
    records.append({"meta": res.meta})
    _emit(args, records)
    return 0


def _cmd_furthest(args) -> int:
    seed = _resolve_seed(args)
    ds = _load_ds(args)
    cfg = _config(args, seed)
    ri, bi, dist = reductions.furthest_pair(ds, cfg, np.random.default_rng(seed))
    rec = {"command": "furthest-pair", "red": ri, "blue": bi, "dist": dist}
    if args.oracle:
        _, _, odist = reductions.furthest_pair_bruteforce(ds)
        rec["oracle_dist"] = odist
        rec["agrees"] = dist == odist
    _emit(args, [rec, {"meta": {"seed": seed}}])
    return 0


def _cmd_extreme_ip(args, mode: str) -> int:
    seed = _resolve_seed(args)
    ds = _load_ds(args)
    cfg = _config(args, seed)
    ri, bi, val = reductions.extreme_inner_product(
        ds, mode, cfg, np.random.default_rng(seed)
    )
    rec = {"command": f"{mode}-ip", "red": ri, "blue": bi, "value": val}
    if args.oracle:
        _, _, oval = reductions.extreme_inner_product_bruteforce(ds, mode)
        rec["oracle_value"] = oval
        rec["agrees"] = val == oval
    _emit(args, [rec, {"meta": {"seed": seed}}])
    return 0


def _cmd_orthogonal(args) -> int:
    seed = _resolve_seed(args)
    ds = _load_ds(args)
    cfg = _config(args, seed)
    res = reductions.find_orthogonal_pair(ds, cfg, np.random.default_rng(seed))
    rec = {"command": "orthogonal", "found": res is not None}
    if res is not None:
        rec.update(red=res[0], blue=res[1])
    _emit(args, [rec, {"meta": {"seed": seed}}])
    return 0


def _cmd_jaccard(args) -> int:
    seed = _resolve_seed(args)
    ds = _load_ds(args)
    cfg = _config(args, seed)
    ri, bi, coeff = reductions.max_jaccard_pair(ds, cfg, np.random.default_rng(seed))
    rec = {"command": "jaccard", "red": ri, "blue": bi, "coefficient": str(coeff)}
    if args.oracle:
        _, _, ocoeff = reductions.max_jaccard_bruteforce(ds)
        rec["oracle_coefficient"] = str(ocoeff)
        rec["agrees"] = coeff == ocoeff
    _emit(args, [rec, {"meta": {"seed": seed}}])
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def _cmd_bench(args) -> int:
    seed = _resolve_seed(args)
    sizes = [int(t) for t in args.sizes.split(",")]
    dims = [int(t) for t in args.dims.split(",")]
    modes = ["poly", "brute"] if args.mode == "both" else [args.mode]
    lines = ["n,d,mode,seconds,dist,agree"]
    for n in sizes:
        for d in dims:
            rng = np.random.default_rng([seed, n, d])
            red = tuple(BitVector.random(rng, d) for _ in range(n))
            blue = tuple(BitVector.random(rng, d) for _ in range(n))
            ds = Dataset(d, red, blue)
            answers = {}
            timings = {}
            for mode in modes:
                cfg = ClosestPairConfig(
                    seed=seed,
                    monomial_budget=0 if mode == "brute" else args.budget,
                    threads=args.threads,
                )
                t0 = time.perf_counter()
                _, _, dist = neighbors.closest_pair(
                    ds, cfg, np.random.default_rng([seed, n, d, 1])
                )
                timings[mode] = time.perf_counter() - t0
                answers[mode] = dist
            agree = str(len(set(answers.values())) == 1).lower() if len(modes) > 1 else ""
            for mode in modes:
                lines.append(f"{n},{d},{mode},{timings[mode]:.6f},{answers[mode]},{agree}")
    _write_out(args, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="polyham")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random dataset")
    p.add_argument("--kind", choices=("uniform", "planted"), default="uniform")
    p.add_argument("--n", type=int, required=True, help="vectors per color")
    p.add_argument("--d", type=int, required=True, help="dimension")
    p.add_argument("--planted-distance", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("text01", "hex"), default="text01")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("sample-poly", help="sample a threshold polynomial and report it")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", default="1/2")
    p.add_argument("--eps", default="1/10")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--expand", action="store_true")
    p.add_argument("--budget", type=int, default=probpoly.EXPANSION_BUDGET_DEFAULT)
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sample_poly)

    p = sub.add_parser("verify-error", help="statistically verify the error guarantee")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", default="1/2")
    p.add_argument("--eps", default="1/10")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--random-inputs", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify_error)

    p = sub.add_parser("closest-pair", help="bichromatic closest pair (or decision with --k)")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, default=None)
    _add_pipeline_flags(p)
    p.set_defaults(func=_cmd_closest_pair)

    p = sub.add_parser("batch-nn", help="batch Hamming nearest neighbors")
    p.add_argument("--db", required=True)
    p.add_argument("--queries", required=True)
    _add_pipeline_flags(p)
    p.set_defaults(func=_cmd_batch_nn)

    p = sub.add_parser("l1-batch-nn", help="batch l1 nearest neighbors (bounded integer vectors)")
    p.add_argument("--db", required=True)
    p.add_argument("--queries", required=True)
    _add_pipeline_flags(p)
    p.set_defaults(func=_cmd_l1_batch_nn)

    p = sub.add_parser("furthest-pair", help="bichromatic furthest pair")
    p.add_argument("--input", required=True)
    _add_pipeline_flags(p)
    p.set_defaults(func=_cmd_furthest)

    p = sub.add_parser("min-ip", help="minimum inner product pair")
    p.add_argument("--input", required=True)
    _add_pipeline_flags(p)
    p.set_defaults(func=lambda a: _cmd_extreme_ip(a, "min"))

    p = sub.add_parser("max-ip", help="maximum inner product pair")
    p.add_argument("--input", required=True)
    _add_pipeline_flags(p)
    p.set_defaults(func=lambda a: _cmd_extreme_ip(a, "max"))

    p = sub.add_parser("orthogonal", help="find a red-blue pair with inner product zero")
    p.add_argument("--input", required=True)
    _add_pipeline_flags(p)
    p.set_defaults(func=_cmd_orthogonal)

    p = sub.add_parser("jaccard", help="maximum Jaccard coefficient pair")
    p.add_argument("--input", required=True)
    _add_pipeline_flags(p)
    p.set_defaults(func=_cmd_jaccard)

    p = sub.add_parser("bench", help="wall-clock timings, CSV output")
    p.add_argument("--sizes", default="128,256")
    p.add_argument("--dims", default="8,16")
    p.add_argument("--mode", choices=("poly", "brute", "both"), default="both")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=neighbors.MONOMIAL_BUDGET_DEFAULT)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bench)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, EmptyInputError, DimensionMismatchError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except InvalidParametersError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 4


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
