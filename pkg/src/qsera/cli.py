"""Command-line entry point: ``qsera {run,sweep-n,expand,grover-demo,portfolio-scan}``.

Exit codes: 0 success, 2 input/parse error, 3 validation or capacity error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import formats
from .errors import QseraError
from .formats import ConfigError
from .grover import (
    OracleSpec,
    QubitLayout,
    build_diffusion,
    build_oracle_circuit,
    build_uniform_prep,
    classical_amplitudes,
    indicator_oracle_poly,
    optimal_iterations,
)
from .portfolio import (
    REFERENCE_PROBLEM,
    PortfolioProblem,
    format_published_table_report,
    portfolio_return,
    portfolio_variance,
    published_table_comparison,
)
from .pseudo_boolean import RescaleMode, power, rescale
from .runner import PRESETS, QseraConfig, run_qsera, sweep_power
from .statevector import apply_circuit, state_to_json, zero_state

log = logging.getLogger("qsera")

EXIT_OK, EXIT_INPUT, EXIT_VALIDATION = 0, 2, 3


class UsageError(Exception):
    """Bad command-line values that argparse cannot catch by itself."""


def _setup_logging() -> None:
    level = os.environ.get("QSERA_LOG", "warning").upper()
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _iterations(value: str):
    if value in ("auto-floor", "auto-ceil"):
        return value
    try:
        m = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected auto-floor, auto-ceil or a non-negative integer") from None
    if m < 0:
        raise argparse.ArgumentTypeError("iteration count must be >= 0")
    return m


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


# config handling

def _read_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    doc = formats.loads(text, source=path)
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return doc


def _load_problem(args) -> tuple[PortfolioProblem, dict]:
    """Portfolio problem plus any run settings found alongside it."""
    if args.config:
        doc = _read_config(args.config)
        if "problem" in doc:
            return formats.problem_from_dict(doc["problem"]), doc
        return formats.problem_from_dict(doc), doc
    name = args.preset or "paper-portfolio"
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    settings = PRESETS[name]
    return REFERENCE_PROBLEM, {
        "mode": settings["mode"],
        "f_min": settings["f_min_est"],
        "f_max": settings["f_max_est"],
        "n": settings["n_power"],
        "iterations": settings["iterations"],
    }


def _build_config(args) -> QseraConfig:
    if args.config and args.preset:
        raise UsageError("--config and --preset are mutually exclusive")
    if args.config:
        doc = _read_config(args.config)
        if "objective" in doc:
            objective = formats.poly_from_dict(doc["objective"], "objective")
        elif "values" in doc:
            values = doc["values"]
            if not isinstance(values, list) or not all(isinstance(v, (int, float)) for v in values):
                raise ConfigError(f"{args.config}: 'values' must be a list of numbers")
            objective = np.array(values, dtype=float)
        else:
            problem = formats.problem_from_dict(doc.get("problem", doc))
            objective = problem.to_polynomial()
        settings = doc
    else:
        problem, settings = _load_problem(args)
        objective = problem.to_polynomial()

    mode = RescaleMode.parse(args.mode or settings.get("mode", "min"))
    values = objective.point_values() if hasattr(objective, "point_values") else objective
    f_min = settings.get("f_min")
    f_max = settings.get("f_max")
    if args.f_min is not None:
        f_min = args.f_min
    if args.f_max is not None:
        f_max = args.f_max
    # missing estimates fall back to the exhaustive true extrema
    f_min = float(np.min(values)) if f_min is None else float(f_min)
    f_max = float(np.max(values)) if f_max is None else float(f_max)
    n = args.n if args.n is not None else settings.get("n", 1)
    iterations = args.iterations if args.iterations is not None else settings.get("iterations", "auto-floor")
    oracle = args.oracle or settings.get("oracle", "circuit")
    return QseraConfig(
        objective=objective,
        mode=mode,
        f_min_est=f_min,
        f_max_est=f_max,
        n_power=n,
        iterations=iterations,
        oracle_kind=oracle,
    )


# subcommands

def cmd_run(args) -> int:
    config = _build_config(args)
    result = run_qsera(config, keep_state=args.dump_state is not None)
    doc = formats.run_result_to_dict(result)
    if args.shots:
        rng = np.random.default_rng(args.seed)
        counts = rng.multinomial(args.shots, result.probabilities / result.probabilities.sum())
        doc["counts"] = {result.bitstring(z): int(c) for z, c in enumerate(counts) if c}
        doc["shots"] = args.shots
    if args.dump_state is not None:
        dump = state_to_json(result.final_state)
        if args.dump_state == "-":
            doc["state"] = json.loads(dump)
        else:
            Path(args.dump_state).write_text(dump + "\n")
    _emit(json.dumps(doc, indent=2), args.out)
    if args.distribution_csv:
        rows = ((result.bitstring(z), p) for z, p in enumerate(result.probabilities))
        Path(args.distribution_csv).write_text(formats.write_csv(["bitstring", "probability"], rows))
    log.info("top_state=%s runner_up=%s", doc["top_state"], doc["runner_up"])
    return EXIT_OK


def _parse_range(text: str) -> list[int]:
    try:
        lo_s, hi_s = text.split(":")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise UsageError(f"--n-range expects LO:HI, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"--n-range needs 1 <= LO <= HI, got {text!r}")
    return list(range(lo, hi + 1))


def cmd_sweep_n(args) -> int:
    n_values = _parse_range(args.n_range)
    config = _build_config(args)
    rows = sweep_power(config, n_values)
    _emit(formats.write_csv(["n", "probability"], rows), args.out)
    return EXIT_OK


def cmd_expand(args) -> int:
    if args.config and args.preset:
        raise UsageError("--config and --preset are mutually exclusive")
    problem, settings = _load_problem(args)
    f = problem.to_polynomial()
    values = f.point_values()
    mode = RescaleMode.parse(args.mode or settings.get("mode", "min"))
    f_min = args.f_min if args.f_min is not None else settings.get("f_min", float(values.min()))
    f_max = args.f_max if args.f_max is not None else settings.get("f_max", float(values.max()))
    n = args.n if args.n is not None else settings.get("n", 1)
    g = rescale(f, mode, f_min, f_max)
    gn = power(g, n)
    doc = {
        "n": n,
        "mode": mode.value,
        "f_min": f_min,
        "f_max": f_max,
        "f": formats.poly_to_dict(f),
        "g": formats.poly_to_dict(g),
        "g_n": formats.poly_to_dict(gn),
    }
    if not args.config:
        rows = published_table_comparison(problem, f_min=f_min, f_max=f_max, n=n)
        doc["published_table"] = rows
        log.info("coefficient comparison:\n%s", format_published_table_report(rows))
    _emit(json.dumps(doc, indent=2), args.out)
    return EXIT_OK


def grover_demo_series(K: int, target: int, m: int) -> tuple[list[tuple], list[tuple], float]:
    """Per-iteration (k, a_other, a_target, p_target) from gates and from the recursion."""
    N = 1 << K
    if not 0 <= target < N:
        raise UsageError(f"target {target} out of range for K={K}")
    spec = OracleSpec(indicator_oracle_poly(K, target))
    layout = QubitLayout.for_oracle(spec)
    step = build_oracle_circuit(spec, layout) + build_diffusion(K, layout)
    # the constant term of the indicator oracle is a global phase; undo it per step
    undo = np.exp(-1j * spec.phases.get(0, 0.0))
    state = apply_circuit(zero_state(layout.num_qubits), build_uniform_prep(K, layout.num_qubits))
    reference = classical_amplitudes(N, m)
    sim_rows, ref_rows, deviation = [], [], 0.0
    for k in range(m + 1):
        if k:
            state = apply_circuit(state, step)
        reg = state.amplitudes[:N] * undo**k
        a_target = reg[target]
        a_other = (reg.sum() - a_target) / math.sqrt(N - 1)
        a_ref, a_star_ref = reference[k]
        deviation = max(deviation, abs(a_target - a_star_ref), abs(a_other - a_ref))
        sim_rows.append(("simulator", k, float(a_other.real), float(a_target.real), float(abs(a_target) ** 2)))
        ref_rows.append(("recursion", k, float(a_ref), float(a_star_ref), float(a_star_ref**2)))
    return sim_rows, ref_rows, float(deviation)


def cmd_grover_demo(args) -> int:
    if args.k < 2:
        raise UsageError("--k must be >= 2")
    m = args.m
    if m is None:
        m = optimal_iterations(1 << args.k, "ceil").m
    elif m < 0:
        raise UsageError("--m must be >= 0")
    sim_rows, ref_rows, deviation = grover_demo_series(args.k, args.target, m)
    text = formats.write_csv(["series", "k", "a_other", "a_target", "p_target"], sim_rows + ref_rows)
    _emit(text, args.out)
    print(f"max_abs_deviation={deviation!r}", file=sys.stderr)
    return EXIT_OK


def cmd_portfolio_scan(args) -> int:
    if args.config and args.preset:
        raise UsageError("--config and --preset are mutually exclusive")
    problem, _ = _load_problem(args)
    values = problem.objective_values()
    n = problem.num_assets
    rows = []
    for z in range(1 << n):
        bits = format(z, f"0{n}b")
        if z == 0:
            rows.append((bits, 0, None, None, values[z]))
        else:
            rows.append((
                bits,
                z.bit_count(),
                portfolio_return(problem.pool, z),
                math.sqrt(portfolio_variance(problem.pool, z)),
                values[z],
            ))
    _emit(formats.write_csv(["selection_bits", "n_assets", "mu_p", "sigma_p", "f"], rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=sorted(PRESETS), help="built-in problem and run settings")
    common.add_argument("--config", help="JSON problem or run configuration")
    common.add_argument("--out", help="write output here instead of standard output")

    run_opts = argparse.ArgumentParser(add_help=False)
    run_opts.add_argument("--mode", choices=["min", "max", "root"])
    run_opts.add_argument("--n", type=_positive_int, help="power applied to the rescaled objective")
    run_opts.add_argument("--f-min", type=float, dest="f_min")
    run_opts.add_argument("--f-max", type=float, dest="f_max")

    sim_opts = argparse.ArgumentParser(add_help=False)
    sim_opts.add_argument("--iterations", type=_iterations, help="auto-floor | auto-ceil | <int>")
    sim_opts.add_argument("--oracle", choices=["circuit", "exact"])

    parser = argparse.ArgumentParser(prog="qsera", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common, run_opts, sim_opts], help="single QSERA run")
    p.add_argument("--shots", type=_positive_int, help="also sample this many measurements")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--dump-state", nargs="?", const="-", default=None, metavar="PATH",
                   help="include the final state as [re, im] pairs (or write it to PATH)")
    p.add_argument("--distribution-csv", metavar="PATH", help="write bitstring,probability CSV")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep-n", parents=[common, run_opts, sim_opts], help="P(optimum) versus n")
    p.add_argument("--n-range", default="1:100", help="inclusive LO:HI (default 1:100)")
    p.set_defaults(func=cmd_sweep_n)

    p = sub.add_parser("expand", parents=[common, run_opts], help="f, g and g^n coefficient tables")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("grover-demo", help="ideal-oracle Grover: simulator vs recursion")
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--target", type=int, default=14)
    p.add_argument("--m", type=int, default=None, help="iterations (default: ceil of the optimum)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_grover_demo)

    p = sub.add_parser("portfolio-scan", parents=[common], help="mu_p, sigma_p and f of every selection")
    p.set_defaults(func=cmd_portfolio_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"qsera: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QseraError as exc:
        print(f"qsera: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
