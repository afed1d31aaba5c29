"""Readers and writers for the JSON and CSV formats exchanged with the CLI.

Floats are written in shortest round-trip form (``repr``) so every file
re-reads bit-exactly.
"""
from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InputDomainError
from .grover import GroverPlan
from .portfolio import AssetPool, Benchmark, PortfolioProblem, TrackingObjective
from .pseudo_boolean import MultilinearPoly
from .runner import RunResult


class ConfigError(InputDomainError):
    """Malformed input document (bad JSON, missing or mistyped fields)."""


def fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def loads(text: str, source: str = "<input>") -> Any:
    if not text.strip():
        raise ConfigError(f"{source}: empty document")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _field(doc: dict, key: str, where: str, kind=None):
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected an object")
    if key not in doc:
        raise ConfigError(f"{where}: missing field {key!r}")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return value


# polynomial JSON: {"num_vars": K, "terms": [{"vars": [...], "coeff": r}, ...]}

def poly_to_dict(p: MultilinearPoly) -> dict:
    terms = [
        {"vars": [i for i in range(p.num_vars) if mask >> i & 1], "coeff": float(c)}
        for mask, c in p.terms_by_order()
    ]
    return {"num_vars": p.num_vars, "terms": terms}


def poly_from_dict(doc: dict, where: str = "polynomial") -> MultilinearPoly:
    k = _field(doc, "num_vars", where, int)
    terms = _field(doc, "terms", where, list)
    coeffs: dict[int, float] = {}
    for n, term in enumerate(terms):
        loc = f"{where}.terms[{n}]"
        variables = _field(term, "vars", loc, list)
        coeff = _field(term, "coeff", loc, (int, float))
        if any(not isinstance(v, int) for v in variables):
            raise ConfigError(f"{loc}.vars: indices must be integers")
        if any(b <= a for a, b in zip(variables, variables[1:])):
            raise ConfigError(f"{loc}.vars: indices must be strictly ascending")
        if variables and not (0 <= variables[0] and variables[-1] < k):
            raise ConfigError(f"{loc}.vars: index out of range for num_vars={k}")
        mask = sum(1 << v for v in variables)
        if mask in coeffs:
            raise ConfigError(f"{loc}: duplicate monomial")
        coeffs[mask] = float(coeff)
    return MultilinearPoly(k, coeffs)


def poly_to_json(p: MultilinearPoly) -> str:
    return json.dumps(poly_to_dict(p))


def poly_from_json(text: str) -> MultilinearPoly:
    return poly_from_dict(loads(text))


# problem JSON

def problem_to_dict(problem: PortfolioProblem) -> dict:
    return {
        "mu": problem.pool.mu.tolist(),
        "sigma": problem.pool.sigma.tolist(),
        "rho": problem.pool.rho.tolist(),
        "benchmark": {
            "mu_b": problem.benchmark.mu_b,
            "sigma_b": problem.benchmark.sigma_b,
            "n_b": problem.benchmark.n_b,
        },
        "lambda_mu": problem.weights.lambda_mu,
        "lambda_sigma2": problem.weights.lambda_sigma2,
    }


def problem_from_dict(doc: dict, where: str = "problem") -> PortfolioProblem:
    mu = _field(doc, "mu", where, list)
    sigma = _field(doc, "sigma", where, list)
    rho = _field(doc, "rho", where, list)
    bench = _field(doc, "benchmark", where, dict)
    try:
        pool_arrays = (np.array(mu, dtype=float), np.array(sigma, dtype=float), np.array(rho, dtype=float))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: asset data must be numeric arrays ({exc})") from None
    n_b = _field(bench, "n_b", f"{where}.benchmark", int)
    return PortfolioProblem(
        AssetPool(*pool_arrays),
        Benchmark(
            mu_b=float(_field(bench, "mu_b", f"{where}.benchmark", (int, float))),
            sigma_b=float(_field(bench, "sigma_b", f"{where}.benchmark", (int, float))),
            n_b=n_b,
        ),
        TrackingObjective(
            lambda_mu=float(_field(doc, "lambda_mu", where, (int, float))),
            lambda_sigma2=float(_field(doc, "lambda_sigma2", where, (int, float))),
        ),
    )


def problem_to_json(problem: PortfolioProblem) -> str:
    return json.dumps(problem_to_dict(problem))


def problem_from_json(text: str) -> PortfolioProblem:
    return problem_from_dict(loads(text))


# run result JSON

def run_result_to_dict(result: RunResult) -> dict:
    return {
        "probabilities": {result.bitstring(z): float(p) for z, p in enumerate(result.probabilities)},
        "top_state": result.bitstring(result.top_state),
        "runner_up": result.bitstring(result.runner_up),
        "m": result.plan.m,
        "n": result.n_power,
        "ancilla_ground_prob": float(result.ancilla_ground_prob),
    }


def run_result_from_dict(doc: dict) -> RunResult:
    probs_doc = _field(doc, "probabilities", "result", dict)
    k = len(next(iter(probs_doc)))
    probs = np.zeros(1 << k)
    for bits, p in probs_doc.items():
        probs[int(bits, 2)] = p
    m = _field(doc, "m", "result", int)
    return RunResult(
        probabilities=probs,
        top_state=int(_field(doc, "top_state", "result", str), 2),
        runner_up=int(_field(doc, "runner_up", "result", str), 2),
        plan=GroverPlan(N=1 << k, m_real=float("nan"), m=m),
        ancilla_ground_prob=float(_field(doc, "ancilla_ground_prob", "result")),
        u_values=np.full(1 << k, np.nan),
        n_power=_field(doc, "n", "result", int),
    )


# CSV

def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def read_csv(text: str) -> tuple[list[str], list[list[str]]]:
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        raise ConfigError("empty CSV document")
    return rows[0], rows[1:]
