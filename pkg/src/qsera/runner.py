"""End-to-end QSERA runs: objective -> g -> u_n -> (Q_+ Q_*)^m Q_H -> probabilities."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Literal, Sequence, Union

import numpy as np

from .errors import CapacityError, InputDomainError
from .grover import (
    GroverPlan,
    OracleSpec,
    QubitLayout,
    apply_exact_diffusion,
    build_diffusion,
    build_exact_oracle,
    build_oracle_circuit,
    build_uniform_prep,
    optimal_iterations,
)
from .portfolio import REFERENCE_PROBLEM
from .pseudo_boolean import (
    MultilinearPoly,
    RescaleMode,
    from_point_values,
    power,
    rescale,
    rescale_values,
)
from .statevector import (
    QuantumState,
    ancilla_ground_probability,
    apply_circuit,
    register_probabilities,
    zero_state,
)

log = logging.getLogger(__name__)

MAX_K_CIRCUIT = 12
MAX_K_EXACT = 20

Iterations = Union[Literal["auto-floor", "auto-ceil"], int]
OracleKind = Literal["circuit", "exact"]


@dataclass(frozen=True)
class QseraConfig:
    """Everything a single run needs.

    ``objective`` is either a polynomial or a table of ``2**K`` point values
    (e.g. from :func:`discretize_continuous`).
    """

    objective: MultilinearPoly | np.ndarray
    mode: RescaleMode = RescaleMode.MINIMISE
    f_min_est: float = 0.0
    f_max_est: float = 1.0
    n_power: int = 1
    iterations: Iterations = "auto-floor"
    oracle_kind: OracleKind = "circuit"

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", RescaleMode.parse(self.mode))
        if not isinstance(self.objective, MultilinearPoly):
            values = np.asarray(self.objective, dtype=float).ravel()
            if values.size < 2 or values.size & (values.size - 1):
                raise InputDomainError("tabulated objective length must be a power of two >= 2")
            values.setflags(write=False)
            object.__setattr__(self, "objective", values)
        if int(self.n_power) != self.n_power or self.n_power < 1:
            raise InputDomainError(f"n_power must be a positive integer, got {self.n_power!r}")
        it = self.iterations
        if isinstance(it, str):
            if it not in ("auto-floor", "auto-ceil"):
                raise InputDomainError(f"iterations must be auto-floor, auto-ceil or an int, got {it!r}")
        elif int(it) != it or it < 0:
            raise InputDomainError(f"explicit iteration count must be >= 0, got {it!r}")
        if self.oracle_kind not in ("circuit", "exact"):
            raise InputDomainError(f"oracle_kind must be 'circuit' or 'exact', got {self.oracle_kind!r}")

    @property
    def num_vars(self) -> int:
        if isinstance(self.objective, MultilinearPoly):
            return self.objective.num_vars
        return self.objective.size.bit_length() - 1

    def objective_values(self) -> np.ndarray:
        if isinstance(self.objective, MultilinearPoly):
            return self.objective.point_values()
        return np.array(self.objective)

    def objective_poly(self) -> MultilinearPoly:
        if isinstance(self.objective, MultilinearPoly):
            return self.objective
        return from_point_values(self.objective)

    def plan(self) -> GroverPlan:
        N = 1 << self.num_vars
        if isinstance(self.iterations, str):
            return optimal_iterations(N, "ceil" if self.iterations == "auto-ceil" else "floor")
        base = optimal_iterations(N)
        return GroverPlan(N=N, m_real=base.m_real, m=int(self.iterations))


@dataclass
class RunResult:
    probabilities: np.ndarray
    top_state: int
    runner_up: int
    plan: GroverPlan
    ancilla_ground_prob: float
    u_values: np.ndarray
    n_power: int
    final_state: QuantumState | None = field(default=None, repr=False, compare=False)

    @property
    def num_vars(self) -> int:
        return self.probabilities.size.bit_length() - 1

    def bitstring(self, z: int) -> str:
        return format(z, f"0{self.num_vars}b")


def _rank(probabilities: np.ndarray) -> tuple[int, int]:
    # descending probability, lowest index first on ties
    order = np.lexsort((np.arange(probabilities.size), -probabilities))
    return int(order[0]), int(order[1])


def run_qsera(config: QseraConfig, keep_state: bool = False) -> RunResult:
    K = config.num_vars
    plan = config.plan()
    if config.oracle_kind == "circuit":
        if K > MAX_K_CIRCUIT:
            raise CapacityError(f"gate-level runs are limited to K <= {MAX_K_CIRCUIT}, got {K}")
        g = rescale(config.objective_poly(), config.mode, config.f_min_est, config.f_max_est)
        u_poly = power(g, config.n_power)
        spec = OracleSpec(u_poly)
        layout = QubitLayout.for_oracle(spec)
        oracle = build_oracle_circuit(spec, layout)
        diffusion = build_diffusion(K, layout)
        log.debug(
            "circuit run: K=%d qubits=%d oracle gates=%d diffusion gates=%d m=%d",
            K, layout.num_qubits, len(oracle), len(diffusion), plan.m,
        )
        state = apply_circuit(zero_state(layout.num_qubits), build_uniform_prep(K, layout.num_qubits))
        step = oracle + diffusion
        for _ in range(plan.m):
            state = apply_circuit(state, step)
        probs = register_probabilities(state, layout.register)
        anc_prob = ancilla_ground_probability(state, layout.ancillas)
        u_values = u_poly.point_values()
    else:
        if K > MAX_K_EXACT:
            raise CapacityError(f"exact-oracle runs are limited to K <= {MAX_K_EXACT}, got {K}")
        g_values = rescale_values(config.objective_values(), config.mode, config.f_min_est, config.f_max_est)
        u_values = g_values**config.n_power
        oracle = build_exact_oracle(u_values)
        amps = np.full(1 << K, (1 << K) ** -0.5, dtype=complex)
        state = QuantumState(K, amps)
        for _ in range(plan.m):
            state = apply_exact_diffusion(oracle.apply(state))
        probs = state.probabilities()
        anc_prob = 1.0
        log.debug("exact run: K=%d m=%d", K, plan.m)
    top, second = _rank(probs)
    return RunResult(
        probabilities=probs,
        top_state=top,
        runner_up=second,
        plan=plan,
        ancilla_ground_prob=anc_prob,
        u_values=u_values,
        n_power=config.n_power,
        final_state=state if keep_state else None,
    )


def known_optimum(config: QseraConfig) -> int:
    """Classical exhaustive optimum of the objective for the config's mode."""
    values = config.objective_values()
    if config.mode is RescaleMode.MAXIMISE:
        return int(np.argmax(values))
    if config.mode is RescaleMode.MINIMISE:
        return int(np.argmin(values))
    return int(np.argmin(np.abs(values)))


def sweep_power(config: QseraConfig, n_values: Sequence[int]) -> list[tuple[int, float]]:
    """Probability of the classical optimum as a function of the power ``n``."""
    n_values = list(n_values)
    if not n_values:
        raise InputDomainError("n_values must not be empty")
    target = known_optimum(config)
    out = []
    for n in n_values:
        result = run_qsera(replace(config, n_power=n))
        out.append((int(n), float(result.probabilities[target])))
    return out


def discretize_continuous(samples) -> np.ndarray:
    """Point-value table from ``(y, h(y))`` samples; table index = sample position."""
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2:
        raise InputDomainError("samples must be an array of (y, h(y)) pairs")
    count = samples.shape[0]
    if count < 2 or count & (count - 1):
        raise InputDomainError(f"sample count must be a power of two >= 2, got {count}")
    if not np.all(np.diff(samples[:, 0]) > 0):
        raise InputDomainError("sample grid must be strictly increasing")
    if not np.all(np.isfinite(samples)):
        raise InputDomainError("samples must be finite")
    return samples[:, 1].copy()


# Run presets for the four-asset example.  f_max = 0.015 reproduces the
# published g and u_24 coefficients and the 1001/0101 ranking; the "-wide"
# variant uses f_max = 0.15, under which the oracle singles out 1111 instead.
PRESETS = {
    "paper-portfolio": dict(mode="min", f_min_est=0.0, f_max_est=0.015, n_power=24, iterations="auto-floor"),
    "paper-portfolio-wide": dict(mode="min", f_min_est=0.0, f_max_est=0.15, n_power=24, iterations="auto-floor"),
}


def preset_config(name: str = "paper-portfolio", **overrides) -> QseraConfig:
    try:
        params = dict(PRESETS[name])
    except KeyError:
        raise InputDomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    params.update(overrides)
    return QseraConfig(objective=REFERENCE_PROBLEM.to_polynomial(), **params)
