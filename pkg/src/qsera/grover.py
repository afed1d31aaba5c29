"""QSERA circuit construction and the ideal-oracle Grover reference.

Circuits follow the decomposition down to H, X, Z, P, CX and CCX:

* uniform preparation: one H per register qubit;
* phase oracle ``exp(i pi G^n)``: one controlled phase block per monomial of
  ``g^n``, with order >= 3 monomials folded into AND ancillas by a CCX ladder
  that is uncomputed afterwards;
* diffusion ``2|s><s| - I``: H and X conjugation around an all-ones detector
  whose phase ancilla receives X Z X.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import InputDomainError, LayoutError
from .pseudo_boolean import MultilinearPoly
from .statevector import CCX, CX, Circuit, GateOp, H, Phase, QuantumState, X, Z


@dataclass(frozen=True)
class OracleSpec:
    """Phase table for ``Q_* = exp(i pi G^n)``: ``phases[S] = pi * c_S``."""

    g_power: MultilinearPoly
    phases: dict[int, float] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "phases", {m: math.pi * c for m, c in self.g_power.terms_by_order()}
        )

    @property
    def num_vars(self) -> int:
        return self.g_power.num_vars

    @property
    def max_order(self) -> int:
        return self.g_power.degree()


@dataclass(frozen=True)
class QubitLayout:
    """Register qubits first, then AND ancillas, then the phase ancilla."""

    register: tuple[int, ...]
    and_ancillas: tuple[int, ...]
    phase_ancilla: int

    @classmethod
    def build(cls, num_register: int, num_and: int) -> "QubitLayout":
        if num_register < 1 or num_and < 0:
            raise LayoutError(f"invalid layout sizes: register={num_register}, and={num_and}")
        reg = tuple(range(num_register))
        ands = tuple(range(num_register, num_register + num_and))
        return cls(reg, ands, num_register + num_and)

    @classmethod
    def for_oracle(cls, spec: OracleSpec, with_diffusion: bool = True) -> "QubitLayout":
        """Smallest layout for ``spec`` (and the K-controlled diffusion, if asked)."""
        need = ancillas_needed(spec.max_order)
        if with_diffusion:
            need = max(need, ancillas_needed(spec.num_vars))
        return cls.build(spec.num_vars, need)

    @property
    def num_register(self) -> int:
        return len(self.register)

    @property
    def num_qubits(self) -> int:
        return self.num_register + len(self.and_ancillas) + 1

    @property
    def ancillas(self) -> tuple[int, ...]:
        return self.and_ancillas + (self.phase_ancilla,)


def ancillas_needed(order: int) -> int:
    """AND ancillas for an order-``j`` controlled phase: ``max(0, j - 2)``."""
    return max(0, order - 2)


@dataclass(frozen=True)
class GroverPlan:
    N: int
    m_real: float
    m: int


def build_uniform_prep(K: int, num_qubits: int | None = None) -> Circuit:
    if K < 1:
        raise InputDomainError("K must be >= 1")
    return Circuit(num_qubits if num_qubits is not None else K, [H(q) for q in range(K)])


def _and_ladder(controls: Sequence[int], ancillas: Sequence[int], target: int) -> list[GateOp]:
    """Gates that XOR ``AND(controls)`` into ``target`` using ``len(controls) - 2`` ancillas."""
    j = len(controls)
    if j == 1:
        return [CX(controls[0], target)]
    if j == 2:
        return [CCX(controls[0], controls[1], target)]
    if len(ancillas) < j - 2:
        raise LayoutError(f"order-{j} control needs {j - 2} AND ancillas, layout has {len(ancillas)}")
    compute = [CCX(controls[0], controls[1], ancillas[0])]
    for i in range(2, j - 1):
        compute.append(CCX(ancillas[i - 2], controls[i], ancillas[i - 1]))
    final = CCX(ancillas[j - 3], controls[j - 1], target)
    return compute + [final] + compute[::-1]


def _controlled_phase_block(
    controls: Sequence[int], phi: float, layout: QubitLayout
) -> list[GateOp]:
    anc = layout.phase_ancilla
    if not controls:
        return [X(anc), Phase(anc, phi), X(anc)]
    ladder = _and_ladder(controls, layout.and_ancillas, anc)
    # the ladder is compute + final CCX + uncompute; the phase sits right after the final CCX
    half = len(ladder) // 2
    toggle_in = ladder[: half + 1]
    toggle_out = ladder[half:]
    return toggle_in + [Phase(anc, phi)] + toggle_out


def build_oracle_circuit(spec: OracleSpec, layout: QubitLayout) -> Circuit:
    """Gate-level ``prod_S P_S(pi c_S)``; zero coefficients emit no gates."""
    K = spec.num_vars
    if layout.num_register != K:
        raise LayoutError(f"layout register has {layout.num_register} qubits, oracle needs {K}")
    if spec.max_order > K:
        raise InputDomainError(f"monomial order {spec.max_order} exceeds K={K}")
    if len(layout.and_ancillas) < ancillas_needed(spec.max_order):
        raise LayoutError(
            f"order-{spec.max_order} monomials need {ancillas_needed(spec.max_order)} AND ancillas"
        )
    gates: list[GateOp] = []
    for mask, phi in sorted(spec.phases.items(), key=lambda t: (t[0].bit_count(), t[0])):
        controls = [layout.register[i] for i in range(K) if mask >> i & 1]
        gates += _controlled_phase_block(controls, phi, layout)
    return Circuit(layout.num_qubits, gates)


def build_diffusion(K: int, layout: QubitLayout) -> Circuit:
    """``2|s><s| - I`` on the register, built as ``Q_H Q_0 Q_H``."""
    if layout.num_register != K:
        raise LayoutError(f"layout register has {layout.num_register} qubits, diffusion needs {K}")
    if len(layout.and_ancillas) < ancillas_needed(K):
        raise LayoutError(f"diffusion on {K} qubits needs {ancillas_needed(K)} AND ancillas")
    reg = list(layout.register)
    anc = layout.phase_ancilla
    ladder = _and_ladder(reg, layout.and_ancillas, anc)
    half = len(ladder) // 2
    # X Z X on the detector ancilla is -Z: +1 when every register bit was 0, -1 otherwise
    gates: list[GateOp] = [H(q) for q in reg] + [X(q) for q in reg]
    gates += ladder[: half + 1] + [X(anc), Z(anc), X(anc)] + ladder[half:]
    gates += [X(q) for q in reg] + [H(q) for q in reg]
    return Circuit(layout.num_qubits, gates)


class ExactOracle:
    """Diagonal reference oracle: ``|z> -> exp(i pi u[z]) |z>`` on the register.

    The register is qubits ``0..K-1``; any higher qubits (ancillas) are left
    untouched.
    """

    def __init__(self, u_values) -> None:
        u = np.asarray(u_values, dtype=float).ravel()
        if u.size < 2 or u.size & (u.size - 1):
            raise InputDomainError(f"oracle table length must be a power of two, got {u.size}")
        if not np.all(np.isfinite(u)):
            raise InputDomainError("oracle values must be finite")
        self.u_values = u
        self.num_vars = u.size.bit_length() - 1
        self.diagonal = np.exp(1j * np.pi * u)

    def apply(self, state: QuantumState) -> QuantumState:
        if state.num_qubits < self.num_vars:
            raise InputDomainError(
                f"state has {state.num_qubits} qubits, oracle acts on {self.num_vars}"
            )
        amps = state.amplitudes.reshape(-1, self.diagonal.size) * self.diagonal
        return QuantumState(state.num_qubits, amps.ravel())

    __call__ = apply


def build_exact_oracle(u_values) -> ExactOracle:
    return ExactOracle(u_values)


def apply_exact_diffusion(state: QuantumState, K: int | None = None) -> QuantumState:
    """``2|s><s| - I`` applied to the register qubits ``0..K-1`` directly."""
    K = state.num_qubits if K is None else K
    amps = state.amplitudes.reshape(-1, 1 << K)
    mean = amps.mean(axis=1, keepdims=True)
    return QuantumState(state.num_qubits, (2.0 * mean - amps).ravel())


def optimal_iterations(N: int, rounding: Literal["floor", "ceil"] = "floor") -> GroverPlan:
    """Iteration count ``m ~ (pi sqrt(N) - 2) / 4`` rounded down (default) or up."""
    if N < 2:
        raise InputDomainError("N must be >= 2")
    m_real = (math.pi * math.sqrt(N) - 2.0) / 4.0
    if rounding == "floor":
        m = math.floor(m_real)
    elif rounding == "ceil":
        m = math.ceil(m_real)
    else:
        raise InputDomainError(f"rounding must be 'floor' or 'ceil', got {rounding!r}")
    return GroverPlan(N=N, m_real=m_real, m=max(0, m))


def classical_amplitudes(N: int, m: int) -> np.ndarray:
    """Rows ``(a_k, a_*k)`` for k = 0..m of the ideal single-target iteration.

    ``a_*k`` is the target amplitude and ``a_k`` the amplitude along the
    normalised sum of all other basis states.
    """
    if N < 2:
        raise InputDomainError("N must be >= 2")
    if m < 0:
        raise InputDomainError("m must be >= 0")
    root = math.sqrt(N - 1)
    out = np.empty((m + 1, 2))
    a, a_star = root / math.sqrt(N), 1.0 / math.sqrt(N)
    out[0] = a, a_star
    for k in range(1, m + 1):
        a, a_star = (
            (a * (N - 2) - 2.0 * a_star * root) / N,
            (2.0 * a * (N - 1) + a_star * (N - 2) * root) / (N * root),
        )
        out[k] = a, a_star
    return out


def indicator_oracle_poly(K: int, target: int) -> MultilinearPoly:
    """Multilinear form of ``u(z) = [z == target]``: ``prod_{i in t} x_i prod_{i not in t} (1 - x_i)``."""
    if not 0 <= target < 1 << K:
        raise InputDomainError(f"target {target} out of range for K={K}")
    free = [i for i in range(K) if not target >> i & 1]
    coeffs = {}
    # expand prod (1 - x_i) over the zero bits: every subset T of them appears with sign (-1)^|T|
    for sub in range(1 << len(free)):
        mask = target
        for j, i in enumerate(free):
            if sub >> j & 1:
                mask |= 1 << i
        coeffs[mask] = (-1.0) ** bin(sub).count("1")
    return MultilinearPoly(K, coeffs)


def circuit_to_text(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.num_qubits}"]
    for g in circuit.gates:
        if isinstance(g, Phase):
            lines.append(f"P {g.q} {g.phi!r}")
        elif isinstance(g, (H, X, Z)):
            lines.append(f"{type(g).__name__} {g.q}")
        elif isinstance(g, CX):
            lines.append(f"CX {g.control} {g.target}")
        else:
            lines.append(f"CCX {g.control1} {g.control2} {g.target}")
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("qubits "):
        raise InputDomainError("circuit text must start with 'qubits <Q>'")
    num_qubits = int(lines[0].split()[1])
    simple = {"H": H, "X": X, "Z": Z}
    gates: list[GateOp] = []
    for lineno, line in enumerate(lines[1:], start=2):
        name, *args = line.split()
        if name not in simple and name not in ("P", "CX", "CCX"):
            raise InputDomainError(f"line {lineno}: unknown gate {name!r}")
        try:
            if name in simple:
                gates.append(simple[name](int(args[0])))
            elif name == "P":
                gates.append(Phase(int(args[0]), float(args[1])))
            elif name == "CX":
                gates.append(CX(int(args[0]), int(args[1])))
            else:
                gates.append(CCX(int(args[0]), int(args[1]), int(args[2])))
        except (IndexError, ValueError) as exc:
            raise InputDomainError(f"line {lineno}: malformed gate {line!r}") from exc
    return Circuit(num_qubits, gates)
