"""Exact statevector simulation of the H, X, Z, P, CX, CCX gate set.

Basis indexing is little-endian: bit ``q`` of an amplitude index is the state
of qubit ``q``.  Internally the amplitude vector is viewed as a rank-Q tensor
whose axis ``Q - 1 - q`` belongs to qubit ``q``, so every gate is a pair of
strided slices updated in place.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import CapacityError, InputDomainError

MAX_QUBITS = 26
_SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class H:
    q: int


@dataclass(frozen=True)
class X:
    q: int


@dataclass(frozen=True)
class Z:
    q: int


@dataclass(frozen=True)
class Phase:
    """P(phi): |0> -> |0>, |1> -> exp(i phi)|1>."""

    q: int
    phi: float


@dataclass(frozen=True)
class CX:
    control: int
    target: int


@dataclass(frozen=True)
class CCX:
    control1: int
    control2: int
    target: int


GateOp = Union[H, X, Z, Phase, CX, CCX]


def gate_qubits(gate: GateOp) -> tuple[int, ...]:
    if isinstance(gate, (H, X, Z, Phase)):
        return (gate.q,)
    if isinstance(gate, CX):
        return (gate.control, gate.target)
    if isinstance(gate, CCX):
        return (gate.control1, gate.control2, gate.target)
    raise InputDomainError(f"unknown gate {gate!r}")


def _validate_gate(gate: GateOp, num_qubits: int) -> None:
    qubits = gate_qubits(gate)
    for q in qubits:
        if not isinstance(q, (int, np.integer)) or not 0 <= q < num_qubits:
            raise InputDomainError(f"{gate!r}: qubit index out of range for {num_qubits} qubits")
    if len(set(qubits)) != len(qubits):
        raise InputDomainError(f"{gate!r}: control and target qubits must be distinct")


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[GateOp, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            _validate_gate(gate, self.num_qubits)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise InputDomainError("cannot concatenate circuits of different widths")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def inverse(self) -> "Circuit":
        inv = []
        for gate in reversed(self.gates):
            inv.append(Phase(gate.q, -gate.phi) if isinstance(gate, Phase) else gate)
        return Circuit(self.num_qubits, inv)


class QuantumState:
    """Amplitudes of a Q-qubit register, ``len(amplitudes) == 2**Q``."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes) -> None:
        amplitudes = np.ascontiguousarray(amplitudes, dtype=complex)
        if amplitudes.ndim != 1 or amplitudes.size != 1 << num_qubits:
            raise InputDomainError(
                f"expected {1 << num_qubits} amplitudes for {num_qubits} qubits, got {amplitudes.shape}"
            )
        self.num_qubits = int(num_qubits)
        self.amplitudes = amplitudes

    def copy(self) -> "QuantumState":
        return QuantumState(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def _tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def __repr__(self) -> str:
        return f"QuantumState(num_qubits={self.num_qubits})"


def _check_count(num_qubits: int) -> None:
    if not isinstance(num_qubits, (int, np.integer)) or not 1 <= num_qubits <= MAX_QUBITS:
        raise CapacityError(f"qubit count must be in [1, {MAX_QUBITS}], got {num_qubits!r}")


def zero_state(num_qubits: int) -> QuantumState:
    _check_count(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[0] = 1.0
    return QuantumState(num_qubits, amps)


def basis_state(num_qubits: int, index: int) -> QuantumState:
    _check_count(num_qubits)
    if not 0 <= index < 1 << num_qubits:
        raise InputDomainError(f"basis index {index} out of range")
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[index] = 1.0
    return QuantumState(num_qubits, amps)


def _slices(num_qubits: int, fixed: dict[int, int]) -> tuple:
    sl = [slice(None)] * num_qubits
    for q, bit in fixed.items():
        sl[num_qubits - 1 - q] = bit
    return tuple(sl)


def _apply_inplace(state: QuantumState, gate: GateOp) -> None:
    n = state.num_qubits
    psi = state._tensor()
    if isinstance(gate, H):
        s0, s1 = _slices(n, {gate.q: 0}), _slices(n, {gate.q: 1})
        a0 = psi[s0].copy()
        a1 = psi[s1]
        psi[s0] = (a0 + a1) * _SQRT1_2
        psi[s1] = (a0 - a1) * _SQRT1_2
        return
    if isinstance(gate, Z):
        psi[_slices(n, {gate.q: 1})] *= -1.0
        return
    if isinstance(gate, Phase):
        psi[_slices(n, {gate.q: 1})] *= cmath.exp(1j * gate.phi)
        return
    if isinstance(gate, X):
        controls, target = {}, gate.q
    elif isinstance(gate, CX):
        controls, target = {gate.control: 1}, gate.target
    elif isinstance(gate, CCX):
        controls, target = {gate.control1: 1, gate.control2: 1}, gate.target
    else:
        raise InputDomainError(f"unknown gate {gate!r}")
    s0 = _slices(n, {**controls, target: 0})
    s1 = _slices(n, {**controls, target: 1})
    tmp = psi[s0].copy()
    psi[s0] = psi[s1]
    psi[s1] = tmp


def apply(state: QuantumState, gate: GateOp) -> QuantumState:
    """Return a new state with ``gate`` applied; the input is left untouched."""
    _validate_gate(gate, state.num_qubits)
    out = state.copy()
    _apply_inplace(out, gate)
    return out


def apply_circuit(state: QuantumState, circuit: Circuit) -> QuantumState:
    if circuit.num_qubits != state.num_qubits:
        raise InputDomainError(
            f"circuit has {circuit.num_qubits} qubits, state has {state.num_qubits}"
        )
    out = state.copy()
    for gate in circuit.gates:
        _apply_inplace(out, gate)
    return out


def _check_indices(state: QuantumState, qubits: Sequence[int]) -> list[int]:
    qubits = [int(q) for q in qubits]
    if len(set(qubits)) != len(qubits):
        raise InputDomainError(f"duplicate qubit indices in {qubits}")
    for q in qubits:
        if not 0 <= q < state.num_qubits:
            raise InputDomainError(f"qubit {q} out of range for {state.num_qubits} qubits")
    return qubits


def register_probabilities(state: QuantumState, register_qubits: Sequence[int]) -> np.ndarray:
    """Marginal distribution over ``register_qubits``.

    Output index bit ``i`` is the value of ``register_qubits[i]``.
    """
    reg = _check_indices(state, register_qubits)
    if not reg:
        raise InputDomainError("register must contain at least one qubit")
    n = state.num_qubits
    probs = state.probabilities().reshape((2,) * n)
    keep = [n - 1 - q for q in reversed(reg)]
    rest = [ax for ax in range(n) if ax not in keep]
    return probs.transpose(keep + rest).reshape(1 << len(reg), -1).sum(axis=1)


def ancilla_ground_probability(state: QuantumState, ancilla_qubits: Iterable[int]) -> float:
    anc = _check_indices(state, list(ancilla_qubits))
    probs = state.probabilities().reshape((2,) * state.num_qubits)
    return float(probs[_slices(state.num_qubits, {q: 0 for q in anc})].sum())


def equal_up_to_global_phase(a: QuantumState, b: QuantumState, tol: float = 1e-9) -> bool:
    """True iff ``max |a - exp(i theta) b| <= tol`` with theta fixed by a's largest amplitude."""
    if a.num_qubits != b.num_qubits:
        raise InputDomainError("states have different qubit counts")
    k = int(np.argmax(np.abs(a.amplitudes)))
    ak, bk = a.amplitudes[k], b.amplitudes[k]
    if abs(bk) == 0.0:
        rot = 1.0
    else:
        rot = (ak / abs(ak)) / (bk / abs(bk)) if abs(ak) > 0 else 1.0
    return bool(np.max(np.abs(a.amplitudes - rot * b.amplitudes)) <= tol)


def state_to_json(state: QuantumState) -> str:
    """JSON array of ``[re, im]`` pairs in amplitude-index order."""
    return json.dumps([[float(z.real), float(z.imag)] for z in state.amplitudes])


def state_from_json(text: str) -> QuantumState:
    pairs = json.loads(text)
    amps = np.array([complex(re, im) for re, im in pairs])
    n = amps.size.bit_length() - 1
    if amps.size != 1 << n:
        raise InputDomainError("state dump length is not a power of two")
    return QuantumState(n, amps)
