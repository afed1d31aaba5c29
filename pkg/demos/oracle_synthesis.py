"""How a polynomial objective turns into a phase oracle.

Each monomial c_S * prod_{i in S} x_i becomes a phase pi*c_S applied when all
qubits in S are 1.  Orders above two need an AND ladder of Toffolis into
scratch qubits, which is undone afterwards.
"""
import numpy as np

from qsera.grover import OracleSpec, QubitLayout, build_oracle_circuit, circuit_to_text
from qsera.pseudo_boolean import MultilinearPoly
from qsera.statevector import QuantumState, ancilla_ground_probability, apply_circuit

# u(x) = 0.1 + 0.3 x0 - 0.2 x0 x1 + 0.5 x0 x1 x2
u = MultilinearPoly(3, {0b000: 0.1, 0b001: 0.3, 0b011: -0.2, 0b111: 0.5})
spec = OracleSpec(u)
layout = QubitLayout.for_oracle(spec, with_diffusion=False)
circuit = build_oracle_circuit(spec, layout)

print(f"register qubits {layout.register}, AND ancillas {layout.and_ancillas}, phase ancilla {layout.phase_ancilla}")
print(f"{len(circuit)} gates:\n")
print(circuit_to_text(circuit))

rng = np.random.default_rng(3)
reg = rng.normal(size=8) + 1j * rng.normal(size=8)
reg /= np.linalg.norm(reg)
full = np.zeros(1 << layout.num_qubits, dtype=complex)
full[:8] = reg

out = apply_circuit(QuantumState(layout.num_qubits, full), circuit)
expected = np.exp(1j * np.pi * u.point_values()) * reg
print(f"max deviation from diag(exp(i pi u)): {np.max(np.abs(out.amplitudes[:8] - expected)):.2e}")
print(f"scratch qubits back in |0>: {ancilla_ground_probability(out, layout.ancillas):.12f}")
