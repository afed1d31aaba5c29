import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsera.errors import InputDomainError, LayoutError
from qsera.grover import (
    OracleSpec,
    QubitLayout,
    apply_exact_diffusion,
    build_diffusion,
    build_exact_oracle,
    build_oracle_circuit,
    build_uniform_prep,
    circuit_from_text,
    circuit_to_text,
    classical_amplitudes,
    indicator_oracle_poly,
    optimal_iterations,
)
from qsera.pseudo_boolean import MultilinearPoly, from_point_values, power, rescale
from qsera.statevector import (
    CCX,
    CX,
    Circuit,
    H,
    Phase,
    QuantumState,
    X,
    Z,
    ancilla_ground_probability,
    apply_circuit,
    basis_state,
    equal_up_to_global_phase,
    register_probabilities,
    zero_state,
)


def embed_register(reg_amps: np.ndarray, num_qubits: int) -> QuantumState:
    """Register amplitudes with every ancilla (high qubit) in |0>."""
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[: reg_amps.size] = reg_amps
    return QuantumState(num_qubits, amps)


def random_register(rng, K):
    v = rng.normal(size=1 << K) + 1j * rng.normal(size=1 << K)
    return v / np.linalg.norm(v)


def sine_formula(N, k):
    return math.sin((2 * k + 1) * math.asin(1 / math.sqrt(N)))


class TestUniformPrep:
    def test_k1(self):
        s = apply_circuit(zero_state(1), build_uniform_prep(1))
        assert np.allclose(register_probabilities(s, [0]), [0.5, 0.5])

    def test_k4(self):
        s = apply_circuit(zero_state(7), build_uniform_prep(4, 7))
        p = register_probabilities(s, range(4))
        assert np.max(np.abs(p - 1 / 16)) < 1e-12
        assert ancilla_ground_probability(s, [4, 5, 6]) == pytest.approx(1.0)

    def test_twice_restores(self):
        c = build_uniform_prep(3)
        s = apply_circuit(apply_circuit(zero_state(3), c), c)
        assert abs(s.amplitudes[0] - 1) < 1e-12


class TestLayout:
    def test_reference_full_order(self):
        spec = OracleSpec(from_point_values(np.linspace(0.1, 0.9, 16) ** 3))
        layout = QubitLayout.for_oracle(spec)
        assert layout.register == (0, 1, 2, 3)
        assert layout.and_ancillas == (4, 5)
        assert layout.phase_ancilla == 6
        assert layout.num_qubits == 7

    def test_oracle_only_small_order(self):
        spec = OracleSpec(MultilinearPoly(5, {0b11: 1.0}))
        assert QubitLayout.for_oracle(spec, with_diffusion=False).and_ancillas == ()

    def test_insufficient_ancillas(self):
        spec = OracleSpec(MultilinearPoly(4, {0b1111: 1.0}))
        with pytest.raises(LayoutError):
            build_oracle_circuit(spec, QubitLayout.build(4, 1))
        with pytest.raises(LayoutError):
            build_diffusion(4, QubitLayout.build(4, 1))

    def test_register_mismatch(self):
        spec = OracleSpec(MultilinearPoly(3, {1: 1.0}))
        with pytest.raises(LayoutError):
            build_oracle_circuit(spec, QubitLayout.build(4, 2))


class TestOracleSpec:
    def test_phases_are_pi_times_coefficients(self):
        g = MultilinearPoly(3, {0: 0.2, 1: -0.5, 6: 0.75})
        spec = OracleSpec(g)
        assert spec.phases == {m: math.pi * c for m, c in g.coeffs.items()}


class TestExactOracle:
    def test_zero_is_identity(self, rng):
        s = QuantumState(3, random_register(rng, 3))
        out = build_exact_oracle(np.zeros(8)).apply(s)
        assert np.array_equal(out.amplitudes, s.amplitudes)

    def test_indicator_is_reflection(self, rng):
        u = np.zeros(8)
        u[5] = 1
        s = QuantumState(3, random_register(rng, 3))
        ref = (np.eye(8) - 2 * np.outer(np.eye(8)[5], np.eye(8)[5])) @ s.amplitudes
        assert np.allclose(build_exact_oracle(u).apply(s).amplitudes, ref, atol=1e-15)

    def test_leaves_ancillas(self, rng):
        u = rng.uniform(size=4)
        s = QuantumState(4, random_register(rng, 4))
        out = build_exact_oracle(u).apply(s).amplitudes.reshape(4, 4)
        ref = s.amplitudes.reshape(4, 4) * np.exp(1j * np.pi * u)
        assert np.allclose(out, ref)

    def test_reference_portfolio_phases(self, reference_f):
        g = rescale(reference_f, "min", 0.0, 0.015)
        u = np.array([g(z) ** 24 for z in range(16)])
        assert np.all((u > 0) & (u < 1))
        assert int(np.argmax(u)) == 0b1001

    def test_bad_length(self):
        with pytest.raises(InputDomainError):
            build_exact_oracle(np.zeros(6))

    def test_state_too_small(self):
        with pytest.raises(InputDomainError):
            build_exact_oracle(np.zeros(8)).apply(zero_state(2))


class TestOracleCircuit:
    def test_constant_only_is_global_phase(self, rng):
        spec = OracleSpec(MultilinearPoly.constant(2, 0.37))
        layout = QubitLayout.build(2, 0)
        s = embed_register(random_register(rng, 2), layout.num_qubits)
        out = apply_circuit(s, build_oracle_circuit(spec, layout))
        assert equal_up_to_global_phase(s, out, tol=1e-12)
        k = int(np.argmax(np.abs(s.amplitudes)))
        assert out.amplitudes[k] / s.amplitudes[k] == pytest.approx(np.exp(1j * np.pi * 0.37))

    def test_cz_behaviour(self):
        spec = OracleSpec(MultilinearPoly(2, {0b11: 1.0}))
        layout = QubitLayout.build(2, 0)
        circuit = build_oracle_circuit(spec, layout)
        for z in range(4):
            out = apply_circuit(basis_state(3, z), circuit)
            assert out.amplitudes[z] == pytest.approx(-1.0 if z == 3 else 1.0, abs=1e-15)

    def test_gate_set_and_zero_terms_skipped(self):
        g = MultilinearPoly(3, {0: 0.5, 2: 0.25, 7: -0.5})
        layout = QubitLayout.build(3, 1)
        circuit = build_oracle_circuit(OracleSpec(g), layout)
        assert {type(x) for x in circuit.gates} <= {X, Phase, CX, CCX}
        phases = [x.phi for x in circuit.gates if isinstance(x, Phase)]
        assert phases == pytest.approx([0.5 * math.pi, 0.25 * math.pi, -0.5 * math.pi])

    def test_full_order_gate_counts(self):
        # per order: 3 (X P X), 3 per linear, 3 per pair, 5 per triple, 7 for the quadruple
        g = MultilinearPoly.from_dense(np.arange(1, 17) / 17)
        circuit = build_oracle_circuit(OracleSpec(g), QubitLayout.build(4, 2))
        assert len(circuit) == 3 + 4 * 3 + 6 * 3 + 4 * 5 + 7

    def test_emission_order(self):
        g = MultilinearPoly(3, {7: 0.1, 1: 0.2, 0: 0.3, 6: 0.4, 4: 0.5})
        circuit = build_oracle_circuit(OracleSpec(g), QubitLayout.build(3, 1))
        phases = [x.phi / math.pi for x in circuit.gates if isinstance(x, Phase)]
        assert phases == pytest.approx([0.3, 0.2, 0.5, 0.4, 0.1])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 5), st.integers(0, 2**32 - 1))
    def test_matches_diagonal(self, K, seed):
        rng = np.random.default_rng(seed)
        g = MultilinearPoly.from_dense(rng.uniform(-1, 1, 1 << K))
        spec = OracleSpec(g)
        layout = QubitLayout.for_oracle(spec)
        s = embed_register(random_register(rng, K), layout.num_qubits)
        gate_out = apply_circuit(s, build_oracle_circuit(spec, layout))
        exact_out = build_exact_oracle(g.point_values()).apply(s)
        assert equal_up_to_global_phase(exact_out, gate_out, tol=1e-9)
        assert ancilla_ground_probability(gate_out, layout.ancillas) >= 1 - 1e-9

    def test_reference_g24_on_uniform(self, reference_f):
        u = power(rescale(reference_f, "min", 0.0, 0.015), 24)
        spec = OracleSpec(u)
        layout = QubitLayout.for_oracle(spec)
        s = apply_circuit(zero_state(layout.num_qubits), build_uniform_prep(4, layout.num_qubits))
        gate_out = apply_circuit(s, build_oracle_circuit(spec, layout))
        exact_out = build_exact_oracle(u.point_values()).apply(s)
        assert equal_up_to_global_phase(exact_out, gate_out, tol=1e-9)


def dense_diffusion(K):
    N = 1 << K
    return 2 * np.full((N, N), 1 / N) - np.eye(N)


class TestDiffusion:
    @pytest.mark.parametrize("K", [1, 2, 3, 4, 5])
    def test_uniform_fixed_point(self, K):
        layout = QubitLayout.build(K, max(0, K - 2))
        s = apply_circuit(zero_state(layout.num_qubits), build_uniform_prep(K, layout.num_qubits))
        out = apply_circuit(s, build_diffusion(K, layout))
        assert equal_up_to_global_phase(s, out, tol=1e-12)

    @pytest.mark.parametrize("z", [0, 5, 15])
    def test_basis_row(self, z):
        K, N = 4, 16
        layout = QubitLayout.build(K, 2)
        out = apply_circuit(basis_state(7, z), build_diffusion(K, layout))
        expected = np.full(N, 2 / N)
        expected[z] -= 1
        assert np.allclose(out.amplitudes[:N], expected, atol=1e-12)
        assert ancilla_ground_probability(out, layout.ancillas) == pytest.approx(1.0)

    def test_random_states_k4(self, rng):
        layout = QubitLayout.build(4, 2)
        circuit = build_diffusion(4, layout)
        D = dense_diffusion(4)
        for _ in range(100):
            reg = random_register(rng, 4)
            out = apply_circuit(embed_register(reg, 7), circuit)
            assert equal_up_to_global_phase(embed_register(D @ reg, 7), out, tol=1e-9)
            assert ancilla_ground_probability(out, layout.ancillas) >= 1 - 1e-9

    def test_involution(self, rng):
        layout = QubitLayout.build(4, 2)
        c = build_diffusion(4, layout)
        s = embed_register(random_register(rng, 4), 7)
        assert equal_up_to_global_phase(s, apply_circuit(apply_circuit(s, c), c), tol=1e-9)

    def test_exact_diffusion_matches_dense(self, rng):
        reg = random_register(rng, 5)
        out = apply_exact_diffusion(QuantumState(5, reg))
        assert np.allclose(out.amplitudes, dense_diffusion(5) @ reg, atol=1e-12)


class TestPlanner:
    def test_n16(self):
        plan = optimal_iterations(16)
        assert plan.m_real == pytest.approx(2.6416, abs=1e-4)
        assert plan.m == 2

    def test_n64_ceil(self):
        plan = optimal_iterations(64, "ceil")
        assert plan.m_real == pytest.approx(5.7832, abs=1e-4)
        assert plan.m == 6

    def test_n4(self):
        plan = optimal_iterations(4)
        assert plan.m_real == pytest.approx((2 * math.pi - 2) / 4)
        assert plan.m == 1
        probs = classical_amplitudes(4, 3)[:, 1] ** 2
        assert int(np.argmax(probs)) == 1

    def test_bad_rounding(self):
        with pytest.raises(InputDomainError):
            optimal_iterations(16, "round")


class TestClassicalAmplitudes:
    def test_initial(self):
        for N in (2, 16, 1000):
            a, a_star = classical_amplitudes(N, 0)[0]
            assert a_star == pytest.approx(1 / math.sqrt(N))
            assert a == pytest.approx(math.sqrt((N - 1) / N))

    def test_first_step_factor(self):
        assert classical_amplitudes(64, 1)[1, 1] == pytest.approx((3 - 4 / 64) / 8, abs=1e-15)
        assert (3 - 4 / 64) / 8 == 0.3671875

    def test_k6_n64(self):
        p = classical_amplitudes(64, 6)[6, 1] ** 2
        assert p == pytest.approx(sine_formula(64, 6) ** 2, abs=1e-12)
        assert p >= 0.99
        assert round(p, 4) == 0.9966

    def test_normalisation(self):
        for N in (2, 3, 16, 1 << 10, 1 << 20):
            rows = classical_amplitudes(N, 200)
            assert np.max(np.abs((rows**2).sum(axis=1) - 1)) < 1e-12

    @pytest.mark.parametrize("N", [4, 16, 64, 1024])
    def test_against_rotation_formula(self, N):
        rows = classical_amplitudes(N, 30)
        ref = [sine_formula(N, k) for k in range(31)]
        assert np.allclose(rows[:, 1], ref, atol=1e-10)


class TestIndicatorPoly:
    @pytest.mark.parametrize("K,target", [(1, 0), (1, 1), (3, 5), (4, 0), (4, 9)])
    def test_is_indicator(self, K, target):
        values = indicator_oracle_poly(K, target).point_values()
        expected = np.zeros(1 << K)
        expected[target] = 1
        assert np.array_equal(values, expected)


class TestCircuitText:
    def test_format(self):
        c = Circuit(7, [H(0), Phase(6, math.pi / 2), CCX(0, 1, 4), CX(2, 6), X(3), Z(5)])
        text = circuit_to_text(c)
        assert text.splitlines() == [
            "qubits 7", "H 0", "P 6 1.5707963267948966", "CCX 0 1 4", "CX 2 6", "X 3", "Z 5",
        ]

    def test_round_trip(self, reference_f):
        u = power(rescale(reference_f, "min", 0.0, 0.015), 24)
        spec = OracleSpec(u)
        layout = QubitLayout.for_oracle(spec)
        c = build_oracle_circuit(spec, layout) + build_diffusion(4, layout)
        assert circuit_from_text(circuit_to_text(c)) == c

    @pytest.mark.parametrize("text", ["", "H 0\n", "qubits 2\nFOO 1\n", "qubits 2\nCX 0\n"])
    def test_malformed(self, text):
        with pytest.raises(InputDomainError):
            circuit_from_text(text)
