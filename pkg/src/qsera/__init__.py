"""Quantum search for extrema and roots of pseudo-Boolean functions.

An objective over K binary variables is rescaled to ``g`` in [0, 1], raised
to a power ``n`` and turned into the phase oracle ``exp(i pi g^n)``; Grover
iterations on an exact statevector simulator then amplify the optimum.
"""
from .errors import (
    CapacityError,
    DegenerateRangeError,
    InputDomainError,
    LayoutError,
    QseraError,
    UndefinedPortfolioError,
)
from .grover import (
    ExactOracle,
    GroverPlan,
    OracleSpec,
    QubitLayout,
    apply_exact_diffusion,
    build_diffusion,
    build_exact_oracle,
    build_oracle_circuit,
    build_uniform_prep,
    classical_amplitudes,
    indicator_oracle_poly,
    optimal_iterations,
)
from .portfolio import (
    REFERENCE_PROBLEM,
    AssetPool,
    Benchmark,
    PortfolioProblem,
    TrackingObjective,
    objective_to_polynomial,
    objective_value,
    portfolio_return,
    portfolio_variance,
)
from .pseudo_boolean import (
    MultilinearPoly,
    RescaleMode,
    evaluate,
    from_point_values,
    multiply,
    power,
    rescale,
)
from .runner import QseraConfig, RunResult, discretize_continuous, preset_config, run_qsera, sweep_power
from .statevector import (
    CCX,
    CX,
    Circuit,
    H,
    Phase,
    QuantumState,
    X,
    Z,
    ancilla_ground_probability,
    apply,
    apply_circuit,
    equal_up_to_global_phase,
    register_probabilities,
    zero_state,
)

__version__ = "0.1.0"
