"""daqsim: classical simulation and gate compilation of digitized adiabatic
quantum evolutions on 1-D spin chains."""

__version__ = "0.1.0"

from .problems import (
    FIXTURE_NAMES,
    FIXTURE_SCHEDULES,
    ProblemFormatError,
    ProblemInstanceSet,
    Schedule,
    SpinProblem,
    builtin_instance,
    fixture_schedule,
    generate_random_problem,
    load_problem,
    save_problem,
    validate_problem,
)
from .hamiltonian import (
    DegenerateTargetError,
    PauliOperator,
    PauliTerm,
    Spectrum,
    apply_hamiltonian,
    basis_state,
    build_h_initial,
    build_h_problem,
    diagonalize,
    interpolated_hamiltonian,
    min_gap,
    plus_state,
    target_state,
)
from .evolution import (
    TROTTER_ORDER,
    ConvergenceError,
    EvolutionResult,
    IntegratorConfig,
    evolve_continuous,
    evolve_digital,
    schedule_terms,
    step_unitary,
)
from .gates import (
    CompileError,
    CompilerConfig,
    Gate,
    GateCountReport,
    GateFormatError,
    GateSequence,
    compile_schedule,
    compile_step,
    compile_xx,
    compile_zz,
    parse_sequence,
    serialize_sequence,
    simulate_gates,
)
from .metrics import (
    KinkProfile,
    ResourceEstimate,
    estimate_resources,
    fidelity_pure,
    fit_power_law,
    kink_profile,
    magnetization,
    parity_correlation,
    residual_energy,
    state_probabilities,
    success_measure,
    uniform_baseline,
)

__all__ = [name for name in dir() if not name.startswith("_")]
