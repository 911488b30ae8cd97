"""Half-line Schrodinger scattering toolkit.

Regular solutions and Jost functions for compactly supported potentials,
the unitary spectral transforms that diagonalize the Hamiltonian,
Hardy-space projections on the full line, and three cross-checking
realizations of the time evolution including its factorization through
the translation group.
"""

from .errors import (
    ConfigError,
    ContourTooCloseError,
    DomainTagError,
    GridMismatchError,
    IllConditionedError,
    NoConvergenceError,
    NonFiniteError,
    NumericalGuard,
    OutrunGuardError,
    ParseError,
    ResampleLossError,
    StepFailureError,
    SupportGuardError,
    ValidationError,
    WraparoundGuardError,
    ZeroEnergyError,
)
from .evolution import (
    EvolutionResult,
    RepresenterPair,
    build_from_representer,
    evolve_crank_nicolson,
    evolve_factorized,
    evolve_spectral,
    halfline_mass_fractions,
    representer_of,
)
from .experiments import (
    ExperimentReport,
    asymmetry_study,
    hardy_density_study,
    roundtrip_study,
    run_from_parameters,
)
from .hardy import (
    HardyAtom,
    LineFunction,
    LineGrid,
    atom,
    default_line_grid,
    embed_positive,
    fourier_forward,
    fourier_inverse,
    halfline_projection,
    hardy_projection,
    positive_part,
    shift,
)
from .jost import (
    JostPair,
    Resonance,
    WaveMatrixValue,
    find_resonances,
    jost_functions,
    jost_sweep,
    s_matrix,
    wave_matrices,
)
from .potential import (
    Potential,
    PotentialValidationReport,
    evaluate,
    free,
    piecewise_constant,
    sampled_table,
    square_barrier,
    square_well,
    validate,
)
from .radial_ode import (
    RegularSolutionSample,
    free_regular,
    integrate_regular,
    integrate_regular_rk,
)
from .spectral import (
    EnergyGrid,
    RadialFunction,
    RadialGrid,
    SpectralFunction,
    apply_spectral_evolution,
    default_energy_grid,
    psi0_forward,
    psi0_inverse,
    psi_forward,
    psi_inverse,
    transform_grids,
)

__version__ = "0.1.0"
