"""panelbuck: buckling-constrained thickness sizing of sectioned flat panels.

The package couples a small flat-shell finite-element core (static
pre-buckling solve plus the generalized buckling eigenproblem) with a sizing
loop driven by per-section buckling-stability metrics, and a projected
finite-difference baseline optimizer for comparison.
"""

from .assembly import (
    AssembledSystem,
    StaticSolution,
    assemble,
    assemble_geometric,
    build_dof_map,
    static_solve,
)
from .eigen import AnalysisResult, BucklingModes, analyze, buckling_solve, rayleigh_quotient
from .elements import ElementStiffness, element_geometric_stiffness, element_stiffness
from .errors import (
    DegenerateModeError,
    EigenSolverError,
    EmptyMoveSetError,
    EmptySystemError,
    GeometryError,
    InfeasibleProblemError,
    InvalidDesignError,
    NoBucklingModeError,
    PanelBuckError,
    ParseError,
    PartitionError,
    SingularSystemError,
    StepTooLargeError,
)
from .fileio import model_to_dict, parse_model_file, save_model
from .model import (
    BoundaryConditions,
    DesignVector,
    LoadCase,
    Material,
    PanelModel,
    Section,
    apply_design,
    build_panel_model,
    make_design,
    mass,
)
from .optimizer import (
    BaselineFDConfig,
    EigenOptConfig,
    IterationRecord,
    Move,
    OptimizationHistory,
    OptimizationProblem,
    check_convergence,
    eigenopt_step,
    rank_sections,
    run_baseline_fd,
    run_eigenopt,
)
from .stability import (
    SectionDelta,
    StabilityReport,
    buckling_stability,
    fd_lambda_sensitivity,
    section_delta_stiffness,
    stability_report,
)

__version__ = "0.1.0"
