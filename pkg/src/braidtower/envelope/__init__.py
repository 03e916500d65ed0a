from .tower import (
    BracketError, EnvelopeError, TowerCapExceeded, TowerRun, TowerState, apply_bracket, bracket_matrix,
    check_bracket_compat, check_implicit_jacobi, check_split, compat_report, detect_trivial_bracket,
    initial_state, inverse_section_bracket, make_state, max_stages, run_tower, tower_step, trivial_bracket_step,
    trivial_tower,
)
from .nichols import (
    NicholsReport, RankReport, RigidityReport, bracket_rigidity, combinatorial_rank, nichols_truncation,
    rank_one_envelope, stage_rigidity,
)
from .classical import (
    StructureConstantError, classical_envelope, evaluate_lie_element, jacobi_violation, normalize_constants,
    perturbed_sl2_constants, sl2_constants,
)
from .finite import (
    FiniteBraidedBialgebra, InfinitesimalLie, InvalidBialgebra, NotPrimitivelyGenerated, ReconstructionReport,
    char2_example, finite_from_quotient, infinitesimal_lie, reconstruct, restricted_braiding, trivial_bialgebra,
    truncated_polynomial,
)
from .kharchenko import IdealTowerReport, evaluation_ideal, ideal_tower, kharchenko_chain
