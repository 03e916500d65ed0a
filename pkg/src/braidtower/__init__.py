"""Exact computations with braided tensor algebras and their enveloping towers."""
from .exactla import GF, QQ, DenseMatrix, Field, SubspaceBasis
from .braiding import (
    BraidedSpace, InvalidBraiding, LiftedBraiding, hecke_mark, make_braiding, make_diagonal, make_flip,
    minimal_polynomial,
)
from .tensoralg import TensorElement, TruncatedTensorAlgebra, check_bialgebra_axioms, parse, render
from .quotient import QuotientAlgebra, UnstableTruncation, ideal_span, quotient_primitives
from .envelope import (
    bracket_rigidity, classical_envelope, combinatorial_rank, ideal_tower, nichols_truncation, reconstruct,
    run_tower, trivial_tower,
)

__version__ = "0.1.0"
