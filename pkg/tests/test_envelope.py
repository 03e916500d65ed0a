import pytest

from braidtower.braiding import make_flip
from braidtower.catalog import abelian_constants, rank_two_diagonal, scalar_diagonal
from braidtower.envelope import (
    BracketError, EnvelopeError, NotPrimitivelyGenerated, StructureConstantError, TowerCapExceeded,
    bracket_rigidity, char2_example, check_bracket_compat, check_implicit_jacobi, check_split, classical_envelope,
    combinatorial_rank, detect_trivial_bracket, finite_from_quotient, ideal_tower, initial_state,
    nichols_truncation, normalize_constants, perturbed_sl2_constants, rank_one_envelope, reconstruct, run_tower,
    sl2_constants, trivial_bialgebra, trivial_tower, truncated_polynomial,
)
from braidtower.exactla import GF, QQ, DenseMatrix
from braidtower.tensoralg import TruncatedTensorAlgebra, parse


def test_trivial_tower_is_monotone_and_stops():
    run = trivial_tower(TruncatedTensorAlgebra(rank_two_diagonal(), 5))
    assert run.stabilized and run.rank == 2
    for a, b in zip(run.states, run.states[1:]):
        assert a.ideal.top.is_subspace_of(b.ideal.top)
    dims = [s.quotient.graded_dims() for s in run.states]
    assert dims[1] == [1, 2, 2, 2, 2, 2] and dims[2] == [1, 2, 2, 2, 1, 0]


def test_stabilized_stage_has_primitives_equal_to_letters():
    run = trivial_tower(TruncatedTensorAlgebra(rank_two_diagonal(), 5))
    assert run.final.P_equals_V() and run.final.i_injective


@pytest.mark.parametrize("space,rank", [(make_flip(2), 1), (scalar_diagonal(2), 0), (scalar_diagonal(-1), 1)],
                         ids=["flip", "q=2", "q=-1"])
def test_combinatorial_ranks(space, rank):
    r = combinatorial_rank(space, 4)
    assert r.rank == rank
    assert str(r) == f"combinatorial rank {rank} (at truncation 4)"


def test_rigidity_rank_two():
    rep = bracket_rigidity(rank_two_diagonal(), 5)
    assert rep.rigid and rep.all_trivial and rep.trivial_detected
    assert [s.free_after for s in rep.stages] == [0] * len(rep.stages)


def test_trivial_bracket_detection():
    run = trivial_tower(TruncatedTensorAlgebra(rank_two_diagonal(), 5))
    assert detect_trivial_bracket(run, [parse("x1.x1", QQ), parse("x2.x2", QQ)])
    assert not detect_trivial_bracket(run, [parse("x1.x2", QQ)])


def test_rank_one_envelope_matches_first_stage():
    q = rank_one_envelope(rank_two_diagonal(), None, 5)
    assert q.graded_dims() == [1, 2, 2, 2, 2, 2]


def test_non_split_bracket_is_detected():
    t = TruncatedTensorAlgebra(make_flip(2), 3)
    ts = initial_state(t)
    b = DenseMatrix.from_columns(QQ, ts.n, [{0: 1}] * ts.dimP)
    # every map is compatible with the flip, but this one is not a retraction
    assert check_bracket_compat(ts, b) and not check_split(ts, b)


def test_incompatible_bracket_rejected():
    t = TruncatedTensorAlgebra(rank_two_diagonal(), 3)
    ts = initial_state(t)
    bad = DenseMatrix.from_columns(QQ, ts.n, [{1: 1}] * ts.dimP)
    with pytest.raises(BracketError) as err:
        run_tower(t, lambda s: bad)
    assert err.value.witness is not None


def test_inverse_section_needs_injective_letters():
    from braidtower.envelope import inverse_section_bracket
    ts = initial_state(TruncatedTensorAlgebra(make_flip(2), 3))
    with pytest.raises(EnvelopeError):
        inverse_section_bracket(ts)


def test_sl2_envelope():
    run = classical_envelope(sl2_constants(), 4)
    assert run.final.quotient.filtered_dims() == [1, 4, 10, 20, 35]
    assert check_implicit_jacobi(run)
    assert run.final.P_equals_V()


def test_abelian_envelope_is_symmetric_algebra():
    run = classical_envelope(abelian_constants(2), 3)
    assert run.final.quotient.filtered_dims() == [1, 3, 6, 10]


def test_perturbed_constants_collapse():
    run = classical_envelope(perturbed_sl2_constants(), 4)
    assert not check_implicit_jacobi(run)


def test_classical_refuses_positive_characteristic():
    with pytest.raises(Exception):
        classical_envelope(sl2_constants(), 3, GF(3))


def test_antisymmetry_enforced():
    c = abelian_constants(2)
    c[0][1][0] = 1
    with pytest.raises(StructureConstantError):
        normalize_constants(c)


def test_stage_cap(monkeypatch):
    monkeypatch.setenv("BRAIDTOWER_MAX_STAGES", "1")
    with pytest.raises(TowerCapExceeded):
        trivial_tower(TruncatedTensorAlgebra(rank_two_diagonal(), 5))


def test_char2_bialgebra_not_primitively_generated():
    A = char2_example(GF(2))
    P = A.primitives()
    assert P.dim == 1 and not A.generates_as_algebra(P)
    with pytest.raises(NotPrimitivelyGenerated):
        reconstruct(A, 4)


@pytest.mark.parametrize("A", [truncated_polynomial(GF(2)), truncated_polynomial(QQ, -1), trivial_bialgebra(QQ)],
                         ids=["F2-polynomial", "q=-1", "trivial"])
def test_reconstruction_round_trip(A):
    assert reconstruct(A, 4).isomorphism


def test_reconstruct_nichols_algebra():
    q = nichols_truncation(rank_two_diagonal(), 5).quotient
    A = finite_from_quotient(q)
    assert A.dim == 8
    assert reconstruct(A, 5).isomorphism


def test_ideal_chain_agreement():
    assert ideal_tower(trivial_tower(TruncatedTensorAlgebra(rank_two_diagonal(), 5))).agree
    assert ideal_tower(classical_envelope(sl2_constants(), 4)).agree


def test_ideal_chain_with_finite_target():
    q = nichols_truncation(rank_two_diagonal(), 5).quotient
    A = finite_from_quotient(q)
    run = trivial_tower(TruncatedTensorAlgebra(rank_two_diagonal(), 5))
    images = [{1: 1}, {2: 1}]
    assert ideal_tower(run, A, images).agree
