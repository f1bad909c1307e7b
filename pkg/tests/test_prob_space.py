import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orlicz_risk import (
    ContractError,
    FiniteProbSpace,
    Filtration,
    RandomVar,
    StructuralError,
    SubAlgebra,
    concatenate,
    cond_expectation,
    ess_inf_cond,
    ess_sup_cond,
    is_measurable,
)


@pytest.fixture
def quarter_space():
    return FiniteProbSpace(np.array([0.25, 0.25, 0.25, 0.25]))


@pytest.fixture
def pairs(quarter_space):
    return SubAlgebra.from_atoms([(0, 1), (2, 3)], 4)


class TestConstruction:
    def test_rejects_nonpositive_probs(self):
        with pytest.raises(StructuralError):
            FiniteProbSpace(np.array([0.5, 0.5, 0.0]))

    def test_rejects_bad_sum(self):
        with pytest.raises(StructuralError):
            FiniteProbSpace(np.array([0.5, 0.4]))

    def test_rejects_nan_values(self, quarter_space):
        with pytest.raises(StructuralError):
            RandomVar(np.array([1.0, np.nan, 0.0, 0.0]), quarter_space)

    def test_rejects_wrong_length(self, quarter_space):
        with pytest.raises(StructuralError):
            RandomVar(np.array([1.0, 2.0]), quarter_space)

    def test_atoms_must_partition(self):
        with pytest.raises(StructuralError):
            SubAlgebra.from_atoms([(0, 1), (1, 2)], 3)
        with pytest.raises(StructuralError):
            SubAlgebra.from_atoms([(0,), (2,)], 3)

    def test_filtration_requires_refinement(self):
        coarse = SubAlgebra.from_atoms([(0, 1), (2, 3)], 4)
        fine = SubAlgebra.discrete(4)
        Filtration((coarse, fine))
        with pytest.raises(StructuralError):
            Filtration((fine, coarse))


class TestCondExpectation:
    def test_equal_weight_averages(self, quarter_space, pairs):
        x = quarter_space.var([1.0, 3.0, 2.0, 6.0])
        out = cond_expectation(x, pairs)
        np.testing.assert_array_equal(out.values, [2.0, 2.0, 4.0, 4.0])

    def test_trivial_algebra_gives_mean(self, quarter_space):
        x = quarter_space.var([1.0, 3.0, 2.0, 6.0])
        out = cond_expectation(x, SubAlgebra.trivial(4))
        np.testing.assert_allclose(out.values, 3.0)

    def test_weighted_hand_evaluation(self):
        space = FiniteProbSpace(np.array([0.2, 0.3, 0.5]))
        alg = SubAlgebra.from_atoms([(0, 1), (2,)], 3)
        out = cond_expectation(space.var([10.0, 0.0, 7.0]), alg)
        np.testing.assert_allclose(out.values, [4.0, 4.0, 7.0], rtol=1e-14)

    def test_rejects_infinite_values(self, quarter_space, pairs):
        x = quarter_space.var([1.0, np.inf, 0.0, 0.0])
        with pytest.raises(ContractError):
            cond_expectation(x, pairs)

    def test_dimension_mismatch(self, quarter_space):
        alg = SubAlgebra.trivial(3)
        with pytest.raises(StructuralError):
            cond_expectation(quarter_space.var([1.0, 2.0, 3.0, 4.0]), alg)

    def test_tower_property(self):
        rng = np.random.default_rng(3)
        space = FiniteProbSpace(rng.dirichlet(np.ones(8) * 4.0))
        fine = SubAlgebra.from_atoms([(0, 1), (2, 3), (4, 5), (6, 7)], 8)
        coarse = SubAlgebra.from_atoms([(0, 1, 2, 3), (4, 5, 6, 7)], 8)
        x = space.var(rng.normal(size=8) * 10.0)
        via_fine = cond_expectation(cond_expectation(x, fine), coarse)
        direct = cond_expectation(x, coarse)
        np.testing.assert_allclose(via_fine.values, direct.values, rtol=1e-12)

    def test_projection_and_measurable_scaling(self, quarter_space, pairs):
        m = quarter_space.var([5.0, 5.0, -2.0, -2.0])
        assert is_measurable(m, pairs)
        np.testing.assert_array_equal(cond_expectation(m, pairs).values, m.values)
        x = quarter_space.var([1.0, 2.0, 3.0, 4.0])
        lhs = cond_expectation(m * x, pairs).values
        rhs = m.values * cond_expectation(x, pairs).values
        np.testing.assert_allclose(lhs, rhs, rtol=1e-14)

    def test_locality_per_atom(self, quarter_space, pairs):
        x = quarter_space.var([1.0, 3.0, 2.0, 6.0])
        x2 = quarter_space.var([1.0, 3.0, -9.0, 4.0])
        a = cond_expectation(x, pairs).values
        b = cond_expectation(x2, pairs).values
        np.testing.assert_array_equal(a[:2], b[:2])


class TestEssSupInf:
    def test_per_atom_max(self, quarter_space, pairs):
        out = ess_sup_cond(quarter_space.var([1.0, 3.0, 2.0, 6.0]), pairs)
        np.testing.assert_array_equal(out.values, [3.0, 3.0, 6.0, 6.0])

    def test_constant(self, quarter_space, pairs):
        out = ess_sup_cond(quarter_space.var([4.0] * 4), pairs)
        np.testing.assert_array_equal(out.values, [4.0] * 4)

    def test_per_atom_min(self, quarter_space, pairs):
        out = ess_inf_cond(quarter_space.var([-1.0, 5.0, 0.0, 0.0]), pairs)
        np.testing.assert_array_equal(out.values, [-1.0, -1.0, 0.0, 0.0])

    def test_accepts_infinite_values(self, quarter_space, pairs):
        out = ess_sup_cond(quarter_space.var([np.inf, 0.0, 1.0, 2.0]), pairs)
        assert out.values[0] == np.inf


class TestConcatenate:
    def test_identical_pieces(self, quarter_space, pairs):
        x = quarter_space.var([1.0, 2.0, 3.0, 4.0])
        out = concatenate([x, x], pairs)
        np.testing.assert_array_equal(out.values, x.values)

    def test_definition(self, quarter_space, pairs):
        a = quarter_space.var([1.0, 1.0, 9.0, 9.0])
        b = quarter_space.var([5.0, 5.0, 2.0, 2.0])
        out = concatenate([a, b], pairs)
        np.testing.assert_array_equal(out.values, [1.0, 1.0, 2.0, 2.0])

    def test_piece_count_mismatch(self, quarter_space, pairs):
        x = quarter_space.var([1.0, 2.0, 3.0, 4.0])
        with pytest.raises(StructuralError):
            concatenate([x], pairs)

    def test_commutes_with_cond_expectation(self):
        rng = np.random.default_rng(11)
        space = FiniteProbSpace(rng.dirichlet(np.ones(8) * 5.0))
        alg = SubAlgebra.from_atoms([(0, 1), (2, 3), (4, 5), (6, 7)], 8)
        partition = SubAlgebra.from_atoms([(0, 1, 2, 3), (4, 5, 6, 7)], 8)
        for _ in range(5):
            xs = [space.var(rng.normal(size=8)) for _ in range(2)]
            lhs = cond_expectation(concatenate(xs, partition), alg)
            rhs = concatenate([cond_expectation(x, alg) for x in xs], partition)
            np.testing.assert_allclose(lhs.values, rhs.values, rtol=1e-12)


class TestIsMeasurable:
    def test_constant_on_atoms(self, quarter_space, pairs):
        assert is_measurable(quarter_space.var([2.0, 2.0, 4.0, 4.0]), pairs)

    def test_not_constant(self, quarter_space, pairs):
        assert not is_measurable(quarter_space.var([2.0, 3.0, 4.0, 4.0]), pairs)

    def test_discrete_algebra_always(self, quarter_space):
        x = quarter_space.var([1.0, -2.0, 3.3, 0.0])
        assert is_measurable(x, SubAlgebra.discrete(4))


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_tower_property_randomized(data):
    n_blocks = data.draw(st.integers(min_value=1, max_value=4))
    sizes = [data.draw(st.integers(min_value=1, max_value=3)) for _ in range(n_blocks)]
    n = sum(sizes)
    raw = [data.draw(st.floats(min_value=0.05, max_value=1.0)) for _ in range(n)]
    probs = np.array(raw) / sum(raw)
    space = FiniteProbSpace(probs)
    fine_atoms = []
    start = 0
    coarse_atoms = []
    for size in sizes:
        block = tuple(range(start, start + size))
        coarse_atoms.append(block)
        half = max(1, size // 2)
        fine_atoms.append(block[:half])
        if block[half:]:
            fine_atoms.append(block[half:])
        start += size
    fine = SubAlgebra.from_atoms(fine_atoms, n)
    coarse = SubAlgebra.from_atoms(coarse_atoms, n)
    values = np.array(
        [data.draw(st.floats(min_value=-50, max_value=50)) for _ in range(n)]
    )
    x = space.var(values)
    lhs = cond_expectation(cond_expectation(x, fine), coarse).values
    rhs = cond_expectation(x, coarse).values
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)
