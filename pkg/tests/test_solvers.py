import math

import numpy as np
import pytest

from orlicz_risk import (
    BracketError,
    ConvergenceError,
    bisect_monotone,
    golden_min,
    project_weighted_simplex,
    simplex_max,
)
from tests.grid_oracle import grid_simplex_max


class TestBisect:
    def test_reciprocal_root(self):
        rep = bisect_monotone(lambda t: 1.0 / t, 1.0, 0.1, 10.0)
        assert rep.arg == pytest.approx(1.0, rel=1e-9)
        assert rep.converged

    def test_constant_zero_returns_lo(self):
        rep = bisect_monotone(lambda t: 0.0, 1.0, 0.25, 10.0)
        assert rep.arg == 0.25

    def test_power2_modular(self):
        m = 12.5

        def modular(lam):
            return m / lam ** 2

        rep = bisect_monotone(modular, 1.0, 0.5, 2.0)
        assert rep.arg == pytest.approx(math.sqrt(12.5), rel=1e-8)

    def test_bracket_error_when_target_unreachable(self):
        with pytest.raises(BracketError):
            bisect_monotone(lambda t: 2.0, 1.0, 1.0, 2.0, max_expand=5)

    def test_expands_downward(self):
        rep = bisect_monotone(lambda t: 1.0 / t, 1.0, 8.0, 16.0)
        assert rep.arg == pytest.approx(1.0, rel=1e-8)


class TestGolden:
    def test_amemiya_style_objective(self):
        m = 12.5
        rep = golden_min(lambda lam: (1.0 + lam * lam * m) / lam, 0.01, 10.0)
        assert rep.value == pytest.approx(2.0 * math.sqrt(m), rel=1e-10)
        assert rep.arg == pytest.approx(1.0 / math.sqrt(m), rel=1e-4)
        assert rep.attained

    def test_quadratic_boundary_when_left_fixed(self):
        rep = golden_min(lambda t: t * t, 1e-6, 1.0, expand_left=False)
        assert rep.value == pytest.approx(0.0, abs=1e-10)
        assert not rep.attained
        assert rep.boundary == "left"

    def test_limit_infimum_flagged(self):
        rep = golden_min(lambda t: 1.0 / t + 3.5, 0.5, 2.0, expand_left=False)
        assert rep.value == pytest.approx(3.5, abs=1e-8)
        assert not rep.attained
        assert rep.boundary == "right"

    def test_unbounded_objective_reported(self):
        rep = golden_min(lambda t: -t, 0.0, 1.0, expand_left=False, max_expand=30)
        assert not rep.converged
        assert rep.boundary == "right"

    def test_interior_minimum_after_expansion(self):
        rep = golden_min(lambda t: (t - 40.0) ** 2, 0.0, 1.0)
        assert rep.arg == pytest.approx(40.0, abs=1e-6)
        assert rep.attained


class TestProjection:
    def test_uniform_weights_match_plain_simplex(self):
        v = np.array([0.4, 0.9, -0.3])
        w = np.full(3, 1.0 / 3.0)
        q = project_weighted_simplex(v, w)
        assert np.all(q >= 0.0)
        assert np.dot(w, q) == pytest.approx(1.0, abs=1e-12)

    def test_feasible_point_fixed(self):
        w = np.array([0.2, 0.3, 0.5])
        q0 = np.array([1.0, 1.0, 1.0])
        np.testing.assert_allclose(project_weighted_simplex(q0, w), q0, atol=1e-12)

    def test_projection_is_nearest_point(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = rng.integers(2, 6)
            w = rng.uniform(0.1, 1.0, n)
            v = rng.normal(size=n) * 2.0
            q = project_weighted_simplex(v, w)
            assert np.dot(w, q) == pytest.approx(1.0, abs=1e-10)
            assert np.all(q >= -1e-12)
            # any feasible perturbation moves away from v
            for _ in range(10):
                d = rng.normal(size=n)
                d -= w * np.dot(w, d) / np.dot(w, w)
                cand = q + 1e-4 * d
                if np.any(cand < 0.0):
                    continue
                cand /= np.dot(w, cand)
                assert np.sum((cand - v) ** 2) >= np.sum((q - v) ** 2) - 1e-12


class TestSimplexMax:
    def test_linear_vertex_optimum(self):
        w = np.array([0.5, 0.5])
        c = np.array([1.0, 3.0])
        rep = simplex_max(lambda q: float(np.dot(c, q)), w)
        # mass on the better coordinate: q = (0, 1/w2)
        assert rep.value == pytest.approx(6.0, abs=1e-6)

    def test_entropy_maximized_at_uniform(self):
        w = np.array([0.2, 0.3, 0.5])

        def g(q):
            q = np.maximum(q, 1e-300)
            return -float(np.dot(w, q * np.log(q)))

        rep = simplex_max(g, w)
        np.testing.assert_allclose(rep.arg, 1.0, atol=1e-6)
        assert rep.value == pytest.approx(0.0, abs=1e-9)

    def test_entropic_dual_value(self):
        w = np.array([0.5, 0.5])
        x = np.array([0.0, math.log(4.0)])

        def g(q):
            qc = np.maximum(q, 1e-300)
            return -float(np.dot(w, x * q)) - float(np.dot(w, qc * np.log(qc)))

        rep = simplex_max(g, w)
        assert rep.value == pytest.approx(math.log(0.625), abs=1e-8)

    def test_constraints_hold_at_solution(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = int(rng.integers(2, 5))
            w = rng.uniform(0.1, 0.6, n)
            a = rng.uniform(0.5, 2.0, n)
            c = rng.uniform(-1.0, 2.0, n)

            def g(q):
                return -float(np.dot(a, (q - c) ** 2))

            rep = simplex_max(g, w)
            q = np.asarray(rep.arg)
            assert abs(np.dot(w, q) - 1.0) <= 1e-10
            assert np.all(q >= -1e-12)

    def test_grid_oracle_agreement_on_quadratics(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            n = int(rng.integers(2, 4))
            w = rng.uniform(0.2, 0.6, n)
            a = rng.uniform(0.5, 2.0, n)
            c = rng.uniform(0.0, 2.0, n)

            def g(q):
                return -float(np.dot(w * a, (q - c) ** 2))

            def g_batch(Q):
                return -np.dot((Q - c) ** 2, w * a)

            rep = simplex_max(g, w)
            _, oracle = grid_simplex_max(g_batch, w, step=1e-3)
            assert abs(rep.value - oracle) <= 1e-3

    def test_nonconvergence_carries_best_iterate(self):
        w = np.array([0.5, 0.5])
        with pytest.raises(ConvergenceError) as err:
            simplex_max(lambda q: float(q[0] - q[1]), w, max_iter=3)
        assert err.value.best is not None
