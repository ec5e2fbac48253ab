import math

import numpy as np
import pytest
from scipy.integrate import simpson

from sgbeam.errors import TruncationError
from sgbeam.modes import evaluate_mode
from sgbeam.simulate import (
    energy_trace,
    evolve,
    multiplier_identity_check,
    observability_check,
    output_integral,
    output_series,
    project_initial,
    random_state,
    state_from_coefficients,
)


@pytest.fixture(scope="module")
def basis(bases):
    return bases[1.0].truncated(12)


class TestProjection:
    def test_single_mode(self, basis):
        st = project_initial({2: 1.0}, None, basis)
        e = np.zeros(12)
        e[1] = 1
        assert np.allclose(st.a, e, atol=1e-7) and np.allclose(st.b, 0, atol=1e-7)

    def test_velocity_combination(self, basis):
        st = project_initial(None, {1: 1.0, 3: 1.0}, basis)
        assert np.allclose(st.b[:4], [1, 0, 1, 0], atol=1e-7)

    def test_parseval(self, basis):
        def w0(x):
            return x**2 * np.sin(2 * x)

        st = project_initial(w0, None, basis, max_residual=None)
        x, w = basis.quad.nodes, basis.quad.weights
        norm2 = float(np.sum(w * w0(x) ** 2))
        assert math.isclose(norm2, np.sum(st.a**2) + (st.residual**2) * norm2, rel_tol=1e-6)

    def test_truncation_error(self, basis):
        with pytest.raises(TruncationError):
            project_initial(lambda x: np.ones_like(x), None, basis)

    def test_grid_samples(self, basis):
        v = evaluate_mode(basis[5], basis.quad.nodes)
        st = project_initial(v, None, basis)
        assert math.isclose(st.a[4], 1.0, rel_tol=1e-10)


class TestEvolution:
    def test_initial_time(self, basis):
        st = random_state(basis, seed=3)
        snap = evolve(st, 0.0)
        phi = np.array([evaluate_mode(m, basis.quad.nodes) for m in basis.modes])
        assert np.allclose(snap.displacement(), st.a @ phi)
        assert np.allclose(snap.velocity(), st.b @ phi)

    def test_single_mode_period(self, basis):
        st = state_from_coefficients(basis, a=[0, 0, 1.0], b=[0, 0, 0.4])
        T = 2 * math.pi / basis[3].lam
        assert np.allclose(evolve(st, T).displacement(), evolve(st, 0).displacement(), atol=1e-10)

    def test_pde_residual(self, basis):
        st = random_state(basis, seed=5)
        x = np.linspace(0, 1, 31)
        s = evolve(st, 0.77, x, derivs=(0, 4, 6))
        r = s.acceleration() + s.displacement(4) - basis.zeta * s.displacement(6)
        assert np.abs(r).max() < 1e-6 * basis.lambdas[-1] ** 2

    def test_negative_time(self, basis):
        with pytest.raises(ValueError):
            evolve(random_state(basis, seed=0), -1.0)


class TestOutput:
    def test_single_mode_closed_form(self, basis):
        k, T = 4, 3.3
        st = state_from_coefficients(basis, a=[0, 0, 0, 1.0])
        d3 = evaluate_mode(basis[k], 0.0, 3)
        lam = basis[k].lam
        expect = basis.zeta**2 * d3**2 * (T / 2 + math.sin(2 * lam * T) / (4 * lam))
        assert math.isclose(output_series(st, T).integral_y2, expect, rel_tol=1e-12)

    def test_initial_value(self, basis):
        st = random_state(basis, seed=2)
        d3 = sum(a * evaluate_mode(m, 0.0, 3) for a, m in zip(st.a, basis.modes))
        assert math.isclose(output_series(st, 1.0).y[0], basis.zeta * d3, rel_tol=1e-12)

    def test_against_fine_time_grid(self, basis):
        # trapezoid error at 1e5 samples is ~2e-8 for mode 3, so Simpson is the oracle
        st = random_state(basis, n_modes=3, seed=11)
        s = output_series(st, 8.0, samples=100_001)
        assert abs(simpson(s.y**2, x=s.times) / s.integral_y2 - 1) < 1e-8

    def test_additive(self, basis):
        st = random_state(basis, seed=4)
        whole = output_integral(st, 0.0, 8.0)
        assert math.isclose(whole, output_integral(st, 0, 4.0) + output_integral(st, 4.0, 8.0), rel_tol=1e-13)

    def test_sampling_independent(self, basis):
        st = random_state(basis, seed=4)
        assert output_series(st, 2.0, 11).integral_y2 == output_series(st, 2.0, 1001).integral_y2

    @pytest.mark.parametrize("k", [1, 6, 12])
    def test_long_time_average(self, basis, k):
        # unit energy in mode k: average of y^2 is 2 |C3 psi_k|^2, within [4 zeta, 6 zeta]
        lam = basis[k].lam
        a = np.zeros(k)
        a[-1] = math.sqrt(2.0) / lam
        st = state_from_coefficients(basis, a=a)
        avg = output_integral(st, 0.0, 1e4) / 1e4
        assert 4 * basis.zeta <= avg <= 6 * basis.zeta


class TestEnergy:
    def test_conserved(self, basis):
        st = random_state(basis, n_modes=10, seed=9)
        tr = energy_trace(st, np.linspace(0, 20, 25))
        modal = np.array([s.total for s in tr.modal])
        assert np.abs(modal - 1).max() < 1e-13
        assert tr.max_deviation < 1e-8

    def test_energy_is_state_norm(self, basis):
        st = random_state(basis, seed=1, energy=2.5)
        assert math.isclose(st.energy, 2.5, rel_tol=1e-13)


class TestMultiplier:
    def test_random_states(self, basis):
        for seed in range(5):
            assert multiplier_identity_check(random_state(basis, 5, seed=seed), 8.0).residual < 1e-9

    def test_time_shift_invariance(self, basis):
        st = random_state(basis, 5, seed=7)
        r0 = multiplier_identity_check(st, 8.0).residual
        r1 = multiplier_identity_check(st.shifted(2.5), 8.0).residual
        assert r0 < 1e-9 and r1 < 1e-9

    def test_single_mode_reduction(self, basis):
        # one mode, q = a cos(lam t): boundary flux identity times int q^2
        st = state_from_coefficients(basis, a=[0, 1.0])
        chk = multiplier_identity_check(st, 5.0)
        lam = basis[2].lam
        d3 = evaluate_mode(basis[2], 0.0, 3)
        q2 = 5.0 / 2 + math.sin(2 * lam * 5.0) / (4 * lam)
        assert math.isclose(chk.lhs, basis.zeta * d3**2 * q2, rel_tol=1e-12)
        assert chk.residual < 1e-9


class TestObservabilityCheck:
    def test_sandwich(self, basis):
        for seed in range(20):
            c = observability_check(random_state(basis, 10, seed=seed), 8.0)
            assert c.verdict == "pass" and c.lower_margin > 0 and c.upper_margin > 0

    def test_zero_state(self, basis):
        c = observability_check(state_from_coefficients(basis), 8.0)
        assert c.integral == 0 and c.verdict == "vacuous"

    def test_short_horizon_upper_only(self, basis):
        c = observability_check(random_state(basis, seed=0), 5.0)
        assert c.lower_margin is None and c.verdict == "pass"

    def test_zeta_mismatch(self, basis):
        with pytest.raises(ValueError):
            observability_check(random_state(basis, seed=0), 8.0, zeta=2.0)
