import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morse_scs.coefficients import (
    StateParams,
    build_state,
    f_recurrence,
    h_branch_integer_A,
    h_closed_form,
    probability,
    residual,
    z_closed_form_energy,
    z_closed_form_ho,
    z_gamma_to_zeta_lambda,
    z_recurrence,
    z_recurrence_scaled,
    zeta_lambda_to_z_gamma,
)
from morse_scs.errors import DomainError, NumericalOverflow, SqueezingWarning
from morse_scs.ladders import LadderKind, LadderSpec
from morse_scs.specfun import hermite

complexes = st.builds(
    lambda r, t: r * cmath.exp(1j * t),
    st.floats(0.0, 3.0),
    st.floats(0.0, 2 * math.pi),
)
gammas = st.builds(
    lambda r, t: r * cmath.exp(1j * t),
    st.floats(0.0, 0.7),
    st.floats(0.0, 2 * math.pi),
)


class TestRecurrence:
    @pytest.mark.parametrize("z", [0.3, 1 + 2j, -2.5])
    def test_coherent_powers(self, ene, z):
        zs = z_recurrence(ene, StateParams(z, 0), 20)
        assert np.allclose(zs, [z**n for n in range(21)], rtol=1e-14, atol=0)

    def test_energy_low_polynomials(self, ene, hcl):
        A = 2 * hcl.p
        z, g = 0.7 + 0.2j, 0.35 - 0.1j
        zs = z_recurrence(ene, StateParams(z, g), 4)
        assert zs[2] == pytest.approx(z**2 - (A - 1) * g, rel=1e-15)
        assert zs[3] == pytest.approx(z**3 - (3 * A - 5) * g * z, rel=1e-15)
        assert zs[4] == pytest.approx(z**4 - 2 * (3 * A - 7) * z**2 * g + 3 * (A - 1) * (A - 3) * g**2, rel=1e-14)

    def test_scaled_matches_plain(self, ene):
        params = StateParams(2.0, 0.5)
        mant, scale = z_recurrence_scaled(ene, params, 28)
        assert np.allclose(mant * np.exp(scale), z_recurrence(ene, params, 28), rtol=1e-14)

    def test_index_bound(self, ene):
        with pytest.raises(IndexError):
            z_recurrence(ene, StateParams(1.0, 0.1), 29)

    def test_cs2_overflow_is_scaled(self, cs2):
        spec = LadderSpec(LadderKind.ENERGY, cs2)
        params = StateParams(3.0, 0.5)
        mant, scale = z_recurrence_scaled(spec, params, 261)
        assert np.all(np.isfinite(mant)) and scale[-1] > 700
        with pytest.raises(NumericalOverflow):
            z_recurrence(spec, params, 261)


class TestClosedForms:
    def test_energy_seeds(self, hcl):
        params = StateParams(0.8, 0.4)
        assert z_closed_form_energy(hcl, params, 0) == 1
        assert z_closed_form_energy(hcl, params, 1) == pytest.approx(0.8, rel=1e-12)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_energy_example(self, ene, hcl, n):
        params = StateParams(0.3, 0.5)
        rec = z_recurrence(ene, params, n)[n]
        assert z_closed_form_energy(hcl, params, n) == pytest.approx(rec, rel=1e-9)

    def test_singular_at_zero_gamma(self, hcl):
        with pytest.raises(DomainError):
            z_closed_form_energy(hcl, StateParams(1.0, 0.0), 3)
        with pytest.raises(DomainError):
            z_closed_form_ho(StateParams(1.0, 0.0), 3)

    @pytest.mark.parametrize("z,g", [(0.4, 0.3), (1 - 1j, 0.2j), (2.0, -0.6)])
    def test_ho_degree_two(self, z, g):
        assert z_closed_form_ho(StateParams(z, g), 2) == pytest.approx(z * z - g, rel=1e-13)

    def test_ho_vacuum(self):
        params = StateParams(0.0, 0.4)
        assert z_closed_form_ho(params, 3) == pytest.approx(0.0, abs=1e-15)
        assert z_closed_form_ho(params, 4) == pytest.approx(0.48, rel=1e-13)

    @settings(max_examples=60, deadline=None)
    @given(z=complexes, g=gammas.filter(lambda g: abs(g) > 1e-3), n=st.integers(0, 27))
    def test_ho_matches_recurrence(self, osc, z, g, n):
        params = StateParams(z, g)
        rec = z_recurrence(osc, params, n)[n]
        got = z_closed_form_ho(params, n)
        assert abs(got - rec) <= 1e-9 * max(abs(rec), abs(g) ** (n / 2) * math.sqrt(math.factorial(n)))


class TestHBranch:
    @pytest.mark.parametrize("w", [0.5, 1 + 1j])
    def test_seeds(self, w):
        params = StateParams(w * cmath.sqrt(2 * 0.3), 0.3)
        h = h_branch_integer_A(6, params, 1)
        assert h[0] == 1
        assert h[1] == pytest.approx(2 * w, rel=1e-14)

    @pytest.mark.parametrize("w", [0.5, 1 + 1j])
    def test_split(self, w):
        A = 6
        f = f_recurrence(A, w, A + 6)
        # f(A+1) = 2w f(A) once the k(A) coupling vanishes
        assert f[A + 1] == pytest.approx(2 * w * f[A], rel=1e-13)
        params = StateParams(w * cmath.sqrt(2 * 0.3), 0.3)
        h = h_branch_integer_A(A, params, 5)
        for k in range(6):
            assert f[A + k] == pytest.approx(h[k] * f[A], rel=1e-12)

    @pytest.mark.parametrize("w", [0.5, 1 + 1j])
    @pytest.mark.parametrize("k", range(9))
    def test_closed_form(self, w, k):
        params = StateParams(w * cmath.sqrt(2 * 0.3), 0.3)
        rec = h_branch_integer_A(6, params, 8)[k]
        assert h_closed_form(6, w, k) == pytest.approx(rec, rel=1e-10)

    def test_non_integer_A(self):
        with pytest.raises(DomainError):
            h_branch_integer_A(2.5, StateParams(1.0, 0.2), 3)


class TestBuildState:
    def test_ground(self, osc, ene):
        for spec in (osc, ene):
            state = build_state(spec, StateParams(0, 0))
            assert state.coeffs[0] == 1
            assert np.all(state.coeffs[1:] == 0)
            assert probability(state)[0] == 1

    def test_dimension(self, ene):
        assert build_state(ene, StateParams(1.0, 0.2)).dim == 28

    def test_truncated_poisson(self, osc):
        z = 1.3
        prob = probability(build_state(osc, StateParams(z, 0)))
        raw = np.array([z ** (2 * n) / math.factorial(n) for n in range(28)])
        assert np.allclose(prob, raw / raw.sum(), rtol=1e-13, atol=0)

    def test_oscillator_probability_closed_form(self, osc):
        z, g = 1.0, 0.3
        prob = probability(build_state(osc, StateParams(z, g)))
        w = z / math.sqrt(2 * g)
        raw = np.array([(g / 2) ** n * abs(hermite(n, w)) ** 2 / math.factorial(n) for n in range(28)])
        assert np.allclose(prob, raw / raw.sum(), rtol=1e-9, atol=0)

    def test_energy_probability_closed_form(self, ene, hcl):
        z, g = 2.0, 0.5
        prob = probability(build_state(ene, StateParams(z, g)))
        two_p = 2 * hcl.p
        raw = np.array(
            [
                math.exp(math.lgamma(two_p - n) - math.lgamma(two_p) - math.lgamma(n + 1))
                * abs(z_closed_form_energy(hcl, StateParams(z, g), n)) ** 2
                for n in range(28)
            ]
        )
        assert np.allclose(prob, raw / raw.sum(), rtol=1e-9, atol=0)

    @settings(max_examples=20, deadline=None)
    @given(z=complexes, g=gammas, kind=st.sampled_from(list(LadderKind)))
    def test_normalized(self, hcl, z, g, kind):
        state = build_state(LadderSpec(kind, hcl), StateParams(z, g))
        assert float(np.sum(np.abs(state.coeffs) ** 2)) == pytest.approx(1.0, abs=1e-12)

    def test_immutable(self, ene):
        state = build_state(ene, StateParams(1.0, 0.2))
        with pytest.raises(ValueError):
            state.coeffs[0] = 0

    def test_evolution_keeps_probabilities(self, ene):
        state = build_state(ene, StateParams(0.5 + 0.5j, 0.3))
        later = state.evolved(3.7)
        assert np.allclose(later.probabilities(), state.probabilities(), rtol=1e-14)
        assert later.evolved(0.0).coeffs == pytest.approx(state.coeffs, rel=1e-12)

    def test_large_squeezing_warns(self):
        with pytest.warns(SqueezingWarning):
            StateParams(1.0, 1.2)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            StateParams(1.0, 0.99)


def padded_defect(spec, state):
    op = spec.matrix_elements(state.dim + 1)
    c = np.zeros(state.dim + 1, dtype=complex)
    c[:-1] = state.coeffs
    M = op.lowering() + state.params.gamma * op.raising()
    return M @ c - state.params.z * c


class TestResidual:
    @pytest.mark.parametrize("z", [0.0, 0.5, 3.0])
    def test_coherent_lambda0_zero(self, osc, ene, z):
        for spec in (osc, ene):
            rep = residual(spec, build_state(spec, StateParams(z, 0)))
            assert rep.lambda0 == 0

    def test_energy_small(self, ene):
        rep = residual(ene, build_state(ene, StateParams(0.3, 0.3)))
        assert rep.relative_residual < 1e-6

    def test_energy_frozen_amplitudes(self, ene):
        # 50-digit evaluation of the same recurrence and weights
        rep = residual(ene, build_state(ene, StateParams(0.3, 0.3)))
        assert rep.lambda1 == pytest.approx(5.504177597325898e-07, rel=1e-10)
        assert rep.lambda0 == pytest.approx(-1.364091149001276e-07, rel=1e-10)
        assert rep.relative_residual == pytest.approx(1.890229724007344e-06, rel=1e-10)

    @pytest.mark.parametrize("kind", list(LadderKind))
    @pytest.mark.parametrize("z,g", [(0.3, 0.3), (2.0, 0.5), (1 + 1j, 0.2j), (3.0, 0.0)])
    def test_matrix_oracle(self, hcl, kind, z, g):
        spec = LadderSpec(kind, hcl)
        state = build_state(spec, StateParams(z, g))
        defect = padded_defect(spec, state)
        rep = residual(spec, state)
        top = hcl.p_floor
        scale = abs(state.params.z) + abs(g) * math.sqrt(spec.k(top))
        assert np.allclose(defect[: top - 1], 0.0, atol=1e-12 * scale)
        assert defect[top - 1] == pytest.approx(-rep.lambda1, rel=1e-9, abs=1e-15 * scale)
        assert defect[top] == pytest.approx(rep.lambda0, rel=1e-9, abs=1e-15 * scale)
        assert np.linalg.norm(defect) == pytest.approx(rep.absolute, rel=1e-9, abs=1e-14 * scale)


class TestParameterMap:
    def test_coherent(self):
        assert zeta_lambda_to_z_gamma(1.0, 1.0).gamma == 0

    def test_example(self):
        params = zeta_lambda_to_z_gamma(2 * math.sqrt(2), 3.0)
        assert params.gamma == pytest.approx(-0.5)
        assert params.z == pytest.approx(1.0)

    @settings(max_examples=50)
    @given(z=complexes, g=gammas)
    def test_round_trip(self, z, g):
        zeta, lam = z_gamma_to_zeta_lambda(StateParams(z, g))
        back = zeta_lambda_to_z_gamma(zeta, lam)
        assert back.gamma == pytest.approx(g, abs=1e-12)
        assert back.z == pytest.approx(z, abs=1e-12)

    def test_poles(self):
        with pytest.raises(DomainError):
            zeta_lambda_to_z_gamma(1.0, -1.0)
        with pytest.warns(SqueezingWarning):
            at_pole = StateParams(1.0, -1.0)
        with pytest.raises(DomainError):
            z_gamma_to_zeta_lambda(at_pole)
