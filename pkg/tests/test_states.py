import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qreading.exceptions import DomainError
from qreading.states import SqueezedCoherentState, apply_phase_shift, energy, reduce_angle, wigner, wigner_grid

S = SqueezedCoherentState
SINH1_ENERGY = 2.381097845541816  # 1 + sinh(1)^2, mpmath

angles = st.floats(-10, 10)
states = st.builds(S, st.floats(0, 2), angles, st.floats(0, 1.2), angles)


def close_angles(x, y, tol=1e-12):
    return abs(reduce_angle(x - y)) < tol


class TestState:
    def test_validation(self):
        with pytest.raises(DomainError):
            S(-1.0, 0, 0, 0)
        with pytest.raises(DomainError):
            S(1.0, 0, -0.1, 0)
        with pytest.raises(DomainError):
            S(math.nan, 0, 0, 0)

    def test_phases_reduced(self):
        s = S(1.0, 3 * math.pi, 0.2, -math.pi)
        assert s.phi == pytest.approx(math.pi)
        assert s.theta == math.pi

    @pytest.mark.parametrize("s, e", [(S(), 0.0), (S(2.0), 4.0), (S(1.0, 0, 1.0), SINH1_ENERGY)])
    def test_energy(self, s, e):
        assert energy(s) == pytest.approx(e, rel=1e-15)


class TestPhaseShift:
    def test_zero_is_identity(self):
        s = S(1.0, 0.3, 0.5, -1.0)
        assert apply_phase_shift(s, 0.0) == s

    def test_pi(self):
        s = S(1.0, 0.3, 0.5, -1.0)
        t = apply_phase_shift(s, math.pi)
        assert close_angles(t.phi, s.phi + math.pi) and close_angles(t.theta, s.theta)
        assert (t.a, t.r) == (s.a, s.r)

    def test_half_pi(self):
        s = S(1.0, 0.3, 0.5, -1.0)
        t = apply_phase_shift(s, math.pi / 2)
        assert close_angles(t.phi, s.phi + math.pi / 2) and close_angles(t.theta, s.theta + math.pi)

    @given(states, angles, angles)
    def test_composition_and_energy(self, s, d1, d2):
        two = apply_phase_shift(apply_phase_shift(s, d1), d2)
        one = apply_phase_shift(s, d1 + d2)
        assert close_angles(two.phi, one.phi, 1e-9) and close_angles(two.theta, one.theta, 1e-9)
        assert energy(two) == pytest.approx(energy(s), rel=1e-14)


class TestWigner:
    def test_vacuum_origin(self):
        assert wigner(S(), 0.0, 0.0) == pytest.approx(1 / math.pi, rel=1e-15)

    def test_coherent_peak(self):
        s = S(1.5, 0.7)
        x0, p0 = 1.5 * math.cos(0.7), 1.5 * math.sin(0.7)
        assert wigner(s, x0, p0) == pytest.approx(1 / math.pi, rel=1e-15)

    @pytest.mark.parametrize("convention", ["printed", "marginal"])
    @pytest.mark.parametrize(
        "s, half",
        [
            (S(2.0, 0.3, 0.0, 0.0), 12),
            (S(1.0, -1.0, 0.8, 2.0), 12),
            (S(0.6, 2.0, 1.0, -0.4), 12),
            # the long axis of a strongly squeezed state spills out of [-12, 12]
            (S(0.5, 2.0, 1.3, -0.4), 20),
        ],
    )
    def test_normalized(self, s, half, convention):
        assert energy(s) <= 4.0 + 1e-12
        n = 2 * 50 * half + 1
        xs, ps, w = wigner_grid(s, (-half, half), (-half, half), n, convention)
        h = xs[1] - xs[0]
        # trapezoid on a periodic-like decaying integrand converges geometrically
        assert abs(np.trapezoid(np.trapezoid(w, dx=h, axis=1), dx=h) - 1.0) < 1e-8

    @given(states, st.floats(-4, 4), st.floats(-4, 4))
    def test_positive(self, s, x, p):
        assert wigner(s, x, p) > 0.0 or wigner(s, x, p) == 0.0

    def test_grid_corners(self):
        s = S(1.0, 0.2, 0.4, 1.0)
        xs, ps, w = wigner_grid(s, (-2, 3), (-1, 4), 2)
        for i in range(2):
            for j in range(2):
                assert w[i, j] == wigner(s, xs[i], ps[j])

    def test_vacuum_grid_symmetry(self):
        _, _, w = wigner_grid(S(), (-3, 3), (-3, 3), 41)
        assert np.allclose(w, w[::-1, ::-1], rtol=1e-14, atol=0)

    def test_grid_argmax(self):
        s = S(1.7, 2.2)
        xs, ps, w = wigner_grid(s, (-4, 4), (-4, 4), 81)
        i, j = np.unravel_index(np.argmax(w), w.shape)
        h = xs[1] - xs[0]
        assert abs(xs[i] - 1.7 * math.cos(2.2)) <= h and abs(ps[j] - 1.7 * math.sin(2.2)) <= h

    def test_grid_needs_two_points(self):
        with pytest.raises(DomainError):
            wigner_grid(S(), (-1, 1), (-1, 1), 1)

    def test_unknown_convention(self):
        with pytest.raises(DomainError):
            wigner(S(), 0, 0, convention="other")

    @given(states, angles, st.floats(-3, 3), st.floats(-3, 3))
    def test_marginal_convention_rotates(self, s, delta, x, p):
        c, sn = math.cos(delta), math.sin(delta)
        shifted = wigner(apply_phase_shift(s, delta), c * x - sn * p, sn * x + c * p, "marginal")
        assert abs(shifted - wigner(s, x, p, "marginal")) < 1e-10

    def test_marginal_convention_matches_homodyne(self):
        from qreading.homodyne import HomodyneSetup, outcome_pdf

        s = S(1.2, 0.4, 0.6, 1.1)
        for psi in (0.0, 0.9, 2.0):
            pdf = outcome_pdf(s, HomodyneSetup(psi, 1.0))
            # project the Wigner function on the direction psi by quadrature
            u = np.linspace(-12, 12, 2401)
            v = np.linspace(-12, 12, 2401)
            uu, vv = np.meshgrid(u, v, indexing="ij")
            x = uu * math.cos(psi) - vv * math.sin(psi)
            p = uu * math.sin(psi) + vv * math.cos(psi)
            marg = np.trapezoid(wigner(s, x, p, "marginal"), v, axis=1)
            mean = np.trapezoid(u * marg, u)
            var = np.trapezoid((u - mean) ** 2 * marg, u)
            assert mean == pytest.approx(pdf.x0, abs=1e-10)
            assert 2 * var == pytest.approx(pdf.width_sq, rel=1e-9)

    def test_printed_convention_is_not_rotation_covariant(self):
        # Recorded behaviour of the formula as printed: a phase shift does
        # not act as a rigid rotation of the phase-space picture.
        s = S(1.0, 0.0, 0.8, 0.0)
        d = math.pi / 2
        x, p = 0.7, -0.2
        c, sn = math.cos(d), math.sin(d)
        gap = abs(wigner(apply_phase_shift(s, d), c * x - sn * p, sn * x + c * p) - wigner(s, x, p))
        assert gap > 1e-3
