import math

import numpy as np
import pytest
from hypothesis import given, settings

from spinpair.bloch import (
    BasisSpec,
    BlochAngles,
    SingleQubitState,
    X_BASIS,
    Y_BASIS,
    Z_BASIS,
    antipode,
    circular_distance,
    compose_basis_change,
    inverse_rotation,
    rotation_matrix,
    single_delta_p,
    single_measure_probs,
    single_visibility,
    spin_cone_angle,
    state_from_angles,
    state_rotation,
    wrap_angle,
)
from tests.conftest import bases, qubits

R2 = 1 / math.sqrt(2)


def bra(b: BasisSpec) -> np.ndarray:
    """<e| from the ket definition |e> = m|up> + n e^{i delta}|down>."""
    return np.conj([b.m, b.n * np.exp(1j * b.delta)])


def bra_bar(b: BasisSpec) -> np.ndarray:
    return np.conj([b.n, -b.m * np.exp(1j * b.delta)])


class TestConstruction:
    @pytest.mark.parametrize(
        "theta, phi, expected",
        [
            (0.0, 0.0, (1.0, 0.0, 0.0)),
            (math.pi / 2, 0.0, (R2, R2, 0.0)),
            (math.pi / 2, math.pi / 2, (R2, R2, math.pi / 2)),
        ],
    )
    def test_state_from_angles(self, theta, phi, expected):
        s = state_from_angles(BlochAngles(theta, phi))
        assert (s.a, s.b, s.phi) == pytest.approx(expected, abs=1e-15)

    def test_pole_azimuth_is_canonical(self):
        assert BlochAngles(0.0, 1.3).phi == 0.0
        assert BlochAngles(math.pi, 1.3).phi == 0.0
        assert BasisSpec(math.pi, 2.0).delta == 0.0

    def test_azimuth_wraps(self):
        assert BasisSpec(1.0, -0.5).delta == pytest.approx(2 * math.pi - 0.5)
        assert BasisSpec(1.0, 7.0).delta == pytest.approx(7.0 - 2 * math.pi)

    @pytest.mark.parametrize("bad", [-0.1, math.pi + 0.1, math.nan, math.inf])
    def test_polar_out_of_range_rejected(self, bad):
        with pytest.raises(ValueError):
            BlochAngles(bad)
        with pytest.raises(ValueError):
            BasisSpec(bad)

    def test_polar_rounding_slack_is_clamped(self):
        assert BasisSpec(math.pi + 1e-12).chi == math.pi

    @given(bases())
    def test_basis_normalization(self, b):
        assert b.m**2 + b.n**2 == pytest.approx(1.0, abs=1e-12)
        assert b.m >= 0 and b.n >= 0

    def test_wrap_and_distance(self):
        assert 0.0 <= wrap_angle(-1e-300) < 2 * math.pi
        assert circular_distance(-math.pi, math.pi) == pytest.approx(0.0, abs=1e-15)
        assert circular_distance(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)


class TestAntipode:
    def test_pole(self):
        down = antipode(SingleQubitState.from_angles(0.0))
        assert (down.a, down.b) == pytest.approx((0.0, 1.0), abs=1e-15)

    def test_x_plus_to_x_minus(self):
        s = antipode(SingleQubitState.from_angles(math.pi / 2, 0.0))
        assert s.phi == pytest.approx(math.pi)
        assert s.ket() == pytest.approx(np.array([R2, -R2]), abs=1e-15)

    @given(qubits())
    def test_orthogonal(self, s):
        assert abs(np.vdot(s.ket(), antipode(s).ket())) < 1e-12

    @given(qubits())
    def test_raw_coefficients_up_to_phase(self, s):
        # b|up> - a e^{i phi}|down> and the canonical form differ by a phase only
        raw = np.array([s.b, -s.a * np.exp(1j * s.phi)])
        assert abs(abs(np.vdot(raw, antipode(s).ket())) - 1.0) < 1e-12


class TestRotations:
    def test_reference_basis(self):
        assert rotation_matrix(Z_BASIS) == pytest.approx(np.array([[1, 0], [0, -1]]))

    def test_x_basis(self):
        assert rotation_matrix(X_BASIS) == pytest.approx(np.array([[R2, R2], [R2, -R2]]), abs=1e-15)

    @given(bases())
    def test_unitary_and_determinant(self, b):
        r = rotation_matrix(b)
        assert np.allclose(r @ r.conj().T, np.eye(2), rtol=0, atol=1e-12)
        assert abs(np.linalg.det(r) + np.exp(1j * b.delta)) < 1e-12
        assert np.allclose(inverse_rotation(b), r.conj().T, rtol=0, atol=1e-15)
        assert np.allclose(inverse_rotation(b) @ r, np.eye(2), rtol=0, atol=1e-12)

    def test_rows_are_kets(self):
        b = BasisSpec(1.2, 0.7)
        r = rotation_matrix(b)
        assert r[0] == pytest.approx(np.conj(bra(b)))
        assert r[1] == pytest.approx(np.conj(bra_bar(b)))


class TestComposeBasisChange:
    def test_same_basis_is_identity_block(self):
        b = BasisSpec(0.9, 2.1)
        r = compose_basis_change(b, b)
        assert r[0, 0] == pytest.approx(1.0, abs=1e-15)
        assert r[0, 1] == pytest.approx(0.0, abs=1e-15)

    @given(bases())
    def test_z_state_gives_m_n(self, e):
        up = SingleQubitState.from_angles(0.0)
        r = compose_basis_change(up, e)
        assert r[0] == pytest.approx([e.m, e.n], abs=1e-15)
        assert np.allclose(r, state_rotation(up) @ inverse_rotation(e), rtol=0, atol=1e-12)

    @given(qubits(), bases())
    def test_matches_matrix_product(self, s, e):
        closed = compose_basis_change(s, e)
        product = state_rotation(s) @ inverse_rotation(e)
        assert np.allclose(closed, product, rtol=0, atol=1e-12)
        u, v = closed[0]
        assert abs(u) ** 2 + abs(v) ** 2 == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(closed @ closed.conj().T, np.eye(2), rtol=0, atol=1e-12)

    @given(qubits(), bases())
    def test_expansion_reproduces_state(self, s, e):
        u, v = compose_basis_change(s, e)[0]
        ket_e, ket_ebar = rotation_matrix(e)
        assert np.allclose(u * ket_e + v * ket_ebar, s.ket(), rtol=0, atol=1e-12)


class TestSingleProbabilities:
    def test_up_state_limit(self):
        e = BasisSpec(1.1, 0.4)
        up = SingleQubitState.from_angles(0.0)
        assert single_measure_probs(up, e) == (e.m * e.m, e.n * e.n)

    def test_reference_basis_limit(self):
        s = SingleQubitState.from_angles(1.1, 0.4)
        assert single_measure_probs(s, Z_BASIS) == (s.a * s.a, s.b * s.b)

    def test_own_axis(self):
        s = SingleQubitState.from_angles(math.pi / 2, 0.0)
        assert single_measure_probs(s, X_BASIS) == pytest.approx((1.0, 0.0), abs=1e-15)

    @given(qubits(), bases())
    @settings(max_examples=300)
    def test_oracle_and_completeness(self, s, e):
        p_e, p_ebar = single_measure_probs(s, e)
        assert p_e + p_ebar == pytest.approx(1.0, abs=1e-12)
        assert p_e == pytest.approx(abs(bra(e) @ s.ket()) ** 2, abs=1e-12)
        assert p_ebar == pytest.approx(abs(bra_bar(e) @ s.ket()) ** 2, abs=1e-12)
        assert single_delta_p(s, e) == pytest.approx(p_e - p_ebar, abs=1e-12)

    def test_delta_p_cases(self):
        s = SingleQubitState.from_angles(math.pi / 2)
        assert single_delta_p(s, X_BASIS) == pytest.approx(1.0)
        # cos(eta) = 0: only the constant term survives
        s2 = SingleQubitState.from_angles(0.8, math.pi / 2)
        e2 = BasisSpec(1.9, 0.0)
        const = (s2.a**2 - s2.b**2) * (e2.m**2 - e2.n**2)
        assert single_delta_p(s2, e2) == pytest.approx(const, abs=1e-15)
        up = SingleQubitState.from_angles(0.0)
        assert single_delta_p(up, e2) == pytest.approx(e2.m**2 - e2.n**2)

    def test_overlaps(self):
        down = SingleQubitState.from_angles(math.pi).ket()
        right = SingleQubitState.from_angles(math.pi / 2, math.pi / 2).ket()
        front = SingleQubitState.from_angles(math.pi / 2, 0.0).ket()
        assert np.vdot(right, down) == pytest.approx(-1j * R2, abs=1e-12)
        assert abs(np.vdot(right, down)) == pytest.approx(R2, abs=1e-12)
        assert np.vdot(front, down) == pytest.approx(R2, abs=1e-12)


class TestVisibility:
    def test_listed_cases(self):
        eq = SingleQubitState.from_angles(math.pi / 2)
        e = BasisSpec(0.7, 0.0)
        assert single_visibility(eq, X_BASIS) == pytest.approx(0.5)
        assert single_visibility(eq, e) == pytest.approx(e.m * e.n)
        s = SingleQubitState.from_angles(0.7)
        assert single_visibility(s, Y_BASIS) == pytest.approx(s.a * s.b)
        assert single_visibility(SingleQubitState.from_angles(0.0), e) == 0.0

    def test_half_swing_over_eta(self):
        e = BasisSpec(1.0, 0.0)
        phis = np.linspace(0, 2 * math.pi, 400, endpoint=False)
        p = [single_measure_probs(SingleQubitState.from_angles(2.0, f), e)[0] for f in phis]
        s = SingleQubitState.from_angles(2.0)
        assert (max(p) - min(p)) / 2 == pytest.approx(single_visibility(s, e), abs=1e-12)


class TestSpinCone:
    def test_spin_half(self):
        assert spin_cone_angle(0.5, 0.5) == pytest.approx(0.955317, abs=1e-6)
        assert spin_cone_angle(0.5, -0.5) == pytest.approx(math.acos(1 / math.sqrt(3)))

    def test_spin_one(self):
        assert spin_cone_angle(1, 1) == pytest.approx(math.pi / 4)
        assert spin_cone_angle(1, 0) == pytest.approx(math.pi / 2)

    def test_domain(self):
        with pytest.raises(ValueError):
            spin_cone_angle(0.5, 1.0)
        with pytest.raises(ValueError):
            spin_cone_angle(0.0, 0.0)
