"""Single-qubit states, measurement bases and basis-change matrices.

A qubit state is written ``a|up> + b e^{i phi}|down>`` with ``a = cos(theta/2)``,
``b = sin(theta/2)``. A measurement direction ``e`` on the Bloch sphere is given
by polar angle ``chi`` and azimuth ``delta``; its eigenkets are

    |e>    = m|up> + n e^{i delta}|down>
    |ebar> = n|up> - m e^{i delta}|down>

with ``m = cos(chi/2)``, ``n = sin(chi/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

#: slack for user-supplied polar angles sitting just outside [0, pi]
ANGLE_TOL = 1e-9


def wrap_angle(x: float) -> float:
    """Reduce an angle to [0, 2pi)."""
    r = math.fmod(x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    # fmod of a tiny negative number can land exactly on 2pi after the shift
    return 0.0 if r >= TWO_PI else r


def circular_distance(x: float, y: float) -> float:
    """Smallest angular separation between ``x`` and ``y`` (in [0, pi])."""
    d = wrap_angle(x - y)
    return min(d, TWO_PI - d)


def _polar(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if value < -ANGLE_TOL or value > math.pi + ANGLE_TOL:
        raise ValueError(f"{name} must lie in [0, pi], got {value!r}")
    return min(max(value, 0.0), math.pi)


def _azimuth(name: str, value: float, polar: float) -> float:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    # azimuth is meaningless at the poles; pin it so equal states compare equal
    if polar == 0.0 or polar == math.pi:
        return 0.0
    return wrap_angle(value)


@dataclass(frozen=True)
class BlochAngles:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = _polar("theta", float(self.theta))
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", _azimuth("phi", float(self.phi), theta))


@dataclass(frozen=True)
class SingleQubitState:
    """``a|up> + b e^{i phi}|down>`` with real ``a, b >= 0``."""

    a: float
    b: float
    phi: float

    @classmethod
    def from_angles(cls, theta: float, phi: float = 0.0) -> SingleQubitState:
        return state_from_angles(BlochAngles(theta, phi))

    @property
    def theta(self) -> float:
        return 2.0 * math.atan2(self.b, self.a)

    def ket(self) -> np.ndarray:
        """Column of amplitudes on (|up>, |down>)."""
        return np.array([self.a, self.b * np.exp(1j * self.phi)], dtype=complex)


@dataclass(frozen=True)
class BasisSpec:
    """Measurement direction ``e`` = (chi, delta); ``m``/``n`` are derived."""

    chi: float
    delta: float = 0.0

    def __post_init__(self):
        chi = _polar("chi", float(self.chi))
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "delta", _azimuth("delta", float(self.delta), chi))

    @property
    def m(self) -> float:
        return math.cos(self.chi / 2.0)

    @property
    def n(self) -> float:
        return math.sin(self.chi / 2.0)

    @classmethod
    def from_m_squared(cls, m2: float, delta: float = 0.0) -> BasisSpec:
        """Basis with ``m**2 = m2``; used by the equal-weight solver."""
        m2 = min(max(m2, 0.0), 1.0)
        return cls(2.0 * math.acos(math.sqrt(m2)), delta)

    def bloch_vector(self) -> np.ndarray:
        s = math.sin(self.chi)
        return np.array([s * math.cos(self.delta), s * math.sin(self.delta), math.cos(self.chi)])


Z_BASIS = BasisSpec(0.0, 0.0)
X_BASIS = BasisSpec(math.pi / 2, 0.0)
Y_BASIS = BasisSpec(math.pi / 2, math.pi / 2)


def state_from_angles(angles: BlochAngles) -> SingleQubitState:
    return SingleQubitState(
        a=math.cos(angles.theta / 2.0),
        b=math.sin(angles.theta / 2.0),
        phi=angles.phi,
    )


def antipode(s: SingleQubitState) -> SingleQubitState:
    """Orthogonal partner ``b|up> - a e^{i phi}|down>``, in canonical form.

    The raw coefficients are re-expressed as ``theta' = pi - theta`` and
    ``phi' = phi + pi`` so that both stored magnitudes stay non-negative.
    """
    return state_from_angles(BlochAngles(math.pi - s.theta, s.phi + math.pi))


def rotation_matrix(basis: BasisSpec) -> np.ndarray:
    """Matrix taking (|up>, |down>) to (|e>, |ebar>); det = -e^{i delta}."""
    m, n = basis.m, basis.n
    ph = complex(math.cos(basis.delta), math.sin(basis.delta))
    return np.array([[m, n * ph], [n, -m * ph]], dtype=complex)


def inverse_rotation(basis: BasisSpec) -> np.ndarray:
    """Inverse of :func:`rotation_matrix`, which equals its adjoint."""
    m, n = basis.m, basis.n
    ph = complex(math.cos(basis.delta), -math.sin(basis.delta))
    return np.array([[m, n], [n * ph, -m * ph]], dtype=complex)


def state_rotation(s: SingleQubitState) -> np.ndarray:
    """Matrix taking (|up>, |down>) to (|s>, |sbar>)."""
    ph = complex(math.cos(s.phi), math.sin(s.phi))
    return np.array([[s.a, s.b * ph], [s.b, -s.a * ph]], dtype=complex)


def transfer_coefficients(s: SingleQubitState, e: BasisSpec) -> tuple[complex, complex]:
    """Amplitudes ``(u, v)`` of ``|s> = u|e> + v|ebar>``."""
    a, b, m, n = s.a, s.b, e.m, e.n
    eta = s.phi - e.delta
    w = complex(math.cos(eta), math.sin(eta))
    return a * m + b * n * w, a * n - b * m * w


def as_state(x: SingleQubitState | BasisSpec) -> SingleQubitState:
    """View a basis direction as the qubit state ``|e>`` pointing along it."""
    if isinstance(x, SingleQubitState):
        return x
    return SingleQubitState(x.m, x.n, x.delta)


def compose_basis_change(s: SingleQubitState | BasisSpec, e: BasisSpec) -> np.ndarray:
    """Matrix taking (|e>, |ebar>) to (|s>, |sbar>) in closed form.

    Rows are ``(u, v)`` and ``(-e^{i eta} v*, e^{i eta} u*)`` with
    ``eta = phi - delta``. This equals ``state_rotation(s) @ inverse_rotation(e)``.
    """
    s = as_state(s)
    u, v = transfer_coefficients(s, e)
    eta = s.phi - e.delta
    w = complex(math.cos(eta), math.sin(eta))
    return np.array([[u, v], [-w * v.conjugate(), w * u.conjugate()]], dtype=complex)


def single_measure_probs(s: SingleQubitState, e: BasisSpec) -> tuple[float, float]:
    """Outcome probabilities ``(P(e), P(ebar))`` for state ``s`` measured along ``e``."""
    a, b, m, n = s.a, s.b, e.m, e.n
    fringe = 2.0 * a * b * m * n * math.cos(s.phi - e.delta)
    p_e = a * a * m * m + b * b * n * n + fringe
    p_ebar = a * a * n * n + b * b * m * m - fringe
    return p_e, p_ebar


def single_delta_p(s: SingleQubitState, e: BasisSpec) -> float:
    a, b, m, n = s.a, s.b, e.m, e.n
    return (a * a - b * b) * (m * m - n * n) + 4.0 * a * b * m * n * math.cos(s.phi - e.delta)


def single_visibility(s: SingleQubitState, e: BasisSpec) -> float:
    """Half peak-to-trough swing of ``P(e)`` as ``eta`` runs over a period."""
    return 2.0 * s.a * s.b * e.m * e.n


def spin_cone_angle(spin: float, component: float) -> float:
    """Half opening angle of the spin cone, ``arccos(|s_i| / sqrt(s(s+1)))``."""
    if spin <= 0:
        raise ValueError(f"spin must be positive, got {spin!r}")
    if abs(component) > spin:
        raise ValueError(f"|component| = {abs(component)!r} exceeds spin {spin!r}")
    return math.acos(abs(component) / math.sqrt(spin * (spin + 1.0)))
