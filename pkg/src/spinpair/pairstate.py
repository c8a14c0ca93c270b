"""Entangled spin pairs and their coefficients in rotated measurement bases.

Two families are modelled, both with real ``p, q >= 0`` and a relative phase:

* ``MINUS``: ``p|up,down> + q e^{i alpha}|down,up>``  (opposite z outcomes)
* ``PLUS``:  ``p|up,up>   + q e^{i alpha}|down,down>`` (equal z outcomes)

Four-outcome tuples are always ordered ``(e e', e ebar', ebar e', ebar ebar')``
with particle A in the first slot.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from spinpair.bloch import BasisSpec, wrap_angle

NORM_TOL = 1e-9
SQRT_HALF = math.sqrt(0.5)


class NotNormalized(ValueError):
    pass


class ZeroState(ValueError):
    pass


class DegenerateRatio(ZeroDivisionError):
    pass


class PairKind(enum.Enum):
    MINUS = "minus"
    PLUS = "plus"


def _cis(x: float) -> complex:
    return complex(math.cos(x), math.sin(x))


@dataclass(frozen=True)
class PairState:
    kind: PairKind
    p: float
    q: float
    alpha: float

    @property
    def q_tilde(self) -> complex:
        return self.q * _cis(self.alpha)

    @property
    def is_entangled(self) -> bool:
        return self.p > 0.0 and self.q > 0.0


def make_pair(
    kind: PairKind | str,
    p: complex,
    q: complex,
    alpha: float = 0.0,
    normalize: bool = False,
) -> PairState:
    """Build a pair state, folding any complex phase of ``p``/``q`` into ``alpha``.

    Without ``normalize`` the weights must already satisfy ``|p|^2 + |q|^2 = 1``
    to within ``NORM_TOL``.
    """
    kind = PairKind(kind)
    if not math.isfinite(alpha):
        raise ValueError(f"alpha must be finite, got {alpha!r}")
    p, q = complex(p), complex(q)
    rp, rq = abs(p), abs(q)
    if not (math.isfinite(rp) and math.isfinite(rq)):
        raise ValueError("p and q must be finite")
    if rp == 0.0 and rq == 0.0:
        raise ZeroState("p and q are both zero")
    phase = alpha
    if rp > 0.0 and rq > 0.0:
        phase += cmath.phase(q) - cmath.phase(p)
    norm2 = rp * rp + rq * rq
    if normalize:
        scale = math.sqrt(norm2)
        rp, rq = rp / scale, rq / scale
    elif abs(norm2 - 1.0) > NORM_TOL:
        raise NotNormalized(f"p^2 + q^2 = {norm2!r}, expected 1")
    return PairState(kind, rp, rq, wrap_angle(phase))


def singlet() -> PairState:
    return PairState(PairKind.MINUS, SQRT_HALF, SQRT_HALF, math.pi)


def epsilon(state: PairState) -> float:
    """Entanglement degree ``p^2 / q^2``; equals 1 at maximal entanglement."""
    if state.q == 0.0:
        raise DegenerateRatio("q = 0: the ratio p^2/q^2 diverges")
    return state.p**2 / state.q**2


def weights_from_epsilon(eps: float) -> tuple[float, float]:
    """Recover ``(p^2, q^2)`` from the entanglement degree."""
    return eps / (1.0 + eps), 1.0 / (1.0 + eps)


@dataclass(frozen=True)
class TwoQubitVector:
    """Four amplitudes over a labelled product basis.

    ``labels`` names the per-party bases; ``("z", "z")`` means the amplitudes
    are on (up up, up down, down up, down down).
    """

    amps: tuple[complex, complex, complex, complex]
    labels: tuple[str, str] = ("z", "z")

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.amps)
        if len(amps) != 4:
            raise ValueError("a two-qubit vector needs exactly 4 amplitudes")
        if not all(cmath.isfinite(a) for a in amps):
            raise ValueError("amplitudes must be finite")
        norm2 = sum(abs(a) ** 2 for a in amps)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NotNormalized(f"squared norm {norm2!r}, expected 1")
        object.__setattr__(self, "amps", amps)

    def as_array(self) -> np.ndarray:
        return np.array(self.amps, dtype=complex)


def to_general(state: PairState) -> TwoQubitVector:
    qt = state.q_tilde
    if state.kind is PairKind.MINUS:
        return TwoQubitVector((0.0, state.p, qt, 0.0))
    return TwoQubitVector((state.p, 0.0, 0.0, qt))


@dataclass(frozen=True)
class CoefficientsMinus:
    """Same-basis coefficients of a MINUS state.

    ``f = (p + q~)mn``, ``g = pm^2 - q~n^2``, ``h = pn^2 - q~m^2``. Up to the
    common phase ``e^{-i delta}`` the outcome amplitudes are ``(f, -g, h, -f)``;
    the customary written form puts a minus sign on the ``h`` term, which only
    matters for phases, never for probabilities.
    """

    f: complex
    g: complex
    h: complex
    delta: float

    def outcome_amplitudes(self) -> tuple[complex, complex, complex, complex]:
        return (self.f, -self.g, self.h, -self.f)


@dataclass(frozen=True)
class CoefficientsPlus:
    """Same-basis coefficients of a PLUS state: ``F|ee> + G|ebar ebar> + H(|e ebar> + |ebar e>)``."""

    F: complex
    G: complex
    H: complex
    xi: float

    def outcome_amplitudes(self) -> tuple[complex, complex, complex, complex]:
        return (self.F, self.H, self.H, self.G)


@dataclass(frozen=True)
class CoefficientsMixed:
    """A measured along e, B along e'.

    ``|mu|^2, |nu|^2, |sigma|^2, |tau|^2`` are the probabilities of
    ``ee', ebar ebar', e ebar', ebar e'``. Exact amplitudes carry extra signs on
    ``nu`` and ``sigma``; see :meth:`outcome_amplitudes`.
    """

    mu: complex
    nu: complex
    sigma: complex
    tau: complex
    zeta: float

    def outcome_amplitudes(self) -> tuple[complex, complex, complex, complex]:
        return (self.mu, -self.sigma, self.tau, -self.nu)


def _require(state: PairState, kind: PairKind) -> None:
    if state.kind is not kind:
        raise ValueError(f"expected a {kind.value} state, got {state.kind.value}")


def rewrite_minus(state: PairState, e: BasisSpec) -> CoefficientsMinus:
    _require(state, PairKind.MINUS)
    p, qt, m, n = state.p, state.q_tilde, e.m, e.n
    return CoefficientsMinus(
        f=(p + qt) * m * n,
        g=p * m * m - qt * n * n,
        h=p * n * n - qt * m * m,
        delta=e.delta,
    )


def rewrite_plus(state: PairState, e: BasisSpec) -> CoefficientsPlus:
    # no global phase can be pulled out here: delta enters through xi
    _require(state, PairKind.PLUS)
    p, q, m, n = state.p, state.q, e.m, e.n
    xi = wrap_angle(state.alpha - 2.0 * e.delta)
    qx = q * _cis(xi)
    return CoefficientsPlus(
        F=p * m * m + qx * n * n,
        G=p * n * n + qx * m * m,
        H=(p - qx) * m * n,
        xi=xi,
    )


def rewrite_mixed(state: PairState, e: BasisSpec, e_prime: BasisSpec) -> CoefficientsMixed:
    _require(state, PairKind.MINUS)
    p, q = state.p, state.q
    m, n, m2, n2 = e.m, e.n, e_prime.m, e_prime.n
    a_term = p * _cis(-e_prime.delta)
    b_term = q * _cis(state.alpha - e.delta)
    return CoefficientsMixed(
        mu=a_term * m * n2 + b_term * n * m2,
        nu=a_term * n * m2 + b_term * m * n2,
        sigma=a_term * m * m2 - b_term * n * n2,
        tau=a_term * n * n2 - b_term * m * m2,
        zeta=wrap_angle(state.alpha - e.delta + e_prime.delta),
    )


@dataclass(frozen=True)
class SingletTripletSplit:
    c_singlet: complex
    c_triplet0: complex
    c_triplet_up: complex
    c_triplet_down: complex

    def weights(self) -> tuple[float, float, float, float]:
        return tuple(
            abs(c) ** 2
            for c in (self.c_singlet, self.c_triplet0, self.c_triplet_up, self.c_triplet_down)
        )


def decompose_coupled(v: TwoQubitVector | PairState) -> SingletTripletSplit:
    """Project a z-basis two-qubit vector onto the total-spin eigenbasis."""
    if isinstance(v, PairState):
        v = to_general(v)
    if v.labels != ("z", "z"):
        raise ValueError(f"expected a z-basis vector, got labels {v.labels}")
    uu, ud, du, dd = v.amps
    return SingletTripletSplit(
        c_singlet=(ud - du) * SQRT_HALF,
        c_triplet0=(ud + du) * SQRT_HALF,
        c_triplet_up=uu,
        c_triplet_down=dd,
    )
