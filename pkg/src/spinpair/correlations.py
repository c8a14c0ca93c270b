"""Closed-form joint and local outcome statistics for entangled pairs.

Outcomes ``(e, e')`` and ``(ebar, ebar')`` count as (+)-correlated, ``(e, ebar')``
and ``(ebar, e')`` as (-)-correlated; in mixed bases this labelling is purely
structural (see :attr:`CorrelationSummary.basis_dot`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from spinpair.bloch import BasisSpec, circular_distance
from spinpair.pairstate import PairKind, PairState, rewrite_plus

#: residual threshold for the criterion checks (user-facing inputs)
EPS_CRIT = 1e-9


class NoRealSolution(ValueError):
    pass


class Disentangled(ValueError):
    pass


#: rounding dust tolerated (and clamped away) at the edges of [0, 1]
DUST = 1e-12


def _clamp(x: float) -> float:
    if -DUST <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + DUST:
        return 1.0
    return x


@dataclass(frozen=True)
class JointProbs:
    """Outcome probabilities in the order (e e', e ebar', ebar e', ebar ebar')."""

    p_ee: float
    p_eeb: float
    p_ebe: float
    p_ebeb: float

    def __post_init__(self):
        for name in ("p_ee", "p_eeb", "p_ebe", "p_ebeb"):
            val = _clamp(float(getattr(self, name)))
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} = {val!r} is not a probability")
            object.__setattr__(self, name, val)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_ee, self.p_eeb, self.p_ebe, self.p_ebeb)

    @property
    def p_plus(self) -> float:
        return self.p_ee + self.p_ebeb

    @property
    def p_minus(self) -> float:
        return self.p_eeb + self.p_ebe

    @property
    def marginal_a(self) -> tuple[float, float]:
        return self.p_ee + self.p_eeb, self.p_ebe + self.p_ebeb

    @property
    def marginal_b(self) -> tuple[float, float]:
        return self.p_ee + self.p_ebe, self.p_eeb + self.p_ebeb


def probs_minus(state: PairState, e: BasisSpec) -> JointProbs:
    if state.kind is not PairKind.MINUS:
        raise ValueError("probs_minus needs a MINUS state")
    p, q, m, n = state.p, state.q, e.m, e.n
    mn2 = (m * n) ** 2
    pq_cos = 2.0 * p * q * mn2 * math.cos(state.alpha)
    same = mn2 + pq_cos
    return JointProbs(
        p_ee=same,
        p_eeb=(p * m * m) ** 2 + (q * n * n) ** 2 - pq_cos,
        p_ebe=(p * n * n) ** 2 + (q * m * m) ** 2 - pq_cos,
        p_ebeb=same,
    )


def probs_plus(state: PairState, e: BasisSpec) -> JointProbs:
    if state.kind is not PairKind.PLUS:
        raise ValueError("probs_plus needs a PLUS state")
    p, q, m, n = state.p, state.q, e.m, e.n
    mn2 = (m * n) ** 2
    pq_cos = 2.0 * p * q * mn2 * math.cos(state.alpha - 2.0 * e.delta)
    cross = mn2 - pq_cos
    return JointProbs(
        p_ee=(p * m * m) ** 2 + (q * n * n) ** 2 + pq_cos,
        p_eeb=cross,
        p_ebe=cross,
        p_ebeb=(p * n * n) ** 2 + (q * m * m) ** 2 + pq_cos,
    )


def probs_mixed(state: PairState, e: BasisSpec, e_prime: BasisSpec) -> JointProbs:
    """Joint probabilities with A measured along ``e`` and B along ``e_prime``.

    For MINUS states the fringe phase is ``alpha - delta + delta'``. PLUS states
    are accepted too; their fringe phase is ``alpha - delta - delta'``.
    """
    p, q = state.p, state.q
    m, n, m2, n2 = e.m, e.n, e_prime.m, e_prime.n
    k = 2.0 * p * q * m * n * m2 * n2
    if state.kind is PairKind.MINUS:
        fringe = k * math.cos(state.alpha - e.delta + e_prime.delta)
        return JointProbs(
            p_ee=(p * m * n2) ** 2 + (q * n * m2) ** 2 + fringe,
            p_eeb=(p * m * m2) ** 2 + (q * n * n2) ** 2 - fringe,
            p_ebe=(p * n * n2) ** 2 + (q * m * m2) ** 2 - fringe,
            p_ebeb=(p * n * m2) ** 2 + (q * m * n2) ** 2 + fringe,
        )
    fringe = k * math.cos(state.alpha - e.delta - e_prime.delta)
    return JointProbs(
        p_ee=(p * m * m2) ** 2 + (q * n * n2) ** 2 + fringe,
        p_eeb=(p * m * n2) ** 2 + (q * n * m2) ** 2 - fringe,
        p_ebe=(p * n * m2) ** 2 + (q * m * n2) ** 2 - fringe,
        p_ebeb=(p * n * n2) ** 2 + (q * m * m2) ** 2 + fringe,
    )


def joint_probs(state: PairState, e: BasisSpec, e_prime: BasisSpec | None = None) -> JointProbs:
    """Dispatch to the same-basis or mixed-basis closed form."""
    if e_prime is None:
        if state.kind is PairKind.MINUS:
            return probs_minus(state, e)
        return probs_plus(state, e)
    return probs_mixed(state, e, e_prime)


def local_probs(
    state: PairState,
    e: BasisSpec,
    e_prime: BasisSpec | None = None,
    party: str = "A",
) -> tuple[float, float]:
    """Marginal ``(P(e), P(ebar))`` for one party, summed from the joint table.

    For party B the returned pair refers to B's own basis (``e_prime`` when given).
    """
    j = joint_probs(state, e, e_prime)
    party = party.upper()
    if party == "A":
        return j.marginal_a
    if party == "B":
        return j.marginal_b
    raise ValueError(f"party must be 'A' or 'B', got {party!r}")


def pair_visibility(state: PairState, e: BasisSpec, e_prime: BasisSpec | None = None) -> float:
    """Half-amplitude of the P+ fringe over the relevant pair phase."""
    if e_prime is None:
        e_prime = e
    return 4.0 * state.p * state.q * e.m * e.n * e_prime.m * e_prime.n


@dataclass(frozen=True)
class CorrelationSummary:
    p_plus: float
    p_minus: float
    rho: float
    visibility: float | None = None
    basis_dot: float | None = None


def correlation_summary(
    j: JointProbs,
    visibility: float | None = None,
    basis_dot: float | None = None,
) -> CorrelationSummary:
    """Aggregate (+)/(-) weights and their ratio; ``rho`` is ``inf`` when P- = 0."""
    p_plus, p_minus = j.p_plus, j.p_minus
    if p_minus == 0.0:
        rho = math.inf
    else:
        rho = p_plus / p_minus
    return CorrelationSummary(p_plus, p_minus, rho, visibility, basis_dot)


def summarize(state: PairState, e: BasisSpec, e_prime: BasisSpec | None = None) -> CorrelationSummary:
    j = joint_probs(state, e, e_prime)
    dot = None if e_prime is None else float(e.bloch_vector() @ e_prime.bloch_vector())
    return correlation_summary(j, pair_visibility(state, e, e_prime), dot)


class Verdict(enum.Enum):
    SATISFIED = "Satisfied"
    VIOLATED = "Violated"


class CriterionId(enum.Enum):
    SINGLET = "Singlet_4_12"
    TRIPLET = "Triplet_4_15"
    EQUAL_WEIGHT = "EqualWeight_4_19"
    PLUS_PRESERVING = "PlusPreserving_5_13"
    PLUS_TO_MINUS = "PlusToMinus_5_16"


@dataclass(frozen=True)
class CriterionReport:
    criterion_id: CriterionId
    verdict: Verdict
    residuals: dict[str, float]
    diagnostics: dict[str, float] = field(default_factory=dict)
    note: str = ""

    @property
    def satisfied(self) -> bool:
        return self.verdict is Verdict.SATISFIED


def _report(cid: CriterionId, residuals: dict[str, float], **extra) -> CriterionReport:
    ok = all(r <= EPS_CRIT for r in residuals.values())
    return CriterionReport(cid, Verdict.SATISFIED if ok else Verdict.VIOLATED, residuals, **extra)


def _need(state: PairState, kind: PairKind) -> None:
    if state.kind is not kind:
        raise ValueError(f"criterion applies to {kind.value} states only")


def check_singlet(state: PairState) -> CriterionReport:
    """Pure singlet: equal weights and ``alpha = pi``; then P+ = 0 in every basis."""
    _need(state, PairKind.MINUS)
    return _report(
        CriterionId.SINGLET,
        {"p_minus_q": abs(state.p - state.q), "alpha_from_pi": circular_distance(state.alpha, math.pi)},
    )


def check_triplet(state: PairState, e: BasisSpec) -> CriterionReport:
    """Full conversion to (+) correlations: equal weights, ``alpha = 0``, equatorial ``e``."""
    _need(state, PairKind.MINUS)
    return _report(
        CriterionId.TRIPLET,
        {
            "p_minus_q": abs(state.p - state.q),
            "alpha_from_0": circular_distance(state.alpha, 0.0),
            "m_minus_n": abs(e.m - e.n),
        },
    )


def check_plus_preserving(state: PairState, e: BasisSpec) -> CriterionReport:
    """PLUS state stays purely (+)-correlated along ``e`` iff the cross amplitude H vanishes.

    The verdict is decided by ``|H|`` alone, so a pole basis passes trivially;
    the parameter-level residuals are reported as diagnostics.
    """
    _need(state, PairKind.PLUS)
    c = rewrite_plus(state, e)
    trivial = e.m * e.n == 0.0
    return _report(
        CriterionId.PLUS_PRESERVING,
        {"abs_H": abs(c.H)},
        diagnostics={
            "p_minus_q": abs(state.p - state.q),
            "delta_from_half_alpha": circular_distance(e.delta, state.alpha / 2.0),
        },
        note="trivial basis" if trivial else "",
    )


def check_plus_to_minus(state: PairState, e: BasisSpec) -> CriterionReport:
    """PLUS state becomes purely (-)-correlated along ``e`` iff F = G = 0."""
    _need(state, PairKind.PLUS)
    c = rewrite_plus(state, e)
    return _report(
        CriterionId.PLUS_TO_MINUS,
        {"abs_F": abs(c.F), "abs_G": abs(c.G)},
        diagnostics={
            "p_minus_q": abs(state.p - state.q),
            "m_minus_n": abs(e.m - e.n),
            "delta_from_target": circular_distance(e.delta, (state.alpha - math.pi) / 2.0),
        },
    )


@dataclass(frozen=True)
class EqualWeightSolution:
    m2_plus: float
    m2_minus: float

    def bases(self, delta: float = 0.0) -> tuple[BasisSpec, BasisSpec]:
        return (
            BasisSpec.from_m_squared(self.m2_plus, delta),
            BasisSpec.from_m_squared(self.m2_minus, delta),
        )


#: cos(alpha) values this close to zero are treated as the boundary cos(alpha) = 0
COS_BOUNDARY_TOL = 1e-12


def equal_weight_basis(state: PairState) -> EqualWeightSolution:
    """Both ``m^2`` roots of the basis where P+ = P- = 1/2 for a MINUS state.

    Real roots exist only when ``cos(alpha) >= 0``; otherwise :class:`NoRealSolution`.
    """
    _need(state, PairKind.MINUS)
    if not state.is_entangled:
        raise Disentangled("equal-weight basis needs p > 0 and q > 0")
    cos_a = math.cos(state.alpha)
    if cos_a < -COS_BOUNDARY_TOL:
        raise NoRealSolution(f"cos(alpha) = {cos_a:.6g} < 0: P+ and P- never balance")
    c = 2.0 * state.p * state.q * max(cos_a, 0.0)
    root = math.sqrt(c / (1.0 + c))
    return EqualWeightSolution(0.5 * (1.0 + root), 0.5 * (1.0 - root))
