"""Brute-force state-vector check of every closed-form probability.

The projection path here only builds the basis bras
``<e| = (m, n e^{-i delta})`` and ``<ebar| = (n, -m e^{-i delta})`` from the raw
angles and takes Kronecker products; it never calls the coefficient formulas
it is used to check.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from spinpair import bloch, correlations
from spinpair.bloch import BasisSpec, SingleQubitState
from spinpair.pairstate import NotNormalized, PairKind, PairState, TwoQubitVector, to_general

#: trials per independently seeded partition; fixed so results do not depend on worker count
PARTITION_SIZE = 1000


def basis_bras(chi: float, delta: float) -> np.ndarray:
    """Rows are ``<e|`` and ``<ebar|`` on the (up, down) basis."""
    m, n = np.cos(chi / 2.0), np.sin(chi / 2.0)
    w = np.exp(-1j * delta)
    return np.array([[m, n * w], [n, -m * w]], dtype=complex)


def _bras(b: BasisSpec) -> np.ndarray:
    return basis_bras(b.chi, b.delta)


@dataclass(frozen=True)
class ProjectionResult:
    probs: tuple[float, float, float, float]
    amps: tuple[complex, complex, complex, complex]


def project(v: TwoQubitVector | np.ndarray, e: BasisSpec, e_prime: BasisSpec | None = None) -> ProjectionResult:
    """Amplitudes ``(<x| (x) <y'|) v`` for x in (e, ebar), y' in (e', ebar')."""
    vec = v.as_array() if isinstance(v, TwoQubitVector) else np.asarray(v, dtype=complex)
    norm2 = float(np.vdot(vec, vec).real)
    if abs(norm2 - 1.0) > 1e-9:
        raise NotNormalized(f"squared norm {norm2!r}, expected 1")
    if e_prime is None:
        e_prime = e
    amps = np.kron(_bras(e), _bras(e_prime)) @ vec
    probs = np.abs(amps) ** 2
    return ProjectionResult(tuple(probs.tolist()), tuple(amps.tolist()))


def back_transform(amps, e: BasisSpec, e_prime: BasisSpec | None = None) -> np.ndarray:
    """Inverse of :func:`project`: rebuild the z-basis vector from rotated amplitudes."""
    if e_prime is None:
        e_prime = e
    u = np.kron(_bras(e), _bras(e_prime))
    return u.conj().T @ np.asarray(amps, dtype=complex)


def project_single(s: SingleQubitState, e: BasisSpec) -> tuple[float, float]:
    ket = np.array([s.a, s.b * np.exp(1j * s.phi)])
    amps = _bras(e) @ ket
    return tuple((np.abs(amps) ** 2).tolist())


def project_state(state: PairState, e: BasisSpec, e_prime: BasisSpec | None = None) -> ProjectionResult:
    return project(to_general(state), e, e_prime)


def bras_batch(chi: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Stack of ``basis_bras`` for arrays of angles, shape (N, 2, 2)."""
    m, n = np.cos(chi / 2.0), np.sin(chi / 2.0)
    w = np.exp(-1j * delta)
    return np.stack([np.stack([m, n * w], -1), np.stack([n, -m * w], -1)], -2)


def project_batch(vecs: np.ndarray, bras_a: np.ndarray, bras_b: np.ndarray) -> np.ndarray:
    """Outcome probabilities for N z-basis vectors, shape (N, 4)."""
    amps = np.einsum("nac,nbd,ncd->nab", bras_a, bras_b, vecs.reshape(-1, 2, 2))
    return np.abs(amps.reshape(-1, 4)) ** 2


def _marginals(probs: np.ndarray) -> np.ndarray:
    """(P_A(e), P_A(ebar), P_B(e'), P_B(ebar')) from (N, 4) joint tables."""
    p = np.asarray(probs)
    return np.stack([p[..., 0] + p[..., 1], p[..., 2] + p[..., 3], p[..., 0] + p[..., 2], p[..., 1] + p[..., 3]], -1)


@dataclass
class _Batch:
    """One partition of random parameters, plus the oracle's view of them."""

    minus: list
    plus: list
    e: list
    e2: list
    single: list
    vec_minus: np.ndarray
    vec_plus: np.ndarray
    bras_e: np.ndarray
    bras_e2: np.ndarray
    kets: np.ndarray

    @classmethod
    def draw(cls, rng: np.random.Generator, count: int) -> _Batch:
        p = rng.uniform(0.0, 1.0, count)
        q = np.sqrt(np.maximum(0.0, 1.0 - p * p))
        alpha = rng.uniform(0.0, 2.0 * math.pi, count)
        chi, chi2, theta = rng.uniform(0.0, math.pi, (3, count))
        delta, delta2, phi = rng.uniform(0.0, 2.0 * math.pi, (3, count))
        qt = q * np.exp(1j * alpha)
        zero = np.zeros(count)
        e = [BasisSpec(c, d) for c, d in zip(chi, delta)]
        e2 = [BasisSpec(c, d) for c, d in zip(chi2, delta2)]
        single = [SingleQubitState.from_angles(t, f) for t, f in zip(theta, phi)]
        # oracle inputs come straight from the raw draws, not from the dataclasses
        return cls(
            minus=[PairState(PairKind.MINUS, a, b, c) for a, b, c in zip(p, q, alpha)],
            plus=[PairState(PairKind.PLUS, a, b, c) for a, b, c in zip(p, q, alpha)],
            e=e,
            e2=e2,
            single=single,
            vec_minus=np.stack([zero, p, qt, zero], -1).astype(complex),
            vec_plus=np.stack([p, zero, zero, qt], -1).astype(complex),
            bras_e=bras_batch(chi, delta),
            bras_e2=bras_batch(chi2, delta2),
            kets=np.stack([np.cos(theta / 2), np.sin(theta / 2) * np.exp(1j * phi)], -1),
        )


def _dev(got, ref) -> float:
    return float(np.max(np.abs(np.asarray(got, dtype=float) - ref)))


def _check_single(b: _Batch) -> float:
    ref = np.abs(np.einsum("nij,nj->ni", b.bras_e, b.kets)) ** 2
    return _dev([bloch.single_measure_probs(s, e) for s, e in zip(b.single, b.e)], ref)


def _check_minus(b: _Batch) -> float:
    ref = project_batch(b.vec_minus, b.bras_e, b.bras_e)
    return _dev([correlations.probs_minus(s, e).as_tuple() for s, e in zip(b.minus, b.e)], ref)


def _check_plus(b: _Batch) -> float:
    ref = project_batch(b.vec_plus, b.bras_e, b.bras_e)
    return _dev([correlations.probs_plus(s, e).as_tuple() for s, e in zip(b.plus, b.e)], ref)


def _check_mixed(b: _Batch) -> float:
    dev = 0.0
    for states, vecs in ((b.minus, b.vec_minus), (b.plus, b.vec_plus)):
        ref = project_batch(vecs, b.bras_e, b.bras_e2)
        got = [correlations.probs_mixed(s, e, e2).as_tuple() for s, e, e2 in zip(states, b.e, b.e2)]
        dev = max(dev, _dev(got, ref))
    return dev


def _check_local(b: _Batch) -> float:
    dev = 0.0
    for states, vecs in ((b.minus, b.vec_minus), (b.plus, b.vec_plus)):
        for mixed in (False, True):
            bras_b = b.bras_e2 if mixed else b.bras_e
            ref = _marginals(project_batch(vecs, b.bras_e, bras_b))
            got = []
            for s, e, e2 in zip(states, b.e, b.e2):
                other = e2 if mixed else None
                got.append(
                    correlations.local_probs(s, e, other, "A") + correlations.local_probs(s, e, other, "B")
                )
            dev = max(dev, _dev(got, ref))
    return dev


# family name -> checker returning the max |closed form - oracle| over a batch
FAMILIES = {
    "single": _check_single,
    "minus": _check_minus,
    "plus": _check_plus,
    "mixed": _check_mixed,
    "local": _check_local,
}


@dataclass
class VerificationSummary:
    trials: int
    seed: int
    tol: float
    max_deviation: dict[str, float] = field(default_factory=dict)

    @property
    def failing(self) -> list[str]:
        return [k for k, v in self.max_deviation.items() if not v <= self.tol]

    @property
    def passed(self) -> bool:
        return not self.failing


def _run_partition(seed_seq: np.random.SeedSequence, count: int) -> dict[str, float]:
    batch = _Batch.draw(np.random.default_rng(seed_seq), count)
    return {name: check(batch) for name, check in FAMILIES.items()}


def verify_closed_forms(trials: int, seed: int, tol: float = 1e-12, workers: int = 1) -> VerificationSummary:
    """Compare every closed form against :func:`project` on random parameters.

    Sampling: ``p ~ U[0, 1]``, ``q = sqrt(1 - p^2)``, azimuths ``~ U[0, 2pi)``,
    polar angles ``~ U[0, pi]``. Trials are split into fixed-size partitions
    with spawned seeds, so the summary is identical for any ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    sizes = [PARTITION_SIZE] * (trials // PARTITION_SIZE)
    if trials % PARTITION_SIZE:
        sizes.append(trials % PARTITION_SIZE)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_partition, seqs, sizes))
    else:
        parts = [_run_partition(s, k) for s, k in zip(seqs, sizes)]
    summary = VerificationSummary(trials, seed, tol)
    for name in FAMILIES:
        vals = [part[name] for part in parts]
        summary.max_deviation[name] = math.nan if any(map(math.isnan, vals)) else max(vals)
    return summary
