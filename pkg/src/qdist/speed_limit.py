"""Quantum-speed-limit bounds from distance certificates.

A verified perturbation of size epsilon that renders the system
uncontrollable forces a minimum control time T* >= delta / (c * epsilon):
any pulse of total time T moves the perturbed and unperturbed propagators
apart by at most c * epsilon * T, while some target unitary stays at least
delta away from everything the perturbed (uncontrollable) system can reach.
delta is sqrt(2) when the perturbed system has an original-space symmetry
and 1/4 universally.

Sign convention throughout: dU/dt = +i H(t) U(t), so a constant segment
contributes exp(+i H dt).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .commutant import extract_original_space_symmetry
from .distance import (DistanceCertificate, certificate_to_json, epsilon_lower_svd)
from .errors import (DimensionGuardError, InputError, UncontrollableSystemError)
from .lie_closure import is_controllable_lie
from .linalg import (DEFAULT_TOL, HermitianOperator, ToleranceConfig, as_matrix,
                     commutator, hermitian_eigensystem, operator_norm)
from .system import ControlSystem

DELTA_UNIVERSAL = 0.25          # dimension-independent floor
DELTA_SYMMETRY = float(np.sqrt(2.0))  # orthogonal-state floor with a symmetry

PROVENANCE_UNIVERSAL = "universal_quarter"
PROVENANCE_SYMMETRY = "symmetry_sqrt2"


@dataclass(frozen=True, eq=False)
class PiecewisePulse:
    """Piecewise-constant pulse: positive segment durations and one amplitude
    row per segment (bounded controls first, then unbounded; the drift is
    implicit with amplitude 1)."""

    durations: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        durations = np.asarray(self.durations, dtype=float)
        amplitudes = np.asarray(self.amplitudes, dtype=float)
        if durations.ndim != 1 or durations.size == 0:
            raise InputError("durations must be a non-empty 1-D sequence")
        if np.any(~np.isfinite(durations)) or np.any(durations <= 0):
            raise InputError("all segment durations must be finite and > 0")
        if amplitudes.ndim != 2 or amplitudes.shape[0] != durations.size:
            raise InputError("amplitudes must be one row per segment")
        if not np.all(np.isfinite(amplitudes)):
            raise InputError("pulse amplitudes must be finite")
        durations.setflags(write=False)
        amplitudes.setflags(write=False)
        object.__setattr__(self, "durations", durations)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def segments(self) -> int:
        return self.durations.size

    @property
    def total_duration(self) -> float:
        return float(np.sum(self.durations))


@dataclass(frozen=True, eq=False)
class SpeedLimitReport:
    """Distance bounds, the geometric constant, and the resulting T* bound."""

    epsilon_upper: float
    epsilon_lower: float | None
    delta_lower: float
    delta_provenance: str
    amplitude_cap_c: float
    t_star_lower: float
    certificate: DistanceCertificate

    def to_dict(self) -> dict:
        return {
            "epsilon_upper": self.epsilon_upper,
            "epsilon_lower": self.epsilon_lower,
            "delta_lower": self.delta_lower,
            "delta_provenance": self.delta_provenance,
            "amplitude_cap_c": self.amplitude_cap_c,
            "t_star_lower": self.t_star_lower,
            "certificate": certificate_to_json(self.certificate),
        }


@dataclass(frozen=True, eq=False)
class InequalityCheck:
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True, eq=False)
class ProbeResult:
    """Reachability distance probe output. certified=True only for the exact
    sqrt(2) symmetry floor; sampled values are heuristic upper estimates of
    the infimum for the given target, never bounds."""

    value: float
    certified: bool
    method: str


def _validate_pulse(system: ControlSystem, pulse: PiecewisePulse) -> None:
    n_controls = len(system.bounded) + len(system.unbounded)
    if pulse.amplitudes.shape[1] != n_controls:
        raise InputError(f"pulse has {pulse.amplitudes.shape[1]} amplitude columns, "
                         f"system has {n_controls} controls")
    for j, b in enumerate(system.bounded):
        worst = float(np.max(np.abs(pulse.amplitudes[:, j]))) if pulse.segments else 0.0
        if worst > b.cap * (1 + 1e-12):
            raise InputError(f"pulse violates cap on bounded control {j}: "
                             f"|amplitude| {worst} > {b.cap}")


def _segment_unitary(h: np.ndarray, dt: float) -> np.ndarray:
    # eigendecomposition keeps the result unitary at machine precision
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.exp(1j * w * dt)) @ v.conj().T


def evolve(system: ControlSystem, pulse: PiecewisePulse) -> np.ndarray:
    """Propagator of the piecewise-constant pulse, later segments leftmost."""
    _validate_pulse(system, pulse)
    d = system.dim
    mats = [b.operator.matrix for b in system.bounded]
    mats += [op.matrix for op in system.unbounded]
    drift = system.drift.matrix if system.drift is not None else np.zeros((d, d))
    u = np.eye(d, dtype=complex)
    for seg in range(pulse.segments):
        h = drift.astype(complex).copy()
        for j, m in enumerate(mats):
            a = pulse.amplitudes[seg, j]
            if a != 0.0:
                h = h + a * m
        u = _segment_unitary(h, float(pulse.durations[seg])) @ u
    return u


def delta_lower_bound(system: ControlSystem, cert: DistanceCertificate,
                      tol: ToleranceConfig = DEFAULT_TOL) -> tuple[float, str]:
    """Geometric constant for the certificate: sqrt(2) if its symmetry witness
    re-verifies against every generator of the perturbed system, else 1/4."""
    if not cert.verified_uncontrollable:
        raise InputError("delta_lower_bound requires a verified certificate")
    witness = cert.symmetry_witness
    if witness is None:
        return DELTA_UNIVERSAL, PROVENANCE_UNIVERSAL
    m = witness.matrix
    m_norm = operator_norm(m)
    d = m.shape[0]
    nontrivial = operator_norm(m - (np.trace(m) / d) * np.eye(d)) > 1e-8 * max(m_norm, 1)
    if not nontrivial:
        return DELTA_UNIVERSAL, PROVENANCE_UNIVERSAL
    perturbed = system.with_perturbations(
        [(i, delta.matrix) for i, delta in cert.perturbations], tol=tol)
    for gen in perturbed.generators():
        g = gen.matrix
        bound = tol.commute_tol * m_norm * operator_norm(g) + 1e-14
        if operator_norm(commutator(m, g)) > bound:
            return DELTA_UNIVERSAL, PROVENANCE_UNIVERSAL
    return DELTA_SYMMETRY, PROVENANCE_SYMMETRY


def t_star_lower(system: ControlSystem, cert: DistanceCertificate,
                 delta: float | None = None, provenance: str | None = None,
                 tol: ToleranceConfig = DEFAULT_TOL,
                 compute_lower: bool = True) -> SpeedLimitReport:
    """Speed-limit report T* >= delta / (c * epsilon_eff).

    epsilon_eff is ||delta H|| for a single perturbed generator and
    M * max_j ||delta_j|| when M generators are perturbed simultaneously
    (the conservative inversion of the per-generator budget epsilon/M).
    c is the largest amplitude cap among the perturbed generators, 1 when
    only the drift is perturbed. Certificates touching unbounded controls
    are rejected: an unbounded amplitude defeats the propagation bound.
    """
    if not cert.verified_uncontrollable:
        raise InputError("t_star_lower requires a verified certificate")
    if not cert.perturbations:
        raise InputError("certificate carries no perturbation")
    caps = []
    norms = []
    for index, delta_op in cert.perturbations:
        cap = system.amplitude_cap(index)
        if cap is None:
            raise InputError(
                f"certificate perturbs unbounded generator {index}; the "
                "speed-limit argument needs a bounded amplitude")
        caps.append(cap)
        norms.append(operator_norm(delta_op.matrix))
    m_count = len(cert.perturbations)
    eps_eff = norms[0] if m_count == 1 else m_count * max(norms)
    if eps_eff <= 0:
        raise InputError("certificate has zero effective perturbation norm")
    cap_c = max(caps)
    if delta is None:
        delta, provenance = delta_lower_bound(system, cert, tol=tol)
    elif provenance is None:
        provenance = (PROVENANCE_SYMMETRY if delta == DELTA_SYMMETRY
                      else PROVENANCE_UNIVERSAL)
    eps_lower = None
    if compute_lower:
        try:
            eps_lower = epsilon_lower_svd(
                system, sorted({i for i, _ in cert.perturbations}), tol=tol)
        except (DimensionGuardError, UncontrollableSystemError):
            eps_lower = None
    return SpeedLimitReport(
        epsilon_upper=float(eps_eff), epsilon_lower=eps_lower,
        delta_lower=float(delta), delta_provenance=provenance,
        amplitude_cap_c=float(cap_c),
        t_star_lower=float(delta / (cap_c * eps_eff)),
        certificate=cert)


def verify_perturbation_inequality(system: ControlSystem,
                                   cert: DistanceCertificate,
                                   pulse: PiecewisePulse,
                                   tol: ToleranceConfig = DEFAULT_TOL,
                                   slack: float = 1e-9) -> InequalityCheck:
    """Check ||U_perturbed - U|| <= sum_segments dt * sum_j |g_j| ||delta_j||.

    The right-hand side uses the actual pulse amplitudes (1 for the drift),
    so the check is meaningful for bounded and unbounded perturbed
    generators alike.
    """
    u1 = evolve(system, pulse)
    perturbed = system.with_perturbations(
        [(i, d.matrix) for i, d in cert.perturbations], tol=tol)
    u2 = evolve(perturbed, pulse)
    lhs = operator_norm(u2 - u1)

    offset = 1 if system.drift is not None else 0
    rhs = 0.0
    for index, delta_op in cert.perturbations:
        norm = operator_norm(delta_op.matrix)
        if system.drift is not None and index == 0:
            rhs += norm * pulse.total_duration
        else:
            col = index - offset
            rhs += norm * float(np.sum(pulse.durations
                                       * np.abs(pulse.amplitudes[:, col])))
    return InequalityCheck(lhs=float(lhs), rhs=float(rhs),
                           holds=bool(lhs <= rhs + slack))


def _random_pulse(system: ControlSystem, rng, segments: int = 8) -> PiecewisePulse:
    durations = rng.uniform(0.05, 1.5, size=segments)
    cols = []
    for b in system.bounded:
        cols.append(rng.uniform(-b.cap, b.cap, size=segments))
    for _ in system.unbounded:
        cols.append(rng.normal(0.0, 2.0, size=segments))
    amplitudes = np.column_stack(cols) if cols else np.zeros((segments, 0))
    return PiecewisePulse(durations=durations, amplitudes=amplitudes)


def reachable_distance_probe(system: ControlSystem, target,
                             sample_budget: int = 200, seed=0,
                             tol: ToleranceConfig = DEFAULT_TOL) -> ProbeResult:
    """How far the target unitary stays from everything this (uncontrollable)
    system can reach.

    If the system has an original-space symmetry whose spectral projector P
    satisfies P (target) P = 0 (the target maps range(P) into its kernel),
    the exact floor sqrt(2) is certified: orthogonal states stay at distance
    sqrt(2). Otherwise random piecewise pulses are sampled and the smallest
    ||U_pulse - target|| is returned as a heuristic estimate only.
    """
    u_target = as_matrix(target)
    d = system.dim
    if u_target.shape != (d, d):
        raise InputError("target dimension mismatch")
    gens = system.algebra_generators()
    if is_controllable_lie(gens, tol=tol, require_traceless=False):
        raise InputError("system is controllable: every unitary is reachable "
                         "and the probe is meaningless")
    witness = extract_original_space_symmetry(gens, tol=tol)
    if witness is not None:
        w, v = hermitian_eigensystem(witness.matrix, tol=tol)
        boundaries = [0] + [i for i in range(1, d)
                            if w[i] - w[i - 1] > tol.degeneracy_tol] + [d]
        for a, b in zip(boundaries[:-1], boundaries[1:]):
            if b - a == d:
                continue
            vp = v[:, a:b]
            p = vp @ vp.conj().T
            if operator_norm(p @ u_target @ p) <= 1e-9:
                return ProbeResult(value=DELTA_SYMMETRY, certified=True,
                                   method="symmetry_floor")
    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(int(sample_budget)):
        u = evolve(system, _random_pulse(system, rng))
        best = min(best, operator_norm(u - u_target))
    return ProbeResult(value=float(best), certified=False,
                       method="sampled_upper_estimate")


def pulse_to_json(pulse: PiecewisePulse) -> dict:
    return {"durations": [float(x) for x in pulse.durations],
            "amplitudes": [[float(x) for x in row] for row in pulse.amplitudes]}


def pulse_from_json(obj) -> PiecewisePulse:
    if not isinstance(obj, dict) or set(obj) - {"durations", "amplitudes"}:
        raise InputError('pulse JSON must be {"durations": [...], "amplitudes": [[...]]}')
    try:
        durations = np.asarray(obj["durations"], dtype=float)
        amplitudes = np.asarray(obj["amplitudes"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed pulse JSON: {exc}") from exc
    if amplitudes.ndim == 1:
        amplitudes = amplitudes.reshape(durations.size, -1)
    return PiecewisePulse(durations=durations, amplitudes=amplitudes)
