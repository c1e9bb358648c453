"""Estimators for the distance to uncontrollability.

Upper bounds come from explicit perturbation constructions, each verified
uncontrollable before it may be used: merging the closest drift eigenvalue
pair, disconnecting the drift across a graph min-cut in the control
eigenbasis, an exhaustive block (projector) search, and removing the drift
outright. The lower bound is rigorous: a Weyl singular-value argument on the
stacked doubled-space adjoint matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .commutant import (COMMUTANT_DIM_GUARD, build_stacked_adjoint,
                        commutant_dimension, extract_original_space_symmetry)
from .errors import (DimensionGuardError, InputError, NumericalError,
                     UncontrollableSystemError)
from .lie_closure import is_controllable_lie
from .linalg import (DEFAULT_TOL, HermitianOperator, ToleranceConfig, as_matrix,
                     hermitian_eigensystem, matrix_from_json, matrix_to_json,
                     operator_norm, rank_and_nullity, traceless_part)
from .system import ControlSystem

METHODS = ("gap_merge", "min_cut", "block_search", "drift_removal", "manual")

BLOCK_SEARCH_DIM_GUARD = 12


@dataclass(frozen=True, eq=False)
class DistanceCertificate:
    """A concrete Hermitian perturbation with its norms and verification state.

    perturbations: list of (generator index, delta) pairs, indices into the
    owning system's flat generator list (drift first). op_norm is the largest
    single ||delta_j||; l11_norm sums entry moduli (for min-cut certificates it
    is evaluated in the control eigenbasis where the cut lives).
    """

    perturbations: list
    op_norm: float
    l11_norm: float
    method: str
    verified_uncontrollable: bool
    symmetry_witness: HermitianOperator | None = None
    detail: str = ""

    def __post_init__(self):
        if self.method not in METHODS:
            raise InputError(f"unknown certificate method {self.method!r}")
        for index, delta in self.perturbations:
            if not isinstance(delta, HermitianOperator):
                raise InputError("certificate perturbations must wrap HermitianOperator")
            if index < 0:
                raise InputError("negative generator index in certificate")

    def max_perturbation_norm(self) -> float:
        return max((operator_norm(d.matrix) for _, d in self.perturbations),
                   default=0.0)


@dataclass(frozen=True, eq=False)
class CutResult:
    """Global minimum cut: a bipartition of the vertices, its weight, and the
    removed edges (i, j, weight)."""

    partition: tuple
    cut_weight: float
    edges_removed: list


@dataclass(frozen=True, eq=False)
class ControlBasisGraph:
    """Weighted graph of drift matrix elements in a control eigenbasis.

    basis columns are the control eigenvectors; blocks groups column indices
    into degenerate eigenspaces (singletons when group_degenerate=False).
    weights sums entry moduli of the drift between blocks (the L11 convention
    minimized by the min-cut); opnorm_weights is the operator norm of the same
    inter-block rectangle, reported for comparison.
    """

    basis: np.ndarray
    blocks: list
    weights: np.ndarray
    opnorm_weights: np.ndarray
    eigenvalues: np.ndarray


@dataclass(frozen=True, eq=False)
class DistanceEstimate:
    upper: DistanceCertificate
    lower: float


def _control_list(controls) -> list[np.ndarray]:
    if isinstance(controls, (list, tuple)):
        items = list(controls)
    else:
        items = [controls]
    if not items:
        raise InputError("need at least one control")
    return [as_matrix(c) for c in items]


def _witness_commutes(m: np.ndarray, gens, tol: ToleranceConfig) -> bool:
    scale = operator_norm(m)
    for g in gens:
        bound = tol.commute_tol * scale * operator_norm(g) + 1e-14
        if operator_norm(m @ g - g @ m) > bound:
            return False
    return True


def _uncontrollable(gens, tol: ToleranceConfig) -> bool:
    d = gens[0].shape[0]
    if d < COMMUTANT_DIM_GUARD:
        return not commutant_dimension(gens, tol=tol,
                                       want_symmetries=False).controllable
    # Beyond the commutant guard: a non-trivial operator commuting with every
    # generator is a rigorous uncontrollability witness (su(d) has a trivial
    # commutant), and the d^2-column SVD that finds it does not suffer the
    # noise amplification deep Lie closures do. Fall back to the closure when
    # no witness exists.
    witness = extract_original_space_symmetry(gens, tol=tol)
    if witness is not None and _witness_commutes(witness.matrix, gens, tol):
        return True
    return not is_controllable_lie(gens, tol=tol, require_traceless=False)


def _certificate(deltas, method, tol, controls, drift, l11=None, witness=None,
                 detail="", drift_index=0):
    """Assemble + verify a drift perturbation certificate against the controls."""
    total = sum((d for d in deltas), np.zeros_like(drift))
    perturbed = [traceless_part(drift + total)] + [traceless_part(c) for c in controls]
    verified = _uncontrollable(perturbed, tol)
    if witness is None and verified:
        witness = extract_original_space_symmetry(perturbed, tol=tol)
    ops = [HermitianOperator(d, traceless=abs(np.trace(d)) <= tol.trace_tol, tol=tol)
           for d in deltas]
    op_norm = max((operator_norm(d) for d in deltas), default=0.0)
    if l11 is None:
        l11 = float(sum(np.sum(np.abs(d)) for d in deltas))
    return DistanceCertificate(
        perturbations=[(drift_index, op) for op in ops],
        op_norm=float(op_norm), l11_norm=float(l11), method=method,
        verified_uncontrollable=verified, symmetry_witness=witness, detail=detail)


def epsilon_upper_gap_merge(drift, control, tol: ToleranceConfig = DEFAULT_TOL
                            ) -> DistanceCertificate:
    """Merge the closest adjacent drift eigenvalue pair into a degeneracy.

    The perturbation shifts the pair symmetrically onto their midpoint, so its
    norm is half the minimum gap (strictly below the one-sided gap bound).
    Creates a symmetry whenever the control leaves a vector of the merged
    eigenspace invariant (always for a rank-1 control); the commutant test on
    the perturbed system decides the verified flag either way. An already
    degenerate spectrum yields a zero perturbation flagged as such.
    """
    hd = as_matrix(drift)
    controls = _control_list(control)
    w, v = hermitian_eigensystem(hd, tol=tol)
    if len(w) < 2:
        raise InputError("gap merge needs dimension >= 2")
    gaps = np.diff(w)
    k = int(np.argmin(gaps))
    g = float(gaps[k])
    if g <= tol.degeneracy_tol:
        delta = np.zeros_like(hd)
        detail = "degenerate spectrum: minimum gap below degeneracy_tol"
    else:
        lo = np.outer(v[:, k], v[:, k].conj())
        hi = np.outer(v[:, k + 1], v[:, k + 1].conj())
        # raise the lower eigenvalue and lower the upper one onto their midpoint
        delta = (g / 2) * (lo - hi)
        delta = (delta + delta.conj().T) / 2
        detail = f"merged eigenvalues {w[k]:.6g} and {w[k + 1]:.6g}"
    return _certificate([delta], "gap_merge", tol, controls, hd, detail=detail)


def _grouped_blocks(eigenvalues: np.ndarray, tol: ToleranceConfig) -> list[list[int]]:
    """Cluster sorted eigenvalue indices whose gaps are below degeneracy_tol."""
    blocks = [[0]]
    for i in range(1, len(eigenvalues)):
        if eigenvalues[i] - eigenvalues[i - 1] <= tol.degeneracy_tol:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


def build_control_basis_graph(drift, control, tol: ToleranceConfig = DEFAULT_TOL,
                              group_degenerate: bool = False) -> ControlBasisGraph:
    """Complete graph on the control eigenbasis weighted by drift couplings.

    weight(i, j) = |<e_i| H_d |e_j>| with {e_k} an eigenbasis of the control.
    With group_degenerate=True, eigenvectors within degeneracy_tol are merged
    into one vertex per eigenspace (basis freedom makes per-vector weights
    ill-defined inside a degenerate block) and the weight between blocks sums
    the entry moduli of the inter-block rectangle.
    """
    hd = as_matrix(drift)
    hc = as_matrix(control)
    if hd.shape != hc.shape:
        raise InputError("drift/control dimension mismatch")
    w, v = hermitian_eigensystem(hc, tol=tol)
    hd_basis = v.conj().T @ hd @ v
    if group_degenerate:
        blocks = _grouped_blocks(w, tol)
    else:
        blocks = [[i] for i in range(len(w))]
    b = len(blocks)
    weights = np.zeros((b, b))
    opnorms = np.zeros((b, b))
    for i in range(b):
        for j in range(i + 1, b):
            rect = hd_basis[np.ix_(blocks[i], blocks[j])]
            weights[i, j] = weights[j, i] = float(np.sum(np.abs(rect)))
            opnorms[i, j] = opnorms[j, i] = operator_norm(rect)
    return ControlBasisGraph(basis=v, blocks=blocks, weights=weights,
                             opnorm_weights=opnorms, eigenvalues=w)


def cut_weight_of(weights: np.ndarray, side) -> float:
    """Canonical crossing-weight sum for a bipartition (sorted index order).

    Both Stoer-Wagner and the brute-force oracle report through this function
    so that equal cuts compare bit-for-bit.
    """
    side = sorted(side)
    inside = set(side)
    other = [j for j in range(weights.shape[0]) if j not in inside]
    total = 0.0
    for i in side:
        for j in other:
            total += float(weights[i, j])
    return total


def stoer_wagner_min_cut(weights) -> CutResult:
    """Global minimum-weight cut of an undirected non-negative weighted graph.

    Classic maximum-adjacency / merge algorithm; ties in the adjacency search
    break toward the smallest vertex index so results are reproducible.
    """
    w0 = np.asarray(weights, dtype=float)
    if w0.ndim != 2 or w0.shape[0] != w0.shape[1]:
        raise InputError("weights must be a square matrix")
    n = w0.shape[0]
    if n < 2:
        raise InputError("min cut needs at least 2 vertices")
    if np.any(w0 < 0) or not np.all(np.isfinite(w0)):
        raise InputError("weights must be finite and non-negative")
    if np.max(np.abs(w0 - w0.T)) > 0:
        raise InputError("weights must be symmetric")

    g = w0.copy()
    np.fill_diagonal(g, 0.0)
    members: list[list[int]] = [[i] for i in range(n)]
    active = list(range(n))
    best_weight = np.inf
    best_side: list[int] = []

    while len(active) > 1:
        start = active[0]
        conn = {u: float(g[start, u]) for u in active if u != start}
        order = [start]
        while conn:
            # most tightly connected vertex; smallest index on ties
            v = min(conn, key=lambda u: (-conn[u], u))
            cut_of_phase = conn.pop(v)
            order.append(v)
            for u in conn:
                conn[u] += float(g[v, u])
        t = order[-1]
        s = order[-2]
        if cut_of_phase < best_weight:
            best_weight = cut_of_phase
            best_side = list(members[t])
        for u in active:
            if u not in (s, t):
                g[s, u] = g[u, s] = g[s, u] + g[t, u]
        members[s] = members[s] + members[t]
        active.remove(t)

    side = tuple(sorted(best_side))
    other = tuple(j for j in range(n) if j not in set(side))
    edges = [(i, j, float(w0[i, j])) for i in side for j in other
             if i < j and w0[i, j] > 0]
    edges += [(j, i, float(w0[j, i])) for i in side for j in other
              if j < i and w0[j, i] > 0]
    edges.sort()
    return CutResult(partition=(side, other),
                     cut_weight=cut_weight_of(w0, side),
                     edges_removed=edges)


def _block_cut_delta(hd: np.ndarray, basis: np.ndarray, blocks, side) -> tuple:
    """Perturbation zeroing the drift entries across a block bipartition.

    `side` lists block indices; returns (delta, projector) in the original
    basis with delta = -(P H Q + Q H P), P the projector onto those blocks.
    """
    cols = [i for bi in side for i in blocks[bi]]
    vp = basis[:, cols]
    p = vp @ vp.conj().T
    p = (p + p.conj().T) / 2
    q = np.eye(hd.shape[0]) - p
    delta = -(p @ hd @ q + q @ hd @ p)
    return (delta + delta.conj().T) / 2, p


def epsilon_upper_min_cut(drift, control, tol: ToleranceConfig = DEFAULT_TOL
                          ) -> DistanceCertificate:
    """Disconnect the drift across the minimum cut of the control-basis graph.

    The removed entries make the perturbed drift block diagonal in an
    eigenbasis of the control, so the block projector is a symmetry of the
    perturbed pair. Minimal in the L_{1,1} norm over this family
    (l11_norm = 2 * cut weight, evaluated in the control eigenbasis);
    the operator norm of the assembled perturbation is reported alongside.
    """
    hd = as_matrix(drift)
    controls = _control_list(control)
    if len(controls) != 1:
        raise InputError("min cut is defined for a single control; "
                         "use the block search for control families")
    graph = build_control_basis_graph(hd, controls[0], tol=tol, group_degenerate=True)
    if len(graph.blocks) < 2:
        # control is (numerically) a multiple of the identity: no usable basis
        raise InputError("control has a single degenerate eigenspace; "
                         "no cut structure available")
    cut = stoer_wagner_min_cut(graph.weights)
    delta, projector = _block_cut_delta(hd, graph.basis, graph.blocks,
                                        cut.partition[0])
    witness = HermitianOperator(projector, tol=tol)
    detail = f"cut weight {cut.cut_weight:.6g}, partition {cut.partition}"
    return _certificate([delta], "min_cut", tol, controls, hd,
                        l11=2 * cut.cut_weight, witness=witness, detail=detail)


def _joint_control_blocks(controls: list[np.ndarray], tol: ToleranceConfig):
    """Finest invariant-subspace decomposition shared by all controls.

    For one control these are its degenerate eigenspaces. For several, a
    generic Hermitian element of the joint commutant is diagonalized; its
    spectral projectors commute with every control. Returns (basis, blocks)
    or None when the joint commutant is trivial.
    """
    if len(controls) == 1:
        w, v = hermitian_eigensystem(controls[0], tol=tol)
        blocks = _grouped_blocks(w, tol)
        return (v, blocks) if len(blocks) > 1 else None
    stacked = build_stacked_adjoint(controls, doubled=False)
    _, nullity, null_basis = rank_and_nullity(stacked, tol=tol)
    if nullity <= 1:
        return None
    d = controls[0].shape[0]
    rng = np.random.default_rng(719)  # fixed: results must be reproducible
    coeffs = rng.standard_normal(null_basis.shape[1]) \
        + 1j * rng.standard_normal(null_basis.shape[1])
    x = (null_basis @ coeffs).reshape(d, d)
    m = (x + x.conj().T) / 2
    if np.linalg.norm(m) < 1e-12:
        m = ((x - x.conj().T) / 2j)
    w, v = np.linalg.eigh(m)
    blocks = _grouped_blocks(w, tol)
    return (v, blocks) if len(blocks) > 1 else None


def epsilon_upper_block_search(drift, controls, tol: ToleranceConfig = DEFAULT_TOL
                               ) -> DistanceCertificate:
    """Smallest operator-norm perturbation over the block-symmetry family.

    Enumerates bipartitions of the controls' joint invariant blocks
    (degenerate eigenspaces are indivisible units) and keeps the one whose
    off-block drift part is smallest in operator norm. When the controls have
    no common block structure at all, the only member of the family is the
    full drift removal.
    """
    hd = as_matrix(drift)
    ctrls = _control_list(controls)
    d = hd.shape[0]
    if d > BLOCK_SEARCH_DIM_GUARD:
        raise DimensionGuardError(
            f"block search enumerates subsets exhaustively; d={d} exceeds "
            f"{BLOCK_SEARCH_DIM_GUARD}. Use the min-cut estimator instead")
    joint = _joint_control_blocks(ctrls, tol)
    if joint is None:
        delta = -traceless_part(hd)
        return _certificate([delta], "block_search", tol, ctrls, hd,
                            detail="trivial joint control commutant; "
                                   "certificate removes the drift")
    basis, blocks = joint
    nb = len(blocks)
    best = None
    for bits in range(1, 2 ** (nb - 1)):
        side = [i for i in range(nb - 1) if bits >> i & 1]
        delta, projector = _block_cut_delta(hd, basis, blocks, side)
        norm = operator_norm(delta)
        if best is None or norm < best[0] - 1e-15:
            best = (norm, delta, projector, tuple(side))
    _, delta, projector, side = best
    witness = HermitianOperator(projector, tol=tol)
    return _certificate([delta], "block_search", tol, ctrls, hd, witness=witness,
                        detail=f"best block subset {side} of {nb} blocks")


def epsilon_upper_drift_removal(drift, controls,
                                tol: ToleranceConfig = DEFAULT_TOL
                                ) -> DistanceCertificate:
    """Remove the drift entirely: for a single control this always verifies,
    since a lone control generates a one-dimensional algebra."""
    hd = as_matrix(drift)
    ctrls = _control_list(controls)
    delta = -traceless_part(hd)
    return _certificate([delta], "drift_removal", tol, ctrls, hd)


def epsilon_lower_svd(system: ControlSystem, perturbed_indices,
                      tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Rigorous lower bound on the distance to uncontrollability.

    Let sigma be the (d^4 - 2)-th largest singular value of the stacked
    doubled-space adjoint matrix of the (controllable) system. A perturbation
    delta_j of one generator moves its block by at most 4 ||delta_j|| in
    operator norm, and losing controllability requires driving sigma to zero,
    so by Weyl's inequality every uncontrollable perturbation of the given m
    generators satisfies max_j ||delta_j|| >= sigma / (4 m).
    """
    indices = sorted(set(int(i) for i in perturbed_indices))
    gens = system.algebra_generators()
    if not indices:
        raise InputError("perturbed_indices must be non-empty")
    if indices[0] < 0 or indices[-1] >= len(gens):
        raise InputError(f"perturbed index out of range 0..{len(gens) - 1}")
    d = system.dim
    if d >= COMMUTANT_DIM_GUARD:
        raise DimensionGuardError("epsilon_lower_svd needs the d^4-column SVD; "
                                  f"unavailable for d >= {COMMUTANT_DIM_GUARD}")
    stacked = build_stacked_adjoint(gens, doubled=True)
    s = np.linalg.svd(stacked, compute_uv=False)
    n = d ** 4
    rank = int(np.count_nonzero(s > tol.rank_rel_tol * s[0])) if s[0] > 0 else 0
    if rank < n - 2:
        raise UncontrollableSystemError(
            "system is not controllable; its distance to uncontrollability is zero")
    sigma = float(s[n - 3])
    return sigma / (4.0 * len(indices))


def verify_certificate(system: ControlSystem, cert: DistanceCertificate,
                       tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Apply the certificate and test uncontrollability from scratch.

    Uses the commutant test; for d <= 4 the Lie-closure test runs as an
    independent cross-check and a disagreement raises NumericalError. For
    d >= 7 (commutant guard) an explicit symmetry witness is sought first,
    with the Lie-closure verdict as fallback.
    """
    perturbed = system.with_perturbations(
        [(i, d.matrix) for i, d in cert.perturbations], tol=tol)
    gens = perturbed.algebra_generators()
    d = perturbed.dim
    if d >= COMMUTANT_DIM_GUARD:
        return _uncontrollable(gens, tol)
    commutant_verdict = commutant_dimension(gens, tol=tol,
                                            want_symmetries=False).controllable
    if d <= 4:
        lie_verdict = is_controllable_lie(gens, tol=tol, require_traceless=False)
        if lie_verdict != commutant_verdict:
            raise NumericalError(
                f"controllability oracles disagree at d={d}: "
                f"lie={lie_verdict}, commutant={commutant_verdict}")
    return not commutant_verdict


def _remove_bounded_certificate(system: ControlSystem, tol: ToleranceConfig
                                ) -> DistanceEstimate:
    """Driftless analogue of drift removal: cancel every bounded generator.

    This is how amplitude-capped couplings (e.g. a cross-Kerr term) are
    priced: if the unbounded controls alone are not universal, removing the
    bounded set is a verified uncontrollable perturbation with
    max_j ||delta_j|| = the largest bounded generator norm.
    """
    if not system.bounded:
        raise InputError("system has neither drift nor bounded generators "
                         "to perturb")
    remaining = [traceless_part(op.matrix) for op in system.unbounded]
    if remaining and not _uncontrollable(remaining, tol):
        raise InputError("the unbounded controls alone are controllable: no "
                         "perturbation of the bounded generators can render "
                         "the system uncontrollable")
    deltas = [-traceless_part(b.operator.matrix) for b in system.bounded]
    witness = None
    if remaining:
        witness = extract_original_space_symmetry(remaining, tol=tol)
    ops = [HermitianOperator(d, traceless=abs(np.trace(d)) <= tol.trace_tol,
                             tol=tol) for d in deltas]
    cert = DistanceCertificate(
        perturbations=list(enumerate(ops)),
        op_norm=max(operator_norm(d) for d in deltas),
        l11_norm=float(sum(np.sum(np.abs(d)) for d in deltas)),
        method="drift_removal", verified_uncontrollable=True,
        symmetry_witness=witness,
        detail="removed all bounded generators")
    try:
        lower = epsilon_lower_svd(system, list(range(len(system.bounded))),
                                  tol=tol)
    except DimensionGuardError:
        lower = 0.0
    return DistanceEstimate(upper=cert, lower=lower)


def epsilon_best(system: ControlSystem, tol: ToleranceConfig = DEFAULT_TOL,
                 methods=("gap_merge", "min_cut", "block_search", "drift_removal")
                 ) -> DistanceEstimate:
    """Best verified upper-bound certificate plus the SVD lower bound.

    The estimators perturb the drift; for a driftless system the bounded
    generators are removed instead. Requires a controllable system whose
    unperturbed controls are not already controllable on their own
    (otherwise the distance is infinite).
    """
    unknown = set(methods) - {"gap_merge", "min_cut", "block_search",
                              "drift_removal"}
    if unknown:
        raise InputError(f"unknown distance methods: {sorted(unknown)}")
    gens = system.algebra_generators()
    if not is_controllable_lie(gens, tol=tol, require_traceless=False):
        raise UncontrollableSystemError("system is already uncontrollable")
    if system.drift is None:
        return _remove_bounded_certificate(system, tol)
    controls = gens[1:]
    if is_controllable_lie(controls, tol=tol, require_traceless=False):
        raise InputError("the controls alone are controllable: no drift "
                         "perturbation can render the system uncontrollable")

    hd = gens[0]
    certificates: list[DistanceCertificate] = []
    for method in methods:
        if method == "gap_merge":
            certificates.append(epsilon_upper_gap_merge(hd, controls, tol=tol))
        elif method == "min_cut" and len(controls) == 1:
            try:
                certificates.append(epsilon_upper_min_cut(hd, controls[0], tol=tol))
            except InputError:
                pass  # no cut structure (control ~ identity)
        elif method == "block_search" and system.dim <= BLOCK_SEARCH_DIM_GUARD:
            certificates.append(epsilon_upper_block_search(hd, controls, tol=tol))
        elif method == "drift_removal":
            certificates.append(epsilon_upper_drift_removal(hd, controls, tol=tol))

    verified = [c for c in certificates if c.verified_uncontrollable]
    if not verified:
        raise NumericalError("no estimator produced a verified certificate "
                             "(drift removal should always verify here)")
    upper = min(verified, key=lambda c: c.op_norm)
    try:
        lower = epsilon_lower_svd(system, [0], tol=tol)
    except DimensionGuardError:
        lower = 0.0  # trivially valid; the d^4-column SVD is gated at this size
    return DistanceEstimate(upper=upper, lower=lower)


def certificate_to_json(cert: DistanceCertificate) -> dict:
    return {
        "format": 1,
        "method": cert.method,
        "perturbations": [{"index": int(i), "matrix": matrix_to_json(d.matrix)}
                          for i, d in cert.perturbations],
        "op_norm": float(cert.op_norm),
        "l11_norm": float(cert.l11_norm),
        "verified_uncontrollable": bool(cert.verified_uncontrollable),
        "symmetry_witness": None if cert.symmetry_witness is None
        else matrix_to_json(cert.symmetry_witness.matrix),
        "detail": cert.detail,
    }


def certificate_from_json(obj, tol: ToleranceConfig = DEFAULT_TOL
                          ) -> DistanceCertificate:
    if not isinstance(obj, dict):
        raise InputError("certificate JSON must be an object")
    keys = {"format", "method", "perturbations", "op_norm", "l11_norm",
            "verified_uncontrollable", "symmetry_witness", "detail"}
    extra = set(obj) - keys
    if extra:
        raise InputError(f"unknown keys in certificate JSON: {sorted(extra)}")
    if obj.get("format") != 1:
        raise InputError(f"unsupported certificate format {obj.get('format')!r}")
    perturbations = []
    for entry in obj.get("perturbations", []):
        if set(entry) - {"index", "matrix"}:
            raise InputError("perturbation entries must have keys index, matrix")
        m = matrix_from_json(entry["matrix"])
        op = HermitianOperator(m, traceless=abs(np.trace(m)) <= tol.trace_tol, tol=tol)
        perturbations.append((int(entry["index"]), op))
    witness = obj.get("symmetry_witness")
    witness_op = None
    if witness is not None:
        wm = matrix_from_json(witness)
        witness_op = HermitianOperator(wm, traceless=abs(np.trace(wm)) <= tol.trace_tol,
                                       tol=tol)
    return DistanceCertificate(
        perturbations=perturbations,
        op_norm=float(obj["op_norm"]),
        l11_norm=float(obj["l11_norm"]),
        method=str(obj["method"]),
        verified_uncontrollable=bool(obj["verified_uncontrollable"]),
        symmetry_witness=witness_op,
        detail=str(obj.get("detail", "")),
    )
