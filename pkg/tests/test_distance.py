import itertools

import numpy as np
import pytest

from qdist import (DistanceCertificate, HermitianOperator, InputError,
                   UncontrollableSystemError, build_control_basis_graph,
                   commutator, cut_weight_of, epsilon_best, epsilon_lower_svd,
                   epsilon_upper_block_search, epsilon_upper_drift_removal,
                   epsilon_upper_gap_merge, epsilon_upper_min_cut, haar_unitary,
                   hermitian_eigensystem, make_system, operator_norm,
                   random_hermitian, stoer_wagner_min_cut, verify_certificate)
from qdist.distance import certificate_from_json, certificate_to_json
from qdist.models import (build_hopping_chain, build_two_qubit_ising,
                          hopping_drift, hopping_spectrum, pauli_on,
                          site_projector)

from conftest import PAULI_X, PAULI_Z, random_pair_system


def brute_force_min_cut(weights):
    n = weights.shape[0]
    best = np.inf
    best_side = None
    for bits in range(1, 2 ** (n - 1)):
        side = [i for i in range(n - 1) if bits >> i & 1]
        w = cut_weight_of(weights, side)
        if w < best:
            best = w
            best_side = side
    return best, best_side


class TestGapMerge:
    def test_hopping_three_sites(self):
        cert = epsilon_upper_gap_merge(hopping_drift(3), site_projector(3, 0))
        assert cert.op_norm == pytest.approx(np.sqrt(2) / 2, abs=1e-12)
        assert cert.verified_uncontrollable
        assert cert.method == "gap_merge"

    def test_hopping_d10_norm_and_gap_bound(self):
        d = 10
        cert = epsilon_upper_gap_merge(hopping_drift(d), site_projector(d, 0))
        gap = 2 * (np.cos(np.pi / 11) - np.cos(2 * np.pi / 11))
        assert cert.op_norm == pytest.approx(gap / 2, abs=1e-12)
        assert gap <= 3 * np.pi ** 2 / d ** 2
        assert cert.verified_uncontrollable

    def test_diagonal_drift_merges_closest_pair(self):
        cert = epsilon_upper_gap_merge(np.diag([0.0, 1.0, 3.0]).astype(complex),
                                       site_projector(3, 0))
        assert cert.op_norm == pytest.approx(0.5, abs=1e-12)
        assert "0" in cert.detail and "1" in cert.detail

    def test_degenerate_spectrum_zero_certificate(self):
        drift = np.kron(PAULI_Z, PAULI_Z)
        controls = [pauli_on(2, 0, "X"), pauli_on(2, 0, "Y"),
                    pauli_on(2, 1, "X"), pauli_on(2, 1, "Y")]
        cert = epsilon_upper_gap_merge(drift, controls)
        assert cert.op_norm == 0.0
        assert "degenerate" in cert.detail
        assert not cert.verified_uncontrollable  # zero shift proves nothing here

    def test_norm_is_exactly_half_min_gap(self, rng):
        for seed in range(5):
            drift = random_hermitian(4, seed, traceless=True).matrix
            w, _ = hermitian_eigensystem(drift)
            cert = epsilon_upper_gap_merge(drift, site_projector(4, 0))
            assert cert.op_norm == pytest.approx(np.min(np.diff(w)) / 2, rel=1e-10)


class TestControlBasisGraph:
    def test_commuting_pair_all_zero(self):
        g = build_control_basis_graph(np.diag([1.0, -1.0, 0.0]),
                                      np.diag([0.5, 0.2, -0.7]))
        assert np.max(g.weights) == 0.0

    def test_hopping_chain_is_path_graph(self):
        d = 4
        g = build_control_basis_graph(hopping_drift(d), site_projector(d, 0))
        assert len(g.blocks) == d
        # weight 1 exactly between chain neighbours, 0 otherwise
        sites = [int(np.argmax(np.abs(g.basis[:, b[0]]))) for b in g.blocks]
        for i in range(d):
            for j in range(i + 1, d):
                expected = 1.0 if abs(sites[i] - sites[j]) == 1 else 0.0
                assert g.weights[i, j] == pytest.approx(expected, abs=1e-12)

    def test_weights_match_change_of_basis(self, rng):
        drift = random_hermitian(4, 21, traceless=True).matrix
        control = random_hermitian(4, 22, traceless=True).matrix
        g = build_control_basis_graph(drift, control)
        w, v = hermitian_eigensystem(control)
        for i in range(4):
            for j in range(i + 1, 4):
                expected = abs(v[:, i].conj() @ drift @ v[:, j])
                assert g.weights[i, j] == pytest.approx(expected, abs=1e-10)

    def test_grouping_merges_degenerate_space(self):
        g = build_control_basis_graph(hopping_drift(4), site_projector(4, 0),
                                      group_degenerate=True)
        assert len(g.blocks) == 2  # rank-1 control: eigenvalue 0 is 3-fold


class TestStoerWagner:
    def test_two_vertices(self):
        cut = stoer_wagner_min_cut(np.array([[0.0, 3.5], [3.5, 0.0]]))
        assert cut.cut_weight == pytest.approx(3.5)
        assert sorted(map(sorted, cut.partition)) == [[0], [1]]

    def test_path_graph_middle_edge(self):
        w = np.zeros((4, 4))
        w[0, 1] = w[1, 0] = 3.0
        w[1, 2] = w[2, 1] = 1.0
        w[2, 3] = w[3, 2] = 2.0
        cut = stoer_wagner_min_cut(w)
        assert cut.cut_weight == pytest.approx(1.0)
        assert sorted(map(sorted, cut.partition)) == [[0, 1], [2, 3]]
        assert cut.edges_removed == [(1, 2, 1.0)]

    def test_disconnected_graph(self):
        w = np.zeros((4, 4))
        w[0, 1] = w[1, 0] = 2.0
        w[2, 3] = w[3, 2] = 1.0
        cut = stoer_wagner_min_cut(w)
        assert cut.cut_weight == 0.0

    def test_matches_brute_force(self, rng):
        for trial in range(60):
            n = int(rng.integers(3, 11))
            w = np.triu(rng.integers(0, 10, size=(n, n)).astype(float), 1)
            w = w + w.T
            cut = stoer_wagner_min_cut(w)
            best, _ = brute_force_min_cut(w)
            assert cut.cut_weight == best
            assert cut_weight_of(w, cut.partition[0]) == cut.cut_weight

    def test_rejects_bad_input(self):
        with pytest.raises(InputError):
            stoer_wagner_min_cut(np.array([[0.0]]))
        with pytest.raises(InputError):
            stoer_wagner_min_cut(np.array([[0.0, -1.0], [-1.0, 0.0]]))


class TestMinCut:
    def test_hopping_chain_removes_one_edge(self):
        cert = epsilon_upper_min_cut(hopping_drift(4), site_projector(4, 0))
        assert cert.op_norm == pytest.approx(1.0, abs=1e-10)
        assert cert.l11_norm == pytest.approx(2.0, abs=1e-10)
        assert cert.verified_uncontrollable
        assert cert.symmetry_witness is not None
        # witness is a projector commuting with control and perturbed drift
        p = cert.symmetry_witness.matrix
        np.testing.assert_allclose(p @ p, p, atol=1e-10)
        perturbed = hopping_drift(4) + cert.perturbations[0][1].matrix
        assert operator_norm(commutator(p, perturbed)) < 1e-9
        assert operator_norm(commutator(p, site_projector(4, 0))) < 1e-9

    def test_removed_entries_exactly_zero_in_control_basis(self):
        drift = random_hermitian(4, 31, traceless=True).matrix
        control = random_hermitian(4, 32, traceless=True).matrix
        cert = epsilon_upper_min_cut(drift, control)
        p = cert.symmetry_witness.matrix
        q = np.eye(4) - p
        perturbed = drift + cert.perturbations[0][1].matrix
        assert operator_norm(p @ perturbed @ q) < 1e-12

    def test_block_diagonal_drift_zero_certificate(self):
        drift = np.diag([1.0, -1.0, 0.5, -0.5]).astype(complex)
        drift[0, 1] = drift[1, 0] = 0.3
        drift[2, 3] = drift[3, 2] = 0.2
        control = np.diag([5.0, 4.0, 1.0, 0.0]).astype(complex)
        cert = epsilon_upper_min_cut(drift - np.trace(drift) / 4 * np.eye(4),
                                     control - np.trace(control) / 4 * np.eye(4))
        assert cert.op_norm == pytest.approx(0.0, abs=1e-12)
        assert cert.verified_uncontrollable

    def test_l11_is_twice_brute_force_cut(self, rng):
        drift = random_hermitian(4, 41, traceless=True).matrix
        control = random_hermitian(4, 42, traceless=True).matrix
        cert = epsilon_upper_min_cut(drift, control)
        graph = build_control_basis_graph(drift, control, group_degenerate=True)
        best, _ = brute_force_min_cut(graph.weights)
        assert cert.l11_norm == pytest.approx(2 * best, rel=1e-12)


class TestBlockSearch:
    def test_hopping_chain(self):
        cert = epsilon_upper_block_search(hopping_drift(4), site_projector(4, 0))
        assert cert.op_norm == pytest.approx(1.0, abs=1e-10)
        assert cert.verified_uncontrollable

    def test_ising_with_full_local_controls_kills_drift(self):
        delta = 0.7
        drift = delta * np.kron(PAULI_Z, PAULI_Z)
        controls = [pauli_on(2, 0, "X"), pauli_on(2, 0, "Y"),
                    pauli_on(2, 1, "X"), pauli_on(2, 1, "Y")]
        cert = epsilon_upper_block_search(drift, controls)
        assert cert.op_norm == pytest.approx(delta, abs=1e-12)
        assert cert.verified_uncontrollable
        np.testing.assert_allclose(cert.perturbations[0][1].matrix, -drift,
                                   atol=1e-12)

    def test_block_diagonal_drift_zero(self):
        drift = np.zeros((3, 3), dtype=complex)
        drift[2, 2] = 1.0
        drift[0, 0] = -1.0
        control = np.diag([3.0, 2.0, -5.0]).astype(complex)
        cert = epsilon_upper_block_search(drift, control - np.trace(control) / 3
                                          * np.eye(3))
        assert cert.op_norm == pytest.approx(0.0, abs=1e-12)


class TestDriftRemoval:
    def test_ising_norm_delta(self):
        drift = np.kron(PAULI_Z, PAULI_Z)
        cert = epsilon_upper_drift_removal(drift, pauli_on(2, 0, "X"))
        assert cert.op_norm == pytest.approx(1.0, abs=1e-12)
        assert cert.verified_uncontrollable  # a lone control never suffices

    def test_zero_drift(self):
        cert = epsilon_upper_drift_removal(np.zeros((2, 2)), PAULI_X)
        assert cert.op_norm == 0.0
        assert cert.verified_uncontrollable

    def test_hopping_d5_norm(self):
        cert = epsilon_upper_drift_removal(hopping_drift(5), site_projector(5, 0))
        assert cert.op_norm == pytest.approx(np.sqrt(3), abs=1e-12)
        assert cert.op_norm == pytest.approx(np.max(np.abs(hopping_spectrum(5))),
                                             abs=1e-12)


class TestLowerBound:
    def test_single_qubit_positive(self):
        system = make_system(drift=PAULI_Z, unbounded=[PAULI_X])
        lower = epsilon_lower_svd(system, [0])
        assert lower > 0

    def test_uncontrollable_input_rejected(self):
        system = make_system(drift=PAULI_Z, unbounded=[PAULI_Z])
        with pytest.raises(UncontrollableSystemError):
            epsilon_lower_svd(system, [0])

    def test_scaling_linear_in_generators(self):
        system = make_system(drift=PAULI_Z, unbounded=[PAULI_X])
        doubled = make_system(drift=2 * PAULI_Z, unbounded=[2 * PAULI_X])
        assert epsilon_lower_svd(doubled, [0]) == pytest.approx(
            2 * epsilon_lower_svd(system, [0]), rel=1e-12)

    def test_below_every_verified_certificate(self):
        for seed in range(12):
            d = 2 + seed % 2
            system = random_pair_system(d, 1000 + seed)
            estimate = epsilon_best(system)
            lower = epsilon_lower_svd(system, [0])
            assert lower <= estimate.upper.op_norm + 1e-12


class TestVerifyCertificate:
    def test_drift_removal_always_true_for_pair(self):
        system = make_system(drift=PAULI_Z, unbounded=[PAULI_X])
        cert = epsilon_upper_drift_removal(PAULI_Z, PAULI_X)
        assert verify_certificate(system, cert)

    def test_zero_perturbation_on_controllable_system(self):
        system = make_system(drift=PAULI_Z, unbounded=[PAULI_X])
        zero = DistanceCertificate(
            perturbations=[(0, HermitianOperator(np.zeros((2, 2))))],
            op_norm=0.0, l11_norm=0.0, method="manual",
            verified_uncontrollable=False)
        assert not verify_certificate(system, zero)

    def test_gap_merge_on_hopping_chain(self):
        system = build_hopping_chain(4)
        cert = epsilon_upper_gap_merge(hopping_drift(4), site_projector(4, 0))
        assert verify_certificate(system, cert)

    def test_index_out_of_range(self):
        system = make_system(drift=PAULI_Z, unbounded=[PAULI_X])
        bad = DistanceCertificate(
            perturbations=[(5, HermitianOperator(np.zeros((2, 2))))],
            op_norm=0.0, l11_norm=0.0, method="manual",
            verified_uncontrollable=False)
        with pytest.raises(InputError):
            verify_certificate(system, bad)


class TestEpsilonBest:
    def test_two_qubit_ising(self):
        system = build_two_qubit_ising(1.0)
        estimate = epsilon_best(system)
        assert estimate.upper.op_norm == pytest.approx(1.0, abs=1e-12)
        assert estimate.upper.verified_uncontrollable
        assert 0 < estimate.lower <= 1.0

    def test_hopping_d6_gap_merge_wins(self):
        system = build_hopping_chain(6)
        estimate = epsilon_best(system)
        gap = 2 * (np.cos(np.pi / 7) - np.cos(2 * np.pi / 7))
        assert gap / 2 < 1.0  # beats the unit edge cut for d >= 5
        assert estimate.upper.op_norm == pytest.approx(gap / 2, abs=1e-10)
        assert estimate.upper.method == "gap_merge"

    def test_uncontrollable_input_is_error(self):
        system = make_system(drift=PAULI_Z, unbounded=[PAULI_Z])
        with pytest.raises(UncontrollableSystemError):
            epsilon_best(system)

    def test_all_returned_certificates_verified(self):
        for seed in range(8):
            system = random_pair_system(2 + seed % 2, 500 + seed)
            estimate = epsilon_best(system)
            assert estimate.upper.verified_uncontrollable
            assert estimate.lower <= estimate.upper.op_norm + 1e-12

    def test_driftless_system_removes_bounded_generators(self):
        from qdist.models import build_cross_kerr
        system = build_cross_kerr(2, 4, cap_c=0.5)
        estimate = epsilon_best(system)
        assert estimate.upper.method == "drift_removal"
        assert estimate.upper.verified_uncontrollable
        # traceless-shifted coupling: half the spread of {a(N-a)} = N^2/8
        assert estimate.upper.op_norm == pytest.approx(2.0, abs=1e-12)
        assert 0 < estimate.lower <= estimate.upper.op_norm
        from qdist import t_star_lower
        report = t_star_lower(system, estimate.upper)
        assert report.amplitude_cap_c == 0.5
        assert report.t_star_lower == pytest.approx(0.25 / (0.5 * 2.0),
                                                    rel=1e-12)

    def test_driftless_with_universal_unbounded_controls_rejected(self):
        y = np.array([[0, -1j], [1j, 0]])
        system = make_system(bounded=[(y, 1.0)], unbounded=[PAULI_Z, PAULI_X])
        with pytest.raises(InputError):
            epsilon_best(system)

    def test_estimators_invariant_under_conjugation(self):
        drift = random_hermitian(4, 61, traceless=True).matrix
        control = random_hermitian(4, 62, traceless=True).matrix
        u = haar_unitary(4, 63)
        rotated = (u @ drift @ u.conj().T, u @ control @ u.conj().T)
        for estimator in (epsilon_upper_gap_merge, epsilon_upper_min_cut,
                          epsilon_upper_block_search, epsilon_upper_drift_removal):
            plain = estimator(drift, control)
            conj = estimator(*rotated)
            assert plain.op_norm == pytest.approx(conj.op_norm, abs=1e-9)


class TestCertificateSerialization:
    def test_round_trip(self):
        cert = epsilon_upper_min_cut(hopping_drift(4), site_projector(4, 0))
        doc = certificate_to_json(cert)
        back = certificate_from_json(doc)
        assert back.method == cert.method
        assert back.op_norm == cert.op_norm
        assert back.l11_norm == cert.l11_norm
        assert back.verified_uncontrollable == cert.verified_uncontrollable
        np.testing.assert_array_equal(back.perturbations[0][1].matrix,
                                      cert.perturbations[0][1].matrix)
        np.testing.assert_array_equal(back.symmetry_witness.matrix,
                                      cert.symmetry_witness.matrix)

    def test_unknown_keys_rejected(self):
        cert = epsilon_upper_drift_removal(PAULI_Z, PAULI_X)
        doc = certificate_to_json(cert)
        doc["surprise"] = 1
        with pytest.raises(InputError):
            certificate_from_json(doc)
