import math

import numpy as np
import pytest
from conftest import SQ2, random_ket_array, random_unitary

from ketsim.gates import Gate, boolean_to_permutation, permutation_to_unitary
from ketsim.grover import (
    error_bound,
    grover_operator,
    grover_search,
    inversion_about,
    iteration_count,
    iteration_count_floor,
    marked_state_oracle,
    success_probability,
)
from ketsim.measure import RandomSource
from ketsim.state import Ket, basis_ket, ket_from_amplitudes


def printed_example_blackbox():
    """The worked example's oracle exactly as printed (marked slot fifth)."""
    mat = np.eye(8, dtype=np.complex128)
    mat[4, 4] = -1.0
    return Gate("BLACKBOX", mat)


class TestInversion:
    def test_marked_basis_state(self):
        gate = inversion_about(basis_ket(3, 5))
        np.testing.assert_array_equal(gate.matrix, np.diag([1, 1, 1, 1, 1, -1, 1, 1]))

    def test_involution(self, rng):
        psi = Ket(random_ket_array(rng, 8))
        gate = inversion_about(psi)
        np.testing.assert_allclose(gate.matrix @ gate.matrix, np.eye(8), atol=1e-12)

    def test_conjugation_rule(self, rng):
        for _ in range(50):
            psi = Ket(random_ket_array(rng, 4))
            u = random_unitary(rng, 4)
            lhs = u @ inversion_about(psi).matrix @ u.conj().T
            rhs = inversion_about(Ket(u @ psi.amplitudes)).matrix
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestGroverOperator:
    def test_printed_matrix_from_printed_blackbox(self):
        q = grover_operator(printed_example_blackbox(), 3)
        expected = np.array(
            [
                [-3, 1, 1, 1, -1, 1, 1, 1],
                [1, -3, 1, 1, -1, 1, 1, 1],
                [1, 1, -3, 1, -1, 1, 1, 1],
                [1, 1, 1, -3, -1, 1, 1, 1],
                [1, 1, 1, 1, 3, 1, 1, 1],
                [1, 1, 1, 1, -1, -3, 1, 1],
                [1, 1, 1, 1, -1, 1, -3, 1],
                [1, 1, 1, 1, -1, 1, 1, -3],
            ],
            dtype=complex,
        ) / 4
        np.testing.assert_allclose(q.matrix, expected, atol=1e-12)

    def test_unitary(self):
        q = grover_operator(marked_state_oracle(3, 5), 3)
        np.testing.assert_allclose(q.matrix.conj().T @ q.matrix, np.eye(8), atol=1e-12)

    def test_two_constructions_agree(self):
        oracle = marked_state_oracle(3, 5)
        via_hadamards = grover_operator(oracle, 3).matrix
        uniform = ket_from_amplitudes(np.ones(8))
        direct = -inversion_about(uniform).matrix @ oracle.matrix
        np.testing.assert_allclose(via_hadamards, direct, atol=1e-12)


class TestIterationCount:
    def test_eight_records(self):
        assert iteration_count(8) == 2

    def test_four_records(self):
        assert iteration_count(4) == 1

    def test_two_records_half_rounds_away(self):
        assert iteration_count(2) == 1

    def test_floor_variant(self):
        assert iteration_count_floor(8) == 1

    def test_rejects_tiny(self):
        with pytest.raises(ValueError):
            iteration_count(1)


class TestGroverSearch:
    def test_printed_iteration_vectors(self):
        run = grover_search(printed_example_blackbox(), 3, RandomSource(1), snapshots=True)
        assert run.iterations == 2
        psi1 = np.array([1, 1, 1, 1, 5, 1, 1, 1]) / (4 * math.sqrt(2))
        psi2 = np.array([-1, -1, -1, -1, 11, -1, -1, -1]) / (8 * math.sqrt(2))
        np.testing.assert_allclose(run.snapshots[1].amplitudes, psi1, atol=1e-12)
        np.testing.assert_allclose(run.snapshots[2].amplitudes, psi2, atol=1e-12)
        assert run.success_probability == pytest.approx(121 / 128, abs=1e-10)

    def test_success_certain_for_four_records(self):
        for target in range(4):
            run = grover_search(marked_state_oracle(2, target), 2, RandomSource(3))
            assert run.success_probability == pytest.approx(1.0, abs=1e-12)
            assert run.measured_index == target

    def test_structural_oracle_equals_blackbox(self):
        dense = grover_search(marked_state_oracle(3, 5), 3, RandomSource(9), snapshots=True)
        structural = grover_search(5, 3, RandomSource(9), snapshots=True)
        for a, b in zip(dense.snapshots, structural.snapshots):
            np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)

    def test_measured_frequency(self):
        rng = RandomSource(2718)
        hits = 0
        runs = 10_000
        for _ in range(runs):
            if grover_search(5, 3, rng).measured_index == 5:
                hits += 1
        assert abs(hits / runs - 0.9453) <= 0.01

    def test_amplitude_law(self):
        # <target|psi_k> follows sin((2k+1) beta) for every iterate
        for n_qubits in (2, 3, 5, 8, 10):
            n = 1 << n_qubits
            beta = math.asin(1 / math.sqrt(n))
            k_max = iteration_count(n)
            run = grover_search(3, n_qubits, RandomSource(4), snapshots=True,
                                iterations=k_max)
            for k, snap in enumerate(run.snapshots):
                expected = math.sin((2 * k + 1) * beta)
                assert snap.amplitudes[3] == pytest.approx(expected, abs=1e-10)

    def test_invariant_plane(self):
        # every iterate stays in span{|target>, uniform-over-rest}
        n_qubits, target = 4, 11
        n = 1 << n_qubits
        rest = np.ones(n) / math.sqrt(n - 1)
        rest[target] = 0.0
        marked = np.eye(n)[target]
        run = grover_search(target, n_qubits, RandomSource(8), snapshots=True)
        for snap in run.snapshots:
            amps = snap.amplitudes
            coeff_m = np.vdot(marked, amps)
            coeff_r = np.vdot(rest, amps)
            residual = amps - coeff_m * marked - coeff_r * rest
            assert np.max(np.abs(residual)) <= 1e-10


class TestErrorBound:
    def test_eight_records(self):
        assert error_bound(8) == pytest.approx(1 / 8)
        actual = 1 - success_probability(8, iteration_count(8))
        assert actual == pytest.approx(7 / 128, abs=1e-12)
        assert actual <= error_bound(8)

    def test_two_records_boundary(self):
        actual = 1 - success_probability(2, iteration_count(2))
        assert actual == pytest.approx(0.5, abs=1e-12)
        assert actual <= error_bound(2) + 1e-12

    def test_power_of_two_sweep(self):
        n = 2
        while n <= 4096:
            k = iteration_count(n)
            failure = math.cos((2 * k + 1) * math.asin(1 / math.sqrt(n))) ** 2
            assert failure <= error_bound(n) + 1e-12, n
            n *= 2

    def test_floor_variant_bound(self):
        n = 2
        while n <= 4096:
            k = iteration_count_floor(n)
            failure = math.cos((2 * k + 1) * math.asin(1 / math.sqrt(n))) ** 2
            assert failure <= error_bound(n, floor_mode=True) + 1e-12, n
            n *= 2


class TestOracleFormEquivalence:
    def test_ancilla_phase_kickback(self, rng):
        # U_f with ancilla (|0>-|1>)/sqrt(2) acts as I_{|x0>} (x) identity
        n_qubits, target = 3, 5
        perm = boolean_to_permutation(lambda x: 1 if x == target else 0, n_qubits + 1)
        u_f = permutation_to_unitary(perm).matrix
        minus = np.array([SQ2, -SQ2])
        oracle = marked_state_oracle(n_qubits, target).matrix
        for _ in range(50):
            psi = random_ket_array(rng, 1 << n_qubits)
            joint = np.kron(psi, minus)
            lhs = u_f @ joint
            rhs = np.kron(oracle @ psi, minus)
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)
