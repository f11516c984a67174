"""Quantum teleportation of one qubit over a shared entangled pair.

Layout: the three qubits live in H1 (x) H2 (x) H3 with #1 the state to be
sent (stored as qubit index 2, the high bits), #2 the sender's half of the
pair (index 1), and #3 the receiver's half (index 0).

The sender's change of basis in step 4 is built from the singlet
(|01> - |10>)/sqrt(2) = -Psi_A; with that phase the four branches of the
transformed state carry exactly the conditional states the correction table
expects (-a|0>-b|1> on branch 00, and so on).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import is_entangled_pure
from .gates import Gate, standard_gate
from .measure import Observable, RandomSource, outcome_distribution_ket, sample
from .state import Ket, inner_product, tensor_states

__all__ = [
    "BellBasis",
    "TeleportTranscript",
    "NoCloningWitness",
    "bell_basis",
    "epr_pair",
    "teleport",
    "correction_gate",
    "no_cloning_witness",
]

_SQ2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class BellBasis:
    """The four maximally entangled two-qubit kets Psi_A..Psi_D."""

    psi_a: Ket
    psi_b: Ket
    psi_c: Ket
    psi_d: Ket

    def kets(self) -> tuple[Ket, Ket, Ket, Ket]:
        return (self.psi_a, self.psi_b, self.psi_c, self.psi_d)

    def change_of_basis(self) -> Gate:
        """Unitary sending Psi_A..Psi_D to |00>..|11>."""
        mat = np.zeros((4, 4), dtype=np.complex128)
        for row, ket in enumerate(self.kets()):
            mat[row, :] = ket.amplitudes.conj()
        return Gate("BELL-TO-STD", mat)


def bell_basis() -> BellBasis:
    def k(vals) -> Ket:
        return Ket(np.array(vals, dtype=np.complex128))

    return BellBasis(
        psi_a=k([0, -_SQ2, _SQ2, 0]),
        psi_b=k([0, _SQ2, _SQ2, 0]),
        psi_c=k([_SQ2, 0, 0, -_SQ2]),
        psi_d=k([_SQ2, 0, 0, _SQ2]),
    )


def epr_pair() -> Ket:
    """The shared pair (|01> - |10>)/sqrt(2)."""
    return Ket(np.array([0, _SQ2, -_SQ2, 0], dtype=np.complex128))


_CORRECTIONS = {
    (0, 0): np.array([[-1, 0], [0, -1]], dtype=np.complex128),
    (0, 1): np.array([[-1, 0], [0, 1]], dtype=np.complex128),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=np.complex128),
    (1, 1): np.array([[0, 1], [-1, 0]], dtype=np.complex128),
}


def correction_gate(i: int, j: int) -> Gate:
    """Receiver-side unitary U^(i,j) selected by the two classical bits."""
    return Gate(f"CORRECTION({i},{j})", _CORRECTIONS[(int(i), int(j))])


@dataclass(frozen=True)
class TeleportTranscript:
    """Everything one run produced: states, classical bits, correction used."""

    input_state: Ket
    epr_state: Ket
    classical_bits: tuple[int, int]
    correction: Gate
    output_state: Ket

    def fidelity(self) -> float:
        return abs(inner_product(self.input_state.amplitudes, self.output_state.amplitudes))


def _step4_transform() -> np.ndarray:
    """Change of basis on qubits #1,#2 built from the singlet phase convention."""
    basis = bell_basis()
    singlet_first = (
        Ket(-basis.psi_a.amplitudes),
        basis.psi_b,
        basis.psi_c,
        basis.psi_d,
    )
    mat = np.zeros((4, 4), dtype=np.complex128)
    for row, ket in enumerate(singlet_first):
        mat[row, :] = ket.amplitudes.conj()
    return mat


def bell_transform_state(input_state: Ket) -> Ket:
    """Steps 1-4: assemble input (x) pair and rotate qubits #1,#2 to the standard basis."""
    if input_state.n_qubits != 1:
        raise ValueError("teleportation sends exactly one qubit")
    phi = tensor_states(input_state, epr_pair())
    u = np.kron(_step4_transform(), np.eye(2))
    return Ket(u @ phi.amplitudes)


def _bits_observable() -> Observable:
    # eigenvalue k on the two high qubits reading |k>
    return Observable(np.diag(np.arange(8) // 2).astype(np.complex128))


def teleport(
    input_state: Ket,
    rng: RandomSource | None = None,
    force_bits: tuple[int, int] | None = None,
) -> TeleportTranscript:
    """Run the eight-step protocol; the output equals the input as a state.

    ``force_bits`` bypasses the measurement draw and selects a branch
    deterministically (test hook).
    """
    phi_prime = bell_transform_state(input_state)
    outcomes = outcome_distribution_ket(_bits_observable(), phi_prime)
    if force_bits is not None:
        i, j = int(force_bits[0]), int(force_bits[1])
        wanted = float(2 * i + j)
        picked = next(o for o in outcomes if abs(o.eigenvalue - wanted) < 1e-9)
    else:
        if rng is None:
            raise ValueError("teleport needs a RandomSource unless force_bits is given")
        picked = sample(outcomes, rng)
    bits = int(round(picked.eigenvalue))
    i, j = divmod(bits, 2)
    post = picked.post_state
    assert isinstance(post, Ket)
    # Receiver's qubit: the collapsed ket is |ij> (x) (conditional 1-qubit state).
    block = post.amplitudes[2 * bits : 2 * bits + 2]
    conditional = Ket(block / np.linalg.norm(block))
    correction = correction_gate(i, j)
    output = Ket(correction.matrix @ conditional.amplitudes)
    return TeleportTranscript(
        input_state=input_state,
        epr_state=epr_pair(),
        classical_bits=(i, j),
        correction=correction,
        output_state=output,
    )


@dataclass(frozen=True)
class NoCloningWitness:
    """Copying works on basis states but entangles superpositions instead."""

    basis_copy_ok: bool
    superposition_entangled: bool


def no_cloning_witness() -> NoCloningWitness:
    """Demonstrate why a universal copier cannot exist, using CNOT'' as the copier."""
    cnot = standard_gate("CNOT''")
    blank = Ket(np.array([1, 0], dtype=np.complex128))

    basis_ok = True
    for b in (0, 1):
        src = Ket(np.eye(2, dtype=np.complex128)[b])
        out = cnot.matrix @ tensor_states(src, blank).amplitudes
        expected = tensor_states(src, src).amplitudes
        basis_ok = basis_ok and bool(np.allclose(out, expected, atol=1e-12))

    minus = Ket(np.array([_SQ2, -_SQ2], dtype=np.complex128))
    out = Ket(cnot.matrix @ tensor_states(minus, blank).amplitudes)
    verdict = is_entangled_pure(out, cut=(0,))
    entangled = verdict.entangled and verdict.reduced_entropy > 1.0 - 1e-9

    return NoCloningWitness(basis_copy_ok=basis_ok, superposition_entangled=entangled)
