"""Physical state types: normalized kets, density operators, ensembles.

Qubit convention used everywhere in this package: qubit 0 is the
least-significant bit of the basis index, i.e. the rightmost label character
(first = right = bottom).  In ``tensor_states(a, b)`` the factor ``a``
occupies the high (left) qubit positions.

Two kets represent the same physical state when they differ by a phase;
``states_equal`` compares that way, while golden-value tests pin amplitudes
after ``canonical_phase``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .linalg import DEFAULT_TOLS, as_cmatrix, as_cvector, hermitian_eig, inner_product

__all__ = [
    "Ket",
    "DensityOperator",
    "Ensemble",
    "ket_from_amplitudes",
    "basis_ket",
    "tensor_states",
    "pure_density",
    "mixed_density",
    "purity",
    "partial_trace",
    "polarization_constants",
    "states_equal",
    "canonical_phase",
    "check_qubit_indices",
]

_NORM_TOL = 1e-10


def _qubit_count(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a power of 2")
    return n


@dataclass(frozen=True)
class Ket:
    """Unit-length state vector on ``n_qubits`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = as_cvector(self.amplitudes)
        _qubit_count(amps.size)
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"ket is not normalized (norm = {norm!r})")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1


def ket_from_amplitudes(v) -> Ket:
    """Normalize a raw amplitude vector into a Ket (power-of-2 length required)."""
    amps = as_cvector(v)
    _qubit_count(amps.size)
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return Ket(amps / norm)


def basis_ket(n_qubits: int, index: int) -> Ket:
    """Standard basis ket |index> on ``n_qubits`` qubits (bit j of index = qubit j)."""
    if n_qubits < 0:
        raise ValueError("negative qubit count")
    dim = 1 << n_qubits
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return Ket(amps)


def tensor_states(a: Ket, b: Ket) -> Ket:
    """Joint state a(x)b; ``a`` takes the high (left) qubit positions."""
    return Ket(np.kron(a.amplitudes, b.amplitudes))


_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def polarization_constants() -> dict[str, Ket]:
    """The six photon-polarization kets in the vertical/horizontal basis."""
    return {
        "vertical": Ket(np.array([1.0, 0.0], dtype=np.complex128)),
        "horizontal": Ket(np.array([0.0, 1.0], dtype=np.complex128)),
        "diagonal": Ket(np.array([_INV_SQRT2, _INV_SQRT2], dtype=np.complex128)),
        "antidiagonal": Ket(np.array([_INV_SQRT2, -_INV_SQRT2], dtype=np.complex128)),
        "right_circular": Ket(np.array([_INV_SQRT2, -1j * _INV_SQRT2], dtype=np.complex128)),
        "left_circular": Ket(np.array([_INV_SQRT2, 1j * _INV_SQRT2], dtype=np.complex128)),
    }


@dataclass(frozen=True)
class DensityOperator:
    """Positive semi-definite Hermitian trace-1 operator on ``n_qubits`` qubits.

    The default constructor admits eigenvalues down to -1e-10 (round-off);
    :meth:`relaxed` admits -1e-8 for matrices coming out of long pipelines.
    """

    matrix: np.ndarray

    _PSD_TOL = 1e-10

    def __post_init__(self):
        mat = as_cmatrix(self.matrix)
        if mat.shape[0] != mat.shape[1]:
            raise ValueError("density matrix must be square")
        _qubit_count(mat.shape[0])
        herm_defect = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_defect > DEFAULT_TOLS.hermitian:
            raise ValueError(f"density matrix not Hermitian (defect {herm_defect:.3e})")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > DEFAULT_TOLS.trace:
            raise ValueError(f"density matrix trace {tr!r} != 1")
        lo = float(np.min(np.linalg.eigvalsh(mat)))
        if lo < -self._PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @staticmethod
    def relaxed(matrix) -> "DensityOperator":
        """Admit near-PSD matrices (eigenvalues >= -1e-8) after long pipelines."""
        return _RelaxedDensityOperator(matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1


class _RelaxedDensityOperator(DensityOperator):
    _PSD_TOL = 1e-8


@dataclass(frozen=True)
class Ensemble:
    """Classical mixture {(p_j, |psi_j>)}; the states need not be orthogonal."""

    items: tuple[tuple[float, Ket], ...]

    def __post_init__(self):
        items = tuple((float(p), k) for p, k in self.items)
        if not items:
            raise ValueError("empty ensemble")
        n = items[0][1].n_qubits
        for p, k in items:
            if not 0.0 <= p <= 1.0 + 1e-12:
                raise ValueError(f"probability {p} outside [0, 1]")
            if k.n_qubits != n:
                raise ValueError("ensemble mixes different qubit counts")
        total = sum(p for p, _ in items)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"ensemble probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "items", items)

    @property
    def n_qubits(self) -> int:
        return self.items[0][1].n_qubits


def pure_density(k: Ket) -> DensityOperator:
    """rho = |psi><psi|."""
    amps = k.amplitudes
    return DensityOperator(np.outer(amps, amps.conj()))


def mixed_density(e: Ensemble) -> DensityOperator:
    """rho = sum_j p_j |psi_j><psi_j|."""
    dim = 1 << e.n_qubits
    rho = np.zeros((dim, dim), dtype=np.complex128)
    for p, k in e.items:
        rho += p * np.outer(k.amplitudes, k.amplitudes.conj())
    return DensityOperator(rho)


def purity(rho: DensityOperator) -> float:
    """Trace(rho^2); equals 1 exactly when the ensemble is pure."""
    return float(np.trace(rho.matrix @ rho.matrix).real)


def check_qubit_indices(indices: Iterable[int], n_qubits: int) -> tuple[int, ...]:
    """Validate a set of qubit positions: unique, in range, returned sorted."""
    idx = tuple(sorted(int(i) for i in indices))
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate qubit indices in {idx}")
    for i in idx:
        if not 0 <= i < n_qubits:
            raise ValueError(f"qubit index {i} out of range for {n_qubits} qubits")
    return idx


def _spread_bits(value: int, positions: Sequence[int]) -> int:
    out = 0
    for j, pos in enumerate(positions):
        out |= ((value >> j) & 1) << pos
    return out


def partial_trace(rho: DensityOperator, traced: Iterable[int]) -> DensityOperator:
    """Contract ``rho`` over the ``traced`` qubits, keeping the others in order.

    Index-arithmetic contraction; no permutation matrices are built.
    """
    n = rho.n_qubits
    tr = check_qubit_indices(traced, n)
    if not tr:
        raise ValueError("must trace at least one qubit")
    if len(tr) == n:
        raise ValueError("cannot trace every qubit; a scalar is not a state")
    keep = [q for q in range(n) if q not in tr]

    kept_idx = np.array([_spread_bits(a, keep) for a in range(1 << len(keep))], dtype=np.intp)
    out = np.zeros((kept_idx.size, kept_idx.size), dtype=np.complex128)
    for t in range(1 << len(tr)):
        it = _spread_bits(t, tr)
        out += rho.matrix[np.ix_(kept_idx + it, kept_idx + it)]
    return DensityOperator.relaxed(out)


def states_equal(a: Ket, b: Ket, tol: float = 1e-10) -> bool:
    """State equality up to a global phase: | |<a|b>| - 1 | <= tol."""
    if a.dim != b.dim:
        return False
    return abs(abs(inner_product(a.amplitudes, b.amplitudes)) - 1.0) <= tol


def canonical_phase(k: Ket) -> Ket:
    """Rotate the global phase so the first nonzero amplitude is real positive."""
    amps = k.amplitudes
    for a in amps:
        if abs(a) > 1e-12:
            return Ket(amps * (abs(a) / a))
    return k


def eigenvalues_of(rho: DensityOperator) -> np.ndarray:
    """Ascending real eigenvalues of a density operator."""
    return hermitian_eig(rho.matrix).eigenvalues
