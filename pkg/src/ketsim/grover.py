"""Unstructured search by amplitude amplification.

The iterate Q = -H I_0 H I_target rotates the uniform start state toward the
marked basis state by 2*beta per application, beta = arcsin(1/sqrt(N)).  It
is applied as structured steps (oracle, per-qubit Hadamards, a phase flip on
index 0, a global sign), never as a dense 2^n matrix, so wide registers cost
O(n 2^n) per iteration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels
from .gates import Gate, standard_gate
from .measure import RandomSource, measure_standard_basis
from .state import Ket, basis_ket

__all__ = [
    "GroverRun",
    "inversion_about",
    "marked_state_oracle",
    "grover_operator",
    "iteration_count",
    "error_bound",
    "grover_search",
    "success_probability",
]

Oracle = Union[Gate, int]


def inversion_about(psi: Ket) -> Gate:
    """I - 2|psi><psi|: reflection through the hyperplane orthogonal to psi."""
    amps = psi.amplitudes
    mat = np.eye(psi.dim, dtype=np.complex128) - 2.0 * np.outer(amps, amps.conj())
    return Gate("INVERSION", mat)


def marked_state_oracle(n_qubits: int, target: int) -> Gate:
    """The blackbox I_{|target>}: flips the sign of one basis amplitude."""
    return inversion_about(basis_ket(n_qubits, target))


def _uniform_state(n_qubits: int) -> Ket:
    dim = 1 << n_qubits
    return Ket(np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128))


def grover_operator(oracle: Gate, n_qubits: int) -> Gate:
    """Dense Q = -H I_0 H I_oracle (equals -I_{|uniform>} I_oracle)."""
    dim = 1 << n_qubits
    if oracle.dim != dim:
        raise ValueError(f"oracle dim {oracle.dim} != 2^{n_qubits}")
    h1 = standard_gate("H").matrix
    h = np.array([[1.0]], dtype=np.complex128)
    for _ in range(n_qubits):
        h = np.kron(h, h1)
    i0 = inversion_about(basis_ket(n_qubits, 0)).matrix
    return Gate("GROVER-Q", -h @ i0 @ h @ oracle.matrix)


def iteration_count(n: int) -> int:
    """K = round(pi/(4 beta) - 1/2), half away from zero."""
    if n < 2:
        raise ValueError("need at least two records")
    beta = math.asin(1.0 / math.sqrt(n))
    x = math.pi / (4.0 * beta) - 0.5
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def iteration_count_floor(n: int) -> int:
    """The floor-function alternative; pairs with the 4/N - 4/N^2 error bound."""
    if n < 2:
        raise ValueError("need at least two records")
    beta = math.asin(1.0 / math.sqrt(n))
    return int(math.floor(math.pi / (4.0 * beta) - 0.5))


def error_bound(n: int, floor_mode: bool = False) -> float:
    """Guaranteed failure-probability cap: 1/N (round) or 4/N - 4/N^2 (floor)."""
    if n < 2:
        raise ValueError("need at least two records")
    return 4.0 / n - 4.0 / n**2 if floor_mode else 1.0 / n


def success_probability(n: int, iterations: int) -> float:
    """Analytic success chance sin^2((2K+1) beta) after ``iterations`` applications."""
    beta = math.asin(1.0 / math.sqrt(n))
    return math.sin((2 * iterations + 1) * beta) ** 2


@dataclass(frozen=True)
class GroverRun:
    """Outcome of one seeded search."""

    iterations: int
    measured_index: int
    success_probability: float
    snapshots: tuple[Ket, ...] | None = None


def _apply_iterate(state: np.ndarray, oracle: Oracle, n_qubits: int) -> np.ndarray:
    h1 = np.ascontiguousarray(standard_gate("H").matrix)
    if isinstance(oracle, Gate):
        state = oracle.matrix @ state
    else:
        state = state.copy()
        state[int(oracle)] = -state[int(oracle)]
    for t in range(n_qubits):
        state = _kernels.apply_single_qubit(state, h1, t)
    state[0] = -state[0]
    for t in range(n_qubits):
        state = _kernels.apply_single_qubit(state, h1, t)
    return -state


def grover_search(
    oracle: Oracle,
    n_qubits: int,
    rng: RandomSource,
    snapshots: bool = False,
    iterations: int | None = None,
) -> GroverRun:
    """Prepare the uniform state, iterate Q, and measure in the standard basis.

    ``oracle`` is either a blackbox Gate or a marked index (applied as a
    structural phase flip).  ``iterations`` overrides the analytic count.
    """
    n = 1 << n_qubits
    if isinstance(oracle, Gate) and oracle.dim != n:
        raise ValueError(f"oracle dim {oracle.dim} != 2^{n_qubits}")
    k = iteration_count(n) if iterations is None else int(iterations)
    if k < 0:
        raise ValueError(f"iteration count must be non-negative, got {k}")
    state = _uniform_state(n_qubits).amplitudes.copy()
    shots = [Ket(state.copy())] if snapshots else None
    for _ in range(k):
        state = _apply_iterate(state, oracle, n_qubits)
        if shots is not None:
            shots.append(Ket(state.copy()))
    measured, _post = measure_standard_basis(Ket(state), rng)
    return GroverRun(
        iterations=k,
        measured_index=measured,
        success_probability=success_probability(n, k),
        snapshots=tuple(shots) if shots is not None else None,
    )
