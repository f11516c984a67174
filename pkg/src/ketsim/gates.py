"""Gate zoo, classical-reversible embeddings, circuits, and time evolution.

Wire-to-bit convention: circuit wires are numbered so that wire 0 is the
bottom of a diagram and bit 0 of the basis index (first = right = bottom).
A :class:`CircuitStep` binds gate qubit 0 to ``targets[0]``, so one matrix
serves every wiring of the same device.

The named multi-wire gates are pinned to their permutation cycle forms:
CNOT = (2 6)(3 7), CNOT' = (4 5)(6 7), TOFFOLI = (6 7), TOFFOLI' = (5 7) on
eight elements, and SWAP = (1 2) on four.  CNOT'' is the plain 4x4
controlled-NOT (control = qubit 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .linalg import DEFAULT_TOLS, as_cmatrix, matrix_function
from .measure import Observable
from .state import Ket

__all__ = [
    "Gate",
    "CircuitStep",
    "Circuit",
    "Partition",
    "standard_gate",
    "permutation_to_unitary",
    "boolean_to_permutation",
    "apply_circuit",
    "apply_permutation",
    "hamiltonian_evolution",
    "path_ordered_product",
    "to_heisenberg",
    "to_schrodinger",
    "is_partition_local",
    "is_sufficiently_local",
    "fineness",
    "parse_circuit",
    "format_circuit",
    "KERNEL_BACKEND",
]

KERNEL_BACKEND = _kernels.BACKEND


@dataclass(frozen=True)
class Gate:
    """Named unitary on ``arity`` qubits."""

    name: str
    matrix: np.ndarray

    def __post_init__(self):
        mat = as_cmatrix(self.matrix)
        dim = mat.shape[0]
        if mat.shape[1] != dim or dim & (dim - 1) or dim < 2:
            raise ValueError(f"gate matrix must be square with power-of-2 size, got {mat.shape}")
        defect = float(np.max(np.abs(mat.conj().T @ mat - np.eye(dim))))
        if defect > DEFAULT_TOLS.unitary:
            raise ValueError(f"gate {self.name!r} is not unitary (defect {defect:.3e})")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def arity(self) -> int:
        return self.dim.bit_length() - 1


_SQ2 = 1.0 / math.sqrt(2.0)

_SIGMA1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_SIGMA3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def _perm_from_cycles(size: int, cycles: Sequence[Sequence[int]]) -> list[int]:
    perm = list(range(size))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            perm[a] = b
    return perm


def _rotation(axis: np.ndarray, theta: float) -> np.ndarray:
    # e^{i theta sigma} = cos(theta) I + i sin(theta) sigma
    return math.cos(theta) * np.eye(2) + 1j * math.sin(theta) * axis


_FIXED_GATES: dict[str, Gate] = {}


def _register_fixed():
    h = _SQ2 * np.array([[1, 1], [1, -1]], dtype=np.complex128)
    sqrt_not = ((1 - 1j) / 2) * np.array([[1j, 1], [1, 1j]], dtype=np.complex128)
    sqrt_swap = np.array(
        [
            [1, 0, 0, 0],
            [0, (1 + 1j) / 2, (1 - 1j) / 2, 0],
            [0, (1 - 1j) / 2, (1 + 1j) / 2, 0],
            [0, 0, 0, 1],
        ],
        dtype=np.complex128,
    )
    cnot2 = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    )
    swap = np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
    )
    table = {
        "NOT": _SIGMA1,
        "H": h,
        "SQRT-NOT": sqrt_not,
        "SQRT-SWAP": sqrt_swap,
        "CNOT''": cnot2,
        "SWAP": swap,
        "CNOT": permutation_to_unitary(_perm_from_cycles(8, [[2, 6], [3, 7]])).matrix,
        "CNOT'": permutation_to_unitary(_perm_from_cycles(8, [[4, 5], [6, 7]])).matrix,
        "TOFFOLI": permutation_to_unitary(_perm_from_cycles(8, [[6, 7]])).matrix,
        "TOFFOLI'": permutation_to_unitary(_perm_from_cycles(8, [[5, 7]])).matrix,
    }
    for name, mat in table.items():
        _FIXED_GATES[name] = Gate(name, mat)


_ROTATIONS = {
    "RX": _SIGMA1,
    "RY": _SIGMA2,
    "RZ": _SIGMA3,
}

_ALIASES = {
    "√NOT": "SQRT-NOT",
    "√SWAP": "SQRT-SWAP",
}


def standard_gate(name: str, theta: float | None = None) -> Gate:
    """Look up a named gate; RX/RY/RZ take the rotation angle ``theta``.

    RX(theta) = e^{i theta sigma_1}, RY = e^{i theta sigma_2},
    RZ = e^{i theta sigma_3} = diag(e^{i theta}, e^{-i theta}).
    """
    key = _ALIASES.get(name, name.upper())
    if key in _ROTATIONS:
        if theta is None:
            raise ValueError(f"rotation gate {name!r} requires an angle")
        return Gate(f"{key}({theta!r})", _rotation(_ROTATIONS[key], float(theta)))
    if theta is not None:
        raise ValueError(f"gate {name!r} does not take an angle")
    if key not in _FIXED_GATES:
        raise ValueError(f"unknown gate {name!r}")
    return _FIXED_GATES[key]


def permutation_to_unitary(perm: Sequence[int]) -> Gate:
    """0/1 unitary with column k carrying a 1 in row perm[k] (so U|k> = |perm(k)>)."""
    size = len(perm)
    if sorted(perm) != list(range(size)):
        raise ValueError("input is not a bijection on 0..size-1")
    if size & (size - 1) or size < 2:
        raise ValueError(f"permutation size {size} is not a power of 2")
    mat = np.zeros((size, size), dtype=np.complex128)
    for k, pk in enumerate(perm):
        mat[pk, k] = 1.0
    return Gate(f"PERM{size}", mat)


def boolean_to_permutation(f: Callable[[int], int], n_wires: int) -> list[int]:
    """Embed a Boolean function reversibly: the bottom wire takes y XOR f(x).

    ``f`` receives the integer encoding of the upper ``n_wires - 1`` wires
    (bit j of the argument = wire j+1) and must return 0 or 1.  The result is
    an involution, a product of disjoint transpositions.
    """
    if n_wires < 1:
        raise ValueError("need at least one wire")
    perm = []
    for x in range(1 << n_wires):
        arg, y = x >> 1, x & 1
        bit = f(arg) & 1
        perm.append((arg << 1) | (y ^ bit))
    return perm


@dataclass(frozen=True)
class CircuitStep:
    """One gate bound to wires; ``targets[0]`` is the gate's qubit 0 (bottom wire)."""

    gate: Gate
    targets: tuple[int, ...]

    def __post_init__(self):
        targets = tuple(int(t) for t in self.targets)
        if len(targets) != self.gate.arity:
            raise ValueError(
                f"gate {self.gate.name!r} has arity {self.gate.arity}, got {len(targets)} targets"
            )
        if len(set(targets)) != len(targets):
            raise ValueError(f"duplicate targets {targets}")
        object.__setattr__(self, "targets", targets)


@dataclass(frozen=True)
class Circuit:
    """Sequence of steps applied left to right: U = U_last ... U_1 U_0."""

    n_qubits: int
    steps: tuple[CircuitStep, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        for step in self.steps:
            for t in step.targets:
                if not 0 <= t < self.n_qubits:
                    raise ValueError(f"target {t} out of range for {self.n_qubits} qubits")


def apply_circuit(circuit: Circuit, psi: Ket) -> Ket:
    """Run the circuit on a register without materializing full-width matrices."""
    if psi.n_qubits != circuit.n_qubits:
        raise ValueError(
            f"circuit has {circuit.n_qubits} qubits, state has {psi.n_qubits}"
        )
    state = np.ascontiguousarray(psi.amplitudes, dtype=np.complex128)
    for step in circuit.steps:
        mat = np.ascontiguousarray(step.gate.matrix)
        if step.gate.arity == 1:
            state = _kernels.apply_single_qubit(state, mat, step.targets[0])
        else:
            state = _kernels.apply_multi_qubit(state, mat, step.targets)
    return Ket(state)


def apply_permutation(perm: Sequence[int], psi: Ket) -> Ket:
    """Apply the standard unitary image of ``perm`` (amplitude k moves to perm[k]).

    Scalable stand-in for ``permutation_to_unitary`` on registers too wide for
    a materialized matrix.
    """
    if len(perm) != psi.dim:
        raise ValueError(f"permutation on {len(perm)} elements, state of dim {psi.dim}")
    out = np.empty(psi.dim, dtype=np.complex128)
    out[np.asarray(perm, dtype=np.intp)] = psi.amplitudes
    return Ket(out)


def hamiltonian_evolution(h, t: float, hbar: float = 1.0) -> Gate:
    """Unitary e^{-i H t / hbar} of a (time-independent) Hermitian generator."""
    mat = matrix_function(h, lambda lam: np.exp(-1j * lam * t / hbar))
    return Gate(f"EXP(-iHt), t={t!r}", mat)


def path_ordered_product(samples: Sequence, t: float, n: int, hbar: float = 1.0) -> Gate:
    """Finite product approximation of the path-ordered evolution integral.

    ``samples`` holds H(k t/n) for k = 0..n.  The product multiplies the
    factors e^{-i H(k t/n) (t/n) / hbar} with k descending from n to 1
    (latest time leftmost), one step per subinterval, so a constant
    Hamiltonian is reproduced exactly and the error is first order in 1/n.
    """
    if len(samples) != n + 1:
        raise ValueError(f"need n+1 = {n + 1} samples, got {len(samples)}")
    dim = as_cmatrix(samples[0]).shape[0]
    u = np.eye(dim, dtype=np.complex128)
    dt = t / n
    for k in range(n, 0, -1):
        u = u @ hamiltonian_evolution(samples[k], dt, hbar).matrix
    return Gate(f"PATH-ORDERED(n={n})", u)


def to_heisenberg(a: Observable, u: Gate) -> Observable:
    """A -> U^dagger A U (moving-observable picture)."""
    if a.dim != u.dim:
        raise ValueError(f"dimension mismatch: observable {a.dim}, gate {u.dim}")
    return Observable(u.matrix.conj().T @ a.matrix @ u.matrix)


def to_schrodinger(a: Observable, u: Gate) -> Observable:
    """Inverse picture transform: A -> U A U^dagger."""
    if a.dim != u.dim:
        raise ValueError(f"dimension mismatch: observable {a.dim}, gate {u.dim}")
    return Observable(u.matrix @ a.matrix @ u.matrix.conj().T)


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks of qubit indices covering 0..n_qubits-1."""

    n_qubits: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(q) for q in b)) for b in self.blocks)
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise ValueError("empty block")
            for q in b:
                if q in seen:
                    raise ValueError(f"qubit {q} appears in two blocks")
                seen.add(q)
        if seen != set(range(self.n_qubits)):
            raise ValueError("blocks do not cover all qubits")
        object.__setattr__(self, "blocks", blocks)


def fineness(p: Partition) -> int:
    """Maximum number of indices in a block."""
    return max(len(b) for b in p.blocks)


def is_sufficiently_local(u: Gate, p: Partition, max_fineness: int = 3, tol: float = 1e-8) -> bool:
    """Partition-local with every block small enough.

    The block-size bound is a heuristic knob, not a physical claim; the
    default of 3 reflects gates acting on at most a few wires at once.
    """
    return fineness(p) <= max_fineness and is_partition_local(u, p, tol)


def _qubit_reorder_permutation(order: Sequence[int]) -> list[int]:
    # order[j] = source qubit that lands on destination bit j
    n = len(order)
    perm = []
    for src_index in range(1 << n):
        dst = 0
        for j, q in enumerate(order):
            dst |= ((src_index >> q) & 1) << j
        perm.append(dst)
    return perm


def _nearest_kron_split(m: np.ndarray, d_high: int):
    """Best A (d_high) and B factors with m ~ A (x) B, plus the max-entry residual."""
    d_low = m.shape[0] // d_high
    r = m.reshape(d_high, d_low, d_high, d_low).transpose(0, 2, 1, 3).reshape(
        d_high * d_high, d_low * d_low
    )
    u, s, vh = np.linalg.svd(r)
    a = (u[:, 0] * np.sqrt(s[0])).reshape(d_high, d_high)
    b = (vh[0, :] * np.sqrt(s[0])).reshape(d_low, d_low)
    residual = float(np.max(np.abs(m - np.kron(a, b))))
    return a, b, residual


def is_partition_local(u: Gate, p: Partition, tol: float = 1e-8) -> bool:
    """True iff ``u`` factors (within ``tol``) as a tensor product over ``p``'s blocks."""
    n = p.n_qubits
    if u.dim != 1 << n:
        raise ValueError(f"gate dim {u.dim} does not match partition on {n} qubits")
    if len(p.blocks) == 1:
        return True
    # Reorder qubits so blocks are contiguous; peel factors off the low side.
    blocks = sorted(p.blocks, key=lambda b: b[0])
    order = [q for b in blocks for q in b]  # destination bit j <- source order[j]
    perm = np.asarray(_qubit_reorder_permutation(order), dtype=np.intp)
    remaining = u.matrix[np.ix_(perm, perm)]
    for b in blocks[:-1]:
        d_high = remaining.shape[0] >> len(b)
        a, _low, residual = _nearest_kron_split(remaining, d_high)
        if residual > tol:
            return False
        remaining = a
    return True


def _format_float(x: float) -> str:
    return repr(float(x))


def format_circuit(circuit: Circuit) -> str:
    """Render a circuit in the text format (one step per line, targets high to low)."""
    lines = []
    for step in circuit.steps:
        name = step.gate.name
        parts = [name]
        if name.startswith(("RX(", "RY(", "RZ(")):
            base, arg = name.split("(", 1)
            parts = [base, _format_float(float(arg[:-1]))]
        parts.extend(str(t) for t in reversed(step.targets))
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_circuit(text: str, n_qubits: int) -> Circuit:
    """Parse the line-oriented circuit format.

    ``GATE_NAME target_k ... target_1 target_0`` per line; ``#`` starts a
    comment; rotation gates carry the angle before the targets, e.g.
    ``RX 0.7853981633974483 0``.  Angles round-trip bit-exactly through
    ``repr``.
    """
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        name = tokens[0]
        key = _ALIASES.get(name, name.upper())
        try:
            if key in _ROTATIONS:
                if len(tokens) < 3:
                    raise ValueError("rotation gate needs an angle and a target")
                gate = standard_gate(key, float(tokens[1]))
                targets = [int(tok) for tok in tokens[2:]]
            else:
                gate = standard_gate(key)
                targets = [int(tok) for tok in tokens[1:]]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        steps.append(CircuitStep(gate, tuple(reversed(targets))))
    return Circuit(n_qubits, tuple(steps))


_register_fixed()
