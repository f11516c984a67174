"""Projective measurement of observables on kets and density operators.

An observable is a Hermitian operator; measuring it yields one of its
distinct eigenvalues.  Probabilities follow the projector rules
``||P_a psi||^2`` (kets) and ``Trace(P_a rho)`` (densities); the state then
collapses onto the measured eigenspace.

All stochastic draws flow through :class:`RandomSource` so a fixed seed
replays an experiment bit-exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .linalg import DEFAULT_TOLS, as_cmatrix, hermitian_eig
from .state import DensityOperator, Ket

__all__ = [
    "Observable",
    "MeasurementOutcome",
    "RandomSource",
    "UncertaintyCheck",
    "outcome_distribution_ket",
    "outcome_distribution_density",
    "sample",
    "measure_standard_basis",
    "expected_value",
    "uncertainty",
    "check_uncertainty_principle",
]

State = Union[Ket, DensityOperator]

# Eigenvalues closer than this share one projector (degeneracy grouping).
_DEGENERACY_TOL = 1e-8
# Outcomes below this probability are dropped and the rest renormalized.
_PROB_FLOOR = 1e-12


class RandomSource:
    """Seeded deterministic random stream (PCG64, period 2^128).

    A single owner mutates it; parallel experiments use independently seeded
    sources.  Identical seeds reproduce identical draw sequences bit-exactly;
    the first three raw 64-bit outputs for seed 0 are pinned in the test
    suite's golden file.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def random(self) -> float:
        """Uniform draw in [0, 1)."""
        return float(self._gen.random())

    def next_uint64(self) -> int:
        """Raw 64-bit generator output."""
        return int(self._gen.integers(0, 2**64, dtype=np.uint64))

    def integer(self, low: int, high: int) -> int:
        """Uniform integer in [low, high]."""
        return int(self._gen.integers(low, high, endpoint=True))


class Observable:
    """Hermitian operator with cached spectral data (distinct values + projectors)."""

    def __init__(self, matrix, tol: float = DEFAULT_TOLS.hermitian):
        mat = as_cmatrix(matrix)
        defect = float(np.max(np.abs(mat - mat.conj().T)))
        if defect > tol:
            raise ValueError(f"observable is not Hermitian (defect {defect:.3e})")
        mat = mat.copy()
        mat.setflags(write=False)
        self.matrix = mat

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectral(self) -> tuple[tuple[float, np.ndarray], ...]:
        """(eigenvalue, projector) pairs; eigenvalues within 1e-8 are grouped."""
        dec = hermitian_eig(self.matrix)
        groups: list[list[int]] = [[0]]
        for j in range(1, dec.eigenvalues.size):
            if dec.eigenvalues[j] - dec.eigenvalues[groups[-1][-1]] <= _DEGENERACY_TOL:
                groups[-1].append(j)
            else:
                groups.append([j])
        out = []
        for idx in groups:
            vecs = dec.eigenvectors[:, idx]
            value = float(np.mean(dec.eigenvalues[idx]))
            out.append((value, vecs @ vecs.conj().T))
        return tuple(out)


@dataclass(frozen=True)
class MeasurementOutcome:
    """One possible result: the eigenvalue, its probability, the collapsed state."""

    eigenvalue: float
    probability: float
    post_state: State


def _check_dims(obs: Observable, state: State):
    dim = state.dim
    if obs.dim != dim:
        raise ValueError(f"dimension mismatch: observable {obs.dim}, state {dim}")


def _renormalize(outcomes: list[MeasurementOutcome]) -> list[MeasurementOutcome]:
    total = sum(o.probability for o in outcomes)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"outcome probabilities sum to {total!r}")
    return [
        MeasurementOutcome(o.eigenvalue, o.probability / total, o.post_state)
        for o in outcomes
    ]


def outcome_distribution_ket(obs: Observable, psi: Ket) -> list[MeasurementOutcome]:
    """One outcome per distinct eigenvalue: prob ||P psi||^2, post-state P psi normalized."""
    _check_dims(obs, psi)
    outcomes = []
    for value, proj in obs.spectral:
        vec = proj @ psi.amplitudes
        p = float(np.real(np.vdot(vec, vec)))
        if p < _PROB_FLOOR:
            continue
        outcomes.append(MeasurementOutcome(value, p, Ket(vec / np.sqrt(p))))
    return _renormalize(outcomes)


def outcome_distribution_density(obs: Observable, rho: DensityOperator) -> list[MeasurementOutcome]:
    """One outcome per distinct eigenvalue: prob Trace(P rho), post-state P rho P / prob."""
    _check_dims(obs, rho)
    outcomes = []
    for value, proj in obs.spectral:
        p = float(np.trace(proj @ rho.matrix).real)
        if p < _PROB_FLOOR:
            continue
        post = DensityOperator.relaxed(proj @ rho.matrix @ proj / p)
        outcomes.append(MeasurementOutcome(value, p, post))
    return _renormalize(outcomes)


def sample(outcomes: Sequence[MeasurementOutcome], rng: RandomSource) -> MeasurementOutcome:
    """Draw one outcome by inverse CDF in the given order (advances ``rng``)."""
    if not outcomes:
        raise ValueError("empty outcome list")
    u = rng.random()
    acc = 0.0
    for o in outcomes:
        acc += o.probability
        if u < acc:
            return o
    return outcomes[-1]


def measure_standard_basis(psi: Ket, rng: RandomSource) -> tuple[int, Ket]:
    """Measure every qubit in the standard basis; returns (index, collapsed ket).

    Fast path equivalent to measuring the diagonal observable with eigenvalue
    k on |k>; avoids building 2^n projectors.
    """
    probs = np.abs(psi.amplitudes) ** 2
    u = rng.random() * probs.sum()
    idx = int(np.searchsorted(np.cumsum(probs), u, side="right"))
    idx = min(idx, psi.dim - 1)
    if probs[idx] == 0.0:
        idx = int(np.argmax(probs))
    post = np.zeros(psi.dim, dtype=np.complex128)
    post[idx] = psi.amplitudes[idx] / abs(psi.amplitudes[idx])
    return idx, Ket(post)


def _expect(obs: Observable, state: State) -> float:
    if isinstance(state, Ket):
        val = complex(np.vdot(state.amplitudes, obs.matrix @ state.amplitudes))
    else:
        val = complex(np.trace(state.matrix @ obs.matrix))
    if abs(val.imag) > 1e-8:
        raise ValueError(f"expected value has imaginary residue {val.imag:.3e}")
    return val.real


def expected_value(obs: Observable, state: State) -> float:
    """<A> = Trace(rho A), or <psi|A|psi> for a ket."""
    _check_dims(obs, state)
    return _expect(obs, state)


def uncertainty(obs: Observable, state: State) -> float:
    """Standard deviation sqrt(<A^2> - <A>^2) of the measured eigenvalues."""
    _check_dims(obs, state)
    sq = Observable(obs.matrix @ obs.matrix)
    var = _expect(sq, state) - _expect(obs, state) ** 2
    return float(np.sqrt(max(var, 0.0)))


@dataclass(frozen=True)
class UncertaintyCheck:
    """Both sides of the variance-product inequality and its verdict."""

    lhs: float
    rhs: float
    holds: bool


def check_uncertainty_principle(a: Observable, b: Observable, state: State) -> UncertaintyCheck:
    """Verify <(dA)^2><(dB)^2> >= |<[A,B]>|^2 / 4 on the given state."""
    _check_dims(a, state)
    _check_dims(b, state)
    lhs = uncertainty(a, state) ** 2 * uncertainty(b, state) ** 2
    comm = a.matrix @ b.matrix - b.matrix @ a.matrix
    if isinstance(state, Ket):
        amps = state.amplitudes
        expect_comm = complex(np.vdot(amps, comm @ amps))
    else:
        expect_comm = complex(np.trace(state.matrix @ comm))
    rhs = 0.25 * abs(expect_comm) ** 2
    return UncertaintyCheck(lhs, rhs, lhs >= rhs - 1e-10)
