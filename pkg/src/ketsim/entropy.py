"""Shannon and von Neumann entropy, in bits, plus pure-state entanglement detection.

``S(rho) = -Trace(rho lg rho)`` is evaluated through the spectrum as
``-sum lambda_j lg lambda_j`` with ``0 lg 0 = 0``.  Slightly negative
eigenvalues (>= -1e-8, round-off from long pipelines) are clipped to zero;
anything more negative is rejected.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .linalg import hermitian_eig
from .measure import Observable, outcome_distribution_density
from .state import DensityOperator, Ket, check_qubit_indices, partial_trace, pure_density

__all__ = [
    "EntanglementVerdict",
    "shannon_entropy",
    "von_neumann_entropy",
    "measurement_entropy",
    "is_entangled_pure",
]

# Reduced entropy above this many bits counts as genuine entanglement.
_ENTANGLEMENT_TOL = 1e-8
_CLIP_FLOOR = -1e-8


def shannon_entropy(probabilities: Iterable[float]) -> float:
    """H = -sum p_j lg p_j of a probability distribution."""
    p = np.asarray(list(probabilities), dtype=np.float64)
    if p.size == 0:
        raise ValueError("empty distribution")
    if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
        raise ValueError("probabilities must lie in [0, 1]")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"probabilities sum to {total!r}, not 1")
    mask = p > 0
    return float(-(p[mask] * np.log2(p[mask])).sum())


def von_neumann_entropy(rho: DensityOperator) -> float:
    """S = -sum lambda_j lg lambda_j over the spectrum of rho."""
    lams = hermitian_eig(rho.matrix).eigenvalues
    if np.any(lams < _CLIP_FLOOR):
        raise ValueError(f"density spectrum has eigenvalue {float(lams.min()):.3e} < {_CLIP_FLOOR}")
    lams = np.clip(lams, 0.0, None)
    mask = lams > 0
    return float(-(lams[mask] * np.log2(lams[mask])).sum())


def measurement_entropy(obs: Observable, rho: DensityOperator) -> float:
    """Shannon entropy of the stochastic source obtained by measuring ``obs`` on ``rho``."""
    outcomes = outcome_distribution_density(obs, rho)
    return shannon_entropy([o.probability for o in outcomes])


@dataclass(frozen=True)
class EntanglementVerdict:
    entangled: bool
    reduced_entropy: float


def is_entangled_pure(psi: Ket, cut: Iterable[int]) -> EntanglementVerdict:
    """Decide entanglement of a pure state across ``cut`` via reduced-state entropy.

    For a pure global state, the reduced state is mixed exactly when the
    state does not factor across the cut.
    """
    cut_idx = check_qubit_indices(cut, psi.n_qubits)
    if not cut_idx or len(cut_idx) == psi.n_qubits:
        raise ValueError("cut must be a proper nonempty subset of the qubits")
    reduced = partial_trace(pure_density(psi), cut_idx)
    s = von_neumann_entropy(reduced)
    return EntanglementVerdict(entangled=s > _ENTANGLEMENT_TOL, reduced_entropy=s)
