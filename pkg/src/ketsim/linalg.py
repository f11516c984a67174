"""Dense complex linear algebra underpinning the rest of the package.

Vectors and matrices are numpy arrays of dtype complex128 (pairs of 64-bit
floats).  Everything here is dimension-agnostic; qubit and basis conventions
live in :mod:`ketsim.state`.

Desk scale only: vectors up to 2^14 entries, materialized matrices up to
2^10 x 2^10.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOLS",
    "EigenDecomposition",
    "as_cvector",
    "as_cmatrix",
    "inner_product",
    "tensor_vec",
    "tensor_mat",
    "kronecker_sum",
    "adjoint",
    "commutator",
    "is_hermitian",
    "is_unitary",
    "hermitian_eig",
    "matrix_function",
]


@dataclass(frozen=True)
class Tolerances:
    """Shared numerical slack for validity checks, in the max-entry norm."""

    hermitian: float = 1e-10
    unitary: float = 1e-10
    reconstruction: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10


DEFAULT_TOLS = Tolerances()


def as_cvector(v) -> np.ndarray:
    """Coerce to a finite 1-D complex128 array."""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got array of shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector contains NaN or Inf entries")
    return arr


def as_cmatrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains NaN or Inf entries")
    return arr


def inner_product(a, b) -> complex:
    """Bracket <a|b>: conjugate-linear in the first argument, linear in the second."""
    av, bv = as_cvector(a), as_cvector(b)
    if av.size != bv.size:
        raise ValueError(f"dimension mismatch: {av.size} vs {bv.size}")
    return complex(np.vdot(av, bv))


def tensor_vec(a, b) -> np.ndarray:
    """Tensor product of vectors; entry i*dim(b)+j equals a_i * b_j."""
    return np.kron(as_cvector(a), as_cvector(b))


def tensor_mat(a, b) -> np.ndarray:
    """Kronecker product of matrices; satisfies (A(x)B)(u(x)v) = Au (x) Bv."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def kronecker_sum(a, b) -> np.ndarray:
    """A boxplus B = A(x)1 + 1(x)B, identity sizes matching the partner factor."""
    am, bm = as_cmatrix(a), as_cmatrix(b)
    if am.shape[0] != am.shape[1] or bm.shape[0] != bm.shape[1]:
        raise ValueError("Kronecker sum requires square operands")
    return np.kron(am, np.eye(bm.shape[0])) + np.kron(np.eye(am.shape[0]), bm)


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_cmatrix(a).conj().T


def commutator(a, b) -> np.ndarray:
    """[A, B] = AB - BA."""
    am, bm = as_cmatrix(a), as_cmatrix(b)
    if am.shape != bm.shape or am.shape[0] != am.shape[1]:
        raise ValueError("commutator requires equal square dimensions")
    return am @ bm - bm @ am


def is_hermitian(a, tol: float = DEFAULT_TOLS.hermitian) -> bool:
    am = as_cmatrix(a)
    if am.shape[0] != am.shape[1]:
        return False
    return bool(np.max(np.abs(am - am.conj().T)) <= tol)


def is_unitary(a, tol: float = DEFAULT_TOLS.unitary) -> bool:
    am = as_cmatrix(a)
    if am.shape[0] != am.shape[1]:
        return False
    return bool(np.max(np.abs(am.conj().T @ am - np.eye(am.shape[0]))) <= tol)


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral data of a Hermitian matrix.

    ``eigenvalues`` ascend; the columns of ``eigenvectors`` are the matching
    orthonormal eigenvectors with a deterministic phase: each column's
    largest-magnitude component (first such, on ties) is real positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _canonicalize_columns(v: np.ndarray) -> np.ndarray:
    out = v.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        pivot = col[i]
        if abs(pivot) > 0:
            out[:, j] = col * (abs(pivot) / pivot)
    return out


def hermitian_eig(a, tol: float = DEFAULT_TOLS.hermitian) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix with canonical ordering/phases."""
    am = as_cmatrix(a)
    if am.shape[0] != am.shape[1]:
        raise ValueError("eigendecomposition requires a square matrix")
    herm_defect = float(np.max(np.abs(am - am.conj().T)))
    if herm_defect > tol:
        raise ValueError(f"matrix is not Hermitian (max |A - A^dagger| = {herm_defect:.3e})")
    evals, evecs = np.linalg.eigh(am)
    return EigenDecomposition(evals, _canonicalize_columns(evecs))


def matrix_function(a, f: Callable[[float], complex]) -> np.ndarray:
    """Apply a scalar map to a Hermitian matrix through its spectrum: V f(L) V^dagger."""
    dec = hermitian_eig(a)
    with np.errstate(divide="ignore", invalid="ignore"):
        fvals = np.array([f(float(lam)) for lam in dec.eigenvalues], dtype=np.complex128)
    if not np.all(np.isfinite(fvals)):
        raise ValueError("scalar map is undefined (non-finite) at an eigenvalue")
    v = dec.eigenvectors
    return (v * fvals) @ v.conj().T
