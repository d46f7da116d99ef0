"""Hermitian eigendecomposition, singular values and matrix functions.

All decompositions run on compiled Jacobi kernels. The convergence threshold
defaults to ``1e-12`` and can be tightened for a block of code with
:func:`jacobi_tolerance`, which the campaign harness uses to re-check
suspected violations.
"""

from __future__ import annotations

import contextlib
import contextvars
from typing import NamedTuple

import numpy as np

from . import _jacobi
from .exceptions import ConvergenceError, DimensionError, NotHermitianError, NotPSDError

__all__ = [
    "HermitianEig",
    "PSDCheck",
    "DEFAULT_TOL",
    "MAX_SWEEPS",
    "jacobi_tolerance",
    "hermitian_eig",
    "singular_values",
    "svd",
    "matrix_abs",
    "psd_sqrt",
    "is_psd",
]

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-10
CLAMP_REL = 1e-12
PSD_SQRT_REL = 1e-10

_tol = contextvars.ContextVar("jacobi_tol", default=DEFAULT_TOL)


@contextlib.contextmanager
def jacobi_tolerance(tol: float):
    """Temporarily set the Jacobi convergence threshold."""
    token = _tol.set(float(tol))
    try:
        yield
    finally:
        _tol.reset(token)


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray
    """Descending real eigenvalues."""
    eigenvectors: np.ndarray
    """Unitary matrix whose columns pair with ``eigenvalues``."""


class PSDCheck(NamedTuple):
    is_psd: bool
    min_eigenvalue: float


def _square(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def _hermitian(a) -> np.ndarray:
    a = _square(a)
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if dev > HERMITIAN_TOL:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return a


def _eig(h: np.ndarray, tol: float | None) -> HermitianEig:
    work = np.ascontiguousarray(0.5 * (h + h.conj().T))
    tol = _tol.get() if tol is None else tol
    w, v, _, off, ok = _jacobi.hermitian_jacobi(work, tol, MAX_SWEEPS)
    if not ok:
        raise ConvergenceError(
            f"Jacobi did not converge in {MAX_SWEEPS} sweeps (off-diagonal mass {off:.3e})",
            residual=off,
        )
    order = np.argsort(-w, kind="stable")
    return HermitianEig(w[order], np.ascontiguousarray(v[:, order]))


def hermitian_eig(a, tol: float | None = None) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like
        Square matrix, Hermitian to within ``1e-10`` entrywise.
    tol : float, optional
        Stop once the off-diagonal Frobenius mass is at most ``tol * ||a||_F``.

    Returns
    -------
    HermitianEig
        Eigenvalues in descending order (stable for ties) and the matching
        unitary eigenvector matrix.
    """
    return _eig(_hermitian(a), tol)


def _one_sided(a: np.ndarray, want_v: bool, tol: float | None):
    tol = _tol.get() if tol is None else tol
    g = np.array(a, dtype=np.complex128, order="C", copy=True)
    v, _, ok = _jacobi.one_sided_jacobi(g, want_v, tol, MAX_SWEEPS)
    if not ok:
        raise ConvergenceError(f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps")
    s = np.sqrt(np.sum(g.real**2 + g.imag**2, axis=0))
    order = np.argsort(-s, kind="stable")
    return g[:, order], s[order], (v[:, order] if want_v else None)


def singular_values(a, tol: float | None = None) -> np.ndarray:
    """Descending singular values, ``min(rows, cols)`` of them.

    Computed by one-sided Jacobi on the taller orientation of ``a``; this is
    Jacobi on ``A*A`` carried out implicitly, so small singular values keep
    their relative accuracy.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if a.shape[0] < a.shape[1]:
        a = a.conj().T
    _, s, _ = _one_sided(a, False, tol)
    return s


def svd(a, tol: float | None = None):
    """Thin SVD ``a = u @ diag(s) @ vh``.

    Columns of ``u`` that belong to zero singular values are left as zero.
    """
    a = np.asarray(a, dtype=np.complex128)
    wide = a.shape[0] < a.shape[1]
    work = a.conj().T if wide else a
    g, s, v = _one_sided(work, True, tol)
    u = np.zeros_like(g)
    nz = s > 0
    u[:, nz] = g[:, nz] / s[nz]
    if wide:
        return v, s, u.conj().T
    return u, s, v.conj().T


def matrix_abs(a, tol: float | None = None) -> np.ndarray:
    """``|A| = (A*A)^{1/2}`` via the eigendecomposition of ``A*A``."""
    a = _square(a)
    gram = a.conj().T @ a
    eig = _eig(gram, tol)
    w = eig.eigenvalues
    scale = max(abs(w[0]), abs(w[-1])) if w.size else 0.0
    if w.size and w[-1] < -CLAMP_REL * scale:
        raise NotPSDError(f"A*A has eigenvalue {w[-1]:.3e}", min_eigenvalue=float(w[-1]))
    root = np.sqrt(np.clip(w, 0.0, None))
    v = eig.eigenvectors
    return (v * root) @ v.conj().T


def psd_sqrt(a, tol: float | None = None) -> np.ndarray:
    """Positive square root of a Hermitian positive semidefinite matrix."""
    eig = _eig(_hermitian(a), tol)
    w = eig.eigenvalues
    norm = max(abs(w[0]), abs(w[-1]))
    if w[-1] < -PSD_SQRT_REL * norm:
        raise NotPSDError(
            f"matrix is not positive semidefinite (min eigenvalue {w[-1]:.3e})",
            min_eigenvalue=float(w[-1]),
        )
    root = np.sqrt(np.clip(w, 0.0, None))
    v = eig.eigenvectors
    return (v * root) @ v.conj().T


def is_psd(a, tol: float = 0.0) -> PSDCheck:
    """Whether the smallest eigenvalue of a Hermitian ``a`` is at least ``-tol``."""
    w = hermitian_eig(a).eigenvalues
    lo = float(w[-1])
    return PSDCheck(lo >= -tol, lo)
