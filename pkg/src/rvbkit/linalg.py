"""Dense Hermitian eigensolver (cyclic complex Jacobi) for the small matrices
that appear in this package: 4x4 pair density matrices up to the ~1000-dim
half-filled sectors of n <= 12 sites.

Each rotation annihilates one off-diagonal entry A[p, q] = a e^{i theta}.
Phasing column q against column p reduces the 2x2 block to a real symmetric
one, which a standard Jacobi rotation then diagonalizes.  Off-diagonal mass is
strictly decreasing, so cyclic sweeps converge quadratically near the end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSize, NotHermitian

MAX_DIM = 1024
HERM_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues and (optionally) orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None


def _check_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    dev = float(np.abs(m - m.conj().T).max())
    if dev > tol * scale:
        raise NotHermitian(f"deviation from Hermiticity {dev:.3e} exceeds {tol:.0e}*{scale:.3g}")
    return 0.5 * (m + m.conj().T)


def hermitian_eig(m, vectors: bool = True, tol: float = 1e-14, max_sweeps: int = 60) -> Spectrum:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Raises NotHermitian when the input deviates from Hermiticity by more
    than 1e-10 (relative), InvalidSize above 1024 dimensions.
    """
    a = _check_hermitian(m)
    d = a.shape[0]
    if d > MAX_DIM:
        raise InvalidSize(f"dimension {d} exceeds the supported {MAX_DIM}")
    if d == 1:
        return Spectrum(np.array([a[0, 0].real]), np.ones((1, 1), dtype=np.complex128) if vectors else None)

    v = np.eye(d, dtype=np.complex128) if vectors else None
    scale = max(float(np.abs(a).max()), 1e-300)
    thresh = tol * scale

    for _ in range(max_sweeps):
        off = np.abs(a - np.diag(np.diag(a))).max()
        if off <= thresh:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= thresh:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                # J = diag(phase, 1) @ [[c, s], [-s, c]] on the (p, q) plane;
                # column update A <- A @ J, then row update A <- J^dagger @ A
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * phase * colp - s * colq
                a[:, q] = s * phase * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * np.conj(phase) * rowp - s * rowq
                a[q, :] = s * np.conj(phase) * rowp + c * rowq

                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * phase * vp - s * vq
                    v[:, q] = s * phase * vp + c * vq
    else:
        raise RuntimeError("Jacobi sweep limit reached without convergence")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    if v is not None:
        v = v[:, order]
    return Spectrum(w, v)


def eigenvalues(m) -> np.ndarray:
    """Ascending eigenvalues only."""
    return hermitian_eig(m, vectors=False).eigenvalues
