"""Dual certificates for linear assignment solves."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from config import NONNEG_TOL


class CertificateError(ArithmeticError):
    """A residual matrix is negative beyond tolerance or violates slackness."""


@dataclass
class LapCertificate:
    """Optimal assignment with duals; R = M - u - v, R >= 0, R[r, assign[r]] == 0."""

    value: float
    assign: np.ndarray
    u: np.ndarray
    v: np.ndarray
    R: np.ndarray


@dataclass
class LapBatch:
    """Certificates for a stack of equally sized matrices."""

    value: np.ndarray   # (b,)
    assign: np.ndarray  # (b, m)
    u: np.ndarray       # (b, m)
    v: np.ndarray       # (b, m)
    R: np.ndarray       # (b, m, m)

    def __len__(self):
        return self.value.shape[0]

    def __getitem__(self, k: int) -> LapCertificate:
        return LapCertificate(float(self.value[k]), self.assign[k], self.u[k], self.v[k], self.R[k])


def validate_costs(M: np.ndarray) -> np.ndarray:
    """Return M as a float64 (b, m, m) stack; reject negative or non-finite entries."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim == 2:
        M = M[None]
    if M.ndim != 3 or M.shape[1] != M.shape[2]:
        raise ValueError(f"expected square cost matrices, got shape {M.shape}")
    if M.shape[1] < 1:
        raise ValueError("cost matrices must be at least 1x1")
    if not np.isfinite(M).all():
        raise ValueError("cost matrix has non-finite entries")
    if (M < 0).any():
        raise ValueError("cost matrix has negative entries")
    return M


def tolerance(M: np.ndarray, tau: float = NONNEG_TOL) -> np.ndarray:
    """Per-matrix clamping tolerance tau * max(1, max|M|)."""
    return tau * np.maximum(1.0, np.abs(M).max(axis=(1, 2)))


def finish_batch(M: np.ndarray, assign: np.ndarray, u: np.ndarray, v: np.ndarray,
                 tau: float = NONNEG_TOL) -> LapBatch:
    """Build residuals from duals, clamp within tau, zero the assigned cells."""
    b, m, _ = M.shape
    R = M - u[:, :, None] - v[:, None, :]
    tau = tolerance(M, tau)[:, None, None]
    if (R < -tau).any():
        worst = float(R.min())
        raise CertificateError(f"residual {worst:.3e} below tolerance")
    np.maximum(R, 0.0, out=R)
    cells = (np.arange(b)[:, None], np.arange(m)[None, :], assign)
    R[cells] = 0.0
    value = M[cells].sum(axis=1)
    return LapBatch(value, assign, u, v, R)


def check_certificate(M, cert: LapCertificate, tol: float | None = None) -> None:
    """Independent soundness check; raises CertificateError on failure."""
    M = np.asarray(M, dtype=np.float64)
    m = M.shape[0]
    tol = float(tolerance(M[None])[0]) if tol is None else tol
    assign = np.asarray(cert.assign)
    if sorted(assign.tolist()) != list(range(m)):
        raise CertificateError(f"assignment is not a bijection: {assign.tolist()}")
    if (cert.R < 0).any():
        raise CertificateError("residual matrix has negative entries")
    if np.abs(cert.R[np.arange(m), assign]).max() > 0:
        raise CertificateError("nonzero residual on the assignment")
    if np.abs(M - cert.u[:, None] - cert.v[None, :] - cert.R).max() > tol:
        raise CertificateError("residuals inconsistent with duals")
    primal = float(M[np.arange(m), assign].sum())
    dual = float(cert.u.sum() + cert.v.sum())
    if abs(primal - cert.value) > tol * m or abs(dual - cert.value) > tol * m:
        raise CertificateError(f"value {cert.value} vs primal {primal} vs dual {dual}")
