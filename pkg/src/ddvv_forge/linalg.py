"""Small dense linear algebra sized for n <= 8, ambient dimension <= 11."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetric, DependentProtected, NotSymmetric

EPS_RANK = 1e-9


@dataclass(frozen=True)
class SymEigen:
    values: np.ndarray   # descending
    vectors: np.ndarray  # columns


def sym_eigen(A) -> SymEigen:
    """Eigen-decomposition of a symmetric matrix, eigenvalues descending."""
    A = np.asarray(A, dtype=float)
    scale = np.linalg.norm(A)
    if np.linalg.norm(A - A.T) > 1e-9 * scale:
        raise NotSymmetric(f"asymmetry {np.linalg.norm(A - A.T):.3g} exceeds 1e-9*|A|")
    w, V = np.linalg.eigh(0.5 * (A + A.T))
    order = np.argsort(w)[::-1]
    return SymEigen(w[order], V[:, order])


def gram_schmidt(vectors, protected=(), eps_rank: float = EPS_RANK, inner=None):
    """Modified Gram-Schmidt with pivoting on residual norm.

    ``protected`` vectors are orthonormalized first, in the order given.
    The remaining vectors are then taken greedily by largest residual;
    residuals below ``eps_rank * max input norm`` are dropped.

    Returns ``(basis, rank, order)`` where ``basis`` is an array with one
    orthonormal vector per row and ``order`` lists the indices of the
    unprotected vectors that survived, in selection order.
    """
    ip = inner if inner is not None else np.dot
    protected = [np.asarray(p, dtype=float) for p in protected]
    cands = [np.asarray(v, dtype=float) for v in vectors]
    norms = [np.sqrt(abs(ip(v, v))) for v in protected + cands]
    tol = eps_rank * (max(norms) if norms else 1.0)

    basis = []
    signs = []

    def project(v):
        for q, s in zip(basis, signs):
            v = v - s * ip(v, q) * q
        return v

    for p in protected:
        r = project(p)
        nr = ip(r, r)
        if np.sqrt(abs(nr)) < tol:
            raise DependentProtected("protected vectors are linearly dependent")
        signs.append(np.sign(nr))
        basis.append(r / np.sqrt(abs(nr)))
    n_protected = len(basis)

    residuals = {k: project(v) for k, v in enumerate(cands)}
    order = []
    while residuals:
        k = max(residuals, key=lambda j: np.sqrt(abs(ip(residuals[j], residuals[j]))))
        r = residuals.pop(k)
        nr = ip(r, r)
        if np.sqrt(abs(nr)) < tol:
            break
        q = r / np.sqrt(abs(nr))
        basis.append(q)
        signs.append(np.sign(nr))
        order.append(k)
        for j in residuals:
            residuals[j] = residuals[j] - signs[-1] * ip(residuals[j], q) * q
    out = np.array(basis) if basis else np.zeros((0, len(cands[0]) if cands else 0))
    return out, len(basis), order


def solve2(G, rhs, eps_rank: float = EPS_RANK):
    """Cramer solve of a 2x2 SPD system.

    Entries may be floats or jets; the determinant check uses the value.
    """
    (g11, g12), (g21, g22) = G
    b1, b2 = rhs
    det = g11 * g22 - g12 * g21
    det_val = float(getattr(det, "val", det))
    if det_val <= eps_rank**2:
        raise DegenerateMetric(f"det = {det_val:.3g} <= {eps_rank**2:g}")
    inv = 1.0 / det
    return (g22 * b1 - g12 * b2) * inv, (g11 * b2 - g21 * b1) * inv


def smallest_eig(G) -> float:
    G = np.asarray(G, dtype=float)
    if G.shape == (2, 2):
        a, b, c = G[0, 0], 0.5 * (G[0, 1] + G[1, 0]), G[1, 1]
        # (a+c)/2 - sqrt(((a-c)/2)^2 + b^2), written to avoid cancellation
        mean = 0.5 * (a + c)
        rad = np.hypot(0.5 * (a - c), b)
        if mean > 0:
            return float((a * c - b * b) / (mean + rad))
        return float(mean - rad)
    return float(sym_eigen(G).values[-1])
