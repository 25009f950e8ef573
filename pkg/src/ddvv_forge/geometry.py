"""Fundamental forms, DDVV curvature quantities and the equality normal form.

Shape operators follow <A_xi X, Y> = <alpha(X, Y), xi>.  In an
orthonormal tangent frame and flat ambient space the Gauss and Ricci
equations give, for codimension two,

    s   = (1/(n(n-1))) sum_a [ (tr A_a)^2 - |A_a|^2 ]
    s_N = (sqrt(2)/(n(n-1))) |[A_1, A_2]|
    |H|^2 = sum_a (tr A_a / n)^2

and equality in s <= c + |H|^2 - s_N holds exactly when, for a suitable
orthonormal tangent basis and normal basis (eta, zeta),

    A_eta  = lam I + mu (E_12 + E_21),    A_zeta = mu (E_11 - E_22).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (MinimalPoint, NotEqualityForm, NotTraceless,
                     RankDeficiency, SingularPoint)
from .linalg import gram_schmidt, sym_eigen

EPS_MIN = 1e-7
TOL_CANONICAL = 1e-6


def _lorentz_eta(N, signature):
    if signature == "euclidean":
        return np.ones(N)
    if signature == "lorentz":
        eta = np.ones(N)
        eta[-1] = -1.0
        return eta
    raise ValueError(f"unknown signature {signature!r}")


@dataclass
class ShapeData:
    metric: np.ndarray          # n x n first fundamental form in chart coordinates
    frame: np.ndarray           # n x n; column i = coordinates of orthonormal e_i
    normals: np.ndarray         # k x N; orthonormal normal vectors
    A: np.ndarray               # k x n x n shape operators in the frame (e_i)
    second: np.ndarray          # k x n x n second fundamental form in coordinates
    tangent: np.ndarray | None = None     # N x n, columns d(phi)/dt_i
    position: np.ndarray | None = None
    normal_signs: np.ndarray | None = None
    signature: str = "euclidean"
    rank_margin: float = field(default=np.inf)

    @property
    def n(self) -> int:
        return self.A.shape[-1]

    @property
    def A1(self):
        return self.A[0]

    @property
    def A2(self):
        return self.A[1]

    @classmethod
    def from_operators(cls, *ops) -> "ShapeData":
        """Abstract point data: given shape operators in an orthonormal frame."""
        A = np.array([np.asarray(a, dtype=float) for a in ops])
        n = A.shape[-1]
        k = len(A)
        return cls(np.eye(n), np.eye(n), np.eye(k), A, A.copy(), normal_signs=np.ones(k))

    def ambient_tangent(self, coeffs) -> np.ndarray:
        """Ambient vector of the tangent vector with frame coefficients ``coeffs``."""
        return self.tangent @ (self.frame @ np.asarray(coeffs, dtype=float))


def fundamental_forms(phi, signature: str = "euclidean", eps_reg: float = 1e-8) -> ShapeData:
    """First and second fundamental forms of an immersion from its 2-jet.

    ``phi`` is a vector jet (or anything with ``.phi``) whose parameters are
    the chart coordinates.  In ``lorentz`` signature the immersion must be
    spacelike; normals may then be timelike and carry sign -1.
    """
    phi = getattr(phi, "phi", phi)
    T = np.asarray(phi.grad, dtype=float)
    N, n = T.shape
    eta = _lorentz_eta(N, signature)
    metric = T.T @ (eta[:, None] * T)
    w, V = np.linalg.eigh(metric)
    if w[0] < eps_reg * max(float(np.median(w)), 1e-300):
        raise SingularPoint(f"metric eigenvalue {w[0]:.3g} below regularity threshold")
    L = V @ np.diag(1.0 / np.sqrt(w)) @ V.T

    def ip(a, b):
        return float(np.dot(a * eta, b))

    basis, rank, _ = gram_schmidt(np.eye(N), protected=list(T.T), inner=ip)
    if rank != N:
        raise RankDeficiency(f"normal complement has rank {rank - n}, expected {N - n}")
    normals = basis[n:]
    signs = np.array([np.sign(ip(v, v)) for v in normals])
    second = np.einsum("kij,ak->aij", phi.hess, normals * eta)
    A = np.einsum("ip,aij,jq->apq", L, second, L)
    A = 0.5 * (A + np.swapaxes(A, -1, -2))
    return ShapeData(metric, L, normals, A, second, T, np.asarray(phi.val, dtype=float).copy(),
                     signs, signature, float(w[0]))


def shape_operator(sd: ShapeData, xi) -> np.ndarray:
    """A_xi for an arbitrary normal vector xi (ambient coordinates)."""
    eta = _lorentz_eta(sd.normals.shape[1], sd.signature)
    signs = sd.normal_signs if sd.normal_signs is not None else np.ones(len(sd.normals))
    coeffs = signs * (sd.normals @ (eta * np.asarray(xi, dtype=float)))
    return np.einsum("a,aij->ij", coeffs, sd.A)


# ------------------------------------------------------------ curvatures

def curvatures(sd: ShapeData):
    """(s, s_N, |H|^2) for a Euclidean point with any number of normals."""
    A = sd.A
    n = sd.n
    nn = n * (n - 1)
    tr = np.trace(A, axis1=1, axis2=2)
    s = float(np.sum(tr**2 - np.sum(A * A, axis=(1, 2))) / nn)
    comm2 = 0.0
    for a in range(len(A)):
        for b in range(a + 1, len(A)):
            C = A[a] @ A[b] - A[b] @ A[a]
            comm2 += float(np.sum(C * C))
    sN = float(2.0 / nn * np.sqrt(0.5 * comm2))
    H2 = float(np.sum((tr / n) ** 2))
    return s, sN, H2


def definitional_curvatures(sd: ShapeData):
    """Same quantities assembled from the curvature tensors term by term.

    Gauss: <R(e_i,e_j)e_j,e_i> = sum_a (A_a,ii A_a,jj - A_a,ij^2).
    Ricci: <R^perp(e_i,e_j) xi_r, xi_s> = <[A_r, A_s] e_i, e_j>.
    """
    A = sd.A
    n = sd.n
    p = len(A)
    sec = 0.0
    normal = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            sec += sum(A[a, i, i] * A[a, j, j] - A[a, i, j] ** 2 for a in range(p))
            for r in range(p):
                for t in range(r + 1, p):
                    C = A[r] @ A[t] - A[t] @ A[r]
                    normal += C[i, j] ** 2
    s = 2.0 / (n * (n - 1)) * sec
    sN = 2.0 / (n * (n - 1)) * np.sqrt(normal)
    H = np.array([np.trace(a) for a in A]) / n
    return float(s), float(sN), float(H @ H)


def traceless_commutator(B, tol: float = 1e-9):
    """Both sides of sum ||[B_a, B_b]||^2 <= (sum ||B_a||^2)^2."""
    B = [np.asarray(b, dtype=float) for b in B]
    for b in B:
        if abs(np.trace(b)) > tol * max(np.linalg.norm(b), 1e-300) and abs(np.trace(b)) > 1e-300:
            raise NotTraceless(f"trace {np.trace(b):.3g} is not negligible")
    lhs = 0.0
    for a in B:
        for b in B:
            C = a @ b - b @ a
            lhs += float(np.sum(C * C))
    rhs = float(sum(np.sum(b * b) for b in B)) ** 2
    return lhs, rhs


def traceless_parts(sd: ShapeData):
    n = sd.n
    return [a - np.trace(a) / n * np.eye(n) for a in sd.A]


# ------------------------------------------------------------ normal form

def form_one(lam: float, mu: float, n: int):
    """The equality-case pair (A_eta, A_zeta)."""
    A_eta = lam * np.eye(n)
    A_eta[0, 1] = A_eta[1, 0] = mu
    A_zeta = np.zeros((n, n))
    A_zeta[0, 0], A_zeta[1, 1] = mu, -mu
    return A_eta, A_zeta


def synthesize(lam: float, mu: float, n: int, rotation=None, normal_angle: float = 0.0) -> ShapeData:
    """Point data in the equality form, seen in a rotated tangent and normal frame.

    ``rotation`` is an orthogonal n x n matrix (columns = the canonical basis
    expressed in the returned frame); the canonical eta makes angle
    ``normal_angle`` with the first normal.
    """
    A_eta, A_zeta = form_one(lam, mu, n)
    Q = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
    A_eta = Q @ A_eta @ Q.T
    A_zeta = Q @ A_zeta @ Q.T
    c, s = np.cos(normal_angle), np.sin(normal_angle)
    return ShapeData.from_operators(c * A_eta - s * A_zeta, s * A_eta + c * A_zeta)


@dataclass
class CanonicalFrame:
    lam: float
    mu: float
    eta: np.ndarray
    zeta: np.ndarray
    Y1: np.ndarray          # frame coefficients of the +mu eigenvector
    Y2: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    basis: np.ndarray       # columns (e1, e2, Y3, ..., Yn), frame coefficients
    residual: float
    minimal: bool = False
    umbilic: bool = False


def canonical_frame(sd: ShapeData, tol: float = TOL_CANONICAL, allow_minimal: bool = False,
                    eps_min: float = EPS_MIN) -> CanonicalFrame:
    """Recover (lam, mu, eta, zeta) and the tangent basis of the equality form.

    eta carries the mean curvature direction (tr A_eta >= 0, so lam >= 0),
    mu >= 0, and the sign of Y2 is fixed so that <A_zeta Y1, Y2> = +mu.
    At minimal points eta is taken along the dominant direction of the
    2x2 Gram matrix <A_a, A_b>; that requires ``allow_minimal``.
    """
    if len(sd.A) != 2:
        raise ValueError("canonical_frame needs exactly two normals")
    A1, A2 = sd.A
    n = sd.n
    scale = float(np.linalg.norm(sd.A))
    t1, t2 = np.trace(A1), np.trace(A2)
    minimal = abs(t1) + abs(t2) <= eps_min * scale
    if minimal:
        if not allow_minimal:
            raise MinimalPoint(f"traces ({t1:.3g}, {t2:.3g}) vanish at scale {scale:.3g}")
        gram = np.array([[np.sum(A1 * A1), np.sum(A1 * A2)], [np.sum(A2 * A1), np.sum(A2 * A2)]])
        c0, c1 = sym_eigen(gram).vectors[:, 0]
    else:
        psi = np.arctan2(t2, t1)
        c0, c1 = np.cos(psi), np.sin(psi)
    A_eta = c0 * A1 + c1 * A2
    A_zeta = -c1 * A1 + c0 * A2
    eta = c0 * sd.normals[0] + c1 * sd.normals[1]
    zeta = -c1 * sd.normals[0] + c0 * sd.normals[1]
    lam = 0.0 if minimal else float(np.trace(A_eta) / n)

    B = A_eta - lam * np.eye(n)
    eig = sym_eigen(B)
    mu = 0.5 * float(eig.values[0] - eig.values[-1])
    V = eig.vectors
    if mu <= eps_min * max(scale, 1e-300):
        residual = float(np.sqrt(np.sum(B * B) + np.sum(A_zeta * A_zeta)))
        I = np.eye(n)
        return CanonicalFrame(lam, 0.0, eta, zeta, I[:, 0], I[:, 1], I[:, 0], I[:, 1], I,
                              residual, minimal, True)

    expected = np.zeros(n)
    expected[0], expected[-1] = mu, -mu
    spread = float(np.linalg.norm(eig.values - expected))
    if spread > tol * max(float(np.linalg.norm(B)), 1e-300):
        raise NotEqualityForm(f"traceless spectrum deviates from (+mu, 0, ..., -mu) by {spread:.3g}")
    Y1, Y2 = V[:, 0], V[:, -1]
    if Y1 @ A_zeta @ Y2 < 0:
        Y2 = -Y2
    e1 = (Y1 + Y2) / np.sqrt(2.0)
    e2 = (Y1 - Y2) / np.sqrt(2.0)
    E = np.column_stack([e1, e2, V[:, 1:-1]])
    F_eta, F_zeta = form_one(lam, mu, n)
    d_eta = E.T @ A_eta @ E - F_eta
    d_zeta = E.T @ A_zeta @ E - F_zeta
    residual = float(np.sqrt(np.sum(d_eta**2) + np.sum(d_zeta**2)))
    if residual > tol * max(scale, 1e-300):
        raise NotEqualityForm(f"shape operators deviate from the equality form by {residual:.3g}")
    return CanonicalFrame(lam, mu, eta, zeta, Y1, Y2, e1, e2, E, residual, minimal, False)


def austere_test(cf: CanonicalFrame, tol: float = 1e-6) -> bool:
    return abs(cf.lam) <= tol * (abs(cf.lam) + cf.mu)


# ------------------------------------------------------------ report

@dataclass
class DdvvReport:
    s: float
    sN: float
    H2: float
    residual: float          # s - (c + |H|^2 - s_N); <= 0 by the inequality
    lam: float
    mu: float
    regular: bool = True
    minimal: bool = False
    umbilic: bool = False
    degenerate: bool = False  # equality form could not be extracted
    canonical_residual: float = float("nan")

    def tol_eq(self, rel: float = 1e-7) -> float:
        return rel * max(1.0, abs(self.s))

    def is_equality(self, rel: float = 1e-7) -> bool:
        return abs(self.residual) <= self.tol_eq(rel)


def ddvv_residual(sd: ShapeData, c: float = 0.0, eps_min: float = EPS_MIN,
                  tol: float = TOL_CANONICAL, regular: bool = True) -> DdvvReport:
    s, sN, H2 = curvatures(sd)
    rep = DdvvReport(s, sN, H2, s - (c + H2 - sN), float("nan"), float("nan"), regular)
    try:
        cf = canonical_frame(sd, tol=tol, allow_minimal=True, eps_min=eps_min)
    except NotEqualityForm:
        rep.degenerate = True
        A1, A2 = sd.A
        n = sd.n
        t1, t2 = np.trace(A1), np.trace(A2)
        rep.lam = float(np.hypot(t1, t2) / n)
        rep.minimal = abs(t1) + abs(t2) <= eps_min * float(np.linalg.norm(sd.A))
        return rep
    rep.lam, rep.mu = cf.lam, cf.mu
    rep.minimal, rep.umbilic = cf.minimal, cf.umbilic
    rep.canonical_residual = cf.residual
    return rep
