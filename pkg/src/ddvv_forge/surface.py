"""Minimal surface g = Re G and its conjugate h = Im G as 2-jets.

Conventions: z = u + iv and the complex structure on the parameter
domain is J(d/du) = -d/dv, J(d/dv) = d/du.  The Cauchy-Riemann equations
then give h_u = -g_v and h_v = g_u, i.e. dh = dg o J.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .errors import (DegeneratePoint, NearVanishingA, NullConjugate,
                     RankDeficiency)
from .jets import Jet, dot, lift_array, norm
from .linalg import EPS_RANK, gram_schmidt, solve2

EPS_HN = 1e-8
EPS_A = 1e-6

# J as a matrix acting on coordinate vectors (a_u, a_v).
J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class Domain:
    kind: str = "plane"
    radius: float = 1.0

    def contains(self, z: complex) -> bool:
        return self.kind == "plane" or abs(z) < self.radius


@dataclass(frozen=True)
class HolomorphicCurve:
    """Holomorphic map G: domain -> C^(n+2), one expression per coordinate."""

    n: int
    components: tuple
    domain: Domain = field(default_factory=Domain)
    name: str = ""

    def __post_init__(self):
        if len(self.components) != self.n + 2:
            raise ValueError(f"need n+2 = {self.n + 2} components, got {len(self.components)}")

    @classmethod
    def from_strings(cls, components, n=None, domain=None, name=""):
        comps = tuple(ex.parse(c) if isinstance(c, str) else c for c in components)
        return cls(len(comps) - 2 if n is None else n, comps, domain or Domain(), name)

    @property
    def N(self) -> int:
        return self.n + 2

    def texts(self):
        return [ex.unparse(c) for c in self.components]

    def jets(self, z0: complex, K: int = 3) -> np.ndarray:
        """Array of shape (N, K+1) with G_k^(j)(z0)."""
        return np.array([j.derivs for j in ex.eval_jets(self.components, z0, K)])

    def value(self, z0: complex) -> np.ndarray:
        return self.jets(z0, 0)[:, 0]


# ------------------------------------------------------------ isotropy

@dataclass(frozen=True)
class IsotropyReport:
    max_isotropy: float        # max |<<G', G'>>|
    max_relative: float        # max |<<G', G'>>| / |G'|^2
    min_speed: float           # min |G'| (immersion margin)
    worst_z: complex

    def passes(self, tol: float = 1e-9, eps_rank: float = EPS_RANK) -> bool:
        return self.max_isotropy <= tol and self.min_speed > eps_rank


def check_isotropy(c: HolomorphicCurve, samples) -> IsotropyReport:
    worst, worst_rel, min_speed, worst_z = 0.0, 0.0, np.inf, None
    for z in samples:
        d1 = c.jets(z, 1)[:, 1]
        q = abs(np.sum(d1 * d1))
        speed = float(np.linalg.norm(d1))
        if worst_z is None or q > worst:
            worst, worst_z = q, z
        worst_rel = max(worst_rel, q / max(speed**2, 1e-300))
        min_speed = min(min_speed, speed)
    return IsotropyReport(float(worst), float(worst_rel), float(min_speed), worst_z)


# ------------------------------------------------------------ jets of g, h

@dataclass
class SurfaceJets:
    z0: complex
    g: Jet
    h: Jet
    gu: Jet
    gv: Jet
    hu: Jet
    hv: Jet


def eval_surface(c: HolomorphicCurve, z0: complex, m: int = 2) -> SurfaceJets:
    """Jets of g, h and of the coordinate fields g_u, g_v, h_u, h_v at z0.

    Third complex derivatives are used so that the first-derivative
    fields still carry full 2-jets.
    """
    d = c.jets(z0, 3)
    g = lift_array(d[:, 0], d[:, 1], d[:, 2], "re", m=m)
    h = lift_array(d[:, 0], d[:, 1], d[:, 2], "im", m=m)
    gu = lift_array(d[:, 1], d[:, 2], d[:, 3], "re", m=m)
    hu = lift_array(d[:, 1], d[:, 2], d[:, 3], "im", m=m)
    return SurfaceJets(complex(z0), g, h, gu, -hu, hu, gu)


# ------------------------------------------------------------ split of h

@dataclass
class SplitData:
    hT: tuple            # (a_u, a_v) jets, g_* h^T = a_u g_u + a_v g_v
    hN: Jet
    rho_N: Jet           # |h^N|
    r: Jet               # |h|
    gradr: np.ndarray    # coordinate vector of grad r (metric of g)
    a: Jet               # sqrt(1 - |grad r|^2) = |h^N| / |h|
    xi: Jet              # unit normal with h^N = -(r a) xi
    metric: np.ndarray   # 2x2 first fundamental form of g
    frame: list = field(default_factory=list)
    pivot: tuple = ()


def split(s: SurfaceJets, pivot=None, eps_hN: float = EPS_HN,
          eps_rank: float = EPS_RANK) -> SplitData:
    gu, gv, h = s.gu, s.gv, s.h
    G = [[dot(gu, gu), dot(gu, gv)], [dot(gv, gu), dot(gv, gv)]]
    a_u, a_v = solve2(G, (dot(h, gu), dot(h, gv)), eps_rank)
    hN = h - (a_u * gu + a_v * gv)

    scale = max(1.0, float(np.linalg.norm(s.g.val)), float(np.linalg.norm(h.val)))
    r_val = float(np.linalg.norm(h.val))
    if r_val < eps_hN * scale:
        raise NullConjugate(f"|h| = {r_val:.3g} at z = {s.z0}")
    rho_val = float(np.linalg.norm(hN.val))
    if rho_val < eps_hN * scale:
        raise DegeneratePoint(f"|h^N| = {rho_val:.3g} at z = {s.z0}")

    r = norm(h)
    rho_N = norm(hN)
    xi = hN * (-1.0 / rho_N)
    metric = np.array([[G[0][0].val, G[0][1].val], [G[1][0].val, G[1][1].val]], dtype=float)
    gradr = np.linalg.solve(metric, r.grad[:2])
    d = SplitData((a_u, a_v), hN, rho_N, r, gradr, rho_N / r, xi, metric)
    d.frame, d.pivot = lambda_frame(s, d, pivot, eps_rank)
    return d


def choose_pivot(s: SurfaceJets, d: SplitData, eps_rank: float = EPS_RANK) -> tuple:
    """Reference axes that complete {g_u, g_v, xi} best at this point."""
    N = len(s.g)
    protected = [s.gu.val, s.gv.val, d.xi.val]
    _, _, order = gram_schmidt(np.eye(N), protected=protected, eps_rank=eps_rank)
    if len(order) < N - 3:
        raise RankDeficiency(f"only {len(order)} completing axes at z = {s.z0}")
    return tuple(order[: N - 3])


def lambda_frame(s: SurfaceJets, d: SplitData, pivot=None,
                 eps_rank: float = EPS_RANK, min_residual: float | None = None):
    """Orthonormal jets spanning the normal directions of g orthogonal to h^N.

    Gram-Schmidt runs in a fixed order over (g_u, g_v, xi, e_p1, e_p2, ...)
    so that the result is one smooth procedure wherever the pivot axes
    stay independent.  Returns ``(frame, pivot)``.
    """
    N = len(s.g)
    m = s.g.m
    if pivot is None:
        pivot = choose_pivot(s, d, eps_rank)
    floor = eps_rank if min_residual is None else min_residual
    basis = []
    seq = [s.gu, s.gv, d.xi] + [Jet.constant(np.eye(N)[k], m) for k in pivot]
    for k, v in enumerate(seq):
        for q in basis:
            v = v - dot(v, q) * q
        nv = float(np.linalg.norm(v.val))
        if nv < floor:
            raise RankDeficiency(f"residual {nv:.3g} for vector {k} (pivot {pivot}) at z = {s.z0}")
        basis.append(v * (1.0 / norm(v)))
    # Orient (g_u, g_v, xi, w_1, ..., w_{n-1}) positively so the frame,
    # and with it the fiber chart, does not depend on the pivot choice.
    if np.linalg.det(np.array([b.val for b in basis])) < 0:
        basis[-1] = -basis[-1]
    return basis[3:], tuple(pivot)


# ------------------------------------------------------------ diagnostics

@dataclass(frozen=True)
class ConjugateIdentityReport:
    gradr_norm: float
    a: float
    reconstruction: float   # |h - r (g_* J grad r - a xi)|
    connection: float       # max over frame vectors and X in {d_u, d_v}
    b_xi: float             # Frobenius norm of the B_xi identity defect
    s_on_gradr: float       # |S grad r - (1 - |grad r|^2) grad r|


def prop8_diagnostics(s: SurfaceJets, d: SplitData, eps_a: float = EPS_A) -> ConjugateIdentityReport:
    """Residuals of the conjugate-pair identities at one point.

    Every quantity comes from the jets of g and h directly: grad r from
    the derivatives of r = |h|, the Hessian of r covariantly, B_xi and
    B_delta from second derivatives of g, and the normal connection from
    the frame jets.
    """
    G = d.metric
    Ginv = np.linalg.inv(G)
    T = np.column_stack([s.gu.val, s.gv.val])
    gij = s.g.hess[:, :2, :2]
    grad = d.gradr
    n2 = float(grad @ G @ grad)
    a2 = 1.0 - n2
    a = np.sqrt(max(a2, 0.0))
    if a < eps_a:
        raise NearVanishingA(f"a = {a:.3g} at z = {s.z0}")
    r = float(d.r.val)
    xi = d.xi.val

    h_rec = r * (T @ (J @ grad) - a * xi)
    recon = float(np.linalg.norm(h_rec - s.h.val))

    hess_r = d.r.hess[:2, :2] - np.einsum("kij,k->ij", gij, T @ grad)
    hess_op = Ginv @ hess_r
    S = np.eye(2) - np.outer(grad, G @ grad)
    B_xi = Ginv @ np.einsum("kij,k->ij", gij, xi)
    b_xi = float(np.linalg.norm(B_xi - (r * hess_op - S) @ J / (a * r)))

    Y = J @ grad
    connection = 0.0
    for w in d.frame:
        B_w = np.einsum("kij,k->ij", gij, w.val)
        for X in range(2):
            val = Y @ B_w[:, X] + a * float(w.grad[:, X] @ xi)
            connection = max(connection, abs(val))

    s_check = float(np.linalg.norm(S @ grad - a2 * grad))
    return ConjugateIdentityReport(float(np.sqrt(n2)), float(a), recon, connection, b_xi, s_check)
