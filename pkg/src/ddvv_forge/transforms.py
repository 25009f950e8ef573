"""Ambient conformal maps, quadrics in C^(n+2) and the holomorphic inversion.

Euclidean inversion:   I(P) = P0 + d^2 (P - P0) / <P - P0, P - P0>
Lorentzian inversion:  I(P) = P0 - d^2 (P - P0) / <P - P0, P - P0>_L
(last coordinate timelike).  The stereographic maps are restrictions of
these: the sphere S(d e_N; d) goes to the hyperplane x_N = 0 under the
Euclidean inversion about 2d e_N with radius 2d, and the hyperbolic
space {<X + d e_N, X + d e_N>_L = -d^2} goes to the ball B(0; 2d) under
the Lorentzian inversion about -2d e_N with radius 2d.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .construction import ChartPoint, phi_jets
from .errors import (FrameMismatch, MapSingularity, MinimalPoint,
                     NullQuadricCurve)
from .geometry import (ShapeData, canonical_frame, fundamental_forms,
                       shape_operator)
from .jets import Jet, dot
from .surface import HolomorphicCurve

EPS_DIV = 1e-12

KINDS = ("euclidean_inversion", "lorentz_inversion", "stereo_sphere_to_plane",
         "stereo_plane_to_sphere", "stereo_hyp_to_ball", "stereo_ball_to_hyp")


@dataclass(frozen=True)
class AmbientMap:
    kind: str
    radius: float = 1.0
    center: tuple | None = None     # inversions only; None means the origin
    sign: float | None = None       # override of the +/- d^2 convention

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}; expected one of {KINDS}")
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def signature(self) -> str:
        return "lorentz" if self.kind in ("lorentz_inversion", "stereo_hyp_to_ball",
                                          "stereo_ball_to_hyp") else "euclidean"

    def inversion(self, N: int):
        """(P0, radius, sign) of the underlying inversion in dimension N."""
        d = self.radius
        if self.kind in ("euclidean_inversion", "lorentz_inversion"):
            P0 = np.zeros(N) if self.center is None else np.asarray(self.center, dtype=float)
            default = 1.0 if self.kind == "euclidean_inversion" else -1.0
            return P0, d, default if self.sign is None else self.sign
        P0 = np.zeros(N)
        if self.kind in ("stereo_sphere_to_plane", "stereo_plane_to_sphere"):
            P0[-1] = 2 * d
            return P0, 2 * d, 1.0
        P0[-1] = -2 * d
        return P0, 2 * d, -1.0


def euclidean_inversion(d: float = 1.0, center=None) -> AmbientMap:
    return AmbientMap("euclidean_inversion", d, None if center is None else tuple(center))


def _invert(p, P0, d, sign, signature):
    Q = p - P0
    q = dot(Q, Q, signature)
    qv = float(getattr(q, "val", q))
    if abs(qv) < EPS_DIV:
        raise MapSingularity(f"point on the singular set of the inversion (<Q,Q> = {qv:.3g})")
    if isinstance(Q, Jet):
        return Q * (sign * d * d / q) + P0
    return P0 + sign * d * d * Q / q


def _pad(p):
    if isinstance(p, Jet):
        zero = Jet.constant(np.zeros(1), p.m)
        return Jet(np.concatenate([p.val, zero.val]), np.concatenate([p.grad, zero.grad]),
                   np.concatenate([p.hess, zero.hess]))
    return np.append(np.asarray(p, dtype=float), 0.0)


def apply_map(m: AmbientMap, p):
    """Apply ``m`` to a point (ndarray) or a vector jet, propagating derivatives.

    Stereographic projections drop the last coordinate on output; the
    inverse projections append a zero coordinate before inverting.
    """
    if m.kind in ("stereo_plane_to_sphere", "stereo_ball_to_hyp"):
        p = _pad(p)
    N = len(p)
    P0, d, sign = m.inversion(N)
    out = _invert(p, P0, d, sign, m.signature)
    if m.kind in ("stereo_sphere_to_plane", "stereo_hyp_to_ball"):
        out = out[:-1]
    return out


def normal_transport(m: AmbientMap, f, xi) -> np.ndarray:
    """P xi = xi - 2 <f - P0, xi> / <f - P0, f - P0> (f - P0)."""
    f = np.asarray(f, dtype=float)
    xi = np.asarray(xi, dtype=float)
    P0, _, _ = m.inversion(len(f))
    Q = f - P0
    q = dot(Q, Q, m.signature)
    if abs(q) < EPS_DIV:
        raise MapSingularity("point at the inversion center")
    return xi - 2 * dot(Q, xi, m.signature) / q * Q


def shape_law_residual(m: AmbientMap, before: ShapeData, after: ShapeData, xi) -> float:
    """Frobenius defect of A~_{P xi} = (1/(s d^2)) (<Q,Q> A_xi + 2 <Q, xi> I).

    Q = f - P0 and s = +1 (Euclidean) or -1 (Lorentzian).  ``after`` is
    compared in the tangent frame transported from ``before`` by the
    differential of the inversion, rescaled to unit length.
    """
    if m.kind not in ("euclidean_inversion", "lorentz_inversion"):
        raise ValueError("shape law check applies to inversions")
    f = before.position
    P0, d, sign = m.inversion(len(f))
    Q = f - P0
    q = dot(Q, Q, m.signature)
    scale = d * d / abs(q)
    L = before.frame / scale
    G_after = L.T @ after.metric @ L
    mismatch = float(np.linalg.norm(G_after - np.eye(before.n)))
    if mismatch > 1e-6:
        raise FrameMismatch(f"transported frame is not orthonormal (defect {mismatch:.3g})")
    Pxi = normal_transport(m, f, xi)
    eta = np.ones(len(f))
    if m.signature == "lorentz":
        eta[-1] = -1.0
    signs = after.normal_signs if after.normal_signs is not None else np.ones(len(after.normals))
    coeffs = signs * (after.normals @ (eta * Pxi))
    second = np.einsum("a,aij->ij", coeffs, after.second)
    A_after = L.T @ second @ L
    A_before = shape_operator(before, xi)
    predicted = (q * A_before + 2 * dot(Q, xi, m.signature) * np.eye(before.n)) / (sign * d * d)
    return float(np.linalg.norm(A_after - predicted))


def shape_law_check(m: AmbientMap, before: ShapeData, after: ShapeData, xi=None) -> float:
    """Worst shape-law residual over ``xi`` (default: both normals of ``before``)."""
    normals = [xi] if xi is not None else list(before.normals)
    return max(shape_law_residual(m, before, after, v) for v in normals)


# ------------------------------------------------------------ quadrics

@dataclass(frozen=True)
class QuadricClass:
    k: float | None           # 0, 4d^2, -4d^2 or None (nonconstant)
    label: str
    max_deviation: float
    values: tuple = field(default=(), repr=False)


def quadric_value(c: HolomorphicCurve, z: complex) -> complex:
    G = c.value(z)
    return complex(np.sum(G * G))


def quadric_classify(c: HolomorphicCurve, samples, d: float = 1.0, tol: float | None = None) -> QuadricClass:
    """Nearest of k in {0, 4d^2, -4d^2} if <<G, G>> stays within tol of it."""
    tol = 1e-8 * max(1.0, 4 * d * d) if tol is None else tol
    values = [quadric_value(c, z) for z in samples]
    best = None
    for k, label in ((0.0, "0"), (4 * d * d, "+4d^2"), (-4 * d * d, "-4d^2")):
        dev = max(abs(v - k) for v in values)
        if best is None or dev < best[2]:
            best = (k, label, dev)
    if best[2] <= tol:
        return QuadricClass(best[0], best[1], float(best[2]), tuple(values))
    mean = np.mean(values)
    spread = max(abs(v - mean) for v in values)
    return QuadricClass(None, "nonconstant", float(spread), tuple(values))


def quadric_embedded(c: HolomorphicCurve, samples, d: float = 1.0) -> dict:
    """Defects of <<G - P0, G - P0>> = 0 with G placed in C^(n+3).

    P0 = 2d e_(n+3) with a Euclidean last coordinate (label "S_d") and
    P0 = -2d e_(n+3) with a timelike one ("H_d").  For G orthogonal to
    e_(n+3) these reduce to <<G, G>> = -4d^2 and +4d^2 respectively.
    """
    out = {}
    for label, sign in (("S_d", 1.0), ("H_d", -1.0)):
        dev = 0.0
        for z in samples:
            G = np.append(c.value(z), -2 * sign * d)
            dev = max(dev, abs(np.sum(G[:-1] * G[:-1]) + sign * G[-1] * G[-1]))
        out[label] = float(dev)
    return out


def _default_samples(c: HolomorphicCurve, count: int = 12, seed: int = 7):
    rng = np.random.default_rng(seed)
    rad = 0.9 * c.domain.radius if c.domain.kind == "disk" else 1.5
    pts = []
    while len(pts) < count:
        z = complex(*rng.uniform(-rad, rad, 2))
        if c.domain.contains(z):
            pts.append(z)
    return pts


def mean_curvature_vector(sd: ShapeData) -> np.ndarray:
    """H = (1/n) sum_a eps_a tr(A_a) nu_a, signature-aware."""
    signs = sd.normal_signs if sd.normal_signs is not None else np.ones(len(sd.normals))
    traces = np.trace(sd.A, axis1=1, axis2=2)
    return (signs * traces) @ sd.normals / sd.n


@dataclass(frozen=True)
class PairingReport:
    sphere: float       # worst |H + (X - d e_N)/d^2| of the lift to S(d e_N; d)
    hyperbolic: float   # worst |H - (X + d e_N)/d^2| of the lift to H_d in L^N
    count: int

    @property
    def observed(self) -> str:
        return "S_d" if self.sphere <= self.hyperbolic else "H_d"


def space_form_pairing(c: HolomorphicCurve, d: float, points, pivot=None) -> PairingReport:
    """Test whether phi is the stereographic image of a minimal submanifold of S_d or H_d.

    phi is lifted by the inverse stereographic projections; a submanifold
    of S(c; d) is minimal there iff its mean curvature vector in the
    ambient space is -(X - c)/d^2, and in H_d iff it is +(X - c)/d^2.
    """
    worst = {"sphere": 0.0, "hyperbolic": 0.0}
    for p in points:
        phi = phi_jets(c, p, pivot=pivot).phi
        for key, kind, sign in (("sphere", "stereo_plane_to_sphere", -1.0),
                                ("hyperbolic", "stereo_ball_to_hyp", 1.0)):
            m = AmbientMap(kind, d)
            X = apply_map(m, phi)
            sd = fundamental_forms(X, signature=m.signature)
            center = np.zeros(len(X))
            center[-1] = d if key == "sphere" else -d
            err = np.linalg.norm(mean_curvature_vector(sd) - sign * (sd.position - center) / d**2)
            worst[key] = max(worst[key], float(err))
    return PairingReport(worst["sphere"], worst["hyperbolic"], len(points))


def holo_invert(c: HolomorphicCurve, d: float = 1.0, samples=None, eps: float = 1e-10) -> HolomorphicCurve:
    """Component-wise d^2 G / <<G, G>> as a new curve (expression level)."""
    samples = _default_samples(c) if samples is None else samples
    if max(abs(quadric_value(c, z)) for z in samples) < eps:
        raise NullQuadricCurve(f"<<G, G>> vanishes on all samples of {c.name or 'curve'}")
    Q = ex.add(*[ex.Pow(g, 2) for g in c.components])
    scale = ex.const(d * d)
    comps = tuple(ex.div(ex.mul(scale, g), Q) for g in c.components)
    name = f"T[{c.name}]" if c.name else ""
    return HolomorphicCurve(c.n, comps, c.domain, name)


def holo_invert_values(G, d: float = 1.0) -> np.ndarray:
    G = np.asarray(G, dtype=complex)
    return d * d * G / np.sum(G * G)


# ------------------------------------------------------------ associated pair

@dataclass
class PairSample:
    point: ChartPoint
    g: np.ndarray          # g~ = phi~ + eta~ / lam~
    h: np.ndarray          # h~ = -zeta~ / lam~
    lam: float
    mu: float
    orientation: float    # sign of det[d phi~, eta~, zeta~] before normalization


def associated_pair_sample(c: HolomorphicCurve, m: AmbientMap, p: ChartPoint, pivot=None,
                           tol: float = 1e-6) -> PairSample:
    """Leaf data (g~, h~) of phi~ = m o phi at one chart point.

    zeta~ is only defined up to sign; it is fixed here so that
    (d phi~/dt_1, ..., d phi~/dt_n, eta~, zeta~) is positively oriented,
    which is continuous along the regular set of the chart (the fiber
    chart's own orientation sign is factored out).
    """
    pj = phi_jets(c, p, pivot=pivot)
    mapped = apply_map(m, pj.phi)
    sd = fundamental_forms(mapped, signature=m.signature)
    cf = canonical_frame(sd, tol=tol)
    if cf.lam == 0.0:
        raise MinimalPoint(f"phi~ is minimal at {p}")
    zeta = cf.zeta
    det = p.orientation() * float(np.linalg.det(np.column_stack([sd.tangent, cf.eta, zeta])))
    if det < 0:
        zeta = -zeta
    g = sd.position + cf.eta / cf.lam
    h = -zeta / cf.lam
    return PairSample(p, g, h, cf.lam, cf.mu, float(np.sign(det)))


def associated_pair_samples(c: HolomorphicCurve, m: AmbientMap, points, pivot=None,
                            tol: float = 1e-6) -> list:
    return [associated_pair_sample(c, m, p, pivot, tol) for p in points]


CONVENTIONS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass
class Theorem4Report:
    convention: tuple       # (sign on Re T_d G, sign on -Im T_d G)
    residual: float         # worst |g~ - sg Re TG| + |h~ - sh (-Im TG)| under it
    residuals: dict         # every convention
    fiber_spread: float     # worst spread of g~ over fiber angles at one base point
    count: int
    worst_point: ChartPoint | None = None


def theorem4_compare(c: HolomorphicCurve, d: float = 1.0, points=(), pivot=None) -> Theorem4Report:
    """Compare extracted leaf data of the inverted construction with T_d o G."""
    samples = associated_pair_samples(c, euclidean_inversion(d), points, pivot=pivot)
    return compare_pairs(c, d, samples)


def compare_pairs(c: HolomorphicCurve, d: float, samples) -> Theorem4Report:
    """Score PairSamples against (Re, -Im) of T_d o G under each sign convention."""
    if not samples:
        raise ValueError("no pair samples to compare")
    by_base: dict = {}
    for smp in samples:
        by_base.setdefault((smp.point.u, smp.point.v), []).append(smp)
    spread = 0.0
    for group in by_base.values():
        gs = np.array([s.g for s in group])
        spread = max(spread, float(np.max(np.linalg.norm(gs - gs[0], axis=1))))
    TG = [holo_invert_values(c.value(smp.point.z), d) for smp in samples]
    residuals, worst_at = {}, {}
    for conv in CONVENTIONS:
        errs = [float(np.linalg.norm(smp.g - conv[0] * t.real)
                      + np.linalg.norm(smp.h - conv[1] * (-t.imag)))
                for smp, t in zip(samples, TG)]
        k = int(np.argmax(errs))
        residuals[conv], worst_at[conv] = errs[k], samples[k].point
    best = min(residuals, key=residuals.get)
    return Theorem4Report(best, residuals[best], residuals, spread, len(samples), worst_at[best])
