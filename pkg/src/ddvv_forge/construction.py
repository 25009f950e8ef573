"""The map phi(y, w) = g(y) + g_* J h^T(y) + |h^N(y)| w over the unit normal bundle.

Parameters are ordered (u, v, theta_1, ..., theta_{n-2}); the fiber
vector w is written in spherical coordinates against the frame of the
normal sub-bundle orthogonal to h^N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import EmptyGrid
from .jets import Jet
from .linalg import EPS_RANK
from .surface import (EPS_HN, HolomorphicCurve, SplitData, SurfaceJets,
                      eval_surface, split)

EPS_REG = 1e-8


@dataclass(frozen=True)
class ChartPoint:
    u: float
    v: float
    theta: tuple
    n: int

    def __post_init__(self):
        if len(self.theta) != self.n - 2:
            raise ValueError(f"n = {self.n} needs {self.n - 2} fiber angles, got {len(self.theta)}")

    @property
    def z(self) -> complex:
        return complex(self.u, self.v)

    def as_list(self):
        return [self.u, self.v, *self.theta]

    def orientation(self) -> float:
        """Sign of the spherical fiber chart's volume element at this point.

        The volume form is prod_k sin(theta_k)^(n-2-k) (k from 1), so the
        chart reverses orientation where an odd power of a sine is negative.
        """
        sign = 1.0
        for k, t in enumerate(self.theta[:-1]):
            if (self.n - 3 - k) % 2 and np.sin(t) < 0:
                sign = -sign
        return sign


def fiber_vector(frame, theta) -> Jet:
    """w = cos t1 w1 + sin t1 cos t2 w2 + ... + sin t1 ... sin t_{n-2} w_{n-1}.

    ``theta`` entries may be floats or seeded jets.
    """
    k = len(frame)
    if len(theta) != k - 1:
        raise ValueError(f"{k} frame vectors need {k - 1} angles")
    m = frame[0].m
    theta = [t if isinstance(t, Jet) else Jet.constant(t, m) for t in theta]
    coeffs = []
    prefix = Jet.constant(1.0, m)
    for t in theta:
        coeffs.append(prefix * jets.cos(t))
        prefix = prefix * jets.sin(t)
    coeffs.append(prefix)
    return jets.lin_comb(coeffs, frame)


@dataclass
class PhiJet:
    point: ChartPoint
    phi: Jet
    w: Jet
    rank_margin: float
    regular: bool
    surface: SurfaceJets = field(repr=False)
    split: SplitData = field(repr=False)

    @property
    def tangent(self) -> np.ndarray:
        return self.phi.grad


def phi_jets(c: HolomorphicCurve, p: ChartPoint, pivot=None, eps_reg: float = EPS_REG,
             eps_hN: float = EPS_HN, eps_rank: float = EPS_RANK) -> PhiJet:
    """Evaluate phi with full 2-jets in all n chart parameters."""
    if p.n != c.n:
        raise ValueError(f"chart point has n = {p.n}, curve has n = {c.n}")
    m = c.n
    s = eval_surface(c, p.z, m=m)
    d = split(s, pivot=pivot, eps_hN=eps_hN, eps_rank=eps_rank)
    a_u, a_v = d.hT
    theta = [Jet.seed(t, 2 + k, m) for k, t in enumerate(p.theta)]
    w = fiber_vector(d.frame, theta)
    phi = s.g + (a_v * s.gu - a_u * s.gv) + d.rho_N * w
    eig = np.linalg.eigvalsh(phi.grad.T @ phi.grad)
    margin = float(eig[0])
    regular = margin >= eps_reg * float(np.median(eig))
    return PhiJet(p, phi, w, margin, regular, s, d)


# ------------------------------------------------------------ grids

@dataclass(frozen=True)
class GridSpec:
    n: int
    u_range: tuple = (-1.0, 1.0)
    v_range: tuple = (-1.0, 1.0)
    nu: int = 10
    nv: int = 10
    n_theta: tuple = (8,)
    jitter: float = 0.0
    seed: int = 0


def _axis(lo, hi, count, offset=None):
    if offset is not None:
        step = (hi - lo) / count
        return lo + step * (np.arange(count) + offset)
    if count == 1:
        return np.array([0.5 * (lo + hi)])
    return np.linspace(lo, hi, count)


def sample_grid(spec: GridSpec, domain=None) -> list:
    """Tensor grid over (u, v, theta) with optional seeded jitter.

    Fiber angles are offset from the poles of the spherical chart: by a
    quarter step for theta_1 (so no count lands on pi) and by half a step
    for the others.  Points outside ``domain`` are dropped.
    """
    n = spec.n
    if spec.nu < 1 or spec.nv < 1:
        raise EmptyGrid("grid counts must be >= 1")
    counts = tuple(spec.n_theta)
    if len(counts) == 1 and n - 2 > 1:
        counts = counts * (n - 2)
    if len(counts) != n - 2 or min(counts) < 1:
        raise EmptyGrid(f"need {n - 2} positive fiber counts, got {spec.n_theta}")
    us = _axis(*spec.u_range, spec.nu)
    vs = _axis(*spec.v_range, spec.nv)
    angle_axes = [_axis(0.0, 2 * np.pi, counts[0], offset=0.25)]
    angle_axes += [_axis(0.0, np.pi, k, offset=0.5) for k in counts[1:]]
    rng = np.random.default_rng(spec.seed) if spec.jitter else None
    du = (spec.u_range[1] - spec.u_range[0]) / max(spec.nu, 1)
    dv = (spec.v_range[1] - spec.v_range[0]) / max(spec.nv, 1)
    points = []
    for u in us:
        for v in vs:
            for angles in np.array(np.meshgrid(*angle_axes, indexing="ij")).reshape(n - 2, -1).T:
                uu, vv, th = float(u), float(v), [float(t) for t in angles]
                if rng is not None:
                    uu += spec.jitter * du * rng.uniform(-0.5, 0.5)
                    vv += spec.jitter * dv * rng.uniform(-0.5, 0.5)
                if domain is not None and not domain.contains(complex(uu, vv)):
                    continue
                points.append(ChartPoint(uu, vv, tuple(th), n))
    if not points:
        raise EmptyGrid(f"no grid points inside the {getattr(domain, 'kind', '')} domain")
    return points
