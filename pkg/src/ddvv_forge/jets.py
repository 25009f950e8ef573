"""Second-order real jets in ``m`` parameters.

A :class:`Jet` carries a value together with its gradient and Hessian.
Scalar jets have ``val.shape == ()``; vector jets (one jet per ambient
coordinate) have ``val.shape == (N,)``.  Arithmetic broadcasts a scalar
jet against a vector jet, so ``r * xi`` scales a vector field by a
function with the product rule applied to every component.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularJet

EPS_DIV = 1e-12


class Jet:
    __slots__ = ("val", "grad", "hess")
    __array_ufunc__ = None  # ndarray (op) Jet defers to the Jet methods

    def __init__(self, val, grad, hess):
        self.val = np.asarray(val, dtype=float)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    # -- constructors --------------------------------------------------
    @classmethod
    def constant(cls, value, m: int) -> "Jet":
        value = np.asarray(value, dtype=float)
        return cls(value, np.zeros(value.shape + (m,)), np.zeros(value.shape + (m, m)))

    @classmethod
    def seed(cls, value: float, slot: int, m: int) -> "Jet":
        """Independent variable occupying parameter ``slot``."""
        grad = np.zeros(m)
        grad[slot] = 1.0
        return cls(float(value), grad, np.zeros((m, m)))

    # -- shape ---------------------------------------------------------
    @property
    def m(self) -> int:
        return self.grad.shape[-1]

    @property
    def shape(self):
        return self.val.shape

    def __len__(self):
        return len(self.val)

    def __getitem__(self, idx) -> "Jet":
        return Jet(self.val[idx], self.grad[idx], self.hess[idx])

    def __repr__(self):
        return f"Jet(val={self.val!r}, m={self.m})"

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.m != self.m:
                raise ValueError(f"jet parameter counts differ: {self.m} vs {other.m}")
            return other
        return Jet.constant(other, self.m)

    def __add__(self, other):
        other = self._coerce(other)
        return Jet(self.val + other.val, self.grad + other.grad, self.hess + other.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            c = np.asarray(other, dtype=float)
            return Jet(self.val * c, self.grad * c[..., None], self.hess * c[..., None, None])
        other = self._coerce(other)
        a, b = self, other
        val = a.val * b.val
        grad = a.grad * b.val[..., None] + a.val[..., None] * b.grad
        cross = a.grad[..., :, None] * b.grad[..., None, :]
        hess = (a.hess * b.val[..., None, None] + a.val[..., None, None] * b.hess
                + cross + np.swapaxes(cross, -1, -2))
        return Jet(val, grad, hess)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1.0 / np.asarray(other, dtype=float))
        return self * reciprocal(other)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    # -- reductions ----------------------------------------------------
    def sum(self) -> "Jet":
        return Jet(self.val.sum(0), self.grad.sum(0), self.hess.sum(0))

    def apply(self, f0, f1, f2) -> "Jet":
        """Chain rule for a scalar function with value/derivatives f0, f1, f2."""
        f1 = np.asarray(f1, dtype=float)
        f2 = np.asarray(f2, dtype=float)
        outer = self.grad[..., :, None] * self.grad[..., None, :]
        return Jet(f0, f1[..., None] * self.grad,
                   f1[..., None, None] * self.hess + f2[..., None, None] * outer)


Jet2 = Jet
VecJet = Jet


def stack(jets) -> Jet:
    jets = list(jets)
    return Jet(np.stack([j.val for j in jets]), np.stack([j.grad for j in jets]),
               np.stack([j.hess for j in jets]))


def _check(x, eps, what):
    if np.any(np.abs(x) < eps):
        raise SingularJet(f"{what} at |value| {np.min(np.abs(x)):.3g} < {eps:g}")


def reciprocal(a: Jet, eps_div: float = EPS_DIV) -> Jet:
    _check(a.val, eps_div, "reciprocal")
    x = a.val
    return a.apply(1.0 / x, -1.0 / x**2, 2.0 / x**3)


def sqrt(a: Jet, eps_div: float = EPS_DIV) -> Jet:
    if np.any(a.val < eps_div):
        raise SingularJet(f"sqrt at value {np.min(a.val):.3g} < {eps_div:g}")
    s = np.sqrt(a.val)
    return a.apply(s, 0.5 / s, -0.25 / (s * a.val))


def sin(a: Jet) -> Jet:
    return a.apply(np.sin(a.val), np.cos(a.val), -np.sin(a.val))


def cos(a: Jet) -> Jet:
    return a.apply(np.cos(a.val), -np.sin(a.val), -np.cos(a.val))


def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a * reciprocal(b)
    raise ValueError(f"unknown jet operation {op!r}")


def jet_func(a: Jet, f: str) -> Jet:
    return {"sqrt": sqrt, "reciprocal": reciprocal}[f](a)


# -- vector operations ------------------------------------------------

def dot(a, b, signature: str = "euclidean"):
    """Bilinear product of two vector jets (or a jet and a plain vector).

    ``signature="lorentz"`` negates the last coordinate's contribution.
    """
    if signature == "lorentz":
        sign = np.ones(len(a))
        sign[-1] = -1.0
        a = a * sign
    elif signature != "euclidean":
        raise ValueError(f"unknown signature {signature!r}")
    if isinstance(a, Jet) or isinstance(b, Jet):
        prod = a * b if isinstance(a, Jet) else b * a
        return prod.sum()
    return float(np.dot(a, b))


def norm(a: Jet, eps_div: float = EPS_DIV) -> Jet:
    return sqrt(dot(a, a), eps_div)


def lin_comb(coeffs, vectors) -> Jet:
    """sum_k coeffs[k] * vectors[k]; coefficients may be jets or floats."""
    out = None
    for c, v in zip(coeffs, vectors):
        term = c * v if isinstance(c, Jet) else v * c
        out = term if out is None else out + term
    return out


# -- complex lifting --------------------------------------------------

def lift_array(d0, d1, d2, which: str, slots=(0, 1), m: int = 2) -> Jet:
    """Vectorized :func:`lift_complex` over arrays of complex derivatives."""
    d0, d1, d2 = (np.asarray(x, dtype=complex) for x in (d0, d1, d2))
    iu, iv = slots
    if iu == iv or not (0 <= iu < m and 0 <= iv < m):
        raise ValueError(f"invalid slots {slots} for m={m}")
    shape = d0.shape
    grad = np.zeros(shape + (m,))
    hess = np.zeros(shape + (m, m))
    if which == "re":
        val = d0.real
        gu, gv = d1.real, -d1.imag
        huu, huv = d2.real, -d2.imag
    elif which == "im":
        val = d0.imag
        gu, gv = d1.imag, d1.real
        huu, huv = d2.imag, d2.real
    else:
        raise ValueError(f"which must be 're' or 'im', got {which!r}")
    grad[..., iu] = gu
    grad[..., iv] = gv
    hess[..., iu, iu] = huu
    hess[..., iu, iv] = huv
    hess[..., iv, iu] = huv
    hess[..., iv, iv] = -huu
    return Jet(val, grad, hess)


def lift_complex(F, which: str, slots=(0, 1), m: int = 2) -> Jet:
    """Real or imaginary part of a holomorphic function as a jet in (u, v).

    ``F`` holds ``F(z0), F'(z0), F''(z0)`` (a ComplexJet of order >= 2).
    With z = u + iv the Cauchy-Riemann equations fix every derivative,
    and the vv entry is minus the uu entry, so lifts are exactly harmonic.
    """
    if len(F) < 3:
        raise ValueError("lift_complex needs derivatives up to order 2")
    return lift_array(F[0], F[1], F[2], which, slots, m)
