import numpy as np
import pytest

from conftest import central_fd
from ddvv_forge.catalog import CATALOG, builtin
from ddvv_forge.errors import DegeneratePoint, NearVanishingA
from ddvv_forge.jets import Jet, dot
from ddvv_forge.surface import (HolomorphicCurve, SurfaceJets, check_isotropy, eval_surface,
                                prop8_diagnostics, split)

HELICOID = ["cos(z)", "sin(z)", "-i*z", "exp(z)", "i*exp(z)"]


def random_points(rng, entry, count):
    u = rng.uniform(*entry.u_range, count)
    v = rng.uniform(*entry.v_range, count)
    return u + 1j * v


def test_isotropy_examples():
    samples = [0.3 + 0.2j, -1.1 + 0.5j, 2.0 - 1.0j]
    enneper = HolomorphicCurve.from_strings(["z/2 - z^3/6", "i*(z/2 + z^3/6)", "z^2/2", "0", "0"])
    assert check_isotropy(enneper, samples).max_isotropy < 1e-13
    assert check_isotropy(HolomorphicCurve.from_strings(HELICOID), samples).max_isotropy < 1e-13
    rep = check_isotropy(HolomorphicCurve.from_strings(["z", "z", "0", "0", "0"]), [1.0])
    assert rep.max_isotropy == pytest.approx(2.0)
    assert not rep.passes()


def test_eval_surface_at_origin():
    s = eval_surface(HolomorphicCurve.from_strings(HELICOID), 0.0, m=3)
    np.testing.assert_allclose(s.g.val, [1, 0, 0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(s.h.val, [0, 0, 0, 0, 1], atol=1e-15)


@pytest.mark.parametrize("name", list(CATALOG))
def test_harmonic_and_conjugate(name, rng):
    c = builtin(name)
    for z in random_points(rng, CATALOG[name], 5):
        s = eval_surface(c, z, m=c.n)
        assert np.all(s.g.hess[:, 0, 0] + s.g.hess[:, 1, 1] == 0)
        assert np.linalg.norm(s.hu.val + s.gv.val) + np.linalg.norm(s.hv.val - s.gu.val) <= 1e-12
        # h_u, h_v against finite differences of h = Im G
        np.testing.assert_allclose(s.h.grad[:, :2], np.column_stack([s.hu.val, s.hv.val]), atol=1e-12)


def _flat_surface(h):
    m = 3
    e = np.eye(5)
    g = Jet(np.zeros(5), np.column_stack([e[0], e[1], np.zeros(5)]), np.zeros((5, m, m)))
    const = lambda v: Jet.constant(v, m)
    return SurfaceJets(0j, g, const(h), const(e[0]), const(e[1]), const(-e[1]), const(e[0]))


def test_split_h_normal():
    d = split(_flat_surface(np.array([0, 0, 2.0, 0, 0])))
    assert d.hT[0].val == 0 and d.hT[1].val == 0
    np.testing.assert_allclose(d.hN.val, [0, 0, 2, 0, 0])
    np.testing.assert_allclose(d.xi.val, [0, 0, -1, 0, 0])


def test_split_h_tangent_is_degenerate():
    with pytest.raises(DegeneratePoint):
        split(_flat_surface(np.array([1.0, 0, 0, 0, 0])))


def test_split_helicoid_against_finite_differences():
    c = HolomorphicCurve.from_strings(HELICOID)
    z0 = 0.3 + 0.2j
    s = eval_surface(c, z0, m=3)
    d = split(s)
    assert abs(dot(d.hN, s.gu).val) <= 1e-10 and abs(dot(d.hN, s.gv).val) <= 1e-10
    g, _ = central_fd(lambda p: np.linalg.norm(c.value(complex(*p)).imag), [z0.real, z0.imag], h=1e-5)
    np.testing.assert_allclose(d.r.grad[:2], g, atol=1e-8)
    # |grad r| in the metric of g
    assert np.sqrt(d.gradr @ d.metric @ d.gradr) <= 1 + 1e-10


@pytest.mark.parametrize("name", list(CATALOG))
def test_split_invariants(name, rng):
    c = builtin(name)
    for z in random_points(rng, CATALOG[name], 8):
        s = eval_surface(c, z, m=c.n)
        d = split(s)
        assert np.sqrt(d.gradr @ d.metric @ d.gradr) <= 1 + 1e-10
        # Pythagoras of the split
        hT = d.hT[0].val * s.gu.val + d.hT[1].val * s.gv.val
        r2 = float(d.r.val) ** 2
        assert abs(r2 - hT @ hT - float(d.rho_N.val) ** 2) <= 1e-10 * r2
        # conformality
        E = float(s.gu.val @ s.gu.val)
        assert abs(s.gu.val @ s.gv.val) <= 1e-9 * E
        assert abs(E - s.gv.val @ s.gv.val) <= 1e-9 * E
        # Lambda frame: unit, orthogonal, orthogonal to g_u, g_v, xi
        W = np.array([w.val for w in d.frame])
        assert len(W) == c.n - 1
        np.testing.assert_allclose(W @ W.T, np.eye(c.n - 1), atol=1e-10)
        np.testing.assert_allclose(W @ np.column_stack([s.gu.val, s.gv.val, d.xi.val]), 0, atol=1e-10)


def test_lambda_frame_gram_n3():
    c = builtin("enneper-pair")
    s = eval_surface(c, 0.5 + 0.3j, m=3)
    d = split(s)
    vecs = np.array([s.gu.val, s.gv.val, d.xi.val] + [w.val for w in d.frame])
    E = s.gu.val @ s.gu.val
    np.testing.assert_allclose(vecs @ vecs.T, np.diag([E, E, 1, 1, 1]), atol=1e-10 * max(1, E))


def test_lambda_frame_of_planar_curve():
    # an Enneper surface inside the first three axes: h^N lies in that slice too,
    # so the frame spans the last two axes
    c = HolomorphicCurve.from_strings(["z/2 - z^3/6", "i*(z/2 + z^3/6)", "z^2/2", "0", "0"])
    d = split(eval_surface(c, 0.4 + 0.3j, m=3))
    np.testing.assert_allclose(d.xi.val[3:], 0, atol=1e-14)
    for w in d.frame:
        np.testing.assert_allclose(w.val[:3], 0, atol=1e-12)


@pytest.mark.parametrize("name", ["enneper-pair", "helicoid-pair-4"])
def test_lambda_frame_jets_stay_orthonormal(name):
    c = builtin(name)
    d = split(eval_surface(c, 0.45 + 0.35j, m=c.n))
    for i, wi in enumerate(d.frame):
        for wj in d.frame[i:]:
            ip = dot(wi, wj)
            assert np.abs(ip.grad).max() <= 1e-9
            assert np.abs(ip.hess).max() <= 1e-9


@pytest.mark.parametrize("name", list(CATALOG))
def test_prop8_identities(name, rng):
    c = builtin(name)
    for z in random_points(rng, CATALOG[name], 10):
        s = eval_surface(c, z, m=c.n)
        rep = prop8_diagnostics(s, split(s))
        assert rep.gradr_norm <= 1 + 1e-10
        assert rep.reconstruction <= 1e-8
        assert rep.connection <= 1e-7
        assert rep.b_xi <= 1e-7
        assert rep.s_on_gradr <= 1e-12


def test_near_vanishing_a_is_reported():
    s = _flat_surface(np.array([0, 0, 2.0, 0, 0]))
    d = split(s)
    # force |grad r| = 1 so that a = 0
    d.gradr = np.array([1.0, 0.0])
    with pytest.raises(NearVanishingA):
        prop8_diagnostics(s, d)
