import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import central_fd
from ddvv_forge.catalog import CATALOG, builtin
from ddvv_forge.construction import ChartPoint, GridSpec, fiber_vector, phi_jets, sample_grid
from ddvv_forge.errors import EmptyGrid
from ddvv_forge.jets import Jet, dot
from ddvv_forge.surface import Domain, eval_surface, split


def _frame(k, m=3):
    return [Jet.constant(v, m) for v in np.eye(k + 2)[2:]]


def test_fiber_vector_poles():
    frame = _frame(2)
    np.testing.assert_allclose(fiber_vector(frame, [0.0]).val, frame[0].val)
    np.testing.assert_allclose(fiber_vector(frame, [np.pi / 2]).val, frame[1].val, atol=1e-16)


@given(st.lists(st.floats(0, 2 * np.pi), min_size=1, max_size=4))
def test_fiber_vector_is_unit(theta):
    m = len(theta) + 2
    frame = _frame(len(theta) + 1, m)
    t = [Jet.seed(a, 2 + k, m) for k, a in enumerate(theta)]
    n2 = dot(fiber_vector(frame, t), fiber_vector(frame, t))
    assert abs(n2.val - 1) <= 1e-12
    assert np.abs(n2.grad).max() <= 1e-10 and np.abs(n2.hess).max() <= 1e-10


@pytest.mark.parametrize("name", ["enneper-pair", "helicoid-pair", "null-exp-4"])
def test_fiber_geometry_of_phi(name):
    c = builtin(name)
    p = ChartPoint(0.5, 0.3, (0.9,) + (1.2,) * (c.n - 3), c.n)
    pj = phi_jets(c, p)
    s, d = pj.surface, pj.split
    rho = float(d.rho_N.val)
    assert np.linalg.norm(pj.phi.grad[:, 2]) == pytest.approx(rho, rel=1e-12)
    a_u, a_v = d.hT
    offset = pj.phi.val - s.g.val - (a_v.val * s.gu.val - a_u.val * s.gv.val)
    assert np.linalg.norm(offset) == pytest.approx(rho, rel=1e-12)
    assert abs(float(dot(pj.w, pj.w).val) - 1) <= 1e-12


def _phi_value(c, pivot):
    def f(x):
        return phi_jets(c, ChartPoint(x[0], x[1], tuple(x[2:]), c.n), pivot=pivot).phi.val
    return f


def test_enneper_rank_at_reference_point():
    c = builtin("enneper-pair")
    pj = phi_jets(c, ChartPoint(0.4, 0.1, (0.7,), 3))
    assert pj.regular and pj.rank_margin > 1e-6
    J, _ = central_fd(_phi_value(c, pj.split.pivot), [0.4, 0.1, 0.7], h=1e-5)
    sv = np.linalg.svd(J, compute_uv=False)
    assert np.sum(sv > 1e-6 * sv[0]) == 3


@pytest.mark.parametrize("name", ["helicoid-pair", "enneper-pair-4"])
def test_jets_match_finite_differences(name, rng):
    c = builtin(name)
    e = CATALOG[name]
    for _ in range(3):
        x = np.concatenate([[rng.uniform(*e.u_range), rng.uniform(*e.v_range)],
                            rng.uniform(0.3, 2.8, c.n - 2)])
        pj = phi_jets(c, ChartPoint(x[0], x[1], tuple(x[2:]), c.n))
        g, H = central_fd(_phi_value(c, pj.split.pivot), x)
        np.testing.assert_allclose(pj.phi.grad, g, atol=1e-5)
        np.testing.assert_allclose(pj.phi.hess, H, atol=1e-3)


def test_phi_depends_on_frame_only_through_w():
    c = builtin("helicoid-pair")
    z = 0.6 + 0.25j
    s = eval_surface(c, z, m=3)
    d = split(s)
    pivots = [d.pivot, tuple(reversed(d.pivot))]
    for alt in ((0, 1), (1, 2), (0, 4)):
        if alt not in pivots:
            pivots.append(alt)
    theta = 1.1
    ref = phi_jets(c, ChartPoint(z.real, z.imag, (theta,), 3), pivot=pivots[0])
    for pv in pivots[1:]:
        frame = split(s, pivot=pv).frame
        t = np.arctan2(ref.w.val @ frame[1].val, ref.w.val @ frame[0].val)
        other = phi_jets(c, ChartPoint(z.real, z.imag, (t,), 3), pivot=pv)
        np.testing.assert_allclose(other.w.val, ref.w.val, atol=1e-12)
        np.testing.assert_allclose(other.phi.val, ref.phi.val, atol=1e-10)


def test_grid_size():
    pts = sample_grid(GridSpec(3, (0, 1), (0, 1), 3, 3, (4,)))
    assert len(pts) == 36
    assert len(sample_grid(GridSpec(4, (0, 1), (0, 1), 2, 2, (3, 2)))) == 24


def test_grid_avoids_chart_poles():
    for count in range(1, 8):
        pts = sample_grid(GridSpec(5, (0, 1), (0, 1), 1, 1, (count, count, count)))
        theta = np.array([p.theta for p in pts])
        assert np.abs(np.sin(theta[:, :-1])).min() > 1e-3


def test_jitter_is_reproducible():
    spec = GridSpec(3, (0, 1), (0, 1), 4, 4, (2,), jitter=0.5, seed=11)
    a, b = sample_grid(spec), sample_grid(spec)
    assert a == b
    assert a != sample_grid(GridSpec(3, (0, 1), (0, 1), 4, 4, (2,), jitter=0.5, seed=12))


def test_grid_outside_disk():
    with pytest.raises(EmptyGrid):
        sample_grid(GridSpec(3, (2, 3), (2, 3), 3, 3, (2,)), Domain("disk", 1.0))


def test_chart_orientation_sign():
    assert ChartPoint(0, 0, (1.0,), 3).orientation() == 1
    assert ChartPoint(0, 0, (4.0, 1.0), 4).orientation() == -1
    assert ChartPoint(0, 0, (4.0, 1.0, 1.0), 5).orientation() == 1   # sin^2 t1 sin t2
    assert ChartPoint(0, 0, (1.0, 4.0, 1.0), 5).orientation() == -1
