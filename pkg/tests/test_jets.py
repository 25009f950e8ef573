import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import central_fd
from ddvv_forge import jets
from ddvv_forge.errors import SingularJet
from ddvv_forge.expr import eval_jet, parse
from ddvv_forge.jets import Jet, dot, jet_arith, jet_func, lift_complex, norm


def seeds(*values):
    m = len(values)
    return [Jet.seed(v, k, m) for k, v in enumerate(values)]


def test_product_rule():
    x, y = seeds(2.0, 3.0)
    p = jet_arith(x, y, "mul")
    assert p.val == 6
    np.testing.assert_array_equal(p.grad, [3, 2])
    np.testing.assert_array_equal(p.hess, [[0, 1], [1, 0]])


def test_sqrt_of_constant():
    r = jet_func(Jet.constant(4.0, 3), "sqrt")
    assert r.val == 2
    assert not r.grad.any() and not r.hess.any()


def test_quotient_against_symbolic_derivatives():
    x, y = seeds(2.0, 4.0)
    q = jet_arith(x, y, "div")
    # x/y: d/dx = 1/y, d/dy = -x/y^2, d2/dy2 = 2x/y^3, d2/dxdy = -1/y^2
    assert q.val == 0.5
    np.testing.assert_allclose(q.grad, [0.25, -0.125], atol=1e-15)
    np.testing.assert_allclose(q.hess, [[0, -1 / 16], [-1 / 16, 1 / 16]], atol=1e-15)


def test_singular_jets():
    x, = seeds(0.0)
    with pytest.raises(SingularJet):
        jet_func(x, "reciprocal")
    with pytest.raises(SingularJet):
        jet_func(x, "sqrt")
    with pytest.raises(SingularJet):
        norm(Jet.constant(np.zeros(3), 2))


def test_vector_operations():
    e1 = Jet.constant([1.0, 0, 0, 0], 2)
    e2 = Jet.constant([0, 1.0, 0, 0], 2)
    d = dot(e1, e2)
    assert d.val == 0 and not d.grad.any() and not d.hess.any()
    n = norm(Jet.constant([3.0, 4.0, 0.0], 2))
    assert n.val == 5 and not n.grad.any() and not n.hess.any()
    eN = Jet.constant([0, 0, 0, 1.0], 2)
    assert dot(eN, eN, "lorentz").val == -1


def test_lift_example_z_squared():
    F = eval_jet(parse("z^2"), 1 + 1j, 2).derivs
    re = lift_complex(F, "re")
    assert re.val == pytest.approx(0.0)
    np.testing.assert_allclose(re.grad, [2, -2])
    # oracle: central differences of Re((u + iv)^2)
    g, _ = central_fd(lambda p: np.array((complex(*p) ** 2).real), [1.0, 1.0])
    np.testing.assert_allclose(re.grad, g, atol=1e-8)


def test_lift_of_constant():
    for which, want in (("re", 2.0), ("im", -3.0)):
        lf = lift_complex([2 - 3j, 0, 0], which, m=4)
        assert lf.val == want
        assert not lf.grad.any() and not lf.hess.any()


def test_lift_slots_are_validated():
    with pytest.raises(ValueError):
        lift_complex([1, 1, 1], "re", slots=(1, 1), m=2)


# ------------------------------------------------------------ properties

finite = st.floats(-3, 3, allow_nan=False)


def random_jet(rng, m):
    H = rng.normal(size=(m, m))
    return Jet(rng.normal(), rng.normal(size=m), H + H.T)


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_distributive_law(seed, m):
    rng = np.random.default_rng(seed)
    a, b, c = (random_jet(rng, m) for _ in range(3))
    lhs = (a + b) * c
    rhs = a * c + b * c
    for x, y in ((lhs.val, rhs.val), (lhs.grad, rhs.grad), (lhs.hess, rhs.hess)):
        np.testing.assert_allclose(x, y, rtol=1e-13, atol=1e-13 * (1 + np.abs(y).max()))


@given(finite, finite)
def test_chain_rule_against_finite_differences(x0, y0):
    x, y = seeds(x0, y0)
    r = jets.sqrt(x * x + y * y + 1.0)
    g, H = central_fd(lambda p: np.sqrt(p[0] ** 2 + p[1] ** 2 + 1.0), [x0, y0])
    np.testing.assert_allclose(r.grad, g, atol=1e-5)
    np.testing.assert_allclose(r.hess, H, atol=1e-3)


@given(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
       st.sampled_from(["exp(z)", "z^3 - 2*z", "sin(z)*cosh(z)", "1/(z + 3)"]),
       st.sampled_from(["re", "im"]))
def test_lifts_are_exactly_harmonic(z0, text, which):
    F = eval_jet(parse(text), z0, 2).derivs
    lf = lift_complex(F, which, slots=(1, 3), m=5)
    assert lf.hess[1, 1] + lf.hess[3, 3] == 0.0
    assert lf.hess[1, 1] == -lf.hess[3, 3]


@given(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_lift_matches_finite_differences(z0):
    e = parse("exp(z)*z - sin(z)")
    F = eval_jet(e, z0, 2).derivs
    from ddvv_forge.expr import evaluate
    for which, part in (("re", np.real), ("im", np.imag)):
        lf = lift_complex(F, which)
        g, H = central_fd(lambda p: np.array(part(evaluate(e, complex(*p)))), [z0.real, z0.imag])
        np.testing.assert_allclose(lf.grad, g, atol=1e-6 * max(1, np.abs(g).max()))
        np.testing.assert_allclose(lf.hess, H, atol=1e-3 * max(1, np.abs(H).max()))
