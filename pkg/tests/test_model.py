import numpy as np
import pytest
from hypothesis import given, strategies as st

from benj.errors import ParameterError
from benj.model import ModelParams, f_prime, nonlinear_F, nonlinear_f, symbol_l


def test_symbol_values():
    p = ModelParams(m=1, r=0.5, gamma=1.0, delta=1.0, q=1)
    assert symbol_l(p, 4.0) == pytest.approx(16.0 - 4.0)  # |4|^(2m) - |4|^(2r)
    assert symbol_l(p, 2.0) == pytest.approx(4.0 - 2.0)
    assert symbol_l(p, 0.0) == 0.0  # both powers vanish for r > 0


def test_symbol_r_zero_convention():
    p = ModelParams(m=2, r=0.0, gamma=3.0, delta=1.0, q=1)
    assert symbol_l(p, 0.0) == pytest.approx(-3.0)  # |0|^0 := 1


def test_symbol_vectorized_and_even():
    p = ModelParams(m=1, r=0.5, gamma=0.7, delta=2.0, q=2)
    kappa = np.linspace(-9.0, 9.0, 37)
    vals = symbol_l(p, kappa)
    assert np.allclose(vals, symbol_l(p, -kappa))


def test_symbol_kdv_reduction():
    p = ModelParams(m=1, r=0.5, gamma=0.0, delta=1.7, q=1)
    kappa = np.linspace(-5, 5, 41)
    assert np.allclose(symbol_l(p, kappa), 1.7 * kappa**2)


def test_nonlinearity_values():
    p1 = ModelParams(m=1, r=0.0, gamma=0.0, delta=1.0, q=1)
    p2 = ModelParams(m=1, r=0.0, gamma=0.0, delta=1.0, q=2)
    p3 = ModelParams(m=1, r=0.0, gamma=0.0, delta=1.0, q=3)
    assert nonlinear_f(p1, 2.0) == pytest.approx(2.0)
    assert nonlinear_f(p2, -1.0) == pytest.approx(-1.0 / 3.0)
    assert nonlinear_f(p3, 0.0) == 0.0
    assert nonlinear_F(p1, 1.0) == pytest.approx(1.0 / 6.0)
    assert nonlinear_F(p2, 2.0) == pytest.approx(4.0 / 3.0)
    assert nonlinear_F(p3, 0.0) == 0.0
    assert f_prime(p1, 3.0) == pytest.approx(3.0)
    assert f_prime(p2, -2.0) == pytest.approx(4.0)
    assert f_prime(p3, 1.0) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "kwargs, fragment",
    [
        (dict(m=0), "m must"),
        (dict(r=1.0), "r must"),
        (dict(r=-0.1), "r must"),
        (dict(gamma=-1.0), "gamma must"),
        (dict(delta=0.0), "delta must"),
        (dict(q=0), "q must"),
        (dict(domain_scale=0.0), "domain_scale must"),
    ],
)
def test_params_validation(kwargs, fragment):
    base = dict(m=1, r=0.5, gamma=1.0, delta=1.0, q=1, domain_scale=1.0)
    base.update(kwargs)
    with pytest.raises(ParameterError, match=fragment):
        ModelParams(**base)


@given(
    u=st.floats(-3, 3),
    v=st.floats(-3, 3),
    q=st.integers(1, 4),
)
def test_flux_difference_factorization(u, v, q):
    """f(u) - f(v) = (u - v) * (1/(q+1)) sum_j u^j v^(q-j)."""
    p = ModelParams(m=1, r=0.5, gamma=1.0, delta=1.0, q=q)
    lhs = nonlinear_f(p, u) - nonlinear_f(p, v)
    g = sum(u**j * v ** (q - j) for j in range(q + 1)) / (q + 1)
    rhs = (u - v) * g
    assert lhs == pytest.approx(rhs, rel=1e-13, abs=1e-13)


@given(u=st.floats(-2, 2), q=st.integers(1, 4))
def test_derivative_chain(u, q):
    """F' = f and f' = u^q, checked by central differences."""
    p = ModelParams(m=1, r=0.5, gamma=1.0, delta=1.0, q=q)
    h = 1e-5
    dF = (nonlinear_F(p, u + h) - nonlinear_F(p, u - h)) / (2 * h)
    df = (nonlinear_f(p, u + h) - nonlinear_f(p, u - h)) / (2 * h)
    scale_F = max(abs(nonlinear_f(p, u)), 1e-4)
    scale_f = max(abs(f_prime(p, u)), 1e-4)
    assert abs(dF - nonlinear_f(p, u)) / scale_F < 1e-6
    assert abs(df - f_prime(p, u)) / scale_f < 1e-6
