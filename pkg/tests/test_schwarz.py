import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from metrics_lab.errors import InvalidParameter
from metrics_lab.schwarz import (
    V_CONST,
    Dilatation,
    c_of_k,
    dkqr_bounds,
    elliptic_k,
    gamma2,
    jp_argument,
    jp_argument_planar,
    jpqr_bounds,
    lambda_range,
    mu,
    mu_inverse,
    phi_k2,
    schwarz_rho_bounds,
    sector_qc_bounds,
)

# mpmath at 30 digits
K_INV_SQRT2 = 1.8540746773013719
MU_03 = 2.5668979448308223
C_OF_2 = 3.3149089083061545


def quad_k(r):
    val, _ = quad(lambda th: 1.0 / math.sqrt(1.0 - (r * math.sin(th)) ** 2), 0.0, math.pi / 2,
                  epsabs=1e-14, epsrel=1e-14, limit=200)
    return val


def test_elliptic_k_examples():
    assert elliptic_k(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert elliptic_k(1 / math.sqrt(2)) == pytest.approx(K_INV_SQRT2, abs=1e-15)
    with pytest.raises(InvalidParameter):
        elliptic_k(1.0)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_elliptic_k_matches_quadrature():
    r = np.linspace(0.0, 0.99, 100)
    diff = np.abs(elliptic_k(r) - np.array([quad_k(v) for v in r]))
    assert diff.max() < 1e-12


def test_mu_examples():
    assert mu(0.3) == pytest.approx(MU_03, abs=1e-13)
    assert mu(1 / math.sqrt(2)) == pytest.approx(math.pi / 2, abs=1e-14)
    with pytest.raises(InvalidParameter):
        mu(0.0)


# sqrt(1-r^2) rounded to a double carries a relative error ~eps/r^2 in 1-r',
# which mu amplifies; 1e-3 keeps that below 1e-10
@given(st.floats(1e-3, 1 - 1e-3))
def test_mu_complement_identity(r):
    assert mu(r) * mu(math.sqrt((1 - r) * (1 + r))) == pytest.approx(math.pi ** 2 / 4, abs=1e-10)


@given(st.floats(0.12, 0.999999))
def test_mu_inverse_round_trip(r):
    assert mu_inverse(mu(r)) == pytest.approx(r, abs=1e-12)


@given(st.floats(0.3, 60.0))
def test_mu_of_mu_inverse(y):
    assert mu(mu_inverse(y)) == pytest.approx(y, rel=1e-10)


def test_mu_inverse_near_one_keeps_the_complement():
    # for small y the root is within a few ulps of 1, so the double is 1 - O(eps)
    r = mu_inverse(0.125)
    assert 1.0 - 1e-15 <= r <= 1.0


def test_mu_inverse_is_vectorized_and_validated():
    y = np.array([0.5, 1.0, 3.0, 50.0])
    np.testing.assert_allclose(mu(mu_inverse(y)), y, rtol=1e-10)
    assert mu_inverse(50.0) == pytest.approx(4 * math.exp(-50), rel=1e-12)
    with pytest.raises(InvalidParameter):
        mu_inverse(0.0)


def test_gamma2_example():
    # mu(1/sqrt2) = pi/2
    assert gamma2(math.sqrt(2)) == pytest.approx(4.0, abs=1e-13)
    with pytest.raises(InvalidParameter):
        gamma2(1.0)


@given(st.floats(0.0, 1.0))
def test_phi_with_k_one_is_the_identity(r):
    assert phi_k2(1.0, r) == pytest.approx(r, abs=1e-12)


@given(st.floats(0.001, 0.999))
def test_phi_two_at_a_square(t):
    assert phi_k2(2.0, t * t) == pytest.approx(2 * t / (1 + t * t), abs=1e-10)


@pytest.mark.parametrize("K", [1.0, 1.3, 2.0, 3.5])
@pytest.mark.parametrize("t", [0.05, 0.3, 0.6, 0.9])
def test_phi_doubling(K, t):
    assert phi_k2(2 * K, t * t) == pytest.approx(phi_k2(K, 2 * t / (1 + t * t)), abs=1e-10)


@given(st.floats(1.0, 5.0), st.floats(0.01, 0.99))
def test_phi_inverse_and_monotonicity(K, r):
    f = phi_k2(K, r)
    # once 1 - phi is below ~1e-6 the double keeps too few digits of it to invert
    if 1.0 - f >= 1e-6:
        assert phi_k2(1 / K, f) == pytest.approx(r, abs=1e-10)
    assert phi_k2(K, r) >= r - 1e-15
    assert phi_k2(K, min(r + 0.005, 1.0)) >= phi_k2(K, r)


@given(st.floats(1.0, 5.0), st.floats(0.01, 0.99))
def test_phi_below_its_power_bound(K, r):
    assert phi_k2(K, r) <= 4 ** (1 - 1 / K) * r ** (1 / K) + 1e-12


def test_phi_fixes_the_ends():
    assert phi_k2(3.0, 0.0) == 0.0
    assert phi_k2(3.0, 1.0) == 1.0
    with pytest.raises(InvalidParameter):
        phi_k2(0.0, 0.5)


def test_c_of_k():
    assert c_of_k(1.0)[0] == pytest.approx(1.0, abs=1e-12)
    assert c_of_k(2.0)[0] == pytest.approx(C_OF_2, abs=1e-13)
    for K in (1.0, 1.5, 2.0, 4.0, 10.0):
        exact, bound = c_of_k(K)
        assert exact <= bound + 1e-15
        assert bound == pytest.approx(V_CONST * (K - 1) + K, abs=1e-15)
    with pytest.raises(InvalidParameter):
        c_of_k(0.5)


def test_lambda_range():
    assert tuple(lambda_range(2)) == (4.0, 4.0)
    assert tuple(lambda_range(3)) == pytest.approx((4.0, 2 * math.e ** 2))
    with pytest.raises(InvalidParameter):
        lambda_range(1)


def test_dilatation_defaults_and_validation():
    d = Dilatation(2.0)
    assert d.K_I == 2.0 and d.alpha == pytest.approx(0.5)
    assert Dilatation(2.0, K_I=1.5, n=3).alpha == pytest.approx(1.5 ** -0.5)
    assert Dilatation(2.0, alpha=0.25).alpha == 0.25
    for kw in (dict(K=0.5), dict(K=2.0, K_I=3.0), dict(K=2.0, n=1), dict(K=2.0, alpha=0.9)):
        with pytest.raises(InvalidParameter):
            Dilatation(**kw)


def test_rho_bounds_for_conformal_maps():
    out = schwarz_rho_bounds(Dilatation(1.0), 1.0)
    assert out.b1_phi == pytest.approx(1.0, abs=1e-12)
    assert out.b1_power == pytest.approx(math.tanh(0.5), abs=1e-15)
    assert out.b2 == pytest.approx(1.0 + math.log(4), abs=1e-15)
    assert out.b3 == pytest.approx(1.0, abs=1e-12)
    three = schwarz_rho_bounds(Dilatation(1.0, n=3), 1.0)
    assert three.b1_phi is None and three.b3 is None


def test_rho_bounds_accept_arrays():
    r = np.array([0.1, 1.0, 3.0])
    out = schwarz_rho_bounds(Dilatation(2.0), r)
    assert out.b3.shape == (3,)
    np.testing.assert_allclose(out.b3, C_OF_2 * np.maximum(r, np.sqrt(r)), rtol=1e-12)


def test_smaller_alpha_weakens_the_power_bound():
    r = 0.8
    full = schwarz_rho_bounds(Dilatation(2.0), r).b1_power
    relaxed = schwarz_rho_bounds(Dilatation(2.0, alpha=0.3), r).b1_power
    assert relaxed >= full


def test_distortion_bounds_examples():
    out = dkqr_bounds(Dilatation(1.0), 0.5)
    assert out.phi_bound == pytest.approx(0.8, abs=1e-12)
    assert out.power_bound == pytest.approx(0.8, abs=1e-15)
    assert out.sharp_phi == pytest.approx(phi_k2(2.0, 0.25), abs=1e-15)
    assert out.sharp_power == pytest.approx(2 * 0.5, abs=1e-15)
    assert dkqr_bounds(Dilatation(2.0, n=3), 0.5).phi_bound is None
    with pytest.raises(InvalidParameter):
        dkqr_bounds(Dilatation(1.0), 1.0)


def test_jp_argument():
    x = 0.4 + 0j
    assert jp_argument(x, 0j) == pytest.approx(0.4 * 1.6 / (0.16 - 0.8 + 2), abs=1e-15)
    xs, ys = np.array([0.1 + 0.3j, 0.2]), np.array([0.3 + 0.5j, 0.2])
    np.testing.assert_allclose(jp_argument_planar(xs, ys), [jp_argument(xs[0], ys[0]), 0.0], atol=1e-15)


def test_jp_bounds_with_images():
    out = jpqr_bounds(Dilatation(1.0), 0.4 + 0j, 0j, 0.4j, 0j)
    assert out.lhs_form == pytest.approx(0.4 / 1.6, abs=1e-15)
    assert out.lhs_form <= out.phi_bound
    assert jpqr_bounds(Dilatation(1.0), 0.4 + 0j, 0j).lhs_form is None


def test_sector_bounds():
    lo, hi = sector_qc_bounds(1.0, math.pi / 2, math.pi, 0.5)
    assert lo == pytest.approx(0.5, abs=1e-15)
    assert hi == pytest.approx(0.5 * math.pi * math.sin(math.pi / 4) / (math.pi / 2), abs=1e-12)
    with pytest.raises(InvalidParameter):
        sector_qc_bounds(1.0, 4.0, math.pi, 0.5)
