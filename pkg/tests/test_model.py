import math

import numpy as np
import pytest

from heunvar.model import (RadialModel, HeunParams, PhysicalParams,
                           RadialCoefficients, heun_from_radial,
                           heun_ode_coefficients, indicial_exponent,
                           radial_from_physical, shifted_ode_coefficients)


def test_radial_from_physical_reference_point():
    # ell=2, alpha=0.5, m=1, a3=1, a4=3, a1=2, eta=4, kappa=2
    pp = PhysicalParams(ell=2, alpha=0.5, mass=1.0, a1=2.0, a3=1.0, a4=3.0,
                        eta=4.0, kappa=2.0)
    rc = radial_from_physical(pp)
    assert rc.v_m2 == pytest.approx(22.0, abs=0)
    assert rc.v_m1 == pytest.approx(1.0, abs=0)
    assert rc.v_p1 == pytest.approx(0.5, abs=0)
    assert rc.w == pytest.approx(1.0, abs=0)


def test_physical_params_guards():
    with pytest.raises(ValueError):
        PhysicalParams(ell=1, alpha=0.0, mass=1.0, a1=0, a3=0, a4=0,
                       eta=1.0, kappa=1.0)
    with pytest.raises(ValueError):
        PhysicalParams(ell=1, alpha=1.0, mass=1.0, a1=0, a3=0, a4=0,
                       eta=-2.0, kappa=1.0)


def test_radial_coefficients_reject_negative_centrifugal():
    with pytest.raises(ValueError):
        RadialCoefficients(v_m2=-1.0, v_m1=0.0, v_p1=0.0, w=0.0)


def test_indicial_exponent_is_sqrt_of_centrifugal_strength():
    rc = RadialCoefficients(v_m2=22.0, v_m1=1.0, v_p1=0.5, w=1.0)
    assert indicial_exponent(rc) == pytest.approx(math.sqrt(22.0), rel=1e-15)


def test_indicial_exponent_corrected_value():
    # alpha=0.5, ell=1, mass=1, a4=0: v_m2 = (ell/alpha)^2 = 4, so s = 2.
    # The superseded exponent formula would give 0.5 here (alpha^2 * s); the
    # corrected behaviour must not reproduce it.
    pp = PhysicalParams(ell=1, alpha=0.5, mass=1.0, a1=0.0, a3=0.0, a4=0.0,
                        eta=1.0, kappa=0.0)
    s = indicial_exponent(radial_from_physical(pp))
    assert s == pytest.approx(2.0, abs=1e-15)
    assert abs(s - 0.5) > 1.0


@pytest.mark.parametrize("rc, expected", [
    ((1.0, 0.0, 0.0, 0.0), (2.0, 0.0, 0.0, 0.0)),
    ((4.0, 3.0, 2.0, 5.0), (4.0, 2.0, 6.0, -6.0)),
])
def test_heun_from_radial_reference_points(rc, expected):
    hp = heun_from_radial(RadialCoefficients(*rc))
    assert (hp.a, hp.b, hp.c, hp.d) == pytest.approx(expected, abs=1e-15)


def test_heun_parameter_a_is_twice_indicial_exponent():
    rc = RadialCoefficients(v_m2=7.3, v_m1=-1.2, v_p1=0.4, w=2.0)
    hp = heun_from_radial(rc)
    assert hp.a == pytest.approx(2.0 * indicial_exponent(rc), rel=1e-15)


def test_heun_from_radial_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(25):
        rc = RadialCoefficients(v_m2=float(rng.uniform(0.01, 40)),
                                v_m1=float(rng.uniform(-4, 4)),
                                v_p1=float(rng.uniform(-4, 4)),
                                w=float(rng.uniform(-10, 10)))
        hp = heun_from_radial(rc)
        assert (hp.a / 2) ** 2 == pytest.approx(rc.v_m2, rel=1e-14, abs=1e-14)
        assert hp.b == rc.v_p1
        assert hp.c - hp.b ** 2 / 4 == pytest.approx(rc.w, rel=1e-13, abs=1e-13)
        assert -hp.d / 2 == pytest.approx(rc.v_m1, rel=1e-15, abs=0)


def test_heun_from_radial_warns_on_degenerate_exponent():
    with pytest.warns(UserWarning):
        heun_from_radial(RadialCoefficients(0.0, 1.0, 1.0, 2.0))


def test_heun_params_reject_negative_a():
    with pytest.raises(ValueError):
        HeunParams(a=-1.0, b=0.0, c=0.0, d=0.0)


def test_shifted_and_heun_ode_coefficients_agree_under_the_map():
    """The first-order and zeroth-order ODE coefficients of the shifted radial
    equation must equal those of its Heun form at every point."""
    rc = RadialCoefficients(v_m2=2.25, v_m1=1.7, v_p1=0.9, w=3.1)
    hp = heun_from_radial(rc)
    for x in (0.2, 0.7, 1.5, 3.0):
        p_r, q_r = shifted_ode_coefficients(rc, x)
        p_h, q_h = heun_ode_coefficients(hp, x)
        assert p_r == pytest.approx(p_h, rel=1e-14)
        assert q_r == pytest.approx(q_h, rel=1e-13, abs=1e-13)


def test_radial_model_exponent_is_abs_gamma():
    assert RadialModel(gamma=-1.5, a=0.0, b=1.0).s == 1.5
    assert RadialModel(gamma=0.0, a=0.0, b=0.0).s == 0.0
