"""Quadrature engine: closed-form validation suite, singular substitution,
tail envelopes, error-estimate soundness."""

import math

import numpy as np
import pytest

from frbesim import quad

SQPI = math.sqrt(math.pi)

# name, runner(tol) -> QuadratureResult, exact value
VALIDATION_SUITE = [
    ("gauss",
     lambda tol: quad.integrate_line(lambda l: np.exp(-l * l), tol=tol,
                                     envelope=quad.GaussianEnvelope(1.0)),
     SQPI),
    ("gauss_cos",
     lambda tol: quad.integrate_line(lambda l: np.cos(2 * l) * np.exp(-l * l),
                                     tol=tol, envelope=quad.GaussianEnvelope(1.0),
                                     abs_tol=1e-15),
     SQPI * math.exp(-1.0)),
    ("gauss_x2",
     lambda tol: quad.integrate_line(lambda l: l * l * np.exp(-l * l), tol=tol,
                                     envelope=quad.GaussianEnvelope(1.0)),
     SQPI / 2.0),
    ("exp_kink",
     lambda tol: quad.integrate_line(lambda l: np.exp(-np.abs(l)), tol=tol,
                                     envelope=quad.ExpTailEnvelope(1.0)),
     2.0),
    ("sech",
     lambda tol: quad.integrate_line(lambda l: 1.0 / np.cosh(l), tol=tol,
                                     envelope=quad.ExpTailEnvelope(1.0, 0.0, 2.0)),
     math.pi),
    ("powerlaw_endpoint",
     lambda tol: quad.integrate_line(lambda l: l ** -0.2, tol=tol, a=0.0, b=1.0),
     1.25),
    ("sin_finite",
     lambda tol: quad.integrate_line(lambda l: np.sin(l), tol=tol, a=0.0, b=math.pi),
     2.0),
    ("singular_half",
     lambda tol: quad.integrate_singular(lambda l: np.abs(l) ** -0.5, [0.0],
                                         exponent=0.5, tol=tol, a=-1.0, b=1.0),
     4.0),
    ("singular_02",
     lambda tol: quad.integrate_singular(lambda l: np.abs(l) ** -0.2, [0.0],
                                         exponent=0.2, tol=tol, a=-1.0, b=1.0),
     2.5),
    ("singular_offset",
     lambda tol: quad.integrate_singular(lambda l: np.abs(l - 0.3) ** -0.4, [0.3],
                                         exponent=0.4, tol=tol, a=-1.0, b=1.0),
     (1.3 ** 0.6 + 0.7 ** 0.6) / 0.6),
]


@pytest.mark.parametrize("name,runner,exact", VALIDATION_SUITE,
                         ids=[c[0] for c in VALIDATION_SUITE])
def test_validation_suite_accuracy(name, runner, exact):
    res = runner(1e-9)
    assert res.evaluations > 0
    assert abs(res.value - exact) <= max(1e-9 * abs(exact), 1e-12)


@pytest.mark.parametrize("name,runner,exact", VALIDATION_SUITE,
                         ids=[c[0] for c in VALIDATION_SUITE])
def test_error_estimate_bounds_true_error(name, runner, exact):
    res = runner(1e-9)
    # the estimate must cover the true error down to the representation floor
    floor = 5e-15 * (1.0 + abs(res.value))
    assert abs(res.value - exact) <= max(res.error_estimate, floor)


@pytest.mark.parametrize("name,runner,exact", VALIDATION_SUITE,
                         ids=[c[0] for c in VALIDATION_SUITE])
def test_refining_tol_never_hurts(name, runner, exact):
    errs = [abs(runner(tol).value - exact)
            for tol in (1e-4, 1e-5, 1e-6, 1e-7, 1e-8)]
    for coarse, fine in zip(errs, errs[1:]):
        assert fine <= coarse + 1e-13


def test_gaussian_closed_form_anchor():
    # int cos(l d) e^(-a l^2) dl = sqrt(pi/a) exp(-d^2/(4a)) at (a, d) = (1, 2)
    res = quad.integrate_line(lambda l: np.cos(2.0 * l) * np.exp(-l * l),
                              tol=1e-12, envelope=quad.GaussianEnvelope(1.0),
                              abs_tol=1e-15)
    assert res.value == pytest.approx(SQPI * math.exp(-1.0), abs=1e-10)


def test_moved_singularity_stays_within_budget():
    # a singularity at w/sqrt(eps) = 100 sits far outside the Gaussian window
    lam_star = 1.0 / math.sqrt(1e-4)

    def f(lam):
        return np.exp(-2.0 * lam * lam) * np.abs(lam - lam_star) ** -0.2

    res = quad.integrate_singular(f, [lam_star], exponent=0.2, tol=1e-8,
                                  envelope=quad.GaussianEnvelope(2.0))
    assert res.evaluations < 1e5
    ref = quad.integrate_line(lambda l: np.exp(-2 * l * l) * np.abs(l - lam_star) ** -0.2,
                              tol=1e-10, envelope=quad.GaussianEnvelope(2.0))
    assert res.value == pytest.approx(ref.value, rel=1e-7)


def test_singular_points_auto_separate():
    # neighbourhood radii shrink to keep close singular points disjoint
    from scipy import integrate as sitg

    f = lambda l: (np.abs(l - 0.5) * np.abs(l + 0.5)) ** -0.3
    res = quad.integrate_singular(f, [-0.5, 0.5], exponent=0.3, tol=1e-9,
                                  a=-2.0, b=2.0)
    ref, _ = sitg.quad(lambda l: float(f(np.array([l]))[0]), -2.0, 2.0,
                       points=[-0.5, 0.5], limit=400, epsabs=1e-11)
    assert res.value == pytest.approx(ref, rel=1e-7)


def test_coincident_singular_points_rejected():
    with pytest.raises(ValueError, match="cannot be separated"):
        quad.integrate_singular(lambda l: l, [1.0, 1.0], exponent=0.5,
                                tol=1e-8, a=0.0, b=2.0)


def test_exponent_domain():
    for bad in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(ValueError):
            quad.integrate_singular(lambda l: l, [0.0], exponent=bad,
                                    tol=1e-8, a=-1.0, b=1.0)


def test_budget_exhaustion_reports_partial():
    # an impossible absolute tolerance on a rough integrand must fail loudly
    rng_vals = lambda l: np.abs(np.sin(1000.0 / (np.abs(l) + 1e-3)))
    with pytest.raises(quad.QuadratureError) as exc:
        quad.integrate_line(rng_vals, tol=1e-15, a=0.0, b=1.0, max_panels=40)
    assert exc.value.result.evaluations > 0
    assert exc.value.result.error_estimate >= 0.0


def test_result_invariants():
    with pytest.raises(ValueError):
        quad.QuadratureResult(1.0, -1.0, 10)
    with pytest.raises(ValueError):
        quad.QuadratureResult(1.0, 0.0, 0)


def test_power_tail_envelope_cutoff():
    env = quad.PowerTailEnvelope(coeff=1.0, power=3.0, start=1.0)
    cut = env.cutoff(1e-8)
    assert env.tail_bound(cut) <= 1e-8 * 1.0001
    with pytest.raises(ValueError):
        quad.PowerTailEnvelope(coeff=1.0, power=0.9)
