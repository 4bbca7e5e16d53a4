"""Mean-square convergence integrals and the rank > 1 divergence."""

import math

import numpy as np
import pytest

from frbesim import limits as lm
from frbesim import quad
from frbesim import spectral as sp

MODEL = sp.SpectralModel(0.8, 1.0)
HEAT = sp.heat_params(1.0)
FRBE = sp.FrbeParams(1.5, 0.5, 0.0, 1.0)


# ---------------------------------------------------------------------------
# pointwise ratio functions
# ---------------------------------------------------------------------------

def test_q_eps_pointwise_limit():
    for lam in (0.1, 1.0, 10.0):
        assert lm.q_eps_heat(MODEL, 1e-8, lam) == pytest.approx(1.0, abs=1e-4)


def test_q_zero_at_origin_is_exactly_one():
    assert lm.q_eps_heat(MODEL, 0.0, 0.0) == 1.0


def test_q_eps_is_rescaled_density_ratio():
    got = lm.q_eps_heat(MODEL, 0.01, 1.0)
    ref = float(sp.f_theta(MODEL, 0.1)) / sp.limit_prefactor(MODEL)
    assert got == pytest.approx(ref, rel=1e-12)
    assert got > 0.0


def test_q_eps_singularity_error():
    # lambda sqrt(eps) = w hits the spectral singularity
    with pytest.raises(ValueError):
        lm.q_eps_heat(MODEL, 0.25, 2.0)


@pytest.mark.parametrize("kappa", [0.2, 0.5, 0.8])
@pytest.mark.parametrize("w", [0.5, 1.0, 2.0])
def test_q_eps_near_one_for_small_eps(kappa, w):
    model = sp.SpectralModel(kappa, w)
    for lam in (0.1, 1.0, 10.0):
        assert abs(lm.q_eps_heat(model, 1e-6, lam) - 1.0) < 1e-3


def test_domination_identity_on_nodes():
    # (sqrt(Q) - 1)^2 <= Q + 1 pointwise
    lam = np.linspace(-30.0, 30.0, 2001)
    lam = lam[np.abs(np.abs(lam) * math.sqrt(0.04) - 1.0) > 1e-9]
    q = lm.q_eps_heat(MODEL, 0.04, lam)
    assert np.all((np.sqrt(q) - 1.0) ** 2 <= q + 1.0)


def test_q_tilde_gamma_zero_reduces_to_sqrt_q():
    lam = np.linspace(-5.0, 5.0, 41)
    qt = lm.q_tilde_frbe(MODEL, FRBE, 0.01, 1.0, lam)
    root_q = np.sqrt(lm.q_eps_heat(MODEL, 0.01 ** (2 * FRBE.beta / FRBE.alpha),
                                   lam))
    assert np.max(np.abs(qt - root_q)) == 0.0


def test_q_tilde_pointwise_limit():
    for lam in (0.3, 1.0, 4.0):
        assert lm.q_tilde_frbe(MODEL, FRBE, 1e-8, 1.0, lam) == pytest.approx(
            1.0, abs=1e-4)


def test_q_tilde_transfer_ratio_below_one():
    p = sp.FrbeParams(1.5, 0.5, 1.0, 1.0)    # gamma = 1 engages the ratio
    lam = 1.0
    qt = lm.q_tilde_frbe(MODEL, p, 0.01, 1.0, lam)
    root_q = math.sqrt(lm.q_eps_heat(MODEL, 0.01 ** (2 * p.beta / p.alpha), lam))
    ratio = qt / root_q
    assert 0.0 < ratio < 1.0


# ---------------------------------------------------------------------------
# R integrals
# ---------------------------------------------------------------------------

def test_r_heat_decreases_to_zero():
    eps_list = (1.0, 1e-1, 1e-2, 1e-3, 1e-4)
    vals = [lm.r_heat(MODEL, 1.0, 1.0, e) for e in eps_list]
    assert all(v >= 0.0 for v in vals)
    assert vals[0] > 0.0
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] / vals[0] < 0.01


def test_r_heat_window_monotone_in_mu_t():
    for eps in (1.0, 0.1, 0.01):
        assert lm.r_heat(MODEL, 2.0, 1.0, eps) <= lm.r_heat(MODEL, 1.0, 1.0, eps)


def test_r_heat_domain():
    with pytest.raises(ValueError):
        lm.r_heat(MODEL, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        lm.r_heat(MODEL, 1.0, 0.0, 0.5)


def test_r_frbe_reduces_to_r_heat():
    for eps in (1.0, 1e-1, 1e-2, 1e-3, 1e-4):
        a = lm.r_frbe(MODEL, HEAT, 1.0, eps)
        b = lm.r_heat(MODEL, 1.0, 1.0, eps)
        assert a == pytest.approx(b, rel=1e-6)


def test_r_frbe_decreases():
    vals = [lm.r_frbe(MODEL, FRBE, 1.0, e) for e in (1.0, 1e-1, 1e-2, 1e-3)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_r_frbe_alpha_gate():
    from frbesim.specfun import mittag_leffler

    with pytest.raises(ValueError):
        lm.r_frbe(MODEL, sp.FrbeParams(0.9, 0.5, 0.0, 1.0), 1.0, 0.1)
    # the dominating transfer integral is finite for alpha = 1.5
    res = quad.integrate_line(
        lambda l: np.atleast_1d(mittag_leffler(0.5, -np.abs(l) ** 1.5)),
        tol=1e-6, envelope=quad.PowerTailEnvelope(
            coeff=math.gamma(1.5), power=1.5, start=1.0))
    assert math.isfinite(res.value) and res.value > 0.0


def test_run_convergence_report():
    rep = lm.run_convergence(MODEL, HEAT, 1.0, (1.0, 0.1, 0.01))
    assert rep.monotone_decreasing
    assert rep.ratio_last_first < 0.01
    assert rep.eps_list == (1.0, 0.1, 0.01)
    round_trip = lm.ConvergenceReport.from_dict(rep.to_dict())
    assert round_trip == rep


def test_run_convergence_single_eps():
    rep = lm.run_convergence(MODEL, HEAT, 1.0, (0.5,))
    assert rep.monotone_decreasing          # trivially
    assert rep.ratio_last_first == 1.0


def test_run_convergence_validates_eps():
    with pytest.raises(ValueError):
        lm.run_convergence(MODEL, HEAT, 1.0, (0.1, 0.5))
    with pytest.raises(ValueError):
        lm.run_convergence(MODEL, HEAT, 1.0, (2.0, 0.5))


def test_run_convergence_dispatches_frbe():
    rep = lm.run_convergence(MODEL, FRBE, 1.0, (1.0, 0.1))
    assert rep.params.alpha == 1.5
    assert rep.monotone_decreasing


# ---------------------------------------------------------------------------
# rank > 1 divergence
# ---------------------------------------------------------------------------

def rank2_oracle(mu, t, radius):
    """Exact reduction via s = l1 + l2, whose sections have length 2R - |s|:
    int = 2R sqrt(pi/(2 mu t)) erf(2R sqrt(2 mu t)) - (1 - e^(-8 mu t R^2))/(2 mu t)."""
    c = 2.0 * mu * t
    return (2.0 * radius * math.sqrt(math.pi / c) * math.erf(2.0 * radius * math.sqrt(c))
            - (1.0 - math.exp(-4.0 * c * radius * radius)) / c)


def test_divergence_m2_matches_oracle():
    for radius in (10.0, 20.0, 40.0):
        got = lm.divergence_m(2, 1.0, 1.0, radius)
        assert got == pytest.approx(rank2_oracle(1.0, 1.0, radius), rel=1e-8)


def test_divergence_m2_linear_growth():
    vals = {r: lm.divergence_m(2, 1.0, 1.0, r) for r in (10.0, 20.0, 40.0, 80.0)}
    for small, big in ((10.0, 20.0), (20.0, 40.0), (40.0, 80.0)):
        assert vals[big] / vals[small] == pytest.approx(2.0, abs=0.1)
    assert vals[80.0] > 1.8 * vals[40.0]


def test_divergence_m3_quadratic_growth():
    a = lm.divergence_m(3, 1.0, 1.0, 8.0)
    b = lm.divergence_m(3, 1.0, 1.0, 16.0)
    assert b / a == pytest.approx(4.0, rel=0.1)


def test_rank1_control_is_finite():
    res = quad.integrate_line(lambda l: np.exp(-2.0 * l * l), tol=1e-12,
                              envelope=quad.GaussianEnvelope(2.0))
    assert res.value == pytest.approx(math.sqrt(math.pi / 2.0), abs=1e-8)


def test_divergence_domain():
    for bad_m in (1, 4, 0):
        with pytest.raises(ValueError):
            lm.divergence_m(bad_m, 1.0, 1.0, 10.0)
    with pytest.raises(ValueError):
        lm.divergence_m(2, 1.0, 1.0, -1.0)
