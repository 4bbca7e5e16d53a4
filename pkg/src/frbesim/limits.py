"""Deterministic checks of the scaling-limit claims.

``r_heat`` and ``r_frbe`` evaluate the mean-square distance

    R(t, eps) = E |U_eps(t,x) - U_0(t,x)|^2

between the rescaled solution field and its limit, as an explicit integral
over frequency. R is independent of x, nonnegative, and must shrink to zero
as eps does; ``run_convergence`` packages a sweep over eps into a report.

``divergence_m`` demonstrates the opposite phenomenon for initial data of
Hermite rank m > 1: the would-be limit variance integral over [-R, R]^m
grows without bound (like R^(m-1)) because the integrand is ~1 on a
neighbourhood of the hyperplane lambda_1 + ... + lambda_m = 0 whose volume
is infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quad
from .quad import GaussianEnvelope, PowerTailEnvelope
from .specfun import _join, _split, mittag_leffler
from .spectral import (
    FrbeParams,
    SpectralModel,
    green_hat,
    limit_prefactor,
    theta_complement,
)

__all__ = [
    "ConvergenceReport",
    "q_eps_heat",
    "q_tilde_frbe",
    "r_heat",
    "r_frbe",
    "divergence_m",
    "run_convergence",
]


@dataclass(frozen=True)
class ConvergenceReport:
    """R(t, eps) along a descending eps sweep, with the monotonicity verdict."""

    eps_list: tuple
    r_values: tuple
    t: float
    model: SpectralModel
    params: FrbeParams
    monotone_decreasing: bool
    ratio_last_first: float

    def __post_init__(self):
        object.__setattr__(self, "eps_list", tuple(float(e) for e in self.eps_list))
        object.__setattr__(self, "r_values", tuple(float(r) for r in self.r_values))
        if len(self.eps_list) != len(self.r_values):
            raise ValueError("eps_list and r_values must have equal length")
        if any(r < 0 for r in self.r_values):
            raise ValueError("R values are integrals of squares; must be >= 0")

    def to_dict(self) -> dict:
        return {
            "eps_list": list(self.eps_list),
            "r_values": list(self.r_values),
            "t": self.t,
            "model": {"kappa": self.model.kappa, "omega": self.model.omega},
            "params": {"alpha": self.params.alpha, "beta": self.params.beta,
                       "gamma_exp": self.params.gamma_exp, "mu": self.params.mu},
            "monotone_decreasing": self.monotone_decreasing,
            "ratio_last_first": self.ratio_last_first,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConvergenceReport":
        return cls(
            eps_list=tuple(d["eps_list"]),
            r_values=tuple(d["r_values"]),
            t=d["t"],
            model=SpectralModel(**d["model"]),
            params=FrbeParams(**d["params"]),
            monotone_decreasing=d["monotone_decreasing"],
            ratio_last_first=d["ratio_last_first"],
        )


# ---------------------------------------------------------------------------
# the density ratio at a rescaled argument
# ---------------------------------------------------------------------------

def _density_ratio(model: SpectralModel, scaled: np.ndarray) -> np.ndarray:
    """f(scaled)/f(0): the two-singularity bracket normalised to 1 at 0."""
    k = model.kappa
    w = model.abs_omega
    if np.any(np.abs(scaled) == w):
        raise ValueError("rescaled frequency hits the singular points +-w")
    up = np.abs(scaled + w)
    um = np.abs(scaled - w)
    bracket = (theta_complement(k, up) / up ** (1.0 - k)
               + theta_complement(k, um) / um ** (1.0 - k))
    return bracket * w ** (1.0 - k) / (2.0 * float(theta_complement(k, w)))


def q_eps_heat(model: SpectralModel, eps: float, lam) -> float | np.ndarray:
    """Q_eps(l) = f(l sqrt(eps)) / f(0); positive, -> 1 pointwise as eps -> 0."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    arr, scalar = _split(lam)
    out = _density_ratio(model, arr * math.sqrt(eps))
    return _join(out, scalar)


def q_tilde_frbe(model: SpectralModel, params: FrbeParams, eps: float,
                 t: float, lam) -> float | np.ndarray:
    """The fractional analogue: a Mittag-Leffler transfer ratio (responding
    to the Bessel-operator exponent gamma) times sqrt(Q) at the rescaled
    argument l * eps^(beta/alpha). Positive and -> 1 pointwise as eps -> 0;
    the transfer ratio never exceeds 1."""
    params.require_limit_regime()
    if t <= 0:
        raise ValueError("t must be positive")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    arr, scalar = _split(lam)
    scale = eps ** (params.beta / params.alpha)
    root_q = np.sqrt(_density_ratio(model, arr * scale))
    if params.gamma_exp == 0.0:
        ratio = 1.0
    else:
        a = np.abs(arr) ** params.alpha
        base = params.mu * t ** params.beta
        num = mittag_leffler(params.beta,
                             -base * a * (1.0 + (arr * scale) ** 2)
                             ** (0.5 * params.gamma_exp))
        den = mittag_leffler(params.beta, -base * a)
        ratio = num / den
    return _join(ratio * root_q, scalar)


# ---------------------------------------------------------------------------
# the mean-square error integrals
# ---------------------------------------------------------------------------

def r_heat(model: SpectralModel, mu: float, t: float, eps: float,
           tol: float = 1e-7) -> float:
    """R(t, eps) for the heat case:
    f(0) * int exp(-2 mu t l^2) (sqrt(Q_eps(l)) - 1)^2 dl.

    The integrand inherits integrable singularities at l = +-w/sqrt(eps);
    while they sit inside the Gaussian window they are integrated by the
    power-law substitution, and once the window factor underflows there the
    whole neighbourhood is provably below 1e-300 and is dropped.
    """
    if mu <= 0 or t <= 0:
        raise ValueError("mu and t must be positive")
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    root_eps = math.sqrt(eps)

    def integrand(lam):
        q = _density_ratio(model, lam * root_eps)
        dev = np.sqrt(q) - 1.0
        return np.exp(-2.0 * mu * t * lam * lam) * dev * dev

    lam_star = model.abs_omega / root_eps
    envelope = GaussianEnvelope(rate=2.0 * mu * t)
    window = envelope.cutoff(0.0)
    gauss_at_star = -2.0 * mu * t * lam_star * lam_star
    if gauss_at_star > -700.0:
        # singular points still carry weight: widen to include them
        hi = max(window, lam_star + 1.5)
        res = quad.integrate_singular(integrand, [-lam_star, lam_star],
                                      exponent=1.0 - model.kappa, tol=tol,
                                      a=-hi, b=hi, abs_tol=1e-300)
    else:
        res = quad.integrate_line(integrand, tol=tol, a=-window, b=window,
                                  abs_tol=1e-300)
    return limit_prefactor(model) * res.value


def r_frbe(model: SpectralModel, params: FrbeParams, t: float, eps: float,
           tol: float = 1e-7) -> float:
    """R(t, eps) for the fractional case:
    f(0) * int ( E_beta(-mu t^b |l|^a) (Qtilde_eps(l) - 1) )^2 dl.

    Needs alpha > 1, the same threshold that makes the limit field's own
    variance integral finite; below it the dominating transfer integral
    diverges and no amount of quadrature effort is meaningful.
    """
    params.require_limit_regime()
    if t <= 0:
        raise ValueError("t must be positive")
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    alpha, beta, mu = params.alpha, params.beta, params.mu
    base = mu * t ** beta
    scale = eps ** (beta / alpha)
    gb = math.gamma(1.0 + beta)

    def integrand(lam):
        e = mittag_leffler(beta, -base * np.abs(lam) ** alpha)
        qt = q_tilde_frbe(model, params, eps, t, lam)
        dev = e * (qt - 1.0)
        return dev * dev

    lam_star = model.abs_omega / scale
    # E^2 * (Qt-1)^2 <= (gb/base)^2 l^(-2a) * (1 + sqrt(Q))^2; past the
    # singular zone sqrt(Q) dies off, leaving coefficient ~1
    envelope = PowerTailEnvelope(coeff=2.0 * (gb / base) ** 2,
                                 power=2.0 * alpha, start=1.0)
    core_hi = lam_star + 2.0
    res = quad.integrate_singular(integrand, [-lam_star, lam_star],
                                  exponent=1.0 - model.kappa, tol=tol,
                                  a=-core_hi, b=core_hi, abs_tol=1e-300)
    value = res.value
    hi = core_hi
    while envelope.tail_bound(hi) > 0.5 * tol * abs(value):
        nxt = 2.0 * hi
        seg = quad.integrate_line(integrand, tol=tol, a=hi, b=nxt,
                                  abs_tol=0.05 * tol * max(abs(value), 1e-300))
        value += 2.0 * seg.value   # even integrand
        hi = nxt
        if hi > 1e10:
            raise quad.QuadratureError(
                "R tail would not close",
                quad.QuadratureResult(value, envelope.tail_bound(hi), 1))
    return limit_prefactor(model) * value


def run_convergence(model: SpectralModel, params: FrbeParams, t: float,
                    eps_list=(1.0, 1e-1, 1e-2, 1e-3, 1e-4),
                    tol: float = 1e-7) -> ConvergenceReport:
    """Sweep R(t, eps) over a descending eps list and report monotonicity.

    Exact heat parameters (beta = 1, alpha = 2, gamma = 0) route through the
    heat-case integral; anything else through the fractional one.
    """
    eps_list = tuple(float(e) for e in eps_list)
    if any(not 0.0 < e <= 1.0 for e in eps_list):
        raise ValueError("eps values must lie in (0, 1]")
    if any(nxt >= cur for cur, nxt in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    if params.is_heat:
        values = tuple(r_heat(model, params.mu, t, e, tol=tol) for e in eps_list)
    else:
        values = tuple(r_frbe(model, params, t, e, tol=tol) for e in eps_list)
    mono = all(b < a for a, b in zip(values[:-1], values[1:]))
    ratio = values[-1] / values[0] if values[0] != 0 else math.nan
    return ConvergenceReport(eps_list, values, t, model, params, mono, ratio)


# ---------------------------------------------------------------------------
# rank m > 1: the divergent variance integral
# ---------------------------------------------------------------------------

def _gl_nodes(a: float, b: float, panel: float, order: int = 8):
    """Composite Gauss-Legendre nodes/weights on [a, b]."""
    x0, w0 = np.polynomial.legendre.leggauss(order)
    n_panels = max(1, int(math.ceil((b - a) / panel)))
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    weights = (half[:, None] * w0[None, :]).ravel()
    return nodes, weights


def divergence_m(m: int, mu: float, t: float, radius: float) -> float:
    """Truncated variance integral of the rank-m would-be limit:
    int over [-radius, radius]^m of exp(-2 mu t (l_1 + ... + l_m)^2).

    Grows like radius^(m-1): the Gaussian ridge along the hyper-diagonal
    l_1 + ... + l_m = 0 has fixed thickness but its footprint in the cube
    scales with the cube's surface. m is capped at 3 (cost of the product
    rule grows geometrically).
    """
    if m not in (2, 3):
        raise ValueError("divergence_m supports m in {2, 3}")
    if mu <= 0 or t <= 0 or radius <= 0:
        raise ValueError("mu, t, radius must be positive")
    sigma = 1.0 / math.sqrt(4.0 * mu * t)      # per-coordinate ridge width
    panel = min(1.2 * sigma, radius / 4.0)
    nodes, weights = _gl_nodes(-radius, radius, panel)
    c = 2.0 * mu * t
    if m == 2:
        s = nodes[:, None] + nodes[None, :]
        vals = np.exp(-c * s * s)
        return float(weights @ vals @ weights)
    total = 0.0
    pair = nodes[:, None] + nodes[None, :]
    for x1, w1 in zip(nodes, weights):
        s = x1 + pair
        total += w1 * float(weights @ np.exp(-c * s * s) @ weights)
    return total
