"""Cyclic long-memory spectral model and fractional-diffusion transfer
functions.

The initial-condition process has covariance r(x) = cos(w x)/(1+x^2)^(k/2),
whose spectral density carries two integrable power-law singularities at
the frequencies +-w. The density is available in two equivalent forms:

* ``f_bessel`` -- through the modified Bessel function K_nu with
  nu = (kappa-1)/2, and
* ``f_theta`` -- through the bounded correction function ``theta``, which
  isolates the |lambda -+ w|^(kappa-1) blow-up explicitly.

On top of the density sit the evolution pieces: the Fourier transfer
function ``green_hat`` of the fractional Riesz-Bessel operator, exact and
quadrature covariances of the solution field, and the closed-form/quadrature
covariances of the two scaling-limit fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quad
from .quad import ExpTailEnvelope, GaussianEnvelope, PowerTailEnvelope
from .specfun import (
    ArrayLike,
    _gamma_ld,
    _join,
    _split,
    bessel_k,
    gamma_fn,
    mittag_leffler,
)

__all__ = [
    "SpectralModel",
    "FrbeParams",
    "c1",
    "c2",
    "c_dk",
    "r_cov",
    "theta",
    "theta_complement",
    "f_bessel",
    "f_theta",
    "f_asymptote_w0",
    "green_hat",
    "limit_prefactor",
    "spectral_panel_mass",
    "cov_solution",
    "cov_limit_heat",
    "cov_limit_frbe",
]

_THETA_SWITCH = 8.0


@dataclass(frozen=True)
class SpectralModel:
    """Cyclic long-memory model: power-law exponent kappa, peak frequency omega."""

    kappa: float
    omega: float

    def __post_init__(self):
        if not 0.0 < self.kappa < 1.0:
            raise ValueError("kappa must lie in (0, 1)")
        if self.omega == 0.0:
            raise ValueError("omega must be nonzero (the cyclic component)")

    @property
    def abs_omega(self) -> float:
        return abs(self.omega)


@dataclass(frozen=True)
class FrbeParams:
    """Operator parameters: (I-Laplace)^(alpha/2) (-Laplace)^(gamma_exp/2)
    under a Caputo time derivative of order beta, with diffusivity mu."""

    alpha: float
    beta: float
    gamma_exp: float
    mu: float

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.gamma_exp < 0:
            raise ValueError("gamma_exp must be >= 0")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("beta must lie in (0, 1]")

    @property
    def is_heat(self) -> bool:
        return self.beta == 1.0 and self.alpha == 2.0 and self.gamma_exp == 0.0

    def require_limit_regime(self):
        # the limit-field spectral integrals diverge at infinity otherwise
        if self.alpha <= 1.0:
            raise ValueError(
                f"scaling-limit operations need alpha > 1, got {self.alpha}")


HEAT = FrbeParams(alpha=2.0, beta=1.0, gamma_exp=0.0, mu=1.0)


def heat_params(mu: float) -> FrbeParams:
    return FrbeParams(alpha=2.0, beta=1.0, gamma_exp=0.0, mu=mu)


# ---------------------------------------------------------------------------
# normalisation constants
# ---------------------------------------------------------------------------

def c1(kappa: float) -> float:
    """2^((1-kappa)/2) / (sqrt(pi) Gamma(kappa/2))."""
    if not 0.0 < kappa < 1.0:
        raise ValueError("kappa must lie in (0, 1)")
    return 2.0 ** (0.5 * (1.0 - kappa)) / (math.sqrt(math.pi) * math.gamma(0.5 * kappa))


def c2(kappa: float) -> float:
    """1 / (2 Gamma(kappa) cos(kappa pi / 2))."""
    if not 0.0 < kappa < 1.0:
        raise ValueError("kappa must lie in (0, 1)")
    return 1.0 / (2.0 * math.gamma(kappa) * math.cos(0.5 * math.pi * kappa))


def c_dk(d: int, kappa: float) -> float:
    """Isotropic power-law density constant Gamma((d-k)/2) / (2^k pi^(d/2) Gamma(k/2))."""
    if d < 1 or d != int(d):
        raise ValueError("d must be a positive integer")
    if not 0.0 < kappa < 1.0:
        raise ValueError("kappa must lie in (0, 1)")
    if d <= kappa:
        raise ValueError("requires d > kappa")
    return math.gamma(0.5 * (d - kappa)) / (
        2.0 ** kappa * math.pi ** (0.5 * d) * math.gamma(0.5 * kappa))


# ---------------------------------------------------------------------------
# covariance and the theta correction
# ---------------------------------------------------------------------------

def r_cov(model: SpectralModel, x: ArrayLike) -> ArrayLike:
    """Covariance cos(w x) / (1 + x^2)^(kappa/2); even, r(0) = 1."""
    arr, scalar = _split(x)
    out = np.cos(model.omega * arr) / (1.0 + arr * arr) ** (0.5 * model.kappa)
    return _join(out, scalar)


def _theta_series_ld(kappa: float, u: np.ndarray) -> np.ndarray:
    """1 - theta_kappa(u) by the ascending expansion, in 80-bit arithmetic.

    theta(u) = G(a) [ (u/2)^(1-k) sum_{m>=0} q^m/(m! G(m+b))
                      - sum_{m>=1} q^m/(m! G(m+a)) ],
    a = (k+1)/2, b = (3-k)/2, q = u^2/4. theta tends to 1, so the
    complement is returned straight from the longdouble partials; a float64
    round of theta first would cost ~e^u * eps near the switchover.
    """
    k_ld = np.longdouble(kappa)
    one = np.longdouble(1)
    a = (k_ld + one) / 2
    b = (np.longdouble(3) - k_ld) / 2
    ul = u.astype(np.longdouble)
    q = ul * ul / 4

    s1 = one / _gamma_ld(b)          # m = 0 term of the first sum
    t1 = s1.copy() * np.ones_like(q)
    s1 = np.ones_like(q) * s1
    s2 = np.zeros_like(q)
    t2 = np.ones_like(q) / _gamma_ld(a)
    for m in range(1, 500):
        m_ld = np.longdouble(m)
        t1 = t1 * q / (m_ld * (m_ld + b - one))
        t2 = t2 * q / (m_ld * (m_ld + a - one))
        s1 = s1 + t1
        s2 = s2 + t2
        if max(np.max(t1), np.max(t2)) <= np.longdouble(1e-24) * max(
                np.max(s1), np.max(s2), np.longdouble(1e-30)):
            break
    ga = _gamma_ld(a)
    theta_ld = ga * ((ul / 2) ** (one - k_ld) * s1 - s2)
    return (one - theta_ld).astype(float)


def theta_complement(kappa: float, u: ArrayLike, method: str = "auto") -> ArrayLike:
    """1 - theta_kappa(u) >= 0 for u >= 0.

    ``method``: "auto" uses the ascending expansion up to u = 8 and the exact
    identity 1 - theta = (c1/c2) K_nu(u) u^((1-kappa)/2) beyond; "series" and
    "bessel" force one route (the two are cross-checked in tests).
    """
    if not 0.0 < kappa < 1.0:
        raise ValueError("kappa must lie in (0, 1)")
    arr, scalar = _split(u)
    if np.any(arr < 0):
        raise ValueError("theta is defined for u >= 0")
    out = np.empty_like(arr)
    if method == "series":
        small = np.ones(arr.shape, dtype=bool)
    elif method == "bessel":
        small = np.zeros(arr.shape, dtype=bool)
    elif method == "auto":
        small = arr <= _THETA_SWITCH
    else:
        raise ValueError("method must be auto, series or bessel")
    if np.any(small):
        out[small] = _theta_series_ld(kappa, arr[small])
    big = ~small
    if np.any(big):
        ub = arr[big]
        nz = ub > 0
        vals = np.zeros_like(ub)
        if np.any(nz):
            nu = 0.5 * (kappa - 1.0)
            vals[nz] = (c1(kappa) / c2(kappa)) * bessel_k(nu, ub[nz]) * \
                ub[nz] ** (0.5 * (1.0 - kappa))
        vals[~nz] = 1.0
        out[big] = vals
    return _join(out, scalar)


def theta(kappa: float, u: ArrayLike, method: str = "auto") -> ArrayLike:
    """theta_kappa(u): bounded, theta(0) = 0, theta <= 1, and
    theta(u) = Gamma((k+1)/2)/(2^(1-k) Gamma((3-k)/2)) u^(1-k)
               - u^2/(2(k+1)) + o(u^2) as u -> 0."""
    comp = theta_complement(kappa, u, method=method)
    return 1.0 - comp


# ---------------------------------------------------------------------------
# spectral density
# ---------------------------------------------------------------------------

def _check_not_singular(arr: np.ndarray, w: float):
    if np.any(arr == w) or np.any(arr == -w):
        raise ValueError(f"spectral density diverges at lambda = +-{w}")


def f_bessel(model: SpectralModel, lam: ArrayLike) -> ArrayLike:
    """Spectral density via K_nu:
    f(l) = c1/2 [ K_nu(|l+w|)|l+w|^nu + K_nu(|l-w|)|l-w|^nu ], nu=(k-1)/2."""
    arr, scalar = _split(lam)
    w = model.abs_omega
    _check_not_singular(arr, w)
    nu = 0.5 * (model.kappa - 1.0)
    up = np.abs(arr + w)
    um = np.abs(arr - w)
    out = 0.5 * c1(model.kappa) * (
        bessel_k(nu, up) * up ** nu + bessel_k(nu, um) * um ** nu)
    return _join(out, scalar)


def f_theta(model: SpectralModel, lam: ArrayLike) -> ArrayLike:
    """Spectral density via the theta correction:
    f(l) = c2/2 [ (1-theta(|l+w|))/|l+w|^(1-k) + (1-theta(|l-w|))/|l-w|^(1-k) ]."""
    arr, scalar = _split(lam)
    w = model.abs_omega
    _check_not_singular(arr, w)
    k = model.kappa
    up = np.abs(arr + w)
    um = np.abs(arr - w)
    out = 0.5 * c2(k) * (
        theta_complement(k, up) / up ** (1.0 - k)
        + theta_complement(k, um) / um ** (1.0 - k))
    return _join(out, scalar)


def f_asymptote_w0(kappa: float, lam: ArrayLike) -> ArrayLike:
    """Large-|lambda| behaviour of the w = 0 density:
    f(l) ~ c1 sqrt(pi/2) |l|^((k-2)/2) e^(-|l|)."""
    arr, scalar = _split(lam)
    a = np.abs(arr)
    out = c1(kappa) * math.sqrt(math.pi / 2.0) * a ** (0.5 * (kappa - 2.0)) * np.exp(-a)
    return _join(out, scalar)


def limit_prefactor(model: SpectralModel) -> float:
    """c2(k) (1 - theta(|w|)) / |w|^(1-k): the limit-field spectral level.

    Equals f(0), the density at frequency zero.
    """
    w = model.abs_omega
    return c2(model.kappa) * float(theta_complement(model.kappa, w)) / \
        w ** (1.0 - model.kappa)


def spectral_panel_mass(model: SpectralModel, lo: float, hi: float,
                        tol: float = 1e-9) -> float:
    """int_lo^hi f(l) dl, handling panels that contain a singular frequency.

    Used by the simulators to assign finite node weights to grid cells that
    straddle +-w, where the pointwise density is infinite but integrable.
    """
    if hi <= lo:
        return 0.0
    w = model.abs_omega
    inside = [s for s in (-w, w) if lo < s < hi or s == lo or s == hi]
    f = lambda x: f_theta(model, x)
    if inside:
        res = quad.integrate_singular(f, inside, exponent=1.0 - model.kappa,
                                      tol=tol, a=lo, b=hi)
    else:
        res = quad.integrate_line(f, tol=tol, a=lo, b=hi)
    return res.value


# ---------------------------------------------------------------------------
# transfer function and covariances
# ---------------------------------------------------------------------------

def green_hat(params: FrbeParams, t: float, lam: ArrayLike) -> ArrayLike:
    """Fourier transfer function of the evolution:
    G^(t, l) = E_beta(-mu |l|^alpha (1+l^2)^(gamma/2) t^beta), in (0, 1]."""
    if t < 0:
        raise ValueError("t must be >= 0")
    arr, scalar = _split(lam)
    a = np.abs(arr)
    with np.errstate(invalid="ignore"):
        sym = a ** params.alpha
    sym = np.where(a == 0.0, 0.0 if params.alpha > 0 else 1.0, sym)
    if params.gamma_exp != 0.0:
        sym = sym * (1.0 + arr * arr) ** (0.5 * params.gamma_exp)
    out = mittag_leffler(params.beta, -params.mu * sym * t ** params.beta)
    return _join(np.atleast_1d(out), scalar)


def cov_solution(model: SpectralModel, params: FrbeParams, t: float, t2: float,
                 x: float, x2: float, tol: float = 1e-7) -> float:
    """Cov(u(t,x), u(t2,x2)) of the solution field, by quadrature of
    G^(t,l) G^(t2,l) cos(l (x-x2)) f(l) over the line.

    Symmetric in its two space-time points, stationary in space (depends on
    x - x2 only) and, for the heat case, a function of t + t2 only.
    """
    if t < 0 or t2 < 0:
        raise ValueError("times must be >= 0")
    delta = x - x2
    w = model.abs_omega

    def integrand(lam):
        return (green_hat(params, t, lam) * green_hat(params, t2, lam)
                * np.cos(delta * lam) * f_theta(model, lam))

    envelope = ExpTailEnvelope(rate=1.0, shift=w + 1.0, amplitude=2.0 * c1(model.kappa))
    res = quad.integrate_singular(integrand, [-w, w], exponent=1.0 - model.kappa,
                                  tol=tol, envelope=envelope)
    return res.value


def cov_limit_heat(model: SpectralModel, mu: float, t: float, t2: float,
                   x: float, x2: float) -> float:
    """Closed-form covariance of the heat limit field:
    c2 sqrt(pi) (1-theta(|w|)) / (sqrt(mu) |w|^(1-k))
    * exp(-(x-x2)^2 / (4 mu (t+t2))) / sqrt(t+t2)."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    ts = t + t2
    if ts <= 0:
        raise ValueError("cov_limit_heat needs t + t2 > 0")
    pref = limit_prefactor(model) * math.sqrt(math.pi / mu)
    delta = x - x2
    return pref * math.exp(-delta * delta / (4.0 * mu * ts)) / math.sqrt(ts)


def cov_limit_frbe(model: SpectralModel, params: FrbeParams, t: float, t2: float,
                   x: float, x2: float, tol: float = 1e-7,
                   unit_prefactor: bool = False) -> float:
    """Covariance of the fractional limit field:
    pref * int_R cos(l (x-x2)) E_beta(-mu t^b |l|^a) E_beta(-mu t2^b |l|^a) dl
    with pref = c2(k)(1-theta(|w|))/|w|^(1-k); needs alpha > 1, t, t2 > 0.

    The product of transfer functions decays only like |l|^(-2 alpha), so the
    truncation point comes from the rational Mittag-Leffler tail bound.
    """
    params.require_limit_regime()
    if t <= 0 or t2 <= 0:
        raise ValueError("cov_limit_frbe needs t > 0 and t2 > 0")
    alpha, beta, mu = params.alpha, params.beta, params.mu
    a1 = mu * t ** beta
    a2 = mu * t2 ** beta
    delta = x - x2
    gb = math.gamma(1.0 + beta)

    def transfer_pair(lam):
        al = np.abs(lam) ** alpha
        return (mittag_leffler(beta, -a1 * al) * mittag_leffler(beta, -a2 * al)
                * np.cos(delta * lam))

    # core window: transfer product has dropped to <= 1e-4 of its peak
    l_core = max(1.0, (1e4 * gb * gb / (a1 * a2)) ** (1.0 / (2.0 * alpha)))
    res = quad.integrate_line(transfer_pair, tol=0.5 * tol, a=-l_core, b=l_core,
                              damping_scale=min(1.0, math.pi / (2.0 * abs(delta))
                                                if delta else 1.0))
    envelope = PowerTailEnvelope(coeff=gb * gb / (a1 * a2), power=2.0 * alpha,
                                 start=l_core)
    tail, _ = _algebraic_cosine_tail(transfer_pair, l_core, delta, envelope,
                                     0.5 * tol * max(abs(res.value), 1e-12))
    pref = 1.0 if unit_prefactor else limit_prefactor(model)
    # even integrand: the one-sided tail enters twice
    return pref * (res.value + 2.0 * tail)


def _half_period_sums(g, edges: np.ndarray) -> np.ndarray:
    """GK15 value of g on each [edges[i], edges[i+1]], one vectorized call."""
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = mid[:, None] + half[:, None] * quad._NODES[None, :]
    fx = np.asarray(g(x.ravel()), dtype=float).reshape(x.shape)
    return half * (fx @ quad._WK)


def _algebraic_cosine_tail(g, start: float, delta: float, envelope,
                           abs_tol: float, n_half: int = 72):
    """int_start^inf g, where g = (slowly decaying even factor) * cos(delta .).

    For delta = 0, or oscillation slower than the remaining window, octave
    doubling with the algebraic tail bound suffices. Otherwise the integral
    is summed over half-periods of the cosine and the alternating partial
    sums are accelerated by iterated averaging, which converges fast for the
    regularly-varying magnitudes that Mittag-Leffler transfer pairs produce.
    """
    adelta = abs(delta)
    if adelta == 0.0 or math.pi / adelta >= envelope.cutoff(abs_tol) - start:
        total = 0.0
        err = 0.0
        hi = start
        while envelope.tail_bound(hi) > max(abs_tol, 1e-300):
            nxt = 2.0 * hi
            seg = quad.integrate_line(g, tol=1e-8, a=hi, b=nxt,
                                      abs_tol=0.25 * abs_tol)
            total += seg.value
            err += seg.error_estimate
            hi = nxt
            if hi > 1e12:
                raise quad.QuadratureError(
                    "tail bound would not close",
                    quad.QuadratureResult(total, err, 1))
        return total, err + envelope.tail_bound(hi)

    # oscillatory route: half-period panels between the zeros of cos
    j0 = math.ceil(start * adelta / math.pi - 0.5)
    edges = (np.arange(j0, j0 + n_half + 1) + 0.5) * math.pi / adelta
    stub = quad.integrate_line(g, tol=1e-8, a=start, b=float(edges[0]),
                               abs_tol=0.25 * abs_tol)
    partial = np.cumsum(_half_period_sums(g, edges))
    row = partial
    prev_last = row[-1]
    for _ in range(min(40, len(row) - 1)):
        row = 0.5 * (row[:-1] + row[1:])
        if abs(row[-1] - prev_last) < 1e-17 * max(1.0, abs(row[-1])):
            break
        prev_last = row[-1]
    accel_err = abs(row[-1] - prev_last)
    return stub.value + float(row[-1]), stub.error_estimate + accel_err
