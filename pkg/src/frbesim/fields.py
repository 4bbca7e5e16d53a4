"""Seeded spectral-sum simulation of the random fields.

All simulators share one construction: a centred Gaussian field with
spectral content m(lambda) is sampled on a frequency grid as

    u(x) = sum_{lambda_j > 0} sqrt(2 m_j) g_j (xi_j cos(lambda_j x)
                                               + xi'_j sin(lambda_j x))
           + sqrt(m_0) g_0 xi_0,

with independent standard normals xi, xi'. This is the real-valued
(Hermitian-folded) version of the complex stochastic-integral sum; it has
exactly zero mean, is real by construction, and reproduces the target
covariance up to the grid's frequency truncation, which the simulators
bound and extend automatically.

Randomness is counter-based: a realization is drawn from Philox keyed by
its integer seed, and ensemble member i of base seed s uses the derived key
s * 2^64 + i. Ensembles are therefore reproducible bit-for-bit in any
execution order and for any worker count, and member i can be regenerated
standalone by passing its recorded seed to the matching simulator.
"""

from __future__ import annotations

import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .specfun import mittag_leffler
from .spectral import (
    FrbeParams,
    SpectralModel,
    f_theta,
    green_hat,
    limit_prefactor,
    spectral_panel_mass,
)

__all__ = [
    "SpectralGrid",
    "FieldRealization",
    "Ensemble",
    "make_grid",
    "required_lambda_max",
    "simulate_eta",
    "simulate_solution",
    "simulate_rescaled",
    "simulate_limit_heat",
    "simulate_limit_frbe",
    "simulate_ensemble",
    "estimate_cov",
    "discrete_variance",
    "stream_key",
]

KINDS = ("eta", "solution_heat", "solution_frbe", "rescaled",
         "limit_heat", "limit_frbe")

TAIL_FRACTION = 1e-6   # admissible transfer/spectral mass beyond the grid


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform frequency grid: spacing delta, signed nodes j*delta for
    j = -n .. n-1; simulation uses the zero node plus the positive half."""

    delta: float
    n: int
    warnings: tuple = ()

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.n < 1 or self.n != int(self.n):
            raise ValueError("n must be a positive integer")

    @property
    def positive_nodes(self) -> np.ndarray:
        return self.delta * np.arange(1, self.n)

    @property
    def signed_nodes(self) -> np.ndarray:
        return self.delta * np.arange(-self.n, self.n)

    @property
    def lambda_max(self) -> float:
        return self.delta * (self.n - 1)

    def widened(self, lambda_needed: float) -> "SpectralGrid":
        if lambda_needed <= self.lambda_max:
            return self
        n_eff = int(math.ceil(lambda_needed / self.delta)) + 1
        return SpectralGrid(self.delta, n_eff, self.warnings)


def _lmax_eta(model: SpectralModel) -> float:
    # density tail ~ e^-(|l|-w): 1e-7 pointwise leaves < 1e-6 of unit mass
    return model.abs_omega + 17.0


def _lmax_limit_heat(mu: float, t: float) -> float:
    # exp(-2 mu t l^2) <= 1e-7
    return math.sqrt(16.2 / (2.0 * mu * t))


def _lmax_limit_frbe(params: FrbeParams, t: float) -> float:
    a = params.mu * t ** params.beta
    gb = math.gamma(1.0 + params.beta)
    alpha = params.alpha
    l_half = (gb / a) ** (1.0 / alpha)        # transfer still >= 1/2 here
    total_lb = 0.5 * l_half                   # crude lower bound on int g^2
    target = TAIL_FRACTION * total_lb
    return max(l_half, (2.0 * gb * gb / (a * a * (2.0 * alpha - 1.0) * target))
               ** (1.0 / (2.0 * alpha - 1.0)))


def required_lambda_max(kind: str, model: SpectralModel,
                        params: FrbeParams | None = None,
                        mu: float | None = None, t: float | None = None,
                        eps: float = 1.0) -> float:
    """Frequency beyond which the simulated kind carries < 1e-6 of its mass."""
    if kind == "limit_heat":
        return _lmax_limit_heat(mu if mu is not None else params.mu, t)
    if kind == "limit_frbe":
        params.require_limit_regime()
        return _lmax_limit_frbe(params, t)
    if kind in ("eta", "solution_heat", "solution_frbe", "solution", "rescaled"):
        # the density's own exponential tail dominates any transfer factor
        return _lmax_eta(model)
    raise ValueError(f"unknown kind {kind!r}")


def make_grid(delta: float = 0.05, n: int = 100,
              model: SpectralModel | None = None,
              params: FrbeParams | None = None, mu: float | None = None,
              t_min: float | None = None,
              kind: str = "limit_heat") -> SpectralGrid:
    """Build the frequency grid; defaults delta = 0.05, n = 100.

    When a model/parameter context and a minimum time are supplied, the
    truncated-mass condition is checked and a warning string is recorded on
    the grid if more than 1e-6 of the transfer mass lies beyond it (the
    simulators widen their working copies automatically either way).
    """
    warnings = ()
    if t_min is not None:
        need = required_lambda_max(kind, model, params=params, mu=mu, t=t_min)
        lam_max = delta * (n - 1)
        if lam_max < need:
            warnings = (
                f"grid reaches lambda = {lam_max:g} but {kind} at t = {t_min:g} "
                f"needs {need:g} to keep the truncated mass below {TAIL_FRACTION:g}",
            )
    return SpectralGrid(delta, int(n), warnings)


@dataclass(frozen=True)
class FieldRealization:
    """One sampled path: values of the field at time t on the space grid xs."""

    t: float
    xs: np.ndarray
    values: np.ndarray
    seed: int
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "xs", np.asarray(self.xs, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.xs.shape != self.values.shape:
            raise ValueError("xs and values must have matching shapes")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")
        if self.kind.startswith("limit_") and not self.t > 0:
            raise ValueError("limit fields are defined for t > 0")
        if self.t < 0:
            raise ValueError("t must be >= 0")


@dataclass(frozen=True)
class Ensemble:
    realizations: tuple
    base_seed: int

    def __post_init__(self):
        object.__setattr__(self, "realizations", tuple(self.realizations))
        if not self.realizations:
            raise ValueError("ensemble must contain at least one realization")
        first = self.realizations[0]
        seeds = set()
        for r in self.realizations:
            if r.t != first.t or not np.array_equal(r.xs, first.xs):
                raise ValueError("ensemble members must share t and xs")
            seeds.add(r.seed)
        if len(seeds) != len(self.realizations):
            raise ValueError("realization seeds must be pairwise distinct")

    @property
    def values(self) -> np.ndarray:
        """(n_realizations, n_x) matrix of field values."""
        return np.stack([r.values for r in self.realizations])

    def __len__(self):
        return len(self.realizations)


# ---------------------------------------------------------------------------
# RNG streams
# ---------------------------------------------------------------------------

def stream_key(base_seed: int, index: int) -> int:
    """Philox key of ensemble member ``index`` under ``base_seed``."""
    if base_seed < 0 or index < 0:
        raise ValueError("seed and index must be nonnegative")
    return (int(base_seed) % (1 << 64)) * (1 << 64) + int(index) % (1 << 64)


def _stream(key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(key)))


# ---------------------------------------------------------------------------
# weight construction (once per parameter set, shared across realizations)
# ---------------------------------------------------------------------------

def _limit_weights(model, grid, transfer):
    pref = limit_prefactor(model)
    lam = grid.positive_nodes
    w_pos = np.sqrt(2.0 * pref * grid.delta) * transfer(lam)
    w_dc = math.sqrt(pref * grid.delta) * float(transfer(np.array([0.0]))[0])
    return lam, w_pos, w_dc


def _eta_masses(model: SpectralModel, grid: SpectralGrid):
    """Panel masses of the spectral density; panels holding +-w integrate the
    singularity exactly instead of using the infinite midpoint value."""
    lam = grid.positive_nodes
    d = grid.delta
    w = model.abs_omega
    masses = np.empty_like(lam)
    # exact panel integrals where the density varies steeply (the singular
    # panel and a few neighbours); midpoint masses elsewhere
    regular = np.abs(lam - w) > 3.5 * d
    if np.any(regular):
        masses[regular] = f_theta(model, lam[regular]) * d
    for i in np.nonzero(~regular)[0]:
        masses[i] = spectral_panel_mass(model, lam[i] - 0.5 * d, lam[i] + 0.5 * d)
    if w <= 3.5 * d:  # the zero panel may straddle the singular frequencies
        m0 = spectral_panel_mass(model, -0.5 * d, 0.5 * d)
    else:
        m0 = f_theta(model, 0.0) * d
    return lam, masses, m0


class _Sampler:
    """Frozen weights + phase matrices; draws one realization per key."""

    def __init__(self, lam, w_pos, w_dc, xs_eval, xs_record, scale,
                 t_record, kind):
        self.lam = lam
        self.w_pos = w_pos
        self.w_dc = w_dc
        self.xs_record = np.asarray(xs_record, dtype=float)
        self.scale = scale
        self.t = t_record
        self.kind = kind
        phase = np.outer(lam, np.asarray(xs_eval, dtype=float))
        self.cos_w = self.scale * (self.w_pos[:, None] * np.cos(phase))
        self.sin_w = self.scale * (self.w_pos[:, None] * np.sin(phase))
        self.dc_row = self.scale * self.w_dc * np.ones(len(self.xs_record))

    def draw(self, key: int) -> FieldRealization:
        npos = len(self.lam)
        draws = _stream(key).standard_normal(2 * npos + 1)
        vals = (draws[:npos] @ self.cos_w + draws[npos:2 * npos] @ self.sin_w
                + draws[2 * npos] * self.dc_row)
        return FieldRealization(self.t, self.xs_record, vals, key, self.kind)

    def second_moment(self, lag: float) -> float:
        """Exact E[u(x) u(x+lag)] of the discrete sum."""
        s = self.scale
        return float(s * s * (np.sum(self.w_pos ** 2 * np.cos(self.lam * lag))
                              + self.w_dc ** 2))


def _build_sampler(kind: str, model: SpectralModel, grid: SpectralGrid,
                   t: float, xs, params: FrbeParams | None = None,
                   mu: float | None = None, eps: float = 1.0) -> _Sampler:
    xs = np.asarray(xs, dtype=float)
    if kind == "limit_heat":
        mu_eff = mu if mu is not None else params.mu
        if mu_eff <= 0:
            raise ValueError("mu must be positive")
        if t <= 0:
            raise ValueError("limit field needs t > 0")
        g = grid.widened(_lmax_limit_heat(mu_eff, t))
        lam, w_pos, w_dc = _limit_weights(
            model, g, lambda l: np.exp(-mu_eff * t * l * l))
        return _Sampler(lam, w_pos, w_dc, xs, xs, 1.0, t, "limit_heat")

    if kind == "limit_frbe":
        params.require_limit_regime()
        if t <= 0:
            raise ValueError("limit field needs t > 0")
        g = grid.widened(_lmax_limit_frbe(params, t))
        a = params.mu * t ** params.beta
        lam, w_pos, w_dc = _limit_weights(
            model, g,
            lambda l: np.atleast_1d(
                mittag_leffler(params.beta, -a * np.abs(l) ** params.alpha)))
        return _Sampler(lam, w_pos, w_dc, xs, xs, 1.0, t, "limit_frbe")

    if kind == "eta":
        g = grid.widened(_lmax_eta(model))
        lam, masses, m0 = _eta_masses(model, g)
        return _Sampler(lam, np.sqrt(2.0 * masses), math.sqrt(m0), xs, xs,
                        1.0, 0.0, "eta")

    if kind in ("solution", "solution_heat", "solution_frbe"):
        if t < 0:
            raise ValueError("t must be >= 0")
        g = grid.widened(_lmax_eta(model))
        lam, masses, m0 = _eta_masses(model, g)
        gh = green_hat(params, t, lam) if len(lam) else np.empty(0)
        gh0 = float(green_hat(params, t, 0.0))
        out_kind = "solution_heat" if params.is_heat else "solution_frbe"
        return _Sampler(lam, np.sqrt(2.0 * masses) * gh, math.sqrt(m0) * gh0,
                        xs, xs, 1.0, t, out_kind)

    if kind == "rescaled":
        if not 0.0 < eps <= 1.0:
            raise ValueError("eps must lie in (0, 1]")
        if t <= 0:
            raise ValueError("rescaled field needs t > 0")
        expo = params.beta / params.alpha
        inner = _build_sampler("solution", model, grid, t / eps, xs,
                               params=params)
        return _Sampler(inner.lam, inner.w_pos, inner.w_dc,
                        xs / eps ** expo, xs, eps ** (-0.5 * expo), t,
                        "rescaled")

    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# public simulators
# ---------------------------------------------------------------------------

def simulate_limit_heat(model: SpectralModel, mu: float, grid: SpectralGrid,
                        t: float, xs: Sequence[float], seed: int) -> FieldRealization:
    """Sample the heat-equation limit field at time t on the space grid xs."""
    return _build_sampler("limit_heat", model, grid, t, xs, mu=mu).draw(seed)


def simulate_limit_frbe(model: SpectralModel, params: FrbeParams,
                        grid: SpectralGrid, t: float, xs: Sequence[float],
                        seed: int) -> FieldRealization:
    """Sample the fractional limit field (transfer E_beta(-mu t^b |l|^a))."""
    return _build_sampler("limit_frbe", model, grid, t, xs, params=params).draw(seed)


def simulate_eta(model: SpectralModel, grid: SpectralGrid, xs: Sequence[float],
                 seed: int) -> FieldRealization:
    """Sample the stationary initial-condition process (unit variance)."""
    return _build_sampler("eta", model, grid, 0.0, xs).draw(seed)


def simulate_solution(model: SpectralModel, params: FrbeParams,
                      grid: SpectralGrid, t: float, xs: Sequence[float],
                      seed: int) -> FieldRealization:
    """Sample the solution field u(t, .); at t = 0 this reproduces the same
    sample path as simulate_eta with the same seed."""
    return _build_sampler("solution", model, grid, t, xs, params=params).draw(seed)


def simulate_rescaled(model: SpectralModel, params: FrbeParams,
                      grid: SpectralGrid, eps: float, t: float,
                      xs: Sequence[float], seed: int) -> FieldRealization:
    """Sample the rescaled field eps^(-b/2a) u(t/eps, x/eps^(b/a))."""
    return _build_sampler("rescaled", model, grid, t, xs, params=params,
                          eps=eps).draw(seed)


# ---------------------------------------------------------------------------
# ensembles
# ---------------------------------------------------------------------------

_POOL_SAMPLER = None


def _pool_init(kind, model, grid, t, xs, params, mu, eps):
    global _POOL_SAMPLER
    _POOL_SAMPLER = _build_sampler(kind, model, grid, t, xs, params=params,
                                   mu=mu, eps=eps)


def _pool_draw(key: int):
    return _POOL_SAMPLER.draw(key)


def simulate_ensemble(model: SpectralModel, grid: SpectralGrid, t: float,
                      xs: Sequence[float], kind: str, n_realizations: int,
                      base_seed: int, params: FrbeParams | None = None,
                      mu: float | None = None, eps: float = 1.0,
                      workers: int = 1) -> Ensemble:
    """Simulate n independent realizations with per-index Philox streams.

    The result is identical for any ``workers`` count: member i draws from
    the key stream_key(base_seed, i) regardless of scheduling, and members
    are assembled in index order. Member i can be reproduced standalone by
    calling the matching simulator with seed = stream_key(base_seed, i).
    """
    if n_realizations < 1:
        raise ValueError("need at least one realization")
    keys = [stream_key(base_seed, i) for i in range(n_realizations)]
    if workers <= 1 or n_realizations < 64:
        sampler = _build_sampler(kind, model, grid, t, xs, params=params,
                                 mu=mu, eps=eps)
        members = [sampler.draw(k) for k in keys]
    else:
        chunk = max(16, n_realizations // (8 * workers))
        # spawn: fork is unsafe under multithreaded parents and buys nothing
        # here since workers rebuild their sampler once from the init args
        with ProcessPoolExecutor(
                max_workers=workers,
                mp_context=multiprocessing.get_context("spawn"),
                initializer=_pool_init,
                initargs=(kind, model, grid, t, np.asarray(xs, float),
                          params, mu, eps)) as pool:
            members = list(pool.map(_pool_draw, keys, chunksize=chunk))
    return Ensemble(tuple(members), base_seed)


def estimate_cov(ens: Ensemble, i: int, j: int) -> tuple[float, float]:
    """Unbiased sample covariance between grid points i and j, with its
    leave-one-out jackknife standard error. Needs >= 2 members (>= 3 for a
    finite standard error)."""
    vals = ens.values
    n = vals.shape[0]
    if n < 2:
        raise ValueError("degenerate ensemble: need at least 2 realizations")
    a = vals[:, i]
    b = vals[:, j]
    sa, sb, sab = a.sum(), b.sum(), (a * b).sum()
    cov = (sab - sa * sb / n) / (n - 1)
    if n == 2:
        return float(cov), math.inf
    loo = (sab - a * b - (sa - a) * (sb - b) / (n - 1)) / (n - 2)
    se = math.sqrt((n - 1) / n * np.sum((loo - loo.mean()) ** 2))
    return float(cov), float(se)


def discrete_variance(model: SpectralModel, grid: SpectralGrid, t: float,
                      kind: str, params: FrbeParams | None = None,
                      mu: float | None = None, eps: float = 1.0,
                      lag: float = 0.0) -> float:
    """Exact second moment E[u(t,x) u(t,x+lag)] of the discrete spectral sum.

    This is the n -> infinity value of the ensemble covariance estimator and
    isolates pure discretisation effects from Monte Carlo noise.
    """
    sampler = _build_sampler(kind, model, grid, t, [0.0], params=params,
                             mu=mu, eps=eps)
    if kind == "rescaled":
        # covariance of the rescaled field at spatial lag `lag` is the inner
        # solution's covariance at the stretched lag, times the amplitude^2
        return sampler.second_moment(lag / eps ** (params.beta / params.alpha))
    return sampler.second_moment(lag)
