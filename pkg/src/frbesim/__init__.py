"""frbesim: spectral simulation and scaling-limit diagnostics for fractional
Riesz-Bessel diffusion with cyclic long-memory random initial data.

The package covers, end to end:

* special functions (Gamma, Bessel J/I/K, Mittag-Leffler with its two-sided
  rational bounds, erfc, Hermite polynomials),
* the cyclic long-memory spectral model: covariance cos(w x)/(1+x^2)^(k/2),
  its spectral density in two equivalent forms with integrable power-law
  singularities at +-w, and the evolution transfer function,
* exact and quadrature covariances of solution and limit fields,
* seeded, counter-based spectral-sum simulation of all fields, and
* deterministic verification of the mean-square scaling limits plus the
  rank > 1 divergence diagnostic.
"""

__version__ = "0.1.0"

from .quad import (
    ExpTailEnvelope,
    GaussianEnvelope,
    PowerTailEnvelope,
    QuadratureError,
    QuadratureResult,
    integrate_line,
    integrate_singular,
)
from .specfun import (
    MLBounds,
    bessel_i,
    bessel_j,
    bessel_k,
    erfc,
    gamma_fn,
    hermite,
    mittag_leffler,
    ml_bounds,
    y_d,
)
from .spectral import (
    FrbeParams,
    SpectralModel,
    c1,
    c2,
    c_dk,
    cov_limit_frbe,
    cov_limit_heat,
    cov_solution,
    f_asymptote_w0,
    f_bessel,
    f_theta,
    green_hat,
    heat_params,
    limit_prefactor,
    r_cov,
    theta,
    theta_complement,
)
from .fields import (
    Ensemble,
    FieldRealization,
    SpectralGrid,
    estimate_cov,
    discrete_variance,
    make_grid,
    simulate_ensemble,
    simulate_eta,
    simulate_limit_frbe,
    simulate_limit_heat,
    simulate_rescaled,
    simulate_solution,
    stream_key,
)
from .limits import (
    ConvergenceReport,
    divergence_m,
    q_eps_heat,
    q_tilde_frbe,
    r_frbe,
    r_heat,
    run_convergence,
)

__all__ = [name for name in dir() if not name.startswith("_")]
