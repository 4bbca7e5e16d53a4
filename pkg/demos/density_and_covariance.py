"""Covariance and spectral density of the cyclic long-memory model.

The initial-condition process has covariance r(x) = cos(w x)/(1+x^2)^(k/2):
an oscillating, non-integrable decay. Its spectral density is finite at
frequency zero but blows up like |lambda -+ w|^(kappa-1) at the two cyclic
frequencies +-w -- integrably, so the total spectral mass is still r(0) = 1.

This script tabulates both density representations (modified-Bessel form and
theta form) on a frequency grid for kappa = 0.8, w = 1, checks them against
each other, and recovers the covariance back from the density by quadrature.

CLI equivalent: `frbesim density --kappa 0.8 --omega 1`.
"""

import numpy as np

from frbesim import quad, spectral

model = spectral.SpectralModel(kappa=0.8, omega=1.0)

lam = np.linspace(-10.0, 10.0, 801)
lam = lam[(np.abs(lam - 1.0) > 1e-6) & (np.abs(lam + 1.0) > 1e-6)]
f_b = spectral.f_bessel(model, lam)
f_t = spectral.f_theta(model, lam)

print("two density representations, max relative gap:",
      f"{np.max(np.abs(f_b / f_t - 1.0)):.3e}")
print(f"density at zero frequency: f(0) = {spectral.f_theta(model, 0.0):.6f}")
print(f"density near the peak:     f(1.01) = {spectral.f_theta(model, 1.01):.4f}, "
      f"f(1.001) = {spectral.f_theta(model, 1.001):.4f}  (integrable blow-up)")

# Bochner check: integrating e^{i lambda x} f(lambda) over the line must
# reproduce cos(x)/(1+x^2)^0.4 -- singular quadrature handles the peaks.
print("\n  x    r(x) exact    r(x) from density")
for x in (0.0, 1.0, 2.0, 5.0):
    res = quad.integrate_singular(
        lambda l: np.cos(x * l) * spectral.f_theta(model, l),
        [-1.0, 1.0], exponent=1.0 - model.kappa, tol=1e-9,
        envelope=quad.ExpTailEnvelope(rate=1.0, shift=2.0, amplitude=2.0))
    print(f"  {x:3.1f}  {float(spectral.r_cov(model, x)):+.9f}  {res.value:+.9f}")

table = np.column_stack([lam, f_b, f_t, spectral.r_cov(model, lam)])
np.savetxt("demo_density.csv", table, delimiter=",", comments="",
           header="lambda,f_bessel,f_theta,r_cov_at_lambda_as_lag")
print("\nwrote demo_density.csv")
