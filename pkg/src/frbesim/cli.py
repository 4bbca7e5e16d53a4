"""Command-line surface.

Subcommands: density, covariance, simulate, converge, diverge, verify.
Configuration precedence is flags > --config JSON file > built-in defaults;
the defaults reproduce the reference figures of the model family
(kappa = 0.8, omega = 1, mu = 1, grid 0.05 x 100, eps sweep 1 .. 1e-4).

Outputs are plot-ready CSV or JSON written atomically (temp file + rename),
with '#' comment lines carrying seed, package version and a hash of the
effective configuration; no timestamps, so identical runs produce
byte-identical files. Exit status is 0 exactly when every check run by the
invoked command passed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__, fields, limits, quad, spectral
from . import specfun
from .spectral import FrbeParams, SpectralModel

__all__ = ["RunConfig", "main", "cmd_density", "cmd_covariance",
           "cmd_simulate", "cmd_converge", "cmd_diverge", "cmd_verify"]

COMMANDS = ("density", "covariance", "simulate", "converge", "diverge", "verify")


@dataclass(frozen=True)
class RunConfig:
    command: str = "verify"
    kappa: float = 0.8
    omega: float = 1.0
    mu: float = 1.0
    alpha: float = 2.0
    beta: float = 1.0
    gamma_exp: float = 0.0
    t: float = 1.0
    t2: float = 1.0
    x_min: float = -10.0
    x_max: float = 10.0
    x_steps: int = 401
    delta_lambda: float = 0.05
    n_grid: int = 100
    eps_list: tuple = (1.0, 1e-1, 1e-2, 1e-3, 1e-4)
    realizations: int = 2
    seed: int = 1
    out: str = ""
    format: str = "csv"
    workers: int = 1
    kind: str = "limit_heat"
    eps: float = 1.0
    surface: str = "auto"         # covariance mode: auto | heat | frbe-alpha | frbe-time
    unit_prefactor: bool = False
    tol: float = 1e-6
    m_rank: int = 2
    radii: tuple = (10.0, 20.0, 40.0, 80.0)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"command must be one of {COMMANDS}")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        object.__setattr__(self, "eps_list", tuple(float(e) for e in self.eps_list))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))

    @property
    def model(self) -> SpectralModel:
        return SpectralModel(self.kappa, self.omega)

    @property
    def params(self) -> FrbeParams:
        return FrbeParams(alpha=self.alpha, beta=self.beta,
                          gamma_exp=self.gamma_exp, mu=self.mu)

    @property
    def grid(self) -> fields.SpectralGrid:
        return fields.make_grid(self.delta_lambda, self.n_grid)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.x_steps)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["eps_list"] = list(self.eps_list)
        d["radii"] = list(self.radii)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f_.name for f_ in cls.__dataclass_fields__.values()}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        for key in ("eps_list", "radii"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)

    def digest(self) -> str:
        # hash of the scientific configuration only: output routing and
        # worker count must not alter what gets computed
        d = self.to_dict()
        for transient in ("out", "workers"):
            d.pop(transient, None)
        return hashlib.sha256(
            json.dumps(d, sort_keys=True).encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp_frbesim_")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: list, rows, config: RunConfig,
              comments: tuple = ()):
    lines = [f"# frbesim {__version__} seed={config.seed} config={config.digest()}"]
    lines += [f"# {c}" for c in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path: str, payload: dict, config: RunConfig):
    doc = {"frbesim_version": __version__, "config_digest": config.digest(),
           "seed": config.seed, **payload}
    _atomic_write(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _default_out(config: RunConfig, stem: str) -> str:
    return config.out if config.out else f"{stem}.{config.format}"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_density(config: RunConfig) -> int:
    """Tabulate both spectral-density representations and the covariance."""
    model = config.model
    lam = config.xs
    w = model.abs_omega
    keep = (lam != w) & (lam != -w)
    skipped = int(np.sum(~keep))
    lam = lam[keep]
    fb = spectral.f_bessel(model, lam)
    ft = spectral.f_theta(model, lam)
    rc = spectral.r_cov(model, lam)
    path = _default_out(config, "density")
    comments = (f"columns: frequency, density (Bessel form), density (theta form), "
                f"covariance at the same abscissa read as a lag",
                f"skipped_singular_nodes={skipped} at +-{w}")
    if config.format == "json":
        write_json(path, {"lambda": lam.tolist(), "f_bessel": fb.tolist(),
                          "f_theta": ft.tolist(), "r_cov": rc.tolist(),
                          "skipped_singular_nodes": skipped}, config)
    else:
        write_csv(path, ["lambda", "f_bessel", "f_theta", "r_cov_at_lambda_as_lag"],
                  zip(lam, fb, ft, rc), config, comments)
    print(f"density table -> {path} ({len(lam)} rows, {skipped} singular nodes skipped)")
    return 0


def cmd_covariance(config: RunConfig) -> int:
    """Limit-field covariance surfaces.

    heat: (delta, t+t2) via the closed form. frbe-alpha: (delta, alpha) at
    mu = t = t2 = 1. frbe-time: (t - t2, alpha) at delta = 0, t2 = 1.
    """
    model = config.model
    mode = config.surface
    if mode == "auto":
        mode = "heat" if config.params.is_heat else "frbe-alpha"
    rows = []
    if mode == "heat":
        pref = 1.0
        if config.unit_prefactor:
            pref = 1.0 / (spectral.limit_prefactor(model) * math.sqrt(math.pi / config.mu))
        for delta in np.linspace(0.0, 5.0, 21):
            for tsum in np.linspace(0.2, 4.0, 20):
                v = pref * spectral.cov_limit_heat(model, config.mu, 0.5 * tsum,
                                                   0.5 * tsum, delta, 0.0)
                rows.append((delta, tsum, v))
        header = ["delta", "t_sum", "value"]
    elif mode == "frbe-alpha":
        for delta in np.linspace(0.0, 5.0, 11):
            for alpha in np.linspace(1.0, 2.0, 11):
                alpha = max(alpha, 1.0 + 1e-9)
                p = FrbeParams(alpha=alpha, beta=config.beta if config.beta < 1 else 0.5,
                               gamma_exp=config.gamma_exp, mu=1.0)
                v = spectral.cov_limit_frbe(model, p, 1.0, 1.0, delta, 0.0,
                                            tol=max(config.tol, 1e-5),
                                            unit_prefactor=config.unit_prefactor)
                rows.append((delta, alpha, v))
        header = ["delta", "alpha", "value"]
    elif mode == "frbe-time":
        for tdiff in np.linspace(0.0, 1.0, 11):
            for alpha in np.linspace(1.0, 2.0, 11):
                alpha = max(alpha, 1.0 + 1e-9)
                p = FrbeParams(alpha=alpha, beta=config.beta if config.beta < 1 else 0.5,
                               gamma_exp=config.gamma_exp, mu=1.0)
                v = spectral.cov_limit_frbe(model, p, 1.0 + tdiff, 1.0, 0.0, 0.0,
                                            tol=max(config.tol, 1e-5),
                                            unit_prefactor=config.unit_prefactor)
                rows.append((tdiff, alpha, v))
        header = ["t_diff", "alpha", "value"]
    else:
        raise ValueError("surface must be auto, heat, frbe-alpha or frbe-time")
    path = _default_out(config, f"covariance_{mode.replace('-', '_')}")
    if config.format == "json":
        write_json(path, {"mode": mode, "header": header,
                          "rows": [list(r) for r in rows]}, config)
    else:
        write_csv(path, header, rows, config, (f"surface mode: {mode}",))
    print(f"covariance surface ({mode}) -> {path} ({len(rows)} rows)")
    return 0


def _simulate_kind(config: RunConfig):
    kind = config.kind.replace("-", "_")
    if kind == "solution":
        kind = "solution_heat" if config.params.is_heat else "solution_frbe"
    return kind


def cmd_simulate(config: RunConfig) -> int:
    """Simulate an ensemble; one CSV per realization plus a summary JSON."""
    kind = _simulate_kind(config)
    model = config.model
    ens = fields.simulate_ensemble(
        model, config.grid, config.t, config.xs, kind, config.realizations,
        config.seed, params=config.params, mu=config.mu, eps=config.eps,
        workers=config.workers)
    stem = config.out if config.out else "simulation"
    for i, real in enumerate(ens.realizations):
        path = f"{stem}_real{i:04d}.csv"
        write_csv(path, ["t", "x", "value"],
                  ((real.t, x, v) for x, v in zip(real.xs, real.values)),
                  config, (f"kind={kind} realization={i} stream_seed={real.seed}",))
    vals = ens.values
    n_x = vals.shape[1]
    summary = {
        "kind": kind,
        "t": config.t,
        "x": config.xs.tolist(),
        "realizations": len(ens),
        "mean": vals.mean(axis=0).tolist(),
    }
    if len(ens) >= 2:
        var, var_se, cov_lag, cov_se = [], [], [], []
        for j in range(n_x):
            v, se = fields.estimate_cov(ens, j, j)
            var.append(v)
            var_se.append(se if math.isfinite(se) else None)
        for j in range(1, n_x):
            v, se = fields.estimate_cov(ens, 0, j)
            cov_lag.append(v)
            cov_se.append(se if math.isfinite(se) else None)
        summary.update(variance=var, variance_stderr=var_se,
                       cov_from_x0=cov_lag, cov_from_x0_stderr=cov_se)
    spath = f"{stem}_summary.json"
    write_json(spath, summary, config)
    print(f"{len(ens)} realizations -> {stem}_real*.csv, summary -> {spath}")
    return 0


def cmd_converge(config: RunConfig) -> int:
    report = limits.run_convergence(config.model, config.params, config.t,
                                    config.eps_list, tol=min(config.tol, 1e-6))
    path = config.out if config.out else "convergence.json"
    write_json(path, {"report": report.to_dict()}, config)
    status = "ok" if report.monotone_decreasing else "NOT MONOTONE"
    print(f"convergence sweep -> {path} ({status}, "
          f"R ratio {report.ratio_last_first:.3e})")
    return 0 if report.monotone_decreasing else 1


def cmd_diverge(config: RunConfig) -> int:
    rows = []
    prev = None
    for radius in config.radii:
        v = limits.divergence_m(config.m_rank, config.mu, config.t, radius)
        ratio = (v / prev) if prev is not None else None
        rows.append({"radius": radius, "value": v, "growth_ratio": ratio})
        prev = v
    path = config.out if config.out else "divergence.json"
    write_json(path, {"m": config.m_rank, "table": rows}, config)
    grew = all(r["growth_ratio"] is None or r["growth_ratio"] > 1.5 for r in rows)
    print(f"divergence table (m={config.m_rank}) -> {path}")
    return 0 if grew else 1


# ---------------------------------------------------------------------------
# verify: run every acceptance-style check at configuration scale
# ---------------------------------------------------------------------------

def _check(name, passed, detail):
    return {"name": name, "passed": bool(passed), "detail": detail}


def _verify_checks(config: RunConfig):
    checks = []
    model_default = SpectralModel(0.8, 1.0)

    # 1. spectral-representation equivalence
    worst = 0.0
    for kappa in (0.2, 0.5, 0.8):
        for w in (0.5, 1.0, 2.0):
            mdl = SpectralModel(kappa, w)
            lam = np.linspace(-10, 10, 801)
            lam = lam[(np.abs(lam - w) > 1e-3) & (np.abs(lam + w) > 1e-3)]
            worst = max(worst, float(np.max(np.abs(
                spectral.f_bessel(mdl, lam) / spectral.f_theta(mdl, lam) - 1.0))))
    checks.append(_check("density_representations_agree", worst <= 1e-6,
                         f"max relative gap {worst:.3e} (allowed 1e-6)"))

    # 2. covariance recovered from the density
    worst = 0.0
    for x in (0.0, 1.0, 5.0):
        res = quad.integrate_singular(
            lambda l: np.cos(x * l) * spectral.f_theta(model_default, l),
            [-1.0, 1.0], exponent=0.2, tol=1e-8,
            envelope=quad.ExpTailEnvelope(1.0, 2.0, 2.0))
        worst = max(worst, abs(res.value - float(spectral.r_cov(model_default, x))))
    checks.append(_check("covariance_inversion", worst <= 1e-4,
                         f"max abs error {worst:.3e} (allowed 1e-4)"))

    # 3. Mittag-Leffler bounds and closed forms
    u = np.logspace(-3, 2, 120)
    ok = True
    worst_txt = []
    for beta in (0.3, 0.5, 0.8):
        b = specfun.ml_bounds(beta, u)
        e = specfun.mittag_leffler(beta, -u)
        ok &= bool(np.all(b.lower <= e) and np.all(e <= b.upper))
    u2 = np.linspace(0, 30, 61)
    d_exp = float(np.max(np.abs(specfun.mittag_leffler(1.0, -u2) - np.exp(-u2))))
    ok &= d_exp <= 1e-12
    u3 = np.linspace(0, 10, 101)
    closed = np.exp(u3 ** 2) * specfun.erfc(u3)
    d_half = float(np.max(np.abs(specfun.mittag_leffler(0.5, -u3) / closed - 1.0)))
    ok &= d_half <= 1e-8
    checks.append(_check("mittag_leffler_bounds_and_closed_forms", ok,
                         f"E_1 dev {d_exp:.2e}, E_1/2 dev {d_half:.2e}, bounds hold"))

    # 4. heat-limit covariance closed form vs its defining quadrature
    worst = 0.0
    for delta in (0.0, 1.5, 3.0):
        for tsum in (0.5, 2.0, 4.0):
            closed = spectral.cov_limit_heat(model_default, 1.0, 0.5 * tsum,
                                             0.5 * tsum, delta, 0.0)
            res = quad.integrate_line(
                lambda l: np.cos(delta * l) * np.exp(-tsum * l * l),
                tol=1e-10, envelope=quad.GaussianEnvelope(tsum), abs_tol=1e-16)
            ref = spectral.limit_prefactor(model_default) * res.value
            worst = max(worst, abs(closed - ref) / abs(ref))
    checks.append(_check("heat_limit_closed_form_anchor", worst <= 1e-6,
                         f"max relative gap {worst:.3e} (allowed 1e-6)"))

    # 5. heat-case convergence sweep
    rep = limits.run_convergence(model_default, spectral.heat_params(1.0), 1.0,
                                 config.eps_list)
    ok5 = rep.monotone_decreasing and rep.ratio_last_first < 0.01
    checks.append(_check("heat_mean_square_convergence", ok5,
                         f"monotone={rep.monotone_decreasing}, "
                         f"ratio={rep.ratio_last_first:.3e} (< 0.01)"))

    # 6. fractional convergence: reduction to heat, decrease, alpha gate
    red_worst = 0.0
    for e in (1.0, 1e-2):
        a = limits.r_frbe(model_default, spectral.heat_params(1.0), 1.0, e)
        b = limits.r_heat(model_default, 1.0, 1.0, e)
        red_worst = max(red_worst, abs(a - b) / abs(b))
    pf = FrbeParams(alpha=1.5, beta=0.5, gamma_exp=0.0, mu=1.0)
    repf = limits.run_convergence(model_default, pf, 1.0, config.eps_list)
    try:
        limits.r_frbe(model_default, FrbeParams(0.9, 0.5, 0.0, 1.0), 1.0, 0.1)
        gate = False
    except ValueError:
        gate = True
    ok6 = red_worst <= 1e-6 and repf.monotone_decreasing and gate
    checks.append(_check("fractional_convergence_and_reduction", ok6,
                         f"reduction gap {red_worst:.2e}, monotone="
                         f"{repf.monotone_decreasing}, alpha<=1 rejected={gate}"))

    # 7. Monte Carlo covariance vs the two limit covariances
    n = max(config.realizations, 200)
    grid = config.grid
    ens = fields.simulate_ensemble(model_default, grid, 1.0, [0.0, 1.0],
                                   "limit_heat", n, config.seed, mu=1.0,
                                   workers=config.workers)
    ok7 = True
    details = []
    for (i, j, ref) in ((0, 0, spectral.cov_limit_heat(model_default, 1.0, 1, 1, 0, 0)),
                        (0, 1, spectral.cov_limit_heat(model_default, 1.0, 1, 1, 1, 0))):
        v, se = fields.estimate_cov(ens, i, j)
        ok7 &= abs(v - ref) <= 4.0 * se
        details.append(f"heat[{i}{j}] dev {abs(v - ref) / se:.2f}se")
    pfrbe = FrbeParams(alpha=1.5, beta=0.5, gamma_exp=0.0, mu=1.0)
    ensf = fields.simulate_ensemble(model_default, grid, 1.0, [0.0, 1.0],
                                    "limit_frbe", n, config.seed + 1,
                                    params=pfrbe, workers=config.workers)
    for (i, j, ref) in ((0, 0, spectral.cov_limit_frbe(model_default, pfrbe, 1, 1, 0, 0)),
                        (0, 1, spectral.cov_limit_frbe(model_default, pfrbe, 1, 1, 1, 0))):
        v, se = fields.estimate_cov(ensf, i, j)
        ok7 &= abs(v - ref) <= 4.0 * se
        details.append(f"frbe[{i}{j}] dev {abs(v - ref) / se:.2f}se")
    checks.append(_check("monte_carlo_limit_covariance", ok7,
                         f"n={n}: " + ", ".join(details) + " (allowed 4 se)"))

    # 8. rank-2 divergence and the rank-1 control
    vals = [limits.divergence_m(2, 1.0, 1.0, r) for r in (10.0, 20.0, 40.0)]
    ratios = [b / a for a, b in zip(vals, vals[1:])]
    ctrl = quad.integrate_line(lambda l: np.exp(-2.0 * l * l), tol=1e-12,
                               envelope=quad.GaussianEnvelope(2.0)).value
    ctrl_dev = abs(ctrl - math.sqrt(math.pi / 2.0))
    ok8 = all(1.8 <= r <= 2.2 for r in ratios) and ctrl_dev <= 1e-8
    checks.append(_check("rank2_variance_divergence", ok8,
                         f"growth ratios {[f'{r:.3f}' for r in ratios]}, "
                         f"rank-1 control dev {ctrl_dev:.2e}"))

    # 9. determinism across repeats and worker counts
    e1 = fields.simulate_ensemble(model_default, grid, 1.0, [0.0, 1.0],
                                  "limit_heat", 64, config.seed, mu=1.0, workers=1)
    e2 = fields.simulate_ensemble(model_default, grid, 1.0, [0.0, 1.0],
                                  "limit_heat", 64, config.seed, mu=1.0, workers=1)
    e3 = fields.simulate_ensemble(model_default, grid, 1.0, [0.0, 1.0],
                                  "limit_heat", 64, config.seed, mu=1.0, workers=2)
    ok9 = (np.array_equal(e1.values, e2.values)
           and np.array_equal(e1.values, e3.values))
    checks.append(_check("seed_and_worker_determinism", ok9,
                         "byte-identical across reruns and worker counts"))
    return checks


def cmd_verify(config: RunConfig) -> int:
    checks = _verify_checks(config)
    all_passed = all(c["passed"] for c in checks)
    path = config.out if config.out else "verify_report.json"
    write_json(path, {"all_passed": all_passed, "checks": checks}, config)
    for c in checks:
        print(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}: {c['detail']}")
    print(f"verify report -> {path}")
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="frbesim",
        description="Cyclic long-memory fractional diffusion: densities, "
                    "covariances, field simulation and scaling-limit checks.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, doc in (
            ("density", "tabulate the spectral density (both forms) and covariance"),
            ("covariance", "limit-field covariance surfaces"),
            ("simulate", "simulate field realizations and ensemble statistics"),
            ("converge", "mean-square convergence sweep R(t, eps)"),
            ("diverge", "rank m > 1 truncated variance growth"),
            ("verify", "run the full verification suite")):
        sp_ = sub.add_parser(name, help=doc)
        sp_.add_argument("--config", type=str, default=None,
                         help="JSON file with flat RunConfig keys")
        sp_.add_argument("--kappa", type=float, default=None)
        sp_.add_argument("--omega", type=float, default=None)
        sp_.add_argument("--mu", type=float, default=None)
        sp_.add_argument("--alpha", type=float, default=None)
        sp_.add_argument("--beta", type=float, default=None)
        sp_.add_argument("--gamma-exp", dest="gamma_exp", type=float, default=None)
        sp_.add_argument("--t", type=float, default=None)
        sp_.add_argument("--t2", type=float, default=None)
        sp_.add_argument("--x-min", dest="x_min", type=float, default=None)
        sp_.add_argument("--x-max", dest="x_max", type=float, default=None)
        sp_.add_argument("--x-steps", dest="x_steps", type=int, default=None)
        sp_.add_argument("--delta-lambda", dest="delta_lambda", type=float,
                         default=None)
        sp_.add_argument("--n-grid", dest="n_grid", type=int, default=None)
        sp_.add_argument("--eps-list", dest="eps_list", type=str, default=None,
                         help="comma-separated decreasing eps values")
        sp_.add_argument("--realizations", type=int, default=None)
        sp_.add_argument("--seed", type=int, default=None)
        sp_.add_argument("--out", type=str, default=None)
        sp_.add_argument("--format", choices=("csv", "json"), default=None)
        sp_.add_argument("--workers", type=int, default=None)
        sp_.add_argument("--tol", type=float, default=None)
        if name == "simulate":
            sp_.add_argument("--kind", type=str, default=None,
                             choices=("eta", "solution", "rescaled",
                                      "limit-heat", "limit-frbe",
                                      "limit_heat", "limit_frbe"))
            sp_.add_argument("--eps", type=float, default=None)
        if name == "covariance":
            sp_.add_argument("--surface", type=str, default=None,
                             choices=("auto", "heat", "frbe-alpha", "frbe-time"))
            sp_.add_argument("--unit-prefactor", dest="unit_prefactor",
                             action="store_const", const=True, default=None)
        if name == "diverge":
            sp_.add_argument("--m-rank", dest="m_rank", type=int, default=None)
            sp_.add_argument("--radii", type=str, default=None,
                             help="comma-separated radii")
    return p


def build_config(argv) -> RunConfig:
    args = vars(_build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)
    merged = {"command": command}
    if config_path:
        with open(config_path) as fh:
            file_cfg = json.load(fh)
        file_cfg.pop("command", None)
        merged.update(file_cfg)
    for key, val in args.items():
        if val is None:
            continue
        if key in ("eps_list", "radii") and isinstance(val, str):
            val = tuple(float(v) for v in val.split(","))
        merged[key] = val
    return RunConfig.from_dict(merged)


def main(argv=None) -> int:
    config = build_config(sys.argv[1:] if argv is None else argv)
    dispatch = {
        "density": cmd_density,
        "covariance": cmd_covariance,
        "simulate": cmd_simulate,
        "converge": cmd_converge,
        "diverge": cmd_diverge,
        "verify": cmd_verify,
    }
    try:
        return dispatch[config.command](config)
    except quad.QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
