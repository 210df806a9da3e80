"""Damped least-squares fits of the three decay laws with analytic
Jacobians and 95% confidence intervals from the Jacobian covariance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass
class FitResult:
    names: tuple
    params: np.ndarray
    ci95: np.ndarray
    residual_norm: float
    converged: bool
    n_iter: int
    cov: np.ndarray

    def as_dict(self) -> dict:
        out = {}
        for i, name in enumerate(self.names):
            out[name] = float(self.params[i])
            out[f"{name}_ci95"] = float(self.ci95[i])
        out["residual_norm"] = self.residual_norm
        out["converged"] = bool(self.converged)
        out["n_iter"] = self.n_iter
        return out


def levenberg_marquardt(residual_fn, jac_fn, x0, max_iter: int = 200,
                        step_tol: float = 1e-9, grad_tol: float = 1e-12,
                        on_accept=None):
    """Minimize ||r(x)||^2 with Marquardt damping.

    The damping factor grows until a trial step lowers the cost, so the
    cost is non-increasing across accepted steps.  Convergence is declared
    when the relative step or the gradient falls below tolerance.
    on_accept(x, cost) is invoked after every accepted step.
    """
    x = np.asarray(x0, dtype=float).copy()
    r = residual_fn(x)
    cost = float(r @ r)
    lam = 1e-3
    converged = False
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        J = jac_fn(x)
        g = J.T @ r
        if np.max(np.abs(g)) < grad_tol:
            converged = True
            break
        A = J.T @ J
        diag = np.diag(np.maximum(np.diag(A), 1e-30))
        accepted = False
        for _ in range(60):
            try:
                dx = np.linalg.solve(A + lam * diag, -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            x_new = x + dx
            r_new = residual_fn(x_new)
            cost_new = float(r_new @ r_new)
            if np.isfinite(cost_new) and cost_new <= cost:
                rel_step = np.max(np.abs(dx) / np.maximum(np.abs(x), 1e-30))
                x, r, cost = x_new, r_new, cost_new
                lam = max(lam / 3, 1e-14)
                accepted = True
                if on_accept is not None:
                    on_accept(x.copy(), cost)
                if rel_step < step_tol:
                    converged = True
                break
            lam *= 4
        if not accepted or converged:
            break
    return x, r, converged, n_iter


def _finish(names, x, r, converged, n_iter, jac_fn) -> FitResult:
    n, p = len(r), len(x)
    J = jac_fn(x)
    dof = n - p
    cov = np.full((p, p), np.nan)
    ci = np.full(p, np.nan)
    if dof > 0:
        sigma2 = float(r @ r) / dof
        try:
            cov = sigma2 * np.linalg.inv(J.T @ J)
            tq = stats.t.ppf(0.975, dof)
            ci = tq * np.sqrt(np.maximum(np.diag(cov), 0.0))
        except np.linalg.LinAlgError:
            pass
    return FitResult(names=tuple(names), params=x, ci95=ci,
                     residual_norm=float(np.linalg.norm(r)),
                     converged=converged, n_iter=n_iter, cov=cov)


# --- AFC echo decay ---------------------------------------------------------

def afc_decay_curve(t, eta0, t2, mod_depth, zeeman_split_hz):
    mod = 1.0 - mod_depth * np.sin(np.pi * zeeman_split_hz * t) ** 2
    return eta0 * np.exp(-4.0 * t / t2) * mod


def fit_afc_decay(t, eta, zeeman_split_hz: float = 41.4e3,
                  fit_modulation: bool = True) -> FitResult:
    """Fit eta0 exp(-4t/T2) [1 - m sin^2(pi f_z t)] to echo-decay data.

    The modulation depth is a fitted parameter (it is not predicted); the
    splitting frequency is fixed.
    """
    t = np.asarray(t, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if np.any(eta <= 0):
        raise ValueError("eta values must be positive")
    names = ("eta0", "t2", "mod_depth") if fit_modulation else ("eta0", "t2")

    def unpack(x):
        if fit_modulation:
            return x[0], x[1], x[2]
        return x[0], x[1], 0.0

    def resid(x):
        e0, t2, m = unpack(x)
        if t2 <= 0 or e0 <= 0 or not 0 <= m <= 1:
            return np.full(t.size, np.inf)
        return afc_decay_curve(t, e0, t2, m, zeeman_split_hz) - eta

    def jac(x):
        e0, t2, m = unpack(x)
        decay = np.exp(-4.0 * t / t2)
        s2 = np.sin(np.pi * zeeman_split_hz * t) ** 2
        mod = 1.0 - m * s2
        J = np.empty((t.size, len(names)))
        J[:, 0] = decay * mod
        J[:, 1] = e0 * decay * mod * (4.0 * t / t2**2)
        if fit_modulation:
            J[:, 2] = -e0 * decay * s2
        return J

    # start from the log-linear envelope through the first/last points
    e0_guess = float(eta.max())
    slope = (np.log(eta[-1]) - np.log(eta[0])) / (t[-1] - t[0])
    t2_guess = -4.0 / slope if slope < 0 else 4.0 * t[-1]
    x0 = [e0_guess, t2_guess] + ([0.1] if fit_modulation else [])
    x, r, conv, it = levenberg_marquardt(resid, jac, x0)
    return _finish(names, x, r, conv, it, jac)


# --- Mims (stretched-exponential) spin decay --------------------------------

def mims_curve(t, eta0, t2, m):
    return eta0 * np.exp(-2.0 * (t / t2) ** m)


def fit_mims(t, eta) -> FitResult:
    """Fit eta0 exp[-2 (T/T2)^m] to spin storage decay data."""
    t = np.asarray(t, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if np.any(eta <= 0) or np.any(t <= 0):
        raise ValueError("data must be positive")
    names = ("eta0", "t2", "m")

    def resid(x):
        e0, t2, m = x
        if t2 <= 0 or e0 <= 0 or m <= 0:
            return np.full(t.size, np.inf)
        return mims_curve(t, e0, t2, m) - eta

    def jac(x):
        e0, t2, m = x
        u = (t / t2) ** m
        f = np.exp(-2.0 * u)
        J = np.empty((t.size, 3))
        J[:, 0] = f
        J[:, 1] = e0 * f * (2.0 * m * u / t2)
        J[:, 2] = e0 * f * (-2.0 * u * np.log(t / t2))
        return J

    e0_guess = float(eta.max())
    # crude T2 guess: where the curve crosses e0/e^2
    target = e0_guess * np.exp(-2.0)
    idx = int(np.argmin(np.abs(eta - target)))
    x0 = [e0_guess, float(t[idx]), 2.0]
    x, r, conv, it = levenberg_marquardt(resid, jac, x0)
    return _finish(names, x, r, conv, it, jac)


# --- power law T2(n) = T2(1) n^gamma ----------------------------------------

def fit_power_law(n_pulses, t2_values) -> FitResult:
    """Fit T2(n) = T2(1) n^gamma in log-log space.

    Parameters are reported as (t2_1, gamma); fitting the straight line in
    log space equalizes relative errors across the decade span.
    """
    n = np.asarray(n_pulses, dtype=float)
    t2 = np.asarray(t2_values, dtype=float)
    if np.any(n <= 0) or np.any(t2 <= 0):
        raise ValueError("data must be positive")
    names = ("t2_1", "gamma")
    ln_n = np.log(n)
    ln_t2 = np.log(t2)

    def resid(x):
        a, g = x
        if a <= 0:
            return np.full(n.size, np.inf)
        return np.log(a) + g * ln_n - ln_t2

    def jac(x):
        a, _ = x
        J = np.empty((n.size, 2))
        J[:, 0] = 1.0 / a
        J[:, 1] = ln_n
        return J

    # closed-form linear start
    g0, la0 = np.polyfit(ln_n, ln_t2, 1)
    x, r, conv, it = levenberg_marquardt(resid, jac, [np.exp(la0), g0])
    return _finish(names, x, r, conv, it, jac)
