"""Photon-counting chain: Poisson statistics, mode sums and memory metrics.

Fluxes are mean photon rates at the memory output; the chain applies the
path transmission and detector efficiency before drawing counts.  Metric
errors are Poisson-propagated treating the temporal modes as independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class DetectionChain:
    detector_efficiency: float = 0.57
    path_transmission: float = 0.185
    filter_extinction: float = 1636.0
    gate_window_s: float = 0.0
    dark_rate_hz: float = 0.0

    def validate(self) -> None:
        if not 0 <= self.detector_efficiency <= 1:
            raise ValueError("detector_efficiency must lie in [0, 1]")
        if not 0 <= self.path_transmission <= 1:
            raise ValueError("path_transmission must lie in [0, 1]")
        if self.filter_extinction < 1:
            raise ValueError("filter_extinction must be at least 1")
        if self.dark_rate_hz < 0:
            raise ValueError("dark_rate_hz must be nonnegative")

    @property
    def total_transmission(self) -> float:
        return self.detector_efficiency * self.path_transmission


@dataclass
class CountHistogram:
    bin_width_s: float = 200e-9
    t0_s: float = 0.0
    counts: np.ndarray = field(default=None)
    n_trials: int = 1

    @property
    def n_bins(self) -> int:
        return int(self.counts.size)

    def bin_starts(self) -> np.ndarray:
        return self.t0_s + np.arange(self.n_bins) * self.bin_width_s

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("bin_start_s,counts\n")
            for t, c in zip(self.bin_starts(), self.counts):
                fh.write(f"{float(t)!r},{int(c)}\n")


def simulate_counts(flux_per_s, sample_rate_hz: float | None, chain: DetectionChain,
                    n_trials: int, seed=None, bin_width_s: float = 200e-9,
                    t0_s: float = 0.0) -> CountHistogram:
    """Histogram of detector counts accumulated over n_trials.

    flux_per_s is the mean photon rate at the memory output, either a
    Waveform (its sample rate and origin are used) or an array on a uniform
    grid with sample_rate_hz given.  Per bin the detected mean is the
    integrated flux times the chain transmission plus dark counts; total
    counts per bin are drawn as Poisson with n_trials times that mean (the
    sum of independent per-trial Poisson draws has exactly this law).
    """
    chain.validate()
    if hasattr(flux_per_s, "samples"):
        if sample_rate_hz is None:
            sample_rate_hz = flux_per_s.sample_rate_hz
        t0_s = flux_per_s.t0_s
        flux = np.real(np.asarray(flux_per_s.samples))
    else:
        flux = np.asarray(flux_per_s, dtype=float)
    if sample_rate_hz is None:
        raise ValueError("sample_rate_hz required for array flux input")
    if np.any(flux < 0) or not np.all(np.isfinite(flux)):
        raise ValueError("flux must be finite and nonnegative")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    dt = 1.0 / sample_rate_hz
    per_bin = max(1, int(round(bin_width_s * sample_rate_hz)))
    n_bins = int(np.ceil(flux.size / per_bin))
    padded = np.zeros(n_bins * per_bin)
    padded[: flux.size] = flux
    mean_per_trial = padded.reshape(n_bins, per_bin).sum(axis=1) * dt
    mean_per_trial = mean_per_trial * chain.total_transmission \
        + chain.dark_rate_hz * bin_width_s
    counts = rng.poisson(n_trials * mean_per_trial)
    return CountHistogram(bin_width_s=per_bin * dt, t0_s=t0_s,
                          counts=counts, n_trials=n_trials)


@dataclass
class ModeSums:
    """Per-mode photon numbers referred back to the memory output."""

    values: np.ndarray
    errors: np.ndarray
    raw_counts: np.ndarray


def mode_sums(hist: CountHistogram, mode_start_s: float, mode_period_s: float,
              n_modes: int, t_m_s: float, chain: DetectionChain) -> ModeSums:
    """Sum counts over each mode window of duration t_m_s and normalize by
    trials and chain transmission.  Windows must align with bin edges and
    must not overlap."""
    if mode_period_s < t_m_s:
        raise ValueError("mode windows overlap")
    ratio = t_m_s / hist.bin_width_s
    if abs(ratio - round(ratio)) > 1e-9:
        raise ValueError("bin width must divide the mode window")
    bins_per_mode = int(round(ratio))
    values = np.empty(n_modes)
    errors = np.empty(n_modes)
    raw = np.empty(n_modes, dtype=np.int64)
    norm = hist.n_trials * chain.total_transmission
    for k in range(n_modes):
        start = mode_start_s + k * mode_period_s
        i0 = (start - hist.t0_s) / hist.bin_width_s
        if abs(i0 - round(i0)) > 1e-6:
            raise ValueError("mode window does not align with bin edges")
        i0 = int(round(i0))
        if i0 < 0 or i0 + bins_per_mode > hist.n_bins:
            raise ValueError("mode window outside histogram span")
        c = int(hist.counts[i0: i0 + bins_per_mode].sum())
        raw[k] = c
        values[k] = c / norm
        errors[k] = np.sqrt(c) / norm
    return ModeSums(values=values, errors=errors, raw_counts=raw)


@dataclass
class ModeMetrics:
    """Memory figures of merit per temporal mode and their 6-mode averages."""

    mu_in: float
    eta: np.ndarray
    p_n: np.ndarray
    snr: np.ndarray
    mu1: np.ndarray
    eta_err: np.ndarray
    p_n_err: np.ndarray
    snr_err: np.ndarray
    mu1_err: np.ndarray

    def _avg(self, vals, errs):
        n = len(vals)
        return float(np.mean(vals)), float(np.sqrt(np.sum(np.square(errs))) / n)

    @property
    def eta_avg(self):
        return self._avg(self.eta, self.eta_err)

    @property
    def p_n_avg(self):
        return self._avg(self.p_n, self.p_n_err)

    @property
    def snr_avg(self):
        return self._avg(self.snr, self.snr_err)

    @property
    def mu1_avg(self):
        return self._avg(self.mu1, self.mu1_err)

    def summary(self) -> dict:
        out = {"mu_in": self.mu_in}
        for name in ("eta", "p_n", "snr", "mu1"):
            avg, err = getattr(self, f"{name}_avg")
            out[name] = avg
            out[f"{name}_err"] = err
        return out


def metrics(mu_in: float, output_modes: ModeSums, noise_modes: ModeSums,
            noise_subtracted: bool = True) -> ModeMetrics:
    """Storage efficiency, SNR and mu1 from signal-run and noise-run mode
    sums.

    eta uses the noise-subtracted output; snr is signal over noise (the
    noise_subtracted flag controls whether the numerator has the noise
    removed); mu1 = p_n / eta is the input photon number giving SNR 1.
    """
    if mu_in <= 0:
        raise ValueError("mu_in must be positive")
    out = output_modes.values
    out_err = output_modes.errors
    p_n = noise_modes.values
    p_err = noise_modes.errors

    signal = out - p_n
    sig_err = np.hypot(out_err, p_err)
    eta = signal / mu_in
    eta_err = sig_err / mu_in

    numer = signal if noise_subtracted else out
    numer_err = sig_err if noise_subtracted else out_err
    with np.errstate(divide="ignore", invalid="ignore"):
        snr = np.where(p_n > 0, numer / np.where(p_n > 0, p_n, 1.0), np.inf)
        snr_err = np.where(
            p_n > 0,
            np.abs(snr) * np.sqrt((numer_err / np.where(numer != 0, numer, 1.0)) ** 2
                                  + (p_err / np.where(p_n > 0, p_n, 1.0)) ** 2),
            0.0)
        if np.any(eta <= 0):
            raise ValueError("nonpositive efficiency; mu1 undefined")
        mu1 = p_n / eta
        mu1_err = mu1 * np.sqrt((p_err / np.where(p_n > 0, p_n, 1.0)) ** 2
                                + (eta_err / eta) ** 2)
    return ModeMetrics(mu_in=mu_in, eta=eta, p_n=p_n, snr=snr, mu1=mu1,
                       eta_err=eta_err, p_n_err=p_err, snr_err=snr_err,
                       mu1_err=mu1_err)


def table_metrics(mu_in: float, eta: float, p_n: float,
                  mu_in_err: float = 0.0, eta_err: float = 0.0,
                  p_n_err: float = 0.0) -> dict:
    """SNR and mu1 (with propagated errors) from a (mu_in, eta, p_n) triple."""
    if mu_in <= 0 or eta <= 0 or p_n <= 0:
        raise ValueError("mu_in, eta and p_n must be positive")
    snr = mu_in * eta / p_n
    mu1 = p_n / eta
    rel_mu = mu_in_err / mu_in
    rel_eta = eta_err / eta
    rel_p = p_n_err / p_n
    return {
        "snr": snr,
        "snr_err": snr * np.sqrt(rel_mu**2 + rel_eta**2 + rel_p**2),
        "mu1": mu1,
        "mu1_err": mu1 * np.sqrt(rel_eta**2 + rel_p**2),
    }


def noise_floor_model(t_after_readout_s, p_n_ref: float,
                      lifetime_s: float = 1.9e-3):
    """Noise density versus delay after readout: exponential decay of the
    spontaneous-emission floor, normalized to p_n_ref at zero delay."""
    t = np.asarray(t_after_readout_s, dtype=float)
    if np.any(t < 0):
        raise ValueError("t_after_readout_s must be nonnegative")
    out = p_n_ref * np.exp(-t / lifetime_s)
    return out if out.ndim else float(out)
