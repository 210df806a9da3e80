"""Complex-envelope waveforms on uniform time grids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Waveform:
    """Uniformly sampled complex envelope (amplitude in Hz of Rabi frequency,
    or any linear field unit) starting at t0_s."""

    sample_rate_hz: float
    t0_s: float
    samples: np.ndarray

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        self.samples = np.asarray(self.samples, dtype=np.complex128)

    @property
    def dt_s(self) -> float:
        return 1.0 / self.sample_rate_hz

    @property
    def n_samples(self) -> int:
        return int(self.samples.size)

    @property
    def duration_s(self) -> float:
        return self.n_samples * self.dt_s

    def times(self) -> np.ndarray:
        return self.t0_s + np.arange(self.n_samples) * self.dt_s

    def energy(self) -> float:
        """Integral of |envelope|^2 dt."""
        return float(np.sum(np.abs(self.samples) ** 2) * self.dt_s)

    def peak_time(self) -> float:
        """Time of maximum |envelope|, refined by parabolic interpolation."""
        mag = np.abs(self.samples) ** 2
        i = int(np.argmax(mag))
        if 0 < i < mag.size - 1:
            denom = mag[i - 1] - 2 * mag[i] + mag[i + 1]
            if denom < 0:
                i_frac = i + 0.5 * (mag[i - 1] - mag[i + 1]) / denom
                return self.t0_s + i_frac * self.dt_s
        return self.t0_s + i * self.dt_s

    def padded(self, duration_s: float) -> "Waveform":
        """Zero-pad at the tail up to at least duration_s."""
        n_total = int(np.ceil(duration_s * self.sample_rate_hz))
        if n_total <= self.n_samples:
            return Waveform(self.sample_rate_hz, self.t0_s, self.samples.copy())
        out = np.zeros(n_total, dtype=np.complex128)
        out[: self.n_samples] = self.samples
        return Waveform(self.sample_rate_hz, self.t0_s, out)

    def to_csv(self, path) -> None:
        """Write rows of (t, Re, Im)."""
        t = self.times()
        with open(path, "w") as fh:
            fh.write("t_s,re,im\n")
            for ti, s in zip(t, self.samples):
                fh.write(f"{float(ti)!r},{float(s.real)!r},{float(s.imag)!r}\n")


def gaussian_pulse(fwhm_s: float, center_s: float, sample_rate_hz: float,
                   span_s: float | None = None, peak: float = 1.0) -> Waveform:
    """Gaussian envelope whose magnitude has the given FWHM, centered at center_s."""
    if fwhm_s <= 0:
        raise ValueError("fwhm_s must be positive")
    if span_s is None:
        span_s = 8 * fwhm_s
    t0 = center_s - span_s / 2
    n = int(round(span_s * sample_rate_hz))
    t = t0 + np.arange(n) / sample_rate_hz
    sigma = fwhm_s / (2 * np.sqrt(2 * np.log(2)))
    env = peak * np.exp(-((t - center_s) ** 2) / (2 * sigma**2))
    return Waveform(sample_rate_hz, t0, env.astype(np.complex128))
