"""Atomic frequency comb construction and linear echo formation.

The comb is built as a dense sum of narrow Lorentzian lines following a
target tooth profile, so absorption and dispersion come as a causal pair
and echoes appear only at positive delays.  Propagation through the
prepared ensemble is a linear filter acting on the input spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .waveform import Waveform

TOOTH_SHAPES = ("square", "gaussian", "lorentzian_sum")

DEFAULT_GRID_POINTS = 2**20
DEFAULT_GRID_SPAN_HZ = 8e6

# Fraction of the band tapered by the raised-cosine window at each edge.
EDGE_TAPER_FRACTION = 0.1


@dataclass
class CombParams:
    """Parameters of the prepared comb.

    finesse is tooth spacing over tooth FWHM; peak_od is the single-pass
    optical depth at a tooth center; passes counts traversals of the
    crystal (2 for the double-pass input configuration).
    """

    comb_period_hz: float
    finesse: float
    peak_od: float
    background_od: float = 0.0
    bandwidth_hz: float = 3e6
    tooth_shape: str = "square"
    passes: int = 1
    zeeman_split_hz: float = 41.4e3

    def validate(self) -> None:
        if self.comb_period_hz <= 0:
            raise ValueError("comb_period_hz must be positive")
        if self.finesse <= 1:
            raise ValueError("finesse must exceed 1")
        if self.peak_od < 0 or self.background_od < 0:
            raise ValueError("optical depths must be nonnegative")
        if self.bandwidth_hz < 10 * self.comb_period_hz:
            raise ValueError("bandwidth_hz must cover at least 10 comb periods")
        if self.tooth_shape not in TOOTH_SHAPES:
            raise ValueError(f"tooth_shape must be one of {TOOTH_SHAPES}")
        if self.passes < 1 or int(self.passes) != self.passes:
            raise ValueError("passes must be a positive integer")

    @property
    def tooth_fwhm_hz(self) -> float:
        return self.comb_period_hz / self.finesse


@dataclass
class CombSpectrum:
    """Absorption profile and complex field transfer of the prepared comb."""

    freq_grid_hz: np.ndarray
    alpha: np.ndarray
    complex_response: np.ndarray
    params: CombParams = field(repr=False, default=None)

    @property
    def band_edge_hz(self) -> float:
        return self.params.bandwidth_hz / 2 if self.params else float(self.freq_grid_hz[-1])


@dataclass
class EchoResult:
    output_waveform: Waveform
    echo_time_s: float
    echo_efficiency: float


def _raised_cosine_window(f: np.ndarray, bandwidth_hz: float) -> np.ndarray:
    """Unity inside the band, tapering to zero over the outer edge fraction."""
    half = bandwidth_hz / 2
    taper = EDGE_TAPER_FRACTION * bandwidth_hz
    a = np.abs(f)
    w = np.zeros_like(a)
    w[a <= half - taper] = 1.0
    ramp = (a > half - taper) & (a < half)
    w[ramp] = 0.5 * (1 + np.cos(np.pi * (a[ramp] - (half - taper)) / taper))
    return w


def _tooth_profile(f: np.ndarray, params: CombParams) -> np.ndarray:
    """Sum of identical teeth at multiples of the comb period, peak = peak_od."""
    delta = params.comb_period_hz
    fwhm = params.tooth_fwhm_hz
    half_band = params.bandwidth_hz / 2
    n_teeth = int(np.floor(half_band / delta))
    g = np.zeros_like(f)
    for m in range(-n_teeth, n_teeth + 1):
        df = f - m * delta
        if params.tooth_shape == "square":
            g += np.where(np.abs(df) <= fwhm / 2, params.peak_od, 0.0)
        elif params.tooth_shape == "gaussian":
            g += params.peak_od * np.exp(-4 * np.log(2) * (df / fwhm) ** 2)
        else:  # lorentzian_sum
            hw = fwhm / 2
            g += params.peak_od * hw**2 / (hw**2 + df**2)
    return g


def build_comb(params: CombParams, n_points: int = DEFAULT_GRID_POINTS,
               span_hz: float = DEFAULT_GRID_SPAN_HZ,
               homogeneous_width_hz: float | None = None) -> CombSpectrum:
    """Build the comb's complex transfer function on a uniform grid.

    The target absorption profile (teeth plus flat background, edge-windowed)
    is convolved with a normalized complex Lorentzian of HWHM
    homogeneous_width_hz, which plays the role of the underlying line
    response.  The field transfer is exp(-(passes/2) * D(f)) with D the
    resulting complex optical depth.
    """
    params.validate()
    if span_hz < 1.25 * params.bandwidth_hz:
        span_hz = 1.25 * params.bandwidth_hz
    df = span_hz / n_points
    if df > params.tooth_fwhm_hz / 8:
        raise ValueError(
            f"grid resolution {df:.1f} Hz too coarse for tooth FWHM "
            f"{params.tooth_fwhm_hz:.1f} Hz (need at least 8 points per tooth)")
    gamma = homogeneous_width_hz if homogeneous_width_hz is not None else 4 * df
    if gamma < 2 * df:
        raise ValueError("homogeneous_width_hz must be at least twice the grid step")

    f = (np.arange(n_points) - n_points // 2) * df
    window = _raised_cosine_window(f, params.bandwidth_hz)
    g = (_tooth_profile(f, params) + params.background_od) * window

    # Convolve with the unit-area complex line kernel (1/pi)/(gamma + i f).
    # The real part is a normalized Lorentzian; the imaginary part carries
    # the dispersion that makes the filter causal.
    kernel = (1.0 / np.pi) / (gamma + 1j * f)
    n_fft = 2 * n_points
    conv = np.fft.ifft(np.fft.fft(g, n_fft) * np.fft.fft(kernel, n_fft))
    # 'same' alignment: kernel center sits at index n_points // 2
    d_complex = conv[n_points // 2: n_points // 2 + n_points] * df

    alpha = np.maximum(d_complex.real, 0.0)
    response = np.exp(-(params.passes / 2.0) * d_complex)
    return CombSpectrum(freq_grid_hz=f, alpha=alpha,
                        complex_response=response, params=params)


def propagate(inp: Waveform, spectrum: CombSpectrum,
              max_leak_fraction: float = 0.01) -> EchoResult:
    """Send a waveform through the comb filter and locate the first echo.

    The echo is searched in the window (0.5/Delta, 1.5/Delta) after the
    input peak; echo_efficiency is the energy in that window relative to
    the input energy.
    """
    params = spectrum.params
    delta = params.comb_period_hz
    t_peak_in = inp.peak_time()

    # The comb response is an echo train with amplitudes falling off slowly
    # in echo order; the FFT window must cover its ringdown or late echoes
    # wrap around into the measurement window.
    ring_periods = max(1.8, 10.0 * params.finesse)
    work = inp.padded((t_peak_in - inp.t0_s) + ring_periods / delta)
    n_fft = 1 << int(np.ceil(np.log2(work.n_samples)))
    work = Waveform(work.sample_rate_hz, work.t0_s,
                    np.concatenate([work.samples,
                                    np.zeros(n_fft - work.n_samples, complex)]))
    n = work.n_samples
    spec_in = np.fft.fft(work.samples)
    f_sig = np.fft.fftfreq(n, d=work.dt_s)

    # Reject inputs whose spectrum leaks outside the comb band.
    power = np.abs(spec_in) ** 2
    outside = np.abs(f_sig) > spectrum.band_edge_hz
    leak = float(power[outside].sum() / power.sum())
    if leak > max_leak_fraction:
        raise ValueError(
            f"input spectrum leaks {leak:.1%} of its energy outside the comb band")

    h = np.interp(f_sig, spectrum.freq_grid_hz, spectrum.complex_response.real,
                  left=1.0, right=1.0) + 1j * np.interp(
        f_sig, spectrum.freq_grid_hz, spectrum.complex_response.imag,
        left=0.0, right=0.0)
    out = np.fft.ifft(spec_in * h)
    out_wf = Waveform(work.sample_rate_hz, work.t0_s, out)

    t_rel = out_wf.times() - t_peak_in
    mask = (t_rel > 0.5 / delta) & (t_rel < 1.5 / delta)
    energy_density = np.abs(out) ** 2
    in_energy = inp.energy()
    echo_energy = float(energy_density[mask].sum() * out_wf.dt_s)
    efficiency = echo_energy / in_energy

    idx = np.flatnonzero(mask)
    seg = energy_density[idx]
    k = int(np.argmax(seg))
    i = idx[k]
    echo_t = t_rel[i]
    if 0 < i < n - 1:
        denom = energy_density[i - 1] - 2 * energy_density[i] + energy_density[i + 1]
        if denom < 0:
            echo_t += out_wf.dt_s * 0.5 * (energy_density[i - 1] - energy_density[i + 1]) / denom
    return EchoResult(output_waveform=out_wf, echo_time_s=float(echo_t),
                      echo_efficiency=float(efficiency))


def afc_decay_model(one_over_delta_s, eta0: float, t2afc_s: float,
                    mod_depth: float = 0.0, zeeman_split_hz: float = 41.4e3):
    """Phenomenological echo efficiency versus rephasing delay 1/Delta.

    eta0 * exp(-4 t / T2) * [1 - mod_depth * sin^2(pi * f_z * t)], where the
    sin^2 term models the efficiency modulation tied to the excited-state
    Zeeman splitting f_z.
    """
    t = np.asarray(one_over_delta_s, dtype=float)
    if np.any(t < 0):
        raise ValueError("one_over_delta_s must be nonnegative")
    if eta0 < 0 or t2afc_s < 0:
        raise ValueError("eta0 and t2afc_s must be nonnegative")
    if not 0 <= mod_depth <= 1:
        raise ValueError("mod_depth must lie in [0, 1]")
    out = eta0 * np.exp(-4 * t / t2afc_s) * (
        1 - mod_depth * np.sin(np.pi * zeeman_split_hz * t) ** 2)
    return out if out.ndim else float(out)


# Closed-form first-echo efficiencies from the filter-theory Fourier
# coefficients.  For a one-sided (causal) periodic complex depth D(f) the
# first-echo amplitude is exactly (passes/2) * D1 * exp(-(passes/2) * D0)
# with D1 = 2 * a1, so eta = (passes * a1)^2 * exp(-passes * (a0 + d0)).

def square_tooth_efficiency(peak_od: float, finesse: float,
                            background_od: float = 0.0, passes: int = 1,
                            kernel_hwhm_hz: float = 0.0,
                            comb_period_hz: float = 1.0) -> float:
    """Exact first-echo efficiency for ideal square teeth."""
    a0 = peak_od / finesse
    a1 = a0 * np.sinc(1.0 / finesse)  # numpy sinc(x) = sin(pi x)/(pi x)
    if kernel_hwhm_hz > 0:
        a1 *= np.exp(-2 * np.pi * kernel_hwhm_hz / comb_period_hz)
    return float((passes * a1) ** 2 * np.exp(-passes * (a0 + background_od)))


def gaussian_tooth_efficiency(peak_od: float, finesse: float,
                              background_od: float = 0.0, passes: int = 1,
                              kernel_hwhm_hz: float = 0.0,
                              comb_period_hz: float = 1.0) -> float:
    """Exact first-echo efficiency for ideal Gaussian teeth (FWHM = spacing/finesse)."""
    c = np.sqrt(2 * np.pi) / (2 * np.sqrt(2 * np.log(2)))  # area / (peak * FWHM)
    a0 = c * peak_od / finesse
    a1 = a0 * np.exp(-np.pi**2 / (2 * np.log(2)) / (2 * finesse**2))
    if kernel_hwhm_hz > 0:
        a1 *= np.exp(-2 * np.pi * kernel_hwhm_hz / comb_period_hz)
    return float((passes * a1) ** 2 * np.exp(-passes * (a0 + background_od)))


def comb_efficiency_estimate(peak_od: float, finesse: float,
                             background_od: float = 0.0) -> float:
    """Widely used single-pass estimate (d/F)^2 e^(-d/F) e^(-7/F^2) e^(-d0).

    The e^(-7/F^2) dephasing factor corresponds to Gaussian-like teeth; it
    overestimates the dephasing of true square teeth at low finesse.
    """
    d_avg = peak_od / finesse
    return float(d_avg**2 * np.exp(-d_avg) * np.exp(-7.0 / finesse**2)
                 * np.exp(-background_od))
