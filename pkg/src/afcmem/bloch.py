"""Two-level rotating-frame dynamics under sampled drive envelopes.

States are propagated as spinors with a fixed-step classical 4th-order
(RK4) integrator whose step is two waveform samples, so envelope values
at half steps come straight from the sampling grid.  No renormalization
is applied; norm drift is a direct accuracy diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .waveform import Waveform


def _bloch_to_spinor(r) -> tuple[complex, complex]:
    x, y, z = (float(v) for v in r)
    norm = np.sqrt(x * x + y * y + z * z)
    if norm > 1 + 1e-9:
        raise ValueError("initial Bloch vector must have |r| <= 1 (pure state)")
    ce = np.sqrt(max((1 + z) / 2, 0.0))
    cg = np.sqrt(max((1 - z) / 2, 0.0))
    phi = np.arctan2(y, x)
    return ce + 0j, cg * np.exp(-1j * phi)


def _propagate_spinors(waveform: Waveform, detunings: np.ndarray,
                       initial_bloch=(0.0, 0.0, -1.0)) -> tuple[np.ndarray, np.ndarray]:
    """Propagate one spinor per detuning; returns (c_e, c_g) arrays."""
    s = waveform.samples
    if not np.all(np.isfinite(s)):
        raise ValueError("waveform contains non-finite samples")
    if s.size % 2 == 0:
        s = np.concatenate([s, [0.0 + 0.0j]])
    n_steps = (s.size - 1) // 2
    h = 2 * waveform.dt_s

    d = np.asarray(detunings, dtype=float).ravel()
    ce0, cg0 = _bloch_to_spinor(initial_bloch)
    ce = np.full(d.shape, ce0, dtype=np.complex128)
    cg = np.full(d.shape, cg0, dtype=np.complex128)
    w = -1j * np.pi  # dpsi/dt = -i pi [[d, s*],[s, -d]] psi
    wd = w * d

    for k in range(n_steps):
        s0 = s[2 * k]
        sh = s[2 * k + 1]
        s1 = s[2 * k + 2]
        c0, ch, c1 = np.conj(s0), np.conj(sh), np.conj(s1)

        k1e = wd * ce + w * c0 * cg
        k1g = w * s0 * ce - wd * cg
        e2 = ce + 0.5 * h * k1e
        g2 = cg + 0.5 * h * k1g
        k2e = wd * e2 + w * ch * g2
        k2g = w * sh * e2 - wd * g2
        e3 = ce + 0.5 * h * k2e
        g3 = cg + 0.5 * h * k2g
        k3e = wd * e3 + w * ch * g3
        k3g = w * sh * e3 - wd * g3
        e4 = ce + h * k3e
        g4 = cg + h * k3g
        k4e = wd * e4 + w * c1 * g4
        k4g = w * s1 * e4 - wd * g4

        ce = ce + (h / 6) * (k1e + 2 * k2e + 2 * k3e + k4e)
        cg = cg + (h / 6) * (k1g + 2 * k2g + 2 * k3g + k4g)
    return ce, cg


def bloch_propagate(waveform: Waveform, detuning_hz,
                    initial_bloch=(0.0, 0.0, -1.0)) -> np.ndarray:
    """Final Bloch vector(s) after the pulse at the given detuning(s).

    Scalar detuning returns shape (3,); an array returns shape (n, 3).
    """
    d = np.atleast_1d(np.asarray(detuning_hz, dtype=float))
    ce, cg = _propagate_spinors(waveform, d, initial_bloch)
    coh = 2 * ce * np.conj(cg)
    out = np.stack([coh.real, coh.imag,
                    np.abs(ce) ** 2 - np.abs(cg) ** 2], axis=-1)
    return out[0] if np.isscalar(detuning_hz) or np.ndim(detuning_hz) == 0 else out


@dataclass
class TransferProfile:
    detuning_hz: np.ndarray
    inversion: np.ndarray
    bandwidth_3db_hz: float


def transfer_profile(waveform: Waveform, detuning_grid,
                     expected_bandwidth_hz: float | None = None) -> TransferProfile:
    """Ground-state inversion probability versus detuning, and the -3 dB
    (half-maximum) width of the profile."""
    d = np.asarray(detuning_grid, dtype=float)
    if expected_bandwidth_hz is not None:
        span = d.max() - d.min()
        if span < 2 * expected_bandwidth_hz:
            raise ValueError("detuning grid must span at least twice the bandwidth")
    vec = bloch_propagate(waveform, d)
    inversion = (vec[:, 2] + 1) / 2
    return TransferProfile(detuning_hz=d, inversion=inversion,
                           bandwidth_3db_hz=_half_max_width(d, inversion))


def _half_max_width(x: np.ndarray, y: np.ndarray) -> float:
    """Width between the outermost half-maximum crossings (linear interp)."""
    top = float(y.max())
    if top <= 0:
        return 0.0
    half = top / 2
    above = y >= half
    if not above.any():
        return 0.0
    i_lo = int(np.argmax(above))
    i_hi = int(len(y) - 1 - np.argmax(above[::-1]))
    lo = x[i_lo]
    if i_lo > 0:
        f = (half - y[i_lo - 1]) / (y[i_lo] - y[i_lo - 1])
        lo = x[i_lo - 1] + f * (x[i_lo] - x[i_lo - 1])
    hi = x[i_hi]
    if i_hi < len(y) - 1:
        f = (half - y[i_hi + 1]) / (y[i_hi] - y[i_hi + 1])
        hi = x[i_hi + 1] - f * (x[i_hi + 1] - x[i_hi])
    return float(hi - lo)
