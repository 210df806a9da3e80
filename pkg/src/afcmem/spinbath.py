"""Monte Carlo spin-wave storage under dynamical decoupling.

Each atom carries a static detuning drawn from the inhomogeneous spin line
plus an Ornstein-Uhlenbeck frequency fluctuation (exact discretization).
Stored coherence accumulates phase between pi pulses with a sign that
toggles at each pulse center; imperfect pulses are applied as full 2x2
unitaries with finite-Rabi detuning tilt.  Read-out noise comes from the
residual storage-state population excited out of the ground state by the
imperfect RF train.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pulses import DDSequence

FWHM_TO_SIGMA = 1.0 / (2.0 * np.sqrt(2.0 * np.log(2.0)))


@dataclass
class SpinBathParams:
    """Static inhomogeneous line plus OU spectral-diffusion parameters."""

    inhom_fwhm_hz: float = 60e3
    ou_sigma_hz: float = 0.0
    ou_tau_c_s: float = 1.0
    n_atoms: int = 10_000
    seed: int = 0

    def validate(self) -> None:
        if self.inhom_fwhm_hz < 0 or self.ou_sigma_hz < 0:
            raise ValueError("widths must be nonnegative")
        if self.ou_tau_c_s <= 0:
            raise ValueError("ou_tau_c_s must be positive")
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be positive")


@dataclass
class PulseErrorModel:
    """Imperfections of the RF pi pulses.

    rf_rabi_hz sets the rotation-axis tilt and angle for a detuned spin
    (finite-Rabi rotation fidelity); excitation_to_photon_gain converts
    residual storage-state population into mean detected noise photons per
    temporal mode.
    """

    area_error: float = 0.0
    phase_error_rad: float = 0.0
    rf_rabi_hz: float = 120e3
    excitation_to_photon_gain: float = 0.0

    def validate(self) -> None:
        if abs(self.area_error) >= 0.5:
            raise ValueError("area_error must satisfy |e| < 0.5")
        if self.rf_rabi_hz <= 0:
            raise ValueError("rf_rabi_hz must be positive")
        if self.excitation_to_photon_gain < 0:
            raise ValueError("excitation_to_photon_gain must be nonnegative")


@dataclass
class SpinStorageResult:
    coherence: float
    eta_spin: float
    p_noise_per_mode: float
    coherence_stderr: float = 0.0
    per_atom_phases: np.ndarray | None = None


def sample_ensemble(params: SpinBathParams,
                    rng: np.random.Generator | None = None) -> np.ndarray:
    """Static detunings: n_atoms Gaussian draws with the line FWHM."""
    params.validate()
    if rng is None:
        rng = np.random.default_rng(params.seed)
    sigma = params.inhom_fwhm_hz * FWHM_TO_SIGMA
    return sigma * rng.standard_normal(params.n_atoms)


def ou_trajectory(sigma_hz: float, tau_c_s: float, dt_s: float, n_steps: int,
                  seed=None) -> np.ndarray:
    """Exactly discretized OU path, stationary start.

    d_{k+1} = d_k e^(-dt/tau) + sigma sqrt(1 - e^(-2dt/tau)) g_k.
    """
    if dt_s <= 0:
        raise ValueError("dt_s must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    path = np.empty(n_steps + 1)
    path[0] = sigma_hz * rng.standard_normal()
    rho = np.exp(-dt_s / tau_c_s)
    q = sigma_hz * np.sqrt(1 - rho * rho)
    g = rng.standard_normal(n_steps)
    for k in range(n_steps):
        path[k + 1] = path[k] * rho + q * g[k]
    return path


def _toggled_phases(rng, static, bath, boundaries, steps_per_interval):
    """2*pi integral of s(t) * (static + OU(t)) dt with s toggling sign at
    each interior boundary; trapezoidal OU quadrature on exact OU nodes."""
    n = static.size
    phase = np.zeros(n)
    sign = 1.0
    use_ou = bath.ou_sigma_hz > 0
    ou = bath.ou_sigma_hz * rng.standard_normal(n) if use_ou else None
    for i in range(len(boundaries) - 1):
        a, b = boundaries[i], boundaries[i + 1]
        span = b - a
        if use_ou:
            dt = span / steps_per_interval
            rho = np.exp(-dt / bath.ou_tau_c_s)
            q = bath.ou_sigma_hz * np.sqrt(1 - rho * rho)
            for _ in range(steps_per_interval):
                nxt = ou * rho + q * rng.standard_normal(n)
                phase += sign * np.pi * dt * (ou + nxt)
                ou = nxt
        phase += sign * 2 * np.pi * static * span
        sign = -sign
    return phase


def _pulse_unitary(phase_rad, delta_hz, errors: PulseErrorModel):
    """2x2 rotation of a nominal pi pulse at the given drive phase acting on
    a spin detuned by delta_hz, with area and phase errors applied."""
    omega = errors.rf_rabi_hz * (1 + errors.area_error)
    gen = np.hypot(omega, delta_hz)
    t_p = 1.0 / (2.0 * errors.rf_rabi_hz)  # nominal pi duration
    theta = 2 * np.pi * gen * t_p
    ph = phase_rad + errors.phase_error_rad
    nx = omega * np.cos(ph) / gen
    ny = omega * np.sin(ph) / gen
    nz = delta_hz / gen
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    return (c - 1j * s * nz, -1j * s * (nx - 1j * ny),
            -1j * s * (nx + 1j * ny), c + 1j * s * nz)


def _coherence_stats(phasors: np.ndarray, n_blocks: int = 10):
    coherence = float(np.abs(phasors.mean()))
    if phasors.size >= 2 * n_blocks:
        blocks = np.array_split(phasors, n_blocks)
        vals = np.array([np.abs(b.mean()) for b in blocks])
        stderr = float(vals.std(ddof=1) / np.sqrt(n_blocks))
    else:
        stderr = 0.0
    return coherence, stderr


def spin_echo_coherence(dd: DDSequence, bath: SpinBathParams,
                        errors: PulseErrorModel | None = None,
                        steps_per_interval: int = 50,
                        seed=None, keep_phases: bool = False) -> SpinStorageResult:
    """Ensemble-averaged stored coherence surviving the DD sequence.

    With errors=None the pulses are ideal instantaneous pi flips and the
    evolution reduces to sign-toggled phase accumulation; with an error
    model each pulse is a full finite-Rabi unitary.
    """
    bath.validate()
    if bath.ou_sigma_hz > 0 and steps_per_interval < 50:
        raise ValueError("need at least 50 OU steps between pulses")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(
        bath.seed if seed is None else seed)
    static = sample_ensemble(bath, rng)
    boundaries = np.concatenate([[0.0], dd.centers_s, [dd.total_time_s]])

    if errors is None:
        phase = _toggled_phases(rng, static, bath, boundaries, steps_per_interval)
        phasors = np.exp(1j * phase)
    else:
        errors.validate()
        up = np.full(bath.n_atoms, 1 / np.sqrt(2), dtype=np.complex128)
        dn = up.copy()
        use_ou = bath.ou_sigma_hz > 0
        ou = bath.ou_sigma_hz * rng.standard_normal(bath.n_atoms) if use_ou else 0.0
        for i in range(len(boundaries) - 1):
            a, b = boundaries[i], boundaries[i + 1]
            span = b - a
            phi = np.zeros(bath.n_atoms)
            if use_ou:
                dt = span / steps_per_interval
                rho = np.exp(-dt / bath.ou_tau_c_s)
                q = bath.ou_sigma_hz * np.sqrt(1 - rho * rho)
                for _ in range(steps_per_interval):
                    nxt = ou * rho + q * rng.standard_normal(bath.n_atoms)
                    phi += np.pi * dt * (ou + nxt)
                    ou = nxt
            phi += 2 * np.pi * static * span
            rot = np.exp(-0.5j * phi)
            up *= rot
            dn *= np.conj(rot)
            if i < dd.n_pulses:
                delta = static + (ou if use_ou else 0.0)
                uuu, uud, udu, udd = _pulse_unitary(dd.phases_rad[i], delta, errors)
                up, dn = uuu * up + uud * dn, udu * up + udd * dn
        phasors = 2 * up * np.conj(dn)

    coherence, stderr = _coherence_stats(phasors)
    p_noise = 0.0
    if errors is not None and errors.excitation_to_photon_gain > 0:
        p_noise = readout_noise(dd, errors, bath, seed=rng)
    return SpinStorageResult(
        coherence=coherence, eta_spin=coherence**2, p_noise_per_mode=p_noise,
        coherence_stderr=stderr,
        per_atom_phases=np.angle(phasors) if keep_phases else None)


def residual_excitation(dd: DDSequence, errors: PulseErrorModel,
                        line: SpinBathParams, seed=None) -> float:
    """Mean storage-state population left by the imperfect RF train acting
    on spins initialized in the ground state."""
    errors.validate()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(
        line.seed if seed is None else seed)
    static = sample_ensemble(line, rng)
    up = np.zeros(line.n_atoms, dtype=np.complex128)
    dn = np.ones(line.n_atoms, dtype=np.complex128)
    boundaries = np.concatenate([[0.0], dd.centers_s, [dd.total_time_s]])
    for i in range(len(boundaries) - 1):
        span = boundaries[i + 1] - boundaries[i]
        rot = np.exp(-1j * np.pi * static * span)
        up *= rot
        dn *= np.conj(rot)
        if i < dd.n_pulses:
            uuu, uud, udu, udd = _pulse_unitary(dd.phases_rad[i], static, errors)
            up, dn = uuu * up + uud * dn, udu * up + udd * dn
    return float(np.mean(np.abs(up) ** 2))


def readout_noise(dd: DDSequence, errors: PulseErrorModel,
                  line: SpinBathParams, seed=None) -> float:
    """Mean noise photons per temporal mode: residual excited population
    times the excitation-to-photon conversion gain."""
    return errors.excitation_to_photon_gain * residual_excitation(
        dd, errors, line, seed=seed)


def free_induction(bath: SpinBathParams, t_list, steps: int = 64,
                   seed=None) -> np.ndarray:
    """Free-dephasing coherence |<exp(i phi)>| at each time (no pulses)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(
        bath.seed if seed is None else seed)
    static = sample_ensemble(bath, rng)
    out = np.empty(len(t_list))
    for i, t in enumerate(t_list):
        phase = _toggled_phases(rng, static, bath, np.array([0.0, t]), steps)
        out[i] = np.abs(np.exp(1j * phase).mean())
    return out


def efficiency_decay(dd_kind: str, t_list, bath: SpinBathParams,
                     errors: PulseErrorModel | None = None,
                     pulse_duration_s: float | None = None,
                     rabi_hz: float = 120e3,
                     steps_per_interval: int = 50, seed=None):
    """Spin storage efficiency versus storage time, one independent
    sub-seeded bath per point.  Returns a list of (t_s, eta, stderr)."""
    from .pulses import dd_sequence

    t_arr = np.asarray(t_list, dtype=float)
    if np.any(np.diff(t_arr) <= 0):
        raise ValueError("t_list must be sorted ascending")
    if pulse_duration_s is None:
        pulse_duration_s = 1.0 / (2.0 * rabi_hz)
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
    else:
        ss = np.random.SeedSequence(bath.seed if seed is None else seed)
    rows = []
    for child, t_s in zip(ss.spawn(len(t_arr)), t_arr):
        dd = dd_sequence(dd_kind, t_s, pulse_duration_s, rabi_hz)
        res = spin_echo_coherence(dd, bath, errors,
                                  steps_per_interval=steps_per_interval,
                                  seed=np.random.default_rng(child))
        eta_err = 2 * res.coherence * res.coherence_stderr
        rows.append((float(t_s), res.eta_spin, eta_err))
    return rows


def decay_table_to_csv(path, rows) -> None:
    with open(path, "w") as fh:
        fh.write("t_s_seconds,eta,stderr\n")
        for t_s, eta, err in rows:
            fh.write(f"{float(t_s)!r},{float(eta)!r},{float(err)!r}\n")


# Slow-bath CPMG relations used for calibration: the phase variance of an
# OU bath under an n-pulse CPMG train with tau << tau_c is
# chi(T) = (2 pi sigma)^2 T^3 / (12 n^2 tau_c), and eta = exp(-2 chi).

def cpmg_ou_chi(t_s, n_pulses: int, sigma_hz: float, tau_c_s: float):
    return (2 * np.pi * sigma_hz) ** 2 * np.asarray(t_s, float) ** 3 / (
        12 * n_pulses**2 * tau_c_s)


def ou_sigma_for_t2(n_pulses: int, t2_s: float, tau_c_s: float) -> float:
    """OU amplitude that puts the coherence 1/e point (chi = 1) at t2_s."""
    sigma_rad = np.sqrt(12.0 * n_pulses**2 * tau_c_s / t2_s**3)
    return float(sigma_rad / (2 * np.pi))
