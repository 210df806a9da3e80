import numpy as np
import pytest

from afcmem.pulses import (ChshSpec, HshSpec, chirp_rate, chsh_crossing_times,
                           chsh_waveform, dd_phases, dd_sequence,
                           half_transfer_rabi, hsh_amplitude, hsh_frequency,
                           hsh_phase, hsh_time_of_frequency, hsh_waveform,
                           reference_transfer_pulse)


def _spec(**kw):
    kw.setdefault("duration_s", 15e-6)
    kw.setdefault("bandwidth_hz", 1.5e6)
    return HshSpec(**kw)


def test_chirp_rate_construction():
    spec = _spec()
    c = spec.sech_cutoff
    denom = spec.duration_s * (1 - 2 * spec.edge_fraction
                               + 2 * spec.edge_fraction * np.tanh(c) / c)
    assert chirp_rate(spec) == pytest.approx(1.5e6 / denom)


def test_amplitude_profile():
    spec = _spec(peak_rabi_hz=1e6)
    t = np.linspace(0, spec.duration_s, 4001)
    amp = hsh_amplitude(spec, t)
    plateau = (t > spec.edge_s) & (t < spec.duration_s - spec.edge_s)
    assert np.all(amp[plateau] == 1e6)
    assert amp[0] == pytest.approx(1e6 / np.cosh(2.6), rel=1e-9)
    assert np.abs(amp).max() == 1e6


def test_frequency_monotone_and_span():
    spec = _spec()
    t = np.linspace(0, spec.duration_s, 20001)
    f = hsh_frequency(spec, t)
    assert f[0] == pytest.approx(-0.75e6, rel=1e-12)
    assert f[-1] == pytest.approx(0.75e6, rel=1e-12)
    assert np.all(np.diff(f) > 0)


def test_phase_is_frequency_integral():
    spec = _spec()
    t = np.linspace(0, spec.duration_s, 60001)
    dph = np.gradient(hsh_phase(spec, t), t) / (2 * np.pi)
    f = hsh_frequency(spec, t)
    assert np.max(np.abs(dph[2:-2] - f[2:-2])) < 1e-4 * spec.bandwidth_hz


def test_time_of_frequency_roundtrip():
    spec = _spec()
    f = np.linspace(-0.749e6, 0.749e6, 101)
    t = hsh_time_of_frequency(spec, f)
    assert np.max(np.abs(hsh_frequency(spec, t) - f)) < 1e-6 * spec.bandwidth_hz
    with pytest.raises(ValueError):
        hsh_time_of_frequency(spec, 0.8e6)


def test_zero_bandwidth_constant_frequency():
    spec = _spec(bandwidth_hz=0.0, peak_rabi_hz=1e5)
    t = np.linspace(0, spec.duration_s, 101)
    assert np.max(np.abs(hsh_frequency(spec, t))) == 0.0
    wf = hsh_waveform(spec, sample_rate_hz=64e6)
    assert np.abs(wf.samples).max() == pytest.approx(1e5)


def test_under_resolved_rate_rejected():
    with pytest.raises(ValueError, match="under-resolves"):
        hsh_waveform(_spec(), sample_rate_hz=1e6)


def test_chsh_crossing_separation_machine_precision():
    spec = ChshSpec(base=_spec(), separation_s=1.65e-6)
    f = np.linspace(-0.74e6, 0.74e6, 301)
    t1, t2 = chsh_crossing_times(spec, f)
    assert np.max(np.abs((t2 - t1) - 1.65e-6)) < 1e-15


def test_chsh_constructive_peak():
    # vanishing separation and zero phase: components add coherently
    base = _spec(peak_rabi_hz=2e5)
    spec = ChshSpec(base=base, separation_s=1e-9, relative_phase_rad=0.0,
                    amplitude_scale=0.5)
    wf = chsh_waveform(spec)
    assert np.abs(wf.samples).max() == pytest.approx(2e5, rel=1e-3)


def test_chsh_destructive_midpoint():
    # at the temporal midpoint both components sit on the plateau with the
    # same instantaneous frequency sum; a pi relative phase cancels there
    base = _spec(peak_rabi_hz=2e5)
    spec = ChshSpec(base=base, separation_s=1.65e-6,
                    relative_phase_rad=np.pi, amplitude_scale=0.5)
    wf = chsh_waveform(spec)
    mid = (base.duration_s + spec.separation_s) / 2
    idx = int(round(mid * wf.sample_rate_hz))
    assert np.abs(wf.samples[idx]) < 1e-3 * 2e5


def test_chsh_beating_envelope():
    base = _spec(peak_rabi_hz=2e5)
    wf = chsh_waveform(ChshSpec(base=base, separation_s=1.65e-6))
    mag = np.abs(wf.samples)
    inner = mag[int(0.3 * mag.size): int(0.7 * mag.size)]
    assert inner.max() > 1.8e5 and inner.min() < 0.2e5


def test_half_transfer_rabi_formula():
    k = 2e11
    omega = half_transfer_rabi(k)
    assert 1 - np.exp(-np.pi**2 * omega**2 / k) == pytest.approx(0.5, abs=1e-12)


def test_reference_pulse_spec():
    spec = reference_transfer_pulse()
    spec.validate()
    assert spec.duration_s == 15e-6
    assert spec.bandwidth_hz == 1.5e6
    assert spec.peak_rabi_hz == pytest.approx(1.1 * np.sqrt(chirp_rate(spec)))


def test_waveform_csv_export(tmp_path):
    wf = hsh_waveform(_spec(), sample_rate_hz=64e6)
    path = tmp_path / "hsh.csv"
    wf.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t_s,re,im"
    assert len(lines) == wf.n_samples + 1


# --- dynamical decoupling ---------------------------------------------------

def test_dd_xx_layout():
    dd = dd_sequence("XX", 20e-3, 4e-6)
    assert dd.n_pulses == 2
    assert np.allclose(dd.centers_s, [5e-3, 15e-3])
    assert np.all(dd.phases_rad == 0)


def test_dd_xy4_centers():
    dd = dd_sequence("XY4", 20e-3, 4e-6)
    assert np.allclose(dd.centers_s, [2.5e-3, 7.5e-3, 12.5e-3, 17.5e-3])
    assert np.allclose(dd.phases_rad, [0, np.pi / 2, 0, np.pi / 2])


def test_dd_xy8_is_xy4_plus_reverse():
    p = dd_phases("XY8")
    assert np.allclose(p[:4], dd_phases("XY4"))
    assert np.allclose(p[4:], dd_phases("XY4")[::-1])


def test_dd_xy16_phase_shift_rule():
    p = dd_phases("XY16")
    assert len(p) == 16
    assert np.allclose(p[8:], p[:8] + np.pi)


def test_dd_overlap_rejected():
    with pytest.raises(ValueError):
        dd_sequence("XY16", 100e-6, 4e-6)


def test_dd_kind_normalization():
    assert dd_sequence("xy-4", 20e-3, 4e-6).kind == "XY4"
    with pytest.raises(ValueError):
        dd_sequence("YY", 20e-3, 4e-6)


@pytest.mark.parametrize("kind", ["XX", "XY4", "XY8", "XY16"])
def test_ideal_pulse_train_composes_to_identity(kind):
    # product of ideal pi rotations about the listed in-plane axes returns
    # the z populations to themselves (even pulse count)
    u = np.eye(2, dtype=complex)
    for ph in dd_phases(kind):
        sig = np.array([[0, np.exp(-1j * ph)], [np.exp(1j * ph), 0]])
        u = (-1j * sig) @ u
    assert abs(u[0, 0]) == pytest.approx(1.0, abs=1e-12)
    assert abs(u[1, 0]) == pytest.approx(0.0, abs=1e-12)
