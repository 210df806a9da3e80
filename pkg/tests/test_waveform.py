import numpy as np
import pytest

from afcmem.waveform import Waveform, gaussian_pulse


def test_gaussian_pulse_shape():
    wf = gaussian_pulse(700e-9, 0.0, 512e6)
    mags = np.abs(wf.samples)
    assert mags.max() == pytest.approx(1.0, abs=1e-3)
    t = wf.times()
    above = t[mags >= 0.5]
    assert above[-1] - above[0] == pytest.approx(700e-9, rel=0.02)


def test_peak_time_subsample():
    wf = gaussian_pulse(700e-9, 1.234e-6, 16e6)
    assert wf.peak_time() == pytest.approx(1.234e-6, abs=5e-9)


def test_energy_and_padding():
    wf = gaussian_pulse(1e-6, 0.0, 8e6)
    e = wf.energy()
    padded = wf.padded(wf.duration_s * 3)
    assert padded.energy() == pytest.approx(e, rel=1e-12)
    assert padded.n_samples >= 3 * wf.n_samples - 2


def test_csv_export(tmp_path):
    wf = Waveform(1e6, 0.0, np.array([1 + 2j, 3 - 4j]))
    path = tmp_path / "wf.csv"
    wf.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t_s,re,im"
    assert len(lines) == 3
    t0, re0, im0 = (float(x) for x in lines[1].split(","))
    assert (t0, re0, im0) == (0.0, 1.0, 2.0)


def test_bad_sample_rate():
    with pytest.raises(ValueError):
        Waveform(0.0, 0.0, np.zeros(4))
