import json
import math

import pytest

import exchlab


def test_fringe_phases():
    b = exchlab.fringe("boson")
    f = exchlab.fringe("fermion")
    assert abs(math.remainder(b["phase"], 2 * math.pi)) < 1e-8
    assert abs(math.remainder(f["phase"] - math.pi, 2 * math.pi)) < 1e-8
    assert b["visibility"] == pytest.approx(1.0, abs=1e-8)
    assert len(f["parity"]) == 32


def test_thermal_and_zeeman():
    assert 0.79 <= exchlab.thermal_visibility(0.9) <= 0.82
    assert exchlab.zeeman_p_err(10, 2.0) < 0.02


def test_rotor_statics():
    assert exchlab.critical_splitting(0.2, 2 * math.pi * 1e6) / (2 * math.pi) == pytest.approx(30e3, rel=1e-9)
    assert exchlab.calcium_two_r0() == pytest.approx(5.6e-6, rel=0.02)
    assert exchlab.aharonov_bohm_phase(4e-4, 2.5e-6) / (2 * math.pi) == pytest.approx(1.9, rel=0.03)
    s = exchlab.rotor_spectrum([-4e-4, 0.0, 4e-4], N=256)
    assert s["excitations"].shape == (3, 3)
    assert s["min_gap"] > 0


def test_errors_are_translated():
    with pytest.raises(exchlab.ExchlabError):
        exchlab.fringe("anyon")


def test_run_writes_manifest(tmp_path):
    manifest = exchlab.run("thermal", {"params": {"p0": [0.9]}}, out=tmp_path)
    assert manifest["command"] == "thermal"
    on_disk = json.loads((tmp_path / "manifest.json").read_text())
    assert on_disk["config"] == manifest["config"]
    assert (tmp_path / "thermal.csv").exists()
    with pytest.raises(exchlab.ExchlabError):
        exchlab.run("thermal", {"params": {"bogus": 1}}, out=tmp_path)


def test_default_config_roundtrip():
    for c in exchlab.commands():
        assert exchlab.default_config(c)["command"] == c
