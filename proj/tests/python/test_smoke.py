"""Smoke tests for the python bindings."""

import math

import pytest

import mdiqkd


def test_version():
    assert mdiqkd.__version__


def test_bessel_and_entropy():
    assert mdiqkd.bessel_i0(0.0) == 1.0
    assert mdiqkd.bessel_i0(1.0) == pytest.approx(1.2660658777520084, rel=1e-13)
    assert mdiqkd.binary_entropy(0.5) == 1.0
    assert mdiqkd.binary_entropy(0.11) == pytest.approx(0.499915958164528, rel=1e-12)


def test_c_quantity_fixture():
    assert mdiqkd.c_quantity(0.052, 0.035, 0.534, 0.527) == pytest.approx(1.667716)
    assert mdiqkd.c_quantity(0.0, 0.0, 0.5, 0.5) == pytest.approx(2.0)


def test_eve_information_conventions():
    assert mdiqkd.eve_information_rfi(0.0, 2.0) == 0.0
    assert mdiqkd.eve_information_rfi(0.004, 1.668) == pytest.approx(0.2523, abs=2e-4)
    assert mdiqkd.eve_information_rfi(0.02, 0.56, u_form="linear") == pytest.approx(
        0.92148, abs=1e-4
    )
    assert mdiqkd.eve_information_mdi(0.052) == pytest.approx(0.294833, abs=1e-5)


def test_chernoff_contains_observation():
    lo, hi = mdiqkd.chernoff_interval(1000.0, 1e6, 1e-10)
    assert lo <= 1e-3 <= hi


def test_link_and_observables():
    config = {"dist_a_km": "80", "dist_b_km": "80"}
    eta = mdiqkd.link_efficiency(config)
    assert eta == pytest.approx(3.442785879e-3, rel=1e-8)
    rec = mdiqkd.pair_observables(config, 0.67, 0.67, "ZZ")
    assert 0.0 < rec["eq"] < rec["q"] < 1.0


def test_asymptotic_key_rate():
    report = mdiqkd.key_rate(
        {"mu": "0.67", "nu": "0.01", "dist_a_km": "80", "dist_b_km": "80"}
    )
    assert report["rate"] > 0.0
    assert report["c_value"] == pytest.approx(1.905, abs=5e-3)
    assert "estimates" in report and report["estimates"]["ZZ"]["s11_lower"] > 0.0


def test_finite_key_rate_positive():
    report = mdiqkd.key_rate(
        {
            "variant": "rfi_biased",
            "mode": "finite",
            "mu_z": "0.25",
            "mu_x": "0.28",
            "nu_x": "0.06",
            "p_z": "0.2",
            "p_x": "0.29",
            "p_x_signal": "0.12",
            "dist_a_km": "50",
            "dist_b_km": "50",
            "beta_deg": "25",
        }
    )
    assert report["rate"] > 0.0
    assert report["rate"] <= 1.0
    assert report["failure_probability_total"] > 0.0


def test_scan_emits_csv():
    csv = mdiqkd.run_scan(
        "beta",
        0.0,
        45.0,
        45.0,
        ["rfi_symmetric", "original_symmetric"],
        False,
        {"mu": "0.67", "nu": "0.01", "dist_a_km": "80", "dist_b_km": "80"},
    )
    lines = [l for l in csv.splitlines() if l and not l.startswith("#")]
    assert lines[0].startswith("axis,variant,status")
    assert len(lines) == 1 + 2 * 2  # header + 2 grid points x 2 variants


def test_counts_round_trip(tmp_path):
    config = {
        "variant": "rfi_biased",
        "mode": "finite",
        "mu_z": "0.3",
        "mu_x": "0.3",
        "nu_x": "0.06",
        "p_z": "0.3",
        "p_x": "0.25",
        "p_x_signal": "0.2",
        "dist_a_km": "40",
        "dist_b_km": "40",
        "n_pairs": "1e12",
    }
    counts_file = tmp_path / "counts.txt"
    counts_file.write_text(mdiqkd.synthesize_counts(config))
    report = mdiqkd.key_rate_from_counts(str(counts_file), config)
    direct = mdiqkd.key_rate(config)
    assert report["rate"] == pytest.approx(direct["rate"], rel=1e-3)


def test_rejects_unknown_config_keys():
    with pytest.raises(Exception):
        mdiqkd.key_rate({"bogus": "1"})
