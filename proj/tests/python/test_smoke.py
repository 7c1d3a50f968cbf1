"""Smoke tests for the Python bindings: statistics round-trip and a
small simulate -> estimate -> compare pipeline through the module."""

import json
import math

import pytest

import proxnet

GRID = {
    "start_date": "2020-01-06",
    "end_date": "2020-01-10",
    "days_of_week": [1, 2, 3, 4, 5],
    "daily_start_hour": 9,
    "daily_end_hour": 17,
    "timezone": "UTC",
    "bin_seconds": 300,
}


def test_sha_and_hash_id():
    assert proxnet.sha256_hex("abc").startswith("ba7816bf")
    a = proxnet.hash_id("AA:BB:CC:DD:EE:FF", "salt")
    b = proxnet.hash_id("aabbccddeeff", "salt")
    assert a == b and len(a) == 64
    assert proxnet.hash_id("aabbccddeeff", "other") != a


def test_connection_strength():
    assert proxnet.connection_strength(0, 0, 0, 0) == 0.0
    assert proxnet.connection_strength(3, 1, 10, 10) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        proxnet.connection_strength(5, 0, 3, 0)


def test_table_stats_reference_values():
    s = proxnet.table_stats(191, 6448, 264, 227270)
    assert s["phi"] == pytest.approx(0.10, abs=0.005)
    assert s["chi2"] == pytest.approx(2.5e3, rel=0.02)
    assert s["odds_A"] == pytest.approx(0.0292, abs=1e-4)
    assert s["p_value"] < 1e-4


def test_mantel_identity_and_exhaustive():
    ut = [0.1, 0.5, 0.3, 0.9, 0.2, 0.7]  # n = 4
    m = proxnet.mantel(ut, ut, 4, 1000, seed=3)
    assert m["rho"] == 1.0
    ex = proxnet.mantel_exhaustive(ut, ut, 4)
    assert ex["n_permutations"] == 24
    lo, hi = proxnet.mantel_bootstrap_ci(ut, ut, 200, 0.95, seed=4)
    assert lo == hi == 1.0


def test_backbone_density_matching():
    n = 5
    roster = [f"p{i}" for i in range(n)]
    w = [[0.0] * n for _ in range(n)]
    vals = iter([0.9, 0.1, 0.4, 0.2, 0.8, 0.05, 0.6, 0.3, 0.15, 0.5])
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = next(vals)
    flat = [x for row in w for x in row]
    target_edges = 4
    bb = proxnet.backbone_edges(roster, flat, target_edges / 10.0)
    assert len(bb["edges"]) == target_edges
    alphas = proxnet.edge_alphas(roster, flat)
    assert len(alphas) == 10
    assert proxnet.weighted_density(roster, flat) == pytest.approx(sum(
        w[i][j] for i in range(n) for j in range(i + 1, n)) / 10.0)


def test_pipeline_roundtrip(tmp_path):
    grid_path = tmp_path / "grid.json"
    grid_path.write_text(json.dumps(GRID))
    config = {"n_platform_A": 3, "n_platform_B": 3, "grid": GRID, "seed": 21}
    config_path = tmp_path / "sim.json"
    config_path.write_text(json.dumps(config))

    info = proxnet.simulate(str(config_path), str(tmp_path / "sim"))
    assert info["n_bins"] == 5 * 96
    assert len(info["roster"]) == 6

    roster, weights = proxnet.estimate_matrix(
        str(tmp_path / "sim" / "app_log.csv"),
        str(tmp_path / "sim" / "roster.csv"),
        grid_path=str(grid_path),
    )
    truth_roster, truth_weights = proxnet.read_matrix(str(tmp_path / "sim" / "truth.csv"))
    assert roster == truth_roster

    ut_est = proxnet.upper_triangle(roster, weights)
    ut_truth = proxnet.upper_triangle(truth_roster, truth_weights)
    m = proxnet.mantel(ut_est, ut_truth, len(roster), 500, seed=9)
    assert m["rho"] == pytest.approx(1.0)
    assert m["p_value"] < 0.05
    # noiseless estimates match the truth up to its 6-decimal CSV rounding
    for a, b in zip(weights, truth_weights):
        assert math.isclose(a, b, abs_tol=1e-6)


def test_invalid_matrix_rejected():
    with pytest.raises(ValueError):
        proxnet.upper_triangle(["a", "b"], [0.0, 0.5, 0.4, 0.0])  # asymmetric
