"""Smoke tests for the lgwalk python module and the CLI binary."""

import json
import math
import os
import subprocess

import pytest

lgwalk = pytest.importorskip("lgwalk")

PI = math.pi


def test_analytic_oracles():
    assert lgwalk.analytic_k_constant(PI / 2) == pytest.approx(1.5, abs=1e-12)
    assert lgwalk.analytic_k_constant(0.0) == pytest.approx(1.0, abs=1e-12)
    assert lgwalk.analytic_k_dichotomic(PI / 2) == pytest.approx(1.25, abs=1e-12)
    theta, k = lgwalk.max_analytic_k_dichotomic()
    assert abs(k - 1.31) < 0.005
    assert 1.7 < theta < 1.9


def test_exact_pipeline_matches_closed_form():
    result = lgwalk.exact_lg_test()
    assert result["k"] == pytest.approx(1.5, abs=1e-12)
    assert result["p_left"] == pytest.approx(0.5, abs=1e-12)
    for theta in (0.3, 1.1, 2.4):
        sim = lgwalk.exact_lg_test(theta=theta)["k"]
        assert sim == pytest.approx(lgwalk.analytic_k_constant(theta), abs=1e-9)


def test_walk_distribution_is_the_enumerated_one():
    dist = lgwalk.walk_distribution()
    assert dist[-2] == pytest.approx(10 / 16, abs=1e-12)
    assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)
    ballistic = lgwalk.walk_distribution(steps=4, theta=0.0)
    assert ballistic[-4] == pytest.approx(1.0, abs=1e-12)


def test_negative_measurement_blocks():
    nm = lgwalk.negative_measurement()
    assert nm["retention_probability"] == pytest.approx(0.5, abs=1e-12)
    assert nm["retained_support"] == [-4, -2, 0, 2]
    assert nm["displaced_support"] == [3, 5, 7, 9]
    assert nm["conditional"][-2] == pytest.approx(5 / 8, abs=1e-12)


def test_sampled_run_is_deterministic():
    config = {"shots_per_arm": 200, "dephasing": 0.06, "seed": 99}
    a = lgwalk.run_lg_test(config, bootstrap_resamples=1000, monte_carlo_draws=500)
    b = lgwalk.run_lg_test(config, bootstrap_resamples=1000, monte_carlo_draws=500)
    assert a["report"] == b["report"]
    assert a["report"]["k"] == a["report"]["k12"] + a["report"]["k23"] - a["report"]["k13"]


def test_clopper_pearson_interval():
    est = lgwalk.clopper_pearson(202, 404, 0.68)
    half_width = (est["upper"] - est["lower"]) / 2
    assert half_width == pytest.approx(0.026, abs=5e-4)


def test_classical_baseline():
    binom = lgwalk.classical_binomial(4, 0.5)
    assert binom[0] == pytest.approx(6 / 16, abs=1e-12)
    assert lgwalk.classical_k_uniform(4, "constant") == pytest.approx(1.0, abs=1e-12)
    assert lgwalk.classical_k_uniform(4, "dichotomic:-1") == pytest.approx(0.75, abs=1e-12)


def test_macroscopicity_values():
    mu = lgwalk.macroscopicity(104e-6)
    assert abs(mu - 6.8) < 0.1
    assert lgwalk.macroscopicity(104e-6, 20e-6) == pytest.approx(mu - 2, abs=1e-12)


def test_config_validation_raises():
    with pytest.raises(ValueError):
        lgwalk.run_lg_test({"theta": 9.0}, exact=True)
    with pytest.raises(ValueError):
        lgwalk.run_lg_test({"unknown_field": 1}, exact=True)


# ---- CLI smoke tests (path injected by ctest) ------------------------------

cli = os.environ.get("LGWALK_CLI")
needs_cli = pytest.mark.skipif(not cli or not os.path.exists(cli or ""),
                               reason="LGWALK_CLI not set")


def run_cli(*args, stdin_text=None):
    return subprocess.run([cli, *args], capture_output=True, text=True, input=stdin_text)


@needs_cli
def test_cli_oracle():
    proc = run_cli("oracle", "--format", "json")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["k_constant"] == pytest.approx(1.5, abs=1e-12)
    assert doc["k_dichotomic"] == pytest.approx(1.25, abs=1e-12)


@needs_cli
def test_cli_exact_lg_test():
    proc = run_cli("lg-test", "--exact")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["report"]["k"] == pytest.approx(1.5, abs=1e-12)
    assert doc["report"]["uncertainty"]["method"] == "exact"


@needs_cli
def test_cli_round_trip(tmp_path):
    out = tmp_path / "run"
    proc = run_cli("lg-test", "--seed", "7", "--shots", "150", "--out", str(out))
    assert proc.returncode == 0
    logs = [str(out / f"events_{arm}.jsonl") for arm in ("none", "left", "right")]
    re_proc = run_cli("analyze", *logs)
    assert re_proc.returncode == 0
    original = json.loads((out / "report.json").read_text())
    replayed = json.loads(re_proc.stdout)
    assert original == replayed


@needs_cli
def test_cli_classical_pipe():
    sampled = run_cli("classical", "--shots", "1500", "--seed", "3")
    assert sampled.returncode == 0
    analyzed = run_cli("analyze", "-", stdin_text=sampled.stdout)
    assert analyzed.returncode == 0
    k = json.loads(analyzed.stdout)["report"]["k"]
    assert abs(k - 1.0) < 0.15


@needs_cli
def test_cli_validation_exit_code():
    proc = run_cli("lg-test", "--theta", "9")
    assert proc.returncode == 2
    assert "theta" in proc.stderr


@needs_cli
def test_cli_walk_csv():
    proc = run_cli("walk")
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert lines[0].startswith("# config ")
    assert lines[1] == "step,x,probability"
    final = {
        int(row.split(",")[1]): float(row.split(",")[2])
        for row in lines[2:]
        if row.startswith("4,")
    }
    assert final[-2] == pytest.approx(10 / 16, abs=1e-12)


@needs_cli
def test_cli_theta_scan_columns():
    proc = run_cli("theta-scan", "--points", "9", "--dephasing", "0.10")
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert lines[1] == "theta,k_sim,k_eq3,k_eq4,k_dephased"
    for row in lines[2:]:
        theta, k_sim, k_eq3, k_eq4, k_deph = map(float, row.split(","))
        assert k_sim == pytest.approx(k_eq3, abs=1e-9)
        assert k_deph <= k_sim + 1e-12
        assert k_eq4 <= k_eq3 + 1e-12


@needs_cli
def test_cli_fit_dephasing(tmp_path):
    out = tmp_path / "logs"
    run_cli("lg-test", "--seed", "11", "--shots", "2000", "--dephasing", "0.06", "--out", str(out))
    proc = run_cli("fit-dephasing", str(out / "events_none.jsonl"))
    assert proc.returncode == 0
    fit = json.loads(proc.stdout)
    assert abs(fit["p_d"] - 0.06) < 0.02
    assert fit["reduced_chi_squared"] < 3.0


@needs_cli
def test_cli_macroscopicity():
    proc = run_cli("macroscopicity")
    assert proc.returncode == 0
    assert abs(json.loads(proc.stdout)["mu"] - 6.8) < 0.1
