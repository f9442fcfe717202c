import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from osgt_dp import cli, special
from osgt_dp.rng import SEED_ENV


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sample_is_deterministic(capsys):
    a = run(capsys, "sample", "--m", "0", "--sigma2", "1", "--n", "3", "--seed", "7")
    b = run(capsys, "sample", "--m", "0", "--sigma2", "1", "--n", "3", "--seed", "7")
    assert a == b
    assert a[0] == 0 and len(a[1].splitlines()) == 3


def test_sample_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "osgt_dp.cli", "sample", "--m", "3", "--sigma2", "40", "--n", "50", "--seed", "1"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and len(a.splitlines()) == 50


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "7")
    from_env = run(capsys, "sample", "--m", "1", "--sigma2", "2", "--n", "4")
    explicit = run(capsys, "sample", "--m", "1", "--sigma2", "2", "--n", "4", "--seed", "7")
    assert from_env == explicit
    monkeypatch.delenv(SEED_ENV)
    default = run(capsys, "sample", "--m", "1", "--sigma2", "2", "--n", "4")
    zero = run(capsys, "sample", "--m", "1", "--sigma2", "2", "--n", "4", "--seed", "0")
    assert default == zero


def test_sample_variance_large_n(capsys):
    code, out, _ = run(capsys, "sample", "--m", "3", "--sigma2", "40", "--n", "1000000", "--seed", "1")
    x = np.loadtxt(io.StringIO(out))
    assert code == 0 and x.size == 1_000_000
    assert np.var(x) == pytest.approx(27.7047, rel=0.01)


def test_sample_rejects_bad_n(capsys):
    code, _, err = run(capsys, "sample", "--m", "1", "--sigma2", "1", "--n", "0")
    assert code == 1 and "n must be" in err


def test_delta_reference_point(capsys):
    code, out, _ = run(capsys, "delta", "--m", "3", "--sigma2", "40", "--Delta", "1", "--eps", "1")
    rows = table(out)
    assert code == 0
    assert "e-12" in rows[0]["delta"]
    assert float(rows[0]["delta"]) == pytest.approx(7.8e-12, rel=0.1)


def test_delta_oracle_at_boundary(capsys):
    code, out, _ = run(capsys, "delta", "--m", "3", "--sigma2", "40", "--Delta", "1", "--eps", "star", "--oracle")
    row = table(out)[0]
    assert code == 0
    assert float(row["eps"]) == pytest.approx(0.0875)
    assert float(row["rel_deviation"]) <= 1e-6


def test_delta_oracle_mismatch_exits_2(capsys, monkeypatch):
    monkeypatch.setattr(cli, "delta_quadrature", lambda p, d, e: 2e-12)
    code, _, err = run(capsys, "delta", "--m", "3", "--sigma2", "40", "--Delta", "1", "--eps", "1", "--oracle")
    assert code == 2 and "oracle deviation" in err


def test_delta_always_scientific(capsys):
    _, out, _ = run(capsys, "delta", "--m", "3", "--sigma2", "40", "--Delta", "1", "--eps", "0", "--gaussian")
    row = table(out)[0]
    assert "e-" in row["delta"] and "e-" in row["delta_gaussian"]


def test_precision_flag(capsys):
    _, out, _ = run(capsys, "delta", "--m", "3", "--sigma2", "40", "--Delta", "1", "--eps", "1", "--precision", "4")
    assert table(out)[0]["delta"] == "7.847e-12"


def test_json_mirrors_csv(capsys):
    args = ["convert", "--m", "15", "--sigma2", "630", "--Delta", "1", "--k", "8", "--eps", "0.9"]
    _, c, _ = run(capsys, *args)
    _, j, _ = run(capsys, *args, "--format", "json")
    doc = json.loads(j)
    assert doc["schema_version"] == 1
    row = table(c)[0]
    for k, v in doc["rows"][0].items():
        assert float(row[k]) == v


def test_zcdp_gaussian_limit(capsys):
    code, out, _ = run(capsys, "zcdp", "--m", "0.000001", "--sigma2", "40", "--Delta2", "1", "--k", "1",
                       "--alpha", "10")
    row = table(out)[0]
    assert code == 0
    assert float(row["rho"]) == 1 / 80
    assert abs(float(row["zeta"])) < 1e-6


def test_renyi_oracle_and_worst_case(capsys):
    code, out, _ = run(capsys, "renyi", "--m", "3", "--sigma2", "40", "--Delta", "1", "--alpha", "2", "50",
                       "--oracle")
    assert code == 0
    assert all(float(r["rel_deviation"]) <= 1e-8 for r in table(out))
    code, out, _ = run(capsys, "renyi", "--m", "3", "--sigma2", "40", "--Delta", "1", "--alpha", "5",
                       "--worst-case", "--grid-n", "11")
    assert code == 0 and table(out)[0]["at_endpoint"] == "True"


def test_renyi_oracle_needs_one_dimension(capsys):
    code, _, _ = run(capsys, "renyi", "--m", "3", "--sigma2", "40", "--Delta", "1", "--k", "2", "--alpha", "2",
                     "--oracle")
    assert code == 1


def test_calibrate_eps(capsys):
    code, out, _ = run(capsys, "calibrate", "--solve", "eps", "--m", "3", "--sigma2", "40", "--Delta", "1",
                       "--target-delta", "1e-10")
    assert code == 0 and float(table(out)[0]["eps"]) == pytest.approx(0.94, abs=0.02)
    code, out, _ = run(capsys, "calibrate", "--solve", "eps", "--m", "3", "--sigma2", "40", "--Delta", "1",
                       "--target-delta", "1e-10", "--gaussian")
    assert code == 0 and float(table(out)[0]["eps"]) == pytest.approx(1.12, abs=0.02)


def test_calibrate_sigma2(capsys):
    code, out, _ = run(capsys, "calibrate", "--solve", "sigma2", "--m", "3", "--Delta", "1", "--eps", "1",
                       "--target-delta", "7.847361017747e-12")
    assert code == 0 and float(table(out)[0]["sigma2"]) == pytest.approx(40.0, rel=1e-6)


def test_calibrate_missing_inputs(capsys):
    code, _, err = run(capsys, "calibrate", "--solve", "sigma2", "--m", "3", "--Delta", "1", "--target-delta", "1e-6")
    assert code == 1 and "--eps" in err


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "delta", "--m", "-1", "--sigma2", "40", "--Delta", "1", "--eps", "1")
    assert code == 1 and "m must be" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["delta", "--m", "1"])
    assert exc.value.code == 1


def test_unknown_figure(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["reproduce", "fig9"])
    assert exc.value.code == 1


def test_reproduce_fig3(capsys):
    code, out, _ = run(capsys, "reproduce", "fig3")
    rows = table(out)
    assert code == 0 and list(rows[0]) == ["sigma2", "variance_m2", "variance_m3"]
    for r in rows:
        s2 = float(r["sigma2"])
        assert float(r["variance_m3"]) < float(r["variance_m2"]) < s2


def test_reproduce_fig4a_eps1_row(capsys):
    _, out, _ = run(capsys, "reproduce", "fig4a")
    row = next(r for r in table(out) if float(r["eps"]) == 1.0)
    assert float(row["delta_osgt"]) == pytest.approx(7.8e-12, rel=0.1)
    assert float(row["delta_gaussian"]) == pytest.approx(3.9e-9, rel=0.1)


def test_reproduce_fig5_dominance(capsys):
    _, out, _ = run(capsys, "reproduce", "fig5")
    rows = table(out)
    assert len(rows) == 100
    assert all(float(r["zcdp_bound_osgt"]) >= float(r["renyi_osgt"]) for r in rows)


def test_reproduce_override(capsys):
    code, out, _ = run(capsys, "reproduce", "fig3", "--set", "ms=1,2", "--set", "sigma2_max=3")
    assert code == 0 and len(table(out)) == 3 and "variance_m1" in out
    code, _, err = run(capsys, "reproduce", "fig3", "--set", "nope=1")
    assert code == 1 and "nope" in err


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert out.count("PASS") == 8 and "FAIL" not in out


def test_selftest_detects_corrupted_q(capsys, monkeypatch):
    good = special.q_function
    monkeypatch.setattr(special, "q_function", lambda x: good(np.asarray(x) * (1 + 1e-4)))
    code, out, _ = run(capsys, "selftest")
    assert code == 2
    line = next(l for l in out.splitlines() if "branch_continuity" in l)
    assert line.startswith("FAIL")
