"""Command-line interface: exit codes, outputs, determinism, revalidation."""

import json
import os

from higgsflow.cli import main


def read(path):
    with open(path) as fh:
        return fh.read()


def test_usage_errors_exit_one(capsys):
    assert main(["verify-conjecture", "--p", "4", "--all-lambda"]) == 1
    assert main(["verify-conjecture", "--p", "5", "--lambda", "1"]) == 1
    assert main([]) == 1


def test_verify_conjecture_prints_and_passes(tmp_path, capsys):
    out = str(tmp_path / "certs")
    assert main(["verify-conjecture", "--p", "3", "--all-lambda", "--out", out]) == 0
    text = capsys.readouterr().out
    assert "PASS" in text
    index = json.loads(read(os.path.join(out, "index.json")))
    assert index["certificates"][0]["status"] == "PASS"


def test_count_periodic_writes_census_csv(tmp_path):
    out = str(tmp_path / "certs")
    assert main([
        "count-periodic", "--p", "5", "--lambda", "2", "--side", "lattes",
        "--out", out,
    ]) == 0
    files = os.listdir(out)
    assert any(f.endswith(".csv") for f in files)
    cert = json.loads(read(os.path.join(
        out, "periodic-census-p5-f1-lambda2-sidelattes.json")))
    assert cert["payload"]["census"]["total_with_multiplicity"] == 26


def test_torsion_check_exit_codes(tmp_path):
    assert main([
        "torsion-check", "--p", "5", "--lambda", "2", "--side", "lattes",
        "--search-degree", "4",
    ]) == 0


def test_supersingular_scan_table(tmp_path):
    out = str(tmp_path / "certs")
    assert main(["supersingular-scan", "--p", "7", "--out", out]) == 0
    cert = json.loads(read(os.path.join(out, "supersingular-scan-p7-degree1.json")))
    rows = cert["payload"]["rows"]
    assert len(rows) == 5
    for row in rows:
        assert row["deuring"] == row["trace_zero"] == row["derivative_zero"]


def test_lift_sim_and_seeded_determinism(tmp_path):
    out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
    argv = ["lift-sim", "--p", "3", "--f", "1", "--a", "1",
            "--b-mode", "random", "--seed", "5", "--steps", "3"]
    assert main(argv + ["--out", out1]) == 0
    assert main(argv + ["--out", out2]) == 0
    (f1,) = [f for f in os.listdir(out1) if f.startswith("lift-sim")]
    assert read(os.path.join(out1, f1)) == read(os.path.join(out2, f1))


def test_outputs_have_no_timing_by_default(tmp_path):
    out = str(tmp_path / "certs")
    main(["verify-conjecture", "--p", "3", "--all-lambda", "--out", out])
    cert = json.loads(read(os.path.join(out, "map-commutation-p3-lambda2.json")))
    assert "timing_ms" not in cert
    out2 = str(tmp_path / "timed")
    main(["verify-conjecture", "--p", "3", "--all-lambda", "--out", out2, "--timings"])
    cert = json.loads(read(os.path.join(out2, "map-commutation-p3-lambda2.json")))
    assert "timing_ms" in cert


def test_sweep_and_revalidate_roundtrip(tmp_path):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({
        "p": [3, 5], "f": [1], "lambda": "all",
        "checks": ["conjecture", "census", "supersingular"], "side": "lattes",
    }))
    out = str(tmp_path / "certs")
    assert main(["sweep", "--config", str(config), "--out", out]) == 0
    assert os.path.exists(os.path.join(out, "summary.json"))
    assert main(["revalidate", "--dir", out]) == 0


def test_revalidate_detects_tampering(tmp_path):
    out = str(tmp_path / "certs")
    main(["verify-conjecture", "--p", "3", "--all-lambda", "--out", out])
    path = os.path.join(out, "map-commutation-p3-lambda2.json")
    cert = json.loads(read(path))
    cert["payload"]["phi"]["num"][0] = [1]  # corrupt one coefficient
    with open(path, "w") as fh:
        json.dump(cert, fh)
    assert main(["revalidate", "--dir", out]) == 2
