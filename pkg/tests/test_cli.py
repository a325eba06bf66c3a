"""Command-line front end: parsing, schemas, exit codes."""
import json
import subprocess
import sys

import pytest

from sfkit.cli import CSV_HEADER, format_complex, main, parse_complex


def run_cli(*args, env=None):
    proc = subprocess.run([sys.executable, "-m", "sfkit.cli", *args],
                          capture_output=True, text=True, env=env)
    return proc


def test_parse_complex():
    assert parse_complex("1.5") == 1.5
    assert parse_complex("-2") == -2.0
    assert parse_complex("3i") == 3j
    assert parse_complex("-1i") == -1j
    assert parse_complex("i") == 1j
    assert parse_complex("-i") == -1j
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex("1 - 2 i") == 1 - 2j
    assert parse_complex("-0.5-0.25j") == -0.5 - 0.25j
    assert parse_complex("1e-3+2e-4i") == 1e-3 + 2e-4j
    for bad in ("", "abc", "1+2", "i2"):
        with pytest.raises(ValueError):
            parse_complex(bad)


def test_format_complex():
    assert format_complex(0.5 + 0j) == "0.5 0.0"
    assert format_complex(1 + 0j) == "1.0 0.0"
    assert format_complex(complex(1 / 3, -2 / 7)) == \
        f"{1 / 3!r} {-2 / 7!r}"


def test_eval_known_values(capsys):
    assert main(["eval", "field_gamma", "x=-1i", "n=0"]) == 0
    assert capsys.readouterr().out.strip() == "1.0 0.0"
    assert main(["eval", "pochhammer", "a=3", "n=-1"]) == 0
    assert capsys.readouterr().out.strip() == "0.5 0.0"


def test_eval_error_paths():
    assert main(["eval", "no_such_function"]) == 2
    assert main(["eval", "gamma2", "u=bogus", "w1=1", "w2=1+1i"]) == 2
    assert main(["eval", "gamma2", "u=0.5"]) == 2  # missing arguments


def test_list_contains_all(capsys):
    from sfkit import list_identities
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for ident in list_identities():
        assert ident in out


def test_check_csv_schema(tmp_path):
    out = tmp_path / "report.csv"
    code = main(["check", "--id", "hyperbolic_beta", "--seeds", "1,2",
                 "--format", "csv", "--out", str(out), "--jobs", "1"])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "hyperbolic_beta" and first[1] == "1"
    assert first[-1] in ("true", "false")


def test_check_json_schema(tmp_path):
    out = tmp_path / "report.json"
    code = main(["check", "--id", "elliptic_beta", "--seeds", "3",
                 "--out", str(out), "--jobs", "1"])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"version", "config", "registry_hash", "records"}
    assert len(doc["records"]) == 1
    rec = doc["records"][0]
    assert rec["identity"] == "elliptic_beta" and rec["pass"] is True


def test_check_exit_codes(tmp_path):
    assert main(["check", "--id", "nonexistent", "--seeds", "1"]) == 2
    assert main(["check", "--id", "hyperbolic_beta", "--seeds", ""]) == 2
    out = tmp_path / "x.json"
    code = main(["check", "--id", "hyperbolic_beta", "--seeds", "1",
                 "--tol", "1e-30", "--out", str(out), "--jobs", "1"])
    assert code == 1  # numerically impossible tolerance: failure, not error


def test_seed_ranges(tmp_path):
    out = tmp_path / "r.csv"
    code = main(["check", "--id", "hyperbolic_beta", "--seeds", "1..3",
                 "--format", "csv", "--out", str(out), "--jobs", "1"])
    assert code == 0
    assert len(out.read_text().strip().splitlines()) == 4


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("id=hyperbolic_beta\nseeds=1\nformat=csv\n")
    out = tmp_path / "from_cfg.csv"
    code = main(["check", "--config", str(cfg), "--out", str(out),
                 "--jobs", "1"])
    assert code == 0
    assert out.read_text().startswith(CSV_HEADER)


def test_parallel_jobs_subprocess(tmp_path):
    # worker-pool path via a real process, including the env fallback
    import os
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["check", "--id", "hyperbolic_beta,hyperbolic_AW", "--seeds",
            "1,2", "--format", "csv"]
    p1 = run_cli(*args, "--out", str(out1), "--jobs", "2")
    env = dict(os.environ, SFKIT_JOBS="2")
    p2 = run_cli(*args, "--out", str(out2), env=env)
    assert p1.returncode == 0 and p2.returncode == 0

    def strip_ms(text):
        rows = [r.split(",") for r in text.strip().splitlines()]
        return [r[:9] + r[10:] for r in rows]

    assert strip_ms(out1.read_text()) == strip_ms(out2.read_text())


def test_sweep_csv(capsys):
    assert main(["sweep", "b_to_1", "n=1", "y=1",
                 "deltas=0.1;0.05;0.025"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "delta,ratio_re,ratio_im,abs_err"
    assert len(out) == 5 and out[-1].startswith("# fitted_order =")
    errs = [float(r.split(",")[-1]) for r in out[1:4]]
    assert errs[0] > errs[1] > errs[2]


def test_sweep_eta_target(capsys):
    assert main(["sweep", "eta_ratio", "mode=b_to_i",
                 "deltas=0.05;0.03"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert float(rows[-2].split(",")[-1]) < 0.05


def test_sweep_errors(capsys):
    assert main(["sweep", "no_such_limit"]) == 2
    capsys.readouterr()
    assert main(["sweep", "b_to_i", "n=0"]) == 2  # missing x
