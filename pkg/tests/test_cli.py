from __future__ import annotations

import json
import subprocess
import sys

import pytest

from ncdt.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv: str) -> tuple[int, dict]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else {})


def test_compute_c3_is_macmahon(capsys):
    code, out = run(capsys, "compute", "--sigma", "+", "--order", "5")
    assert code == EXIT_OK
    terms = out["series"]["crystal"]["terms"]
    assert [int(t["coeff"]) for t in terms] == [1, 1, 3, 6, 13, 24]
    assert out["series"]["crystal"]["unit"] == "half"


def test_compute_methods_give_identical_terms(capsys):
    argv = ["compute", "--sigma", "+-", "--order", "2"]
    for m in ("crystal", "vertex", "closed"):
        argv += ["--method", m]
    code, out = run(capsys, *argv)
    assert code == EXIT_OK
    lists = [out["series"][m]["terms"] for m in ("crystal", "vertex", "closed")]
    assert lists[0] == lists[1] == lists[2]


def test_compute_order_zero(capsys):
    code, out = run(capsys, "compute", "--sigma", "+-+", "--order", "0")
    assert code == EXIT_OK
    assert [int(t["coeff"]) for t in out["series"]["crystal"]["terms"]] == [1]


def test_compute_is_deterministic(capsys):
    argv = ["compute", "--sigma", "+-", "--theta", "1,0", "--lambda", "[[],[1]]", "--order", "3"]
    main(argv)
    first = capsys.readouterr().out
    main(argv + ["--workers", "2", "--method", "crystal"])
    second = capsys.readouterr().out
    a, b = json.loads(first), json.loads(second)
    assert a["series"]["crystal"] == b["series"]["crystal"]
    main(argv)
    assert capsys.readouterr().out == first


@pytest.mark.parametrize(
    "argv",
    [
        ["--sigma", "+"],
        ["--sigma", "+-"],
        ["--sigma", "+-", "--lambda", "[[],[1]]"],
    ],
)
def test_compare_regression_types(capsys, argv):
    code, out = run(capsys, "compare", *argv, "--order", "4")
    assert code == EXIT_OK and out["equal"]


def test_compare_against_fixture(capsys, tmp_path):
    code, out = run(capsys, "compute", "--sigma", "+-", "--order", "3")
    series = out["series"]["crystal"]
    good = tmp_path / "good.json"
    good.write_text(json.dumps(series))
    code, out = run(capsys, "compare", "--sigma", "+-", "--order", "3", "--method", "crystal", "--fixture", str(good))
    assert code == EXIT_OK and out["equal"]
    series["terms"][-1]["coeff"] = str(int(series["terms"][-1]["coeff"]) + 1)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(series))
    code, out = run(capsys, "compare", "--sigma", "+-", "--order", "3", "--method", "crystal", "--fixture", str(bad))
    assert code == EXIT_MISMATCH
    assert out["discrepancy_count"] == 1


def test_config_errors_exit_2(capsys, tmp_path):
    assert main(["compute", "--sigma", "+x"]) == EXIT_USAGE
    assert main(["compute", "--sigma", "+-", "--order", "-1"]) == EXIT_USAGE
    assert main(["compute", "--sigma", "+-", "--theta", "5"]) == EXIT_USAGE
    assert main(["nonsense"]) == EXIT_USAGE
    assert main(["compute", "--config", str(tmp_path / "missing.json")]) == EXIT_USAGE
    capsys.readouterr()


def test_config_file_and_overrides(capsys, tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"sigma": "+-", "order": 2, "lambda": [[], []]}))
    code, out = run(capsys, "compute", "--config", str(cfg))
    assert code == EXIT_OK
    assert out["metadata"]["order"] == 2
    code, out = run(capsys, "compute", "--config", str(cfg), "--order", "1")
    assert out["metadata"]["order"] == 1


def test_wallcross_passes_on_nu_types(capsys):
    code, out = run(
        capsys, "wallcross", "--sigma", "+-", "--nu-plus", "1", "--order", "4",
        "--chamber", "[]", "--chamber", "1", "--chamber", "1,0",
    )
    assert code == EXIT_OK and out["equal"]


def test_wallcross_single_chamber(capsys):
    code, out = run(capsys, "wallcross", "--sigma", "+", "--order", "3")
    assert code == EXIT_OK and out["equal"]


def test_wallcross_lambda_mismatch_is_reported(capsys):
    code, out = run(
        capsys, "wallcross", "--sigma", "+-", "--lambda", "[[],[1]]", "--order", "5",
        "--chamber", "[]", "--chamber", "1", "--chamber", "1,0",
    )
    assert code == EXIT_MISMATCH
    assert out["discrepancy_count"] > 0
    assert len(out["discrepancies"]) <= 10


def test_tv_command(capsys):
    code, out = run(capsys, "tv", "--sigma", "+-", "--nu-plus", "1", "--order", "2")
    assert code == EXIT_OK and out["equal"]
    assert set(out["series"]) == {"brute", "vertex", "closed"}


def test_quiver_command(capsys):
    code, out = run(capsys, "quiver", "--sigma", "+-", "--lambda", "[[],[1]]")
    assert code == EXIT_OK
    assert len(out["base"]["arrows"]) == 4
    assert out["valleys"] == [-1, 2] and out["peaks"] == [1]
    assert out["sign_rule"] == [-1, 1]


def test_crystals_command(capsys):
    code, out = run(capsys, "crystals", "--sigma", "+", "--order", "3")
    assert code == EXIT_OK
    assert out["counts"] == [1, 1, 3, 6]
    assert len(out["crystals"]) == 11


def test_info_command(capsys):
    code, out = run(capsys, "info")
    assert code == EXIT_OK
    assert out["exit_codes"] == {"ok": 0, "mismatch": 1, "usage": 2, "internal": 3}


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ncdt", "compute", "--sigma", "+-", "--order", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["series"]["crystal"]["terms"]
