import json
import subprocess
import sys

import pytest

from idealorbit.cli import COMMANDS, main, run
from idealorbit.errors import ValidationError
from idealorbit.gallery import GALLERY, load_fixture, load_golden, load_job
from idealorbit.jobs import canonical_json

GOLDEN_CASES = [pytest.param(name, command, id=f"{name}-{command}") for name, commands in GALLERY.items()
                for command in commands]


def _write(tmp_path, data, name="job.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
    return str(path)


def _stderr_json(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


@pytest.mark.parametrize("name, command", GOLDEN_CASES)
def test_reports_match_the_golden_files(name, command):
    report, code = run(command, load_job(name))
    assert code == 0
    assert json.loads(canonical_json(report)) == load_golden(name, command)


@pytest.mark.parametrize("name, command", [("swap_truncated", "orbit scan"), ("rotation_linear", "orbit certify"),
                                           ("arc_scale", "arc build"), ("strassman_geometric", "strassman")])
def test_embedded_job_reproduces_the_report(name, command):
    report, _ = run(command, load_job(name))
    again, _ = run(command, report["job"])
    assert again == report
    assert report["command"] == command and len(report["job_hash"]) == 64


def test_every_verb_is_wired(tmp_path, capsys):
    verbs = {
        "orbit scan": ("rotation_linear", ["orbit", "scan"]),
        "orbit certify": ("translation", ["orbit", "certify"]),
        "arc build": ("arc_translate", ["arc", "build"]),
        "groebner": ("groebner_twisted_cubic", ["groebner"]),
        "strassman": ("strassman_linear", ["strassman"]),
        "relations check": ("relations_counterexample", ["relations", "check"]),
        "verify-auto": ("identity_trivial", ["verify-auto"]),
    }
    assert set(verbs) == set(COMMANDS)
    for command, (name, argv) in verbs.items():
        path = _write(tmp_path, load_fixture(name))
        assert main(argv + [path]) == 0, command
        report = json.loads(capsys.readouterr().out)
        assert report["command"] == command
        assert report["result"] == json.loads(canonical_json(run(command, load_job(name))[0]))["result"]


def test_text_and_output_flags(tmp_path, capsys):
    path = _write(tmp_path, load_fixture("swap_truncated"))
    assert main(["orbit", "scan", path, "--text"]) == 0
    assert capsys.readouterr().out.strip() == "S = (1 mod 2), no exceptions"
    out = tmp_path / "report.json"
    assert main(["orbit", "scan", path, "--window", "8", "--output", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text(encoding="utf-8"))["result"]["window"] == [-8, 8]


def test_overrides_reach_the_commands():
    job = load_job("translation")
    report, _ = run("orbit certify", job, prime=7, precision=6, window=10)
    cert = report["result"]["certificates"]
    assert (cert["prime"], cert["precision"]) == (7, 6)
    report, _ = run("groebner", load_job("groebner_twisted_cubic"), order="lex")
    assert report["result"]["order"].lower().startswith("lex")


def test_failed_automorphism_check_exits_with_one(tmp_path, capsys):
    data = {"variables": ["x"], "sigma": ["x+1"], "sigma_inv": ["x+2"]}
    assert main(["verify-auto", _write(tmp_path, data)]) == 1
    result = json.loads(capsys.readouterr().out)["result"]
    assert result["automorphism"] is False and result["witness"] is not None


def test_malformed_polynomial_reports_field_and_offset(tmp_path, capsys):
    data = {"variables": ["x", "y"], "sigma": ["x", "y"], "sigma_inv": ["x", "y"],
            "ideal_I": ["x + (y"], "ideal_J": ["x"], "window": 3}
    assert main(["orbit", "scan", _write(tmp_path, data)]) == 2
    err = _stderr_json(capsys)
    assert err["field"].startswith("ideal_I") and err["offset"] == 6


def test_validation_errors_exit_with_two(tmp_path, capsys):
    base = load_fixture("rotation_linear")
    cases = [
        ({**base, "colour": "red"}, "colour"),
        ({**base, "schema": 2}, "schema"),
        ({**base, "sigma": ["x"]}, "sigma"),
        ({**base, "window": -1}, "window"),
    ]
    for data, field in cases:
        assert main(["orbit", "scan", _write(tmp_path, data)]) == 2
        assert _stderr_json(capsys)["field"] == field
    assert main(["orbit", "scan", _write(tmp_path, '{"variables": [}')]) == 2
    assert _stderr_json(capsys)["offset"] == 15
    assert main(["orbit", "scan", _write(tmp_path, '{"name": "é", "variables": [}')]) == 2
    assert _stderr_json(capsys)["offset"] == 29
    (tmp_path / "latin1.json").write_bytes(b'{"name": "\xe9"}')
    assert main(["orbit", "scan", str(tmp_path / "latin1.json")]) == 2
    assert _stderr_json(capsys)["offset"] == 10
    assert main(["orbit", "scan", str(tmp_path / "missing.json")]) == 2
    with pytest.raises(ValidationError):
        run("orbit rotate", load_job("rotation_linear"))


def test_small_prime_and_indeterminate_exit_codes(tmp_path, capsys):
    data = {**load_fixture("arc_translate"), "prime": 2}
    assert main(["arc", "build", _write(tmp_path, data)]) == 3
    assert _stderr_json(capsys)["error"] == "SmallPrime"
    # 625 vanishes modulo 5^4, so the whole series does
    series = {"series": {"kind": "power", "prime": 5, "precision": 4, "coefficients": [0, 625]}}
    assert main(["strassman", _write(tmp_path, series)]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["verdict"] == "ZeroSeries"
    # a Mahler constant of valuation 3 is not pinned down at precision 4
    undecided = {"series": {"kind": "mahler", "prime": 5, "precision": 4, "coefficients": [125]}}
    assert main(["strassman", _write(tmp_path, undecided)]) == 5
    assert json.loads(capsys.readouterr().out)["result"]["verdict"] == "Indeterminate"


def test_module_entry_point(tmp_path):
    path = _write(tmp_path, load_fixture("swap_truncated"))
    proc = subprocess.run([sys.executable, "-m", "idealorbit.cli", "orbit", "scan", path, "--text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "S = (1 mod 2), no exceptions"
