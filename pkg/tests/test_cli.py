"""Command-line interface: subcommands, determinism, exit codes."""

import json

import pytest

from fermicert.cli import main


@pytest.fixture
def lieb_path(tmp_path):
    path = tmp_path / "lieb.json"
    assert main(["models", "emit", "lieb", "--period", "2,1", "--out", str(path)]) == 0
    return str(path)


def test_models_emit_and_validate(lieb_path, capsys):
    assert main(["validate", lieb_path]) == 0
    assert capsys.readouterr().out.strip() == "OK"


def test_dispersion_json_output(lieb_path, tmp_path):
    out = tmp_path / "disp.json"
    assert main(["dispersion", lieb_path, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["period"] == [2, 1]
    assert data["lambda_degree"] == 6
    assert data["twist_invariant"] is True
    assert "ptilde" in data and "p" in data


def test_certify_json_output(lieb_path, tmp_path):
    out = tmp_path / "cert.json"
    assert main(["certify", lieb_path, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["a1"]["status"] == "VerifiedCatalog"
    assert data["bound"] == 1
    assert data["verdict_code"] == "irreducible-generic-lambda"
    assert data["branch"] == "T2"


def test_certify_lambda_specialization(lieb_path, tmp_path):
    out = tmp_path / "cert-lam.json"
    assert main(["certify", lieb_path, "--lambda", "7/2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["lambda"] == "7/2"
    assert data["bound"] == 1


def test_certify_text_format(lieb_path, capsys):
    assert main(["certify", lieb_path, "--format", "text"]) == 0
    text = capsys.readouterr().out
    assert "component bound certificate" in text
    assert "verdict:" in text


def test_spectrum_comparison(lieb_path, tmp_path):
    out = tmp_path / "spec.json"
    assert main(["spectrum", lieb_path, "--torus", "2,2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["pass"] is True
    assert data["max_deviation"] <= 1e-9
    assert data["dimension"] == 24


def test_spectrum_zero_tolerance_reports_failure(lieb_path, tmp_path):
    out = tmp_path / "spec0.json"
    code = main(
        ["spectrum", lieb_path, "--torus", "2,2", "--tol", "0", "--out", str(out)]
    )
    assert code == 0  # the comparison ran; only the verdict is negative
    assert json.loads(out.read_text())["pass"] is False


def test_bands_csv(lieb_path, tmp_path):
    out = tmp_path / "bands.csv"
    code = main(
        ["bands", lieb_path, "--path", "0,0;0.5,0", "--samples", "5", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "k1,k2,E1,E2,E3,E4,E5,E6"
    assert len(lines) == 6


def test_outputs_are_byte_identical_across_runs(lieb_path, tmp_path):
    paths = [tmp_path / f"run{i}.json" for i in range(2)]
    for p in paths:
        assert main(["certify", lieb_path, "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    disp = [tmp_path / f"disp{i}.json" for i in range(2)]
    for p in disp:
        assert main(["dispersion", lieb_path, "--out", str(p)]) == 0
    assert disp[0].read_bytes() == disp[1].read_bytes()


def test_invalid_spec_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "dimension": 2,
                "orbits": 1,
                "period": [2, 3],
                "potential": [{"orbit": 1, "cell": [2, 0], "value": "1"}],
            }
        )
    )
    assert main(["validate", str(bad)]) == 1
    assert "violation" in capsys.readouterr().out
    assert main(["dispersion", str(bad)]) == 1


def test_malformed_json_exits_1(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["validate", str(broken)]) == 1
    assert main(["certify", str(broken)]) == 1


def test_missing_file_exits_1():
    assert main(["dispersion", "/nonexistent/spec.json"]) == 1


def test_size_guard_exits_2(tmp_path):
    huge = tmp_path / "huge.json"
    assert main(["models", "emit", "zd", "--period", "65", "--out", str(huge)]) == 0
    assert main(["dispersion", str(huge)]) == 2


def test_bad_torus_argument(lieb_path):
    assert main(["spectrum", lieb_path, "--torus", "2"]) == 1
    assert main(["spectrum", lieb_path, "--torus", "0,2"]) == 1
