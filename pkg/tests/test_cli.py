import json
import subprocess
import sys

import numpy as np
import pytest

from pathwalk.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    lines = text.splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    rows = [ln.split(",") for ln in lines[1:] if not ln.startswith("#")]
    diag = {}
    for ln in comments:
        for item in ln[1:].split():
            k, v = item.split("=")
            diag[k] = float(v)
    return lines[0].split(","), rows, diag


def test_spectrum_small(capsys):
    code, out, _ = run(["spectrum", "--n", "1", "--p", "0.5"], capsys)
    assert code == 0
    header, rows, diag = parse_csv(out)
    assert header == ["k", "re_mu", "im_mu", "phi", "residual"]
    assert len(rows) == 4
    phases = [float(r[3]) for r in rows]
    np.testing.assert_allclose(phases, [0, np.pi / 2, -np.pi / 2, np.pi], atol=1e-15)
    assert diag["max_residual"] < 1e-12


def test_spectrum_json_same_payload(capsys):
    _, csv_out, _ = run(["spectrum", "--n", "2", "--p", "0.3"], capsys)
    _, json_out, _ = run(["spectrum", "--n", "2", "--p", "0.3", "--format", "json"], capsys)
    doc = json.loads(json_out)
    assert set(doc) == {"config", "rows", "diagnostics"}
    _, rows, diag = parse_csv(csv_out)
    assert len(doc["rows"]) == len(rows)
    for row, rec in zip(rows, doc["rows"]):
        assert float(row[1]) == rec["re_mu"]
        assert float(row[4]) == rec["residual"]
    assert doc["diagnostics"]["max_residual"] == diag["max_residual"]
    assert doc["config"]["n"] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--n", "0", "--p", "0.5"],
        ["spectrum", "--n", "3", "--p", "1.0"],
        ["timeavg", "--n", "3", "--p", "0.3", "--start", "9"],
        ["timeavg", "--n", "3", "--p", "0.3", "--start", "0", "--chirality", "L"],
        ["timeavg", "--n", "3", "--p", "0.3", "--method", "cesaro"],
        ["timeavg", "--n", "3", "--p", "0.3", "--method", "closed-form", "--start", "4"],
        ["limit-check", "--n", "3", "--p", "0.3", "--grid", "1"],
        ["spectrum", "--n", "600", "--p", "0.3"],
    ],
)
def test_usage_errors(argv, capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, err = run(argv + ["--out", str(target)], capsys)
    assert code == 2
    assert out == ""
    assert "error" in err
    assert not target.exists()


def test_missing_required_argument_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--p", "0.5"])
    assert exc.value.code == 2


def test_closed_form_mirror_message(capsys):
    code, _, err = run(["timeavg", "--n", "4", "--p", "0.3", "--start", "5", "--method", "closed-form"], capsys)
    assert code == 2 and "mirror" in err


def test_timeavg_spectral(capsys):
    code, out, _ = run(["timeavg", "--n", "4", "--p", "0.3", "--start", "0", "--method", "spectral"], capsys)
    assert code == 0
    header, rows, diag = parse_csv(out)
    assert header == ["j", "pbar"]
    assert len(rows) == 6
    assert abs(sum(float(r[1]) for r in rows) - 1) < 1e-10
    assert diag == {}


def test_timeavg_cesaro_agrees_with_spectral(capsys):
    _, spectral, _ = run(["timeavg", "--n", "4", "--p", "0.3"], capsys)
    _, cesaro, _ = run(["timeavg", "--n", "4", "--p", "0.3", "--method", "cesaro", "--steps", "100000"], capsys)
    assert cesaro.splitlines()[-1].startswith("# est_err=")
    _, a, _ = parse_csv(spectral)
    _, b, diag = parse_csv(cesaro)
    gap = max(abs(float(x[1]) - float(y[1])) for x, y in zip(a, b))
    assert gap <= diag["est_err"]


def test_limit_check(capsys):
    code, out, _ = run(["limit-check", "--n", "4000", "--p", "0.3", "--start", "0", "--grid", "99"], capsys)
    assert code == 0
    header, rows, diag = parse_csv(out)
    assert header == ["a", "F_n", "F_limit"]
    assert len(rows) == 98
    assert diag["ks"] < 0.02
    assert diag["c"] == pytest.approx(4 / 7, abs=1e-15)
    code, out, _ = run(["limit-check", "--n", "200", "--p", "0.5"], capsys)
    assert parse_csv(out)[2]["c"] == 0.0


def test_stationary(capsys):
    _, out, _ = run(["stationary", "--n", "3", "--p", "0.5"], capsys)
    _, rows, diag = parse_csv(out)
    np.testing.assert_allclose([float(r[1]) for r in rows], [0.125, 0.25, 0.25, 0.25, 0.125], atol=1e-15)
    assert diag["max_abs_diff"] < 1e-12
    _, out, _ = run(["stationary", "--n", "1", "--p", "0.3"], capsys)
    _, rows, _ = parse_csv(out)
    np.testing.assert_allclose([float(r[1]) for r in rows], [0.35, 0.5, 0.15], atol=1e-15)
    for r in rows:
        assert abs(float(r[1]) - float(r[2])) < 1e-12


def test_csv_byte_stable(capsys, tmp_path):
    argv = ["timeavg", "--n", "5", "--p", "0.3", "--start", "2"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second
    assert "\r" not in first
    target = tmp_path / "t.csv"
    assert main(argv + ["--out", str(target)]) == 0
    assert target.read_bytes() == first.encode()
    # 17 significant digits round-trip exactly
    from pathwalk import WalkParameters, initial_spec, time_averaged

    params = WalkParameters(5, 0.3)
    masses = time_averaged(params, initial_spec(params, 2)).masses
    values = [float(line.split(",")[1]) for line in first.splitlines()[1:]]
    assert values == masses.tolist()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pathwalk", "stationary", "--n", "2", "--p", "0.5"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("i,pi,v0_sq\n")


def test_consistency_failure_exit_code(capsys, monkeypatch):
    import pathwalk.cli as cli
    from pathwalk import ConsistencyError

    def boom(args):
        raise ConsistencyError("forced")

    monkeypatch.setitem(cli.COMMANDS, "stationary", boom)
    code, out, err = run(["stationary", "--n", "2", "--p", "0.5"], capsys)
    assert code == 3 and out == "" and "forced" in err
