import json

import numpy as np
import pytest

from wqpe.cli import dispatch


def read_output(path):
    comments, header, rows = [], None, []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                comments.append(line)
            elif header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    return comments, header, rows


def test_windows_dump_row_counts(tmp_path):
    out = tmp_path / "win.csv"
    assert dispatch(["windows", "dump", "--m", "6", "--kind", "cosine", "--out", str(out)]) == 0
    comments, header, rows = read_output(out)
    assert header == ["series", "index", "re", "im", "abs2"]
    assert sum(r[0] == "window" for r in rows) == 64
    assert sum(r[0] == "filter" for r in rows) == 64
    assert any(c.startswith("# tool = wqpe") for c in comments)


def test_windows_dump_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["windows", "dump", "--m", "4", "--kind", "rect"]
    assert dispatch(argv + ["--out", str(a)]) == 0
    assert dispatch(argv + ["--out", str(b)]) == 0
    ca = a.read_bytes().replace(str(a).encode(), b"OUT")
    cb = b.read_bytes().replace(str(b).encode(), b"OUT")
    assert ca == cb


def test_qpe_error_rate_csv(tmp_path):
    out = tmp_path / "evp.csv"
    code = dispatch(
        [
            "qpe",
            "error-rate",
            "--t", "10",
            "--delta2m", "-0.3",
            "--p-min", "1",
            "--p-max", "8",
            "--window", "both",
            "--out", str(out),
        ]
    )
    assert code == 0
    _, header, rows = read_output(out)
    assert header == ["p", "e_rect", "e_cos"]
    assert len(rows) == 8
    for r in rows:
        p, e_rect, e_cos = int(r[0]), float(r[1]), float(r[2])
        if p >= 2:
            assert e_cos < e_rect


def test_qpe_qubits_prints(capsys):
    assert dispatch(["qpe", "qubits", "--e", "0.001", "--window", "both"]) == 0
    text = capsys.readouterr().out
    assert "window=rect" in text and "p=9" in text
    assert "window=cos" in text and "p=3" in text


def test_qpe_cbar_csv(tmp_path, capsys):
    out = tmp_path / "cbar.csv"
    assert dispatch(
        ["qpe", "cbar", "--m", "4", "--window", "both", "--nodes", "1024", "--out", str(out)]
    ) == 0
    _, header, rows = read_output(out)
    assert header == ["window", "m", "cbar"]
    assert float(rows[1][2]) < float(rows[0][2])  # cosine below rect


def test_qpe_run_on_model_file(tmp_path):
    model = tmp_path / "model.json"
    model.write_text(json.dumps({"model": "thirring", "sites": 2, "mass": 1.0, "coupling": 0.0}))
    out = tmp_path / "dist.csv"
    code = dispatch(
        ["qpe", "run", "--model", str(model), "--m", "5", "--window", "cos",
         "--state", "ground", "--out", str(out)]
    )
    assert code == 0
    _, header, rows = read_output(out)
    assert header == ["q", "prob"]
    assert len(rows) == 32
    probs = np.array([float(r[1]) for r in rows])
    assert probs.sum() == pytest.approx(1.0, abs=1e-10)
    assert probs.max() > 0.5  # eigenstate input concentrates near its phase


def test_prepare_row_counts_and_columns(tmp_path):
    out = tmp_path / "prep.csv"
    code = dispatch(
        ["prepare", "--model", "thirring", "--sites", "4", "--d", "1", "--m", "8",
         "--r-max", "6", "--window", "both", "--init", "neel", "--out", str(out)]
    )
    assert code == 0
    comments, header, rows = read_output(out)
    assert header == ["r", "window", "success_prob", "cum_Pr", "epsilon", "sigma_chi"]
    assert len(rows) == 12
    assert sum(r[1] == "rect" for r in rows) == 6
    assert sum(r[1] == "cos" for r in rows) == 6
    assert any("# lam = " in c for c in comments)
    assert any("# n_samples = 50" in c for c in comments)


def test_prepare_model_json_roundtrip(tmp_path):
    model = tmp_path / "thirring_n4.json"
    model.write_text(json.dumps({"model": "thirring", "sites": 4, "mass": 1.0, "coupling": 0.5}))
    out = tmp_path / "prep.csv"
    code = dispatch(
        ["prepare", "--model", str(model), "--d", "1", "--m", "8", "--r-max", "2",
         "--window", "cos", "--init", "neel", "--out", str(out)]
    )
    assert code == 0
    _, _, rows = read_output(out)
    assert len(rows) == 2


def test_varprep_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["varprep", "--model", "thirring", "--sites", "2", "--layers", "2", "--seed", "3"]
    assert dispatch(argv + ["--out", str(a)]) == 0
    assert dispatch(argv + ["--out", str(b)]) == 0
    ca = a.read_bytes().replace(str(a).encode(), b"OUT")
    cb = b.read_bytes().replace(str(b).encode(), b"OUT")
    assert ca == cb
    comments, header, rows = read_output(a)
    assert header == ["layer", "alpha", "beta", "gamma"]
    assert len(rows) == 2
    assert any(c.startswith("# overlap = ") for c in comments)


def test_bounds_check(tmp_path):
    out = tmp_path / "bounds.csv"
    assert dispatch(["bounds", "check", "--out", str(out)]) == 0
    _, header, rows = read_output(out)
    assert header == ["check", "detail", "empirical", "bound", "ok"]
    assert len(rows) == 6  # 3 tail-bound rows + 3 perturbation rows
    assert all(r[4] == "True" for r in rows)


def test_usage_error_exit_code():
    assert dispatch(["qpe", "error-rate", "--no-such-flag"]) == 2
    assert dispatch(["nonsense"]) == 2


def test_missing_model_file_exit_code(tmp_path):
    out = tmp_path / "x.csv"
    code = dispatch(["qpe", "run", "--model", str(tmp_path / "nope.json"),
                     "--m", "4", "--out", str(out)])
    assert code == 1
    assert not out.exists()  # atomic write: no partial output


def test_invalid_params_exit_code(tmp_path):
    out = tmp_path / "x.csv"
    code = dispatch(["prepare", "--model", "thirring", "--sites", "3", "--out", str(out)])
    assert code == 1
