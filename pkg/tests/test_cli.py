import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from meroclass.cli import COMMANDS, parse_csv_complex, run


@pytest.fixture
def call(tmp_path):
    def _call(command, cfg, *flags, raw=None):
        path = tmp_path / f"{command}.json"
        path.write_text(raw if raw is not None else json.dumps({"schema_version": 1, **cfg}))
        return run([command, "--config", str(path), *flags])

    return _call


def result(text):
    return json.loads(text)["result"]


def csv_rows(text):
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


CONST0 = {"lambda": 0.5, "mu": [1, 0], "c": [0.3, -0.2], "omega": {"kind": "constant", "u": [0, 0]}, "order": 16}


def test_construct_examples(call):
    code, text = call("construct", CONST0)
    assert code == 0
    out = result(text)
    assert out["membership"]["verdict"] == "member-supported"
    assert out["b"][0] == pytest.approx([0.3, -0.2], abs=1e-15)
    code, text = call("construct", {"lambda": 1, "mu": [1, 0], "extremal": {"kind": "fk", "k": 2}, "order": 16})
    assert code == 0
    assert result(text)["b"][1] == [1.0, 0.0]


@pytest.mark.parametrize(
    "raw",
    [
        "{not json",
        "[1, 2]",
        json.dumps({"schema_version": 1, "lambda": 0.5, "mu": [1, 0], "omega": {"kind": "constant", "u": [0, 0]}, "bogus": 1}),
        json.dumps({"schema_version": 2, "lambda": 0.5, "mu": [1, 0], "omega": {"kind": "constant", "u": [0, 0]}}),
        json.dumps({"schema_version": 1, "lambda": 0.5, "mu": [1, 0], "omega": {"kind": "constant", "u": [2, 0]}}),
        json.dumps({"schema_version": 1, "lambda": 0.5, "mu": [0.2, 0], "omega": {"kind": "constant", "u": [0, 0]}}),
        json.dumps({"schema_version": 1, "lambda": 0.5, "mu": [1, 0]}),
    ],
)
def test_config_errors_exit_2(call, raw):
    code, text = call("construct", {}, raw=raw)
    assert code == 2 and text.startswith("error:")


def test_schema_error_names_location(call):
    code, text = call("construct", {**CONST0, "omega": {"kind": "constant", "u": [0, 0], "m": "x"}})
    assert code == 2 and "omega" in text


def test_verify_refutation_exit_3(call):
    cfg = {"lambda": 0.9, "mu": [0.5, 0], "omega": {"kind": "constant", "u": [1, 0]}, "order": 32}
    code, text = call("verify", cfg)
    assert code == 3
    out = result(text)
    assert out["local_univalence"]["verdict"] == "refuted"
    assert out["region"]["verdict"] == "contains_non_locally_univalent"
    assert out["oracle_max_discrepancy"] <= 1e-8


def test_verify_member(call):
    code, text = call("verify", {**CONST0, "lambda": 0.4, "mu": [1.1, 0.1]}, "--format", "csv")
    assert code == 0
    rows = {r["check"]: r for r in csv_rows(text)}
    assert rows["membership"]["verdict"] == "member-supported"
    assert rows["oracle"]["verdict"] == "agree"


def test_bounds_a0(call):
    code, text = call("bounds", {"lambda": 1, "mu": [1, 0], "p": 1.0}, "--format", "csv")
    assert code == 0
    rows = csv_rows(text)
    bk = [r for r in rows if r["kind"] == "bk"]
    assert [float(r["bound_value"]) for r in bk] == pytest.approx([1, 1 / 2, 1 / 3, 1 / 4, 1 / 5], abs=1e-15)
    assert all(abs(float(r["gap"])) <= 1e-9 for r in rows)
    a2 = [r for r in rows if r["kind"] == "a2"][0]
    assert float(a2["bound_value"]) == 2


def test_bounds_l2_and_na(call):
    out = result(call("bounds", {"lambda": 0.6, "mu": [0.8, 0]})[1])
    l2 = [r for r in out["rows"] if r["kind"] == "l2"][0]
    assert l2["bound_value"] == pytest.approx(0.32, abs=1e-15)
    assert l2["achieved_value"] >= 0.32 - 1e-6
    out = result(call("bounds", {"lambda": 0.6, "mu": [0.8, 0.1]})[1])
    a2 = [r for r in out["rows"] if r["kind"] == "a2"][0]
    assert a2["bound_value"] == "n/a"


def test_classify_and_witness(call):
    out = result(call("classify", {"points": [[0.4, [1, 0]], [0.9, [0.5, 0]], [0.9, [1.15, 0]]]})[1])
    assert [r["verdict"] for r in out["rows"]] == ["univalence_guaranteed", "contains_non_locally_univalent", "open_region"]
    w = complex(*out["rows"][1]["witness"])
    assert abs(abs(w) - 0.92144) < 1e-4
    code, text = call("classify", {"lambda": 0.9, "mu": [0.5, 0]}, "--format", "csv")
    assert abs(abs(parse_csv_complex(csv_rows(text)[0]["witness"])) - 0.92144) < 1e-4


def test_maximize(call):
    out = result(call("maximize", {"lambda": 1, "mu": [1, 0], "p": 1.0, "family": "constant", "starts": 4})[1])
    assert out["best_value"] == pytest.approx(2.0, abs=1e-6)
    assert out["label"] == "numerical lower bound on the maximum"


def test_subordination(call):
    code, text = call("subordination", {"lambda": 0.8, "mu": [1, 0]})
    assert code == 2 and "settled" in text
    code, text = call("subordination", {"lambda": 0.8, "mu": [0.9, 0], "samples": 2})
    assert code == 0
    out = result(text)
    assert "not verified" in out["label"]
    assert out["rows"][0]["samples"] == 3


def test_sweep_csv_with_errors(call):
    cfg = {
        "lambdas": [0.4, 0.9],
        "mus": [[1, 0], [0.5, 0], [1.15, 0]],
        "mc_samples": 1,
        "quantities": ["classify", "bk_bound", "univalence_mc"],
        "grid": {"radii": [0.5, 0.9], "angles_per_ring": 64},
    }
    code, text = call("sweep", cfg, "--format", "csv")
    assert code == 0
    rows = csv_rows(text)
    assert len(rows) == 5  # (0.4, 0.5) lies outside the class
    assert {r["verdict"] for r in rows} == {"univalence_guaranteed", "contains_non_locally_univalent", "open_region"}


def test_plotdata_koebe(call):
    code, text = call("plotdata", {"function": "koebe", "lambda": 1, "mu": [1, 0], "radii": [0.9]}, "--format", "csv")
    assert code == 0
    rows = csv_rows(text)
    assert len(rows) == 512
    dev = np.array([float(r["abs_U_minus_mu"]) for r in rows])
    assert np.allclose(dev, 0.81, atol=1e-12)
    z = np.array([parse_csv_complex(r["z"]) for r in rows])
    f = np.array([parse_csv_complex(r["f"]) for r in rows])
    np.testing.assert_allclose(f, z / (1 - z) ** 2, rtol=1e-14)


def test_plotdata_f0_pole_and_identity(call):
    cfg = {"function": "f0", "lambda": 0.8, "mu": [0.9, 0], "p": 0.7, "radii": [0.5, 0.65, 0.69, 0.699], "angles": 64}
    out = result(call("plotdata", cfg)[1])
    on_axis = [r for r in out["rows"] if r["theta"] == 0]
    mags = [abs(complex(*r["f"])) for r in on_axis]
    assert np.all(np.diff(mags) > 0) and mags[-1] > 100
    out = result(call("plotdata", {"function": "identity", "radii": [0.3], "angles": 16})[1])
    for r in out["rows"]:
        assert complex(*r["f"]) == pytest.approx(complex(*r["z"]))
    code, _ = call("plotdata", {"function": "spiral"})
    assert code == 2


CONFIGS = {
    "construct": CONST0,
    "verify": {**CONST0, "grid": {"radii": [0.5, 0.9], "angles_per_ring": 64}},
    "coeffs": {"lambda": 0.7, "mu": [0.9, 0.1], "omega": {"kind": "blaschke", "zeros": [[0.3, 0.2]]}, "K": 8},
    "bounds": {"lambda": 0.8, "mu": [0.9, 0], "kmax": 3, "K": 20},
    "classify": {"points": [[0.4, [1, 0]], [0.9, [0.5, 0]]]},
    "extremal": {"lambda": 0.8, "mu": [0.9, 0], "kind": "f0", "p": 0.7, "order": 12},
    "maximize": {"lambda": 0.8, "mu": [0.9, 0.1], "p": 0.8, "family": "mix", "degree": 2, "starts": 2},
    "subordination": {"lambda": 0.8, "mu": [0.9, 0], "samples": 1},
    "sweep": {"points": [[0.9, [1.15, 0]]], "mc_samples": 2, "optimize": {"starts": 2}, "grid": {"radii": [0.5, 0.9], "angles_per_ring": 64}},
    "plotdata": {"function": "fk", "lambda": 0.8, "mu": [0.9, 0], "k": 3, "radii": [0.5], "angles": 16},
}


@pytest.mark.parametrize("command", COMMANDS)
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_byte_identical_reruns(call, tmp_path, command, fmt):
    outs = []
    for i in range(2):
        out = tmp_path / f"out{i}.{fmt}"
        code, _ = call(command, CONFIGS[command], "--format", fmt, "--seed", "7", "--out", str(out))
        assert code in (0, 3)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    text = outs[0].decode()
    assert "config_sha256" in text and "meroclass" in text


def test_floats_round_trip(call):
    out = result(call("bounds", {"lambda": 0.6, "mu": [0.8, 0], "kmax": 3})[1])
    bk3 = [r for r in out["rows"] if r["kind"] == "bk" and r["index"] == 3][0]
    assert bk3["bound_value"] == 0.6 / 2 * (1 - 0.2**2 / 0.36)


def test_entry_point_subprocess(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"schema_version": 1, "lambda": 0.4, "mu": [1, 0]}))
    proc = subprocess.run([sys.executable, "-m", "meroclass.cli", "classify", "--config", str(cfg)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["rows"][0]["verdict"] == "univalence_guaranteed"
    proc = subprocess.run([sys.executable, "-m", "meroclass.cli", "classify", "--config", str(tmp_path / "missing.json")], capture_output=True, text=True)
    assert proc.returncode == 2 and "error" in proc.stderr
