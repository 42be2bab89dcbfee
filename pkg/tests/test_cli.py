import json

import pytest

from torusres.cli import main


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_coprime_json(capsys):
    code, out = run(capsys, ["coprime", "--radius", "100"])
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 19088  # frozen from the direct per-point count
    assert abs(payload["ratio"] - 0.607927) < 5e-3


def test_count_csv(tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    pts.write_text("0 0\n1 0\n")
    code, out = run(capsys, ["count", "--input", str(pts), "--max-tau", "4",
                             "--format", "csv"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "tau,count_or_real,imag"
    assert lines[1].startswith("0,6")


def test_count_json_cumulative(tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    pts.write_text("0 0\n1 0\n2 1\n")
    code, out = run(capsys, ["count", "--input", str(pts), "--max-tau", "8"])
    payload = json.loads(out)
    assert payload["cumulative"]["with_zero"] - payload["cumulative"]["without_zero"] >= 1
    assert payload["energy"] >= len(payload["histogram"])


def test_gowers_both_routes(capsys):
    code, out = run(capsys, ["gowers", "--random", "5", "--k", "3", "--seed", "7"])
    payload = json.loads(out)
    assert code == 0
    assert payload["norm"] == pytest.approx(payload["norm_recursive"], rel=1e-10)


def test_l4_report(tmp_path, capsys):
    st = tmp_path / "state.csv"
    st.write_text("xi1,xi2,re,im\n0,0,1,0\n1,0,1,0\n")
    code, out = run(capsys, ["l4", "--state", str(st), "--t0", "0", "--t1", "1",
                             "--fejer", "6"])
    payload = json.loads(out)
    assert code == 0
    assert payload["fejer_norm"]["sum_form"] == pytest.approx(
        payload["fejer_norm"]["integral_form"], rel=1e-8)


def test_svg_output(tmp_path, capsys):
    st = tmp_path / "state.csv"
    st.write_text("xi1,xi2,re,im\n0,0,1,0\n2,1,0.5,0\n")
    svg = tmp_path / "plot.svg"
    code, _ = run(capsys, ["l4", "--state", str(st), "--t1", "2",
                           "--svg", str(svg)])
    assert code == 0
    assert svg.read_text().startswith("<svg")


def test_usage_error_exit_code(tmp_path, capsys):
    code = main(["count", "--input", str(tmp_path / "missing.txt")])
    assert code == 2


def test_config_override(tmp_path, capsys):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"radius": 50}))
    code, out = run(capsys, ["--config", str(cfgfile), "coprime", "--radius", "10"])
    payload = json.loads(out)
    assert payload["radius"] == 50


def test_determinism(capsys):
    _, out1 = run(capsys, ["kernel", "--n-list", "8", "--samples", "2", "--seed", "5"])
    _, out2 = run(capsys, ["kernel", "--n-list", "8", "--samples", "2", "--seed", "5"])
    assert out1 == out2


def test_verify_subset(capsys):
    code, out = run(capsys, ["verify", "--quick", "--criteria", "2,3"])
    assert code == 0
    assert out.count("PASS") == 2
