import json
import os

import pytest

from hlsums.cache import Cache, canonical_params, params_hash
from hlsums.cli import main
from hlsums.rng import Stream


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_salie_output_digits(capsys):
    code, out, _ = run_cli(["salie", "--m", "1", "--n", "1", "--c", "3"], capsys)
    assert code == 0
    assert out.strip() == "0,-1.7320508075688772"


def test_ramanujan_output(capsys):
    code, out, _ = run_cli(["ramanujan", "--q", "4", "--n", "2"], capsys)
    assert code == 0
    assert out.strip() == "-2"


def test_hilbert_output(capsys):
    code, out, _ = run_cli(["hilbert", "--a", "2", "--b", "3", "--p", "3"], capsys)
    assert code == 0
    assert out.strip() == "-1"


def test_domain_error_exit_code(capsys):
    code, _, err = run_cli(["salie", "--m", "1", "--n", "1", "--c", "4"], capsys)
    assert code == 2
    assert "domain error" in err


def test_usage_error_exit_code(capsys):
    code, _, _ = run_cli(["salie", "--m", "1"], capsys)
    assert code == 1
    code, _, _ = run_cli(["not-a-command"], capsys)
    assert code == 1


def test_classnum_and_inconclusive(capsys, tmp_path):
    code, out, _ = run_cli(["classnum", "--d1", "5", "--d2", "8", "--t", "2"], capsys)
    assert code == 0 and out.strip() == "2"
    # degenerate input is a domain error
    code, _, _ = run_cli(["classnum", "--d1", "-3", "--d2", "-3", "--t", "3"], capsys)
    assert code == 2


def test_alpha_g_default_profile(capsys):
    code, out, _ = run_cli(["alpha-g", "--t1", "3", "--t2", "3", "--f", "6"], capsys)
    assert code == 0 and out.strip() == "2"


def test_identity_check_pass(capsys):
    code, out, _ = run_cli(
        ["identity-check", "--lemma", "3.17", "--trials", "30", "--seed", "42"], capsys
    )
    assert code == 0
    assert out.startswith("PASS")
    code, out, _ = run_cli(
        ["identity-check", "--name", "gauss-closed", "--trials", "30"], capsys
    )
    assert code == 0 and out.startswith("PASS")


def test_circle_csv_and_naive_check(capsys):
    code, out, _ = run_cli(
        ["circle", "--x", "0", "--y", "1", "--X", "100", "--naive-check"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,y,X,N,err"
    assert lines[1].split(",")[3] == "290"


def test_local_l2(capsys):
    code, out, _ = run_cli(
        ["local-l2", "--x0", "-0.3", "--x1", "0.3", "--y0", "1.1", "--y1", "1.6",
         "--X", "50", "--grid", "4"], capsys
    )
    assert code == 0
    assert float(out.strip()) > 0


def test_scan_output_deterministic(tmp_path, capsys):
    args = ["conjecture-scan", "--m", "1", "--n", "1", "--L", "2", "--K", "1",
            "--r", "1", "--c-min", "512", "--c-max", "2048", "--points", "3"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text().splitlines()[0]
    assert header == "C,m,n,L,K,r,alpha,re,im,abs,terms,seconds"


def test_scan_json_format(tmp_path, capsys):
    out = tmp_path / "scan.json"
    code = main(["conjecture-scan", "--m", "1", "--n", "1", "--L", "2", "--K", "1",
                 "--r", "1", "--c-min", "512", "--c-max", "1024", "--points", "2",
                 "--format", "json", "--out", str(out)])
    capsys.readouterr()
    assert code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 2 and rows[0]["L"] == 2


def test_scan_plot_rendered(tmp_path, capsys):
    png = tmp_path / "scan.png"
    code = main(["conjecture-scan", "--m", "1", "--n", "1", "--L", "2", "--K", "1",
                 "--r", "1", "--c-min", "512", "--c-max", "1024", "--points", "2",
                 "--plot", str(png), "--out", str(tmp_path / "s.csv")])
    capsys.readouterr()
    assert code == 0
    assert png.exists() and png.stat().st_size > 1000


def test_statement_scan(capsys):
    code, out, _ = run_cli(
        ["statement-scan", "--K", "1", "--u", "4", "--r1", "1", "--r2", "3",
         "--r3", "3", "--r4", "1", "--C", "100", "--a", "40", "--M", "2",
         "--X", "10000", "--kappa", "1"], capsys
    )
    assert code == 0
    re_part = float(out.strip().split(",")[0])
    assert re_part == pytest.approx(261.66957292031594, rel=1e-9)


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "hl.conf"
    cfg.write_text("format = json\nthreads = 1\n")
    code, out, _ = run_cli(
        ["ramanujan", "--q", "4", "--n", "2", "--config", str(cfg)], capsys
    )
    assert code == 0
    assert json.loads(out) == {"value": -2}


def test_cache_roundtrip_random_entries(tmp_path):
    cache = Cache(str(tmp_path))
    rs = Stream(777)
    entries = []
    for i in range(1000):
        params = {"a": rs.randint(-99, 99), "b": rs.uniform()}
        value = [rs.uniform(), rs.uniform()]
        cache.store("op", params, value)
        entries.append((params, value))
    reopened = Cache(str(tmp_path))
    for params, value in entries:
        assert reopened.lookup("op", params) == value
    assert reopened.lookup("op", {"a": 12345, "b": 0.0}) is None


def test_cache_corrupt_line_skipped(tmp_path):
    cache = Cache(str(tmp_path))
    cache.store("op", {"x": 1}, 42)
    with open(cache.path, "a") as fh:
        fh.write("{this is not json\n")
    cache.store("op", {"x": 2}, 43)
    with pytest.warns(UserWarning):
        reopened = Cache(str(tmp_path))
    assert reopened.lookup("op", {"x": 1}) == 42
    assert reopened.lookup("op", {"x": 2}) == 43


def test_cache_canonicalization_contract():
    a = canonical_params({"x": 0.1, "y": 2})
    b = canonical_params({"y": 2, "x": 0.1000000000000000055511151231257827})
    assert a == b
    assert params_hash(a) == params_hash(b)
    assert len(params_hash(a)) == 16


def test_cli_cache_hit(tmp_path, capsys):
    env = {"HL_CACHE_DIR": str(tmp_path)}
    old = os.environ.get("HL_CACHE_DIR")
    os.environ["HL_CACHE_DIR"] = str(tmp_path)
    try:
        code, out1, _ = run_cli(["classnum", "--d1", "5", "--d2", "8", "--t", "2"], capsys)
        code2, out2, _ = run_cli(["classnum", "--d1", "5", "--d2", "8", "--t", "2"], capsys)
        assert code == code2 == 0
        assert out1 == out2
        assert (tmp_path / "hlsums-cache.jsonl").exists()
    finally:
        if old is None:
            os.environ.pop("HL_CACHE_DIR", None)
        else:
            os.environ["HL_CACHE_DIR"] = old


def test_selftest_subset(capsys):
    code = main(["selftest", "--criteria", "10", "--report-dir", "/tmp/hlsums-test-reports"])
    out = capsys.readouterr().out
    assert code == 0
    assert "criterion 10" in out and "PASS" in out
