import io
import json
import random

import pytest

from ctxdel.cli import main


def run(argv, stdin="", monkeypatch=None, capsys=None):
    monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cli(monkeypatch, capsys):
    return lambda argv, stdin="": run(argv, stdin, monkeypatch, capsys)


def rand_bits(n, seed):
    r = random.Random(seed)
    return "".join(r.choice("01") for _ in range(n))


def test_channel_example(cli):
    assert cli(["channel", "--k", "2", "--p", "1"], "0011\n") == (0, "001\n", "")


def test_channel_trace_zero_indexed(cli):
    code, out, _ = cli(["channel", "--k", "2", "--mode", "extremal", "--emit-trace"], "0011\n")
    y, tr = out.splitlines()
    assert y == "001" and json.loads(tr)["positions"] == [2]


def test_usage_errors(cli):
    code, _, err = cli(["channel", "--k", "2", "--bogus"])
    assert code == 2 and json.loads(err)["error"] == "usage"
    assert cli([])[0] == 2


def test_version(cli):
    code, out, _ = cli(["--version"])
    assert code == 0 and "table schema" in out


def test_capacity_table(cli):
    code, out, _ = cli(["capacity", "--k-min", "2", "--k-max", "3", "--bounds", "all"])
    rows = [r.split("\t") for r in out.splitlines()]
    assert rows[0][:5] == ["k", "rll", "baseline", "log_xi", "log_nu"]
    assert rows[1][:5] == ["2", "0.0000000", "0.6942419", "0.7911962", "0.8128328"]
    assert json.loads(rows[1][6]) == [1, 0, -2, 1]


def test_capacity_json(cli):
    code, out, _ = cli(["capacity", "--k-min", "3", "--k-max", "3", "--bounds", "baseline", "--format", "json"])
    assert json.loads(out)[0]["baseline"]["log2_rho"] == "0.8791464"


def test_enumerate(cli):
    code, out, _ = cli(["enumerate", "--patterns", "00,11", "--n-max", "3"])
    assert out.splitlines() == ["n\tcount", "0\t1", "1\t2", "2\t2", "3\t2"]


@pytest.mark.parametrize("codec,n", [("single", 255), ("double", 127)])
def test_codec_roundtrip(cli, codec, n):
    m = rand_bits(n, 1)
    code, cw, _ = cli(["encode", "--codec", codec], m + "\n")
    assert code == 0
    code, out, _ = cli(["decode", "--codec", codec, "--report-redundancy"], cw)
    lines = out.splitlines()
    assert lines[0] == m
    assert json.loads(lines[1])["message_bits"] == n


def test_general_codec_through_channel(cli):
    m = rand_bits(1024, 2)
    _, cw, _ = cli(["encode", "--codec", "general"], m + "\n")
    for seed in range(50):
        _, y, _ = cli(["channel", "--k", "8", "--p", "0.5", "--seed", str(seed)], cw)
        if 1 <= len(cw) - len(y) <= 3:
            break
    assert len(y) < len(cw)
    assert cli(["decode", "--codec", "general"], y)[1] == m + "\n"


def test_decode_failure_exit_1(cli):
    code, _, err = cli(["decode", "--codec", "single"], "0000\n")
    assert code == 1 and json.loads(err)["error"] == "DecodeError"


def test_extremal_roundtrip(cli):
    _, x, _ = cli(["extremal-encode", "--n", "12", "--k", "2"], "1011001\n")
    _, y, _ = cli(["channel", "--k", "2", "--mode", "extremal"], x)
    assert cli(["extremal-decode", "--n", "12", "--k", "2"], y)[1] == "1011001\n"


def test_constrained_roundtrip(cli):
    flags = ["--n", "12", "--k", "4", "--l", "2", "--w", "8", "--rmax", "2", "--lmax", "8"]
    _, x, _ = cli(["constrained-encode", "--preset", "ceps", *flags], "010110011\n")
    assert cli(["constrained-decode", "--preset", "ceps", *flags], x)[1] == "010110011\n"
    assert cli(["constrained-encode", "--preset", "ceps", "--n", "12"], "01\n")[0] == 1


def test_verify_and_bounds(cli, tmp_path):
    f = tmp_path / "code.txt"
    f.write_text("000001\n000010\n")
    code, out, _ = cli(["verify", "--codefile", str(f), "--k", "3", "--t", "1"])
    rep = json.loads(out)
    assert code == 0 and rep["ok"] is False and rep["witness"][2] == "00000"
    code, out, _ = cli(["bounds", "--n", str(2**20), "--t", "2", "--C", "0.75"])
    lt = json.loads(out)["leading_terms"]
    assert lt["lower"] == 10 and lt["upper_gv"] == 20
