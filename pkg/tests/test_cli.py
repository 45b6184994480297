import json

import pytest

from hamlink.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_gen_analyze_roundtrip(tmp_path, capsys):
    out = tmp_path / "p7.txt"
    code, _ = run(capsys, "gen", "--model", "paley", "--n", "7", "--seed", "0", "--out", str(out))
    assert code == 0
    code, text = run(capsys, "analyze", str(out))
    assert code == 0
    report = json.loads(text)
    assert report["strong_connectivity"] == 3
    assert report["strongly_connected"] is True


def test_gen_determinism(tmp_path, capsys):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    run(capsys, "gen", "--model", "uniform", "--n", "40", "--seed", "5", "--out", str(a))
    run(capsys, "gen", "--model", "uniform", "--n", "40", "--seed", "5", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_report_determinism(tmp_path, capsys):
    out = tmp_path / "t.txt"
    run(capsys, "gen", "--model", "uniform", "--n", "30", "--seed", "1", "--out", str(out))
    _, text1 = run(capsys, "analyze", str(out))
    _, text2 = run(capsys, "analyze", str(out))
    assert text1 == text2


def test_audit_cli(capsys):
    code, text = run(capsys, "audit", "--k", "3")
    assert code == 0
    data = json.loads(text)
    assert data["passed"] is True
    assert data["N"] == "100*2^(2^(2^(2^10)))"


def test_oracle_cli(tmp_path, capsys):
    out = tmp_path / "p7.txt"
    run(capsys, "gen", "--model", "paley", "--n", "7", "--seed", "0", "--out", str(out))
    code, text = run(capsys, "oracle", "hamcycle", str(out))
    assert code == 0 and json.loads(text)["cycle"] is not None
    code, text = run(capsys, "oracle", "independence", str(out))
    assert json.loads(text)["value"] == 1


def test_canonical_and_verify_roundtrip(tmp_path, capsys):
    host = tmp_path / "host.txt"
    struct = tmp_path / "linker.json"
    code, _ = run(capsys, "canonical", "--t", "1", "--seed", "3",
                  "--out", str(host), "--structure", str(struct))
    assert code == 0
    code, text = run(capsys, "verify", str(struct), "--tournament", str(host))
    assert code == 0
    assert json.loads(text)["verified"] is True


def test_dominate_cli(tmp_path, capsys):
    host = tmp_path / "t.txt"
    run(capsys, "gen", "--model", "uniform", "--n", "2200", "--seed", "4", "--out", str(host))
    dom = tmp_path / "dom.json"
    code, text = run(capsys, "dominate", str(host), "--out", str(dom))
    assert code == 0
    assert json.loads(text)["verified"] is True
    code, text = run(capsys, "verify", str(dom), "--tournament", str(host))
    assert code == 0


def test_moon_cli(tmp_path, capsys):
    out = tmp_path / "p7.txt"
    run(capsys, "gen", "--model", "paley", "--n", "7", "--seed", "0", "--out", str(out))
    code, text = run(capsys, "moon", str(out))
    assert code == 0 and json.loads(text)["hamiltonian"] is True


def test_usage_error(capsys):
    assert main(["gen", "--model", "nope", "--seed", "1", "--out", "x"]) == 2
    assert main(["analyze", "/nonexistent/file.txt"]) == 2
