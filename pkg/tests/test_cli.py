"""Command-line interface: flags, output formats, determinism, exit codes."""

import json

import pytest

from qmzv.cli import main

SMALL = "5,7,11,13,17,19"


def run_cli(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_hsum_command(capsys):
    code, out = run_cli(capsys, "hsum", "--variant", "plain", "--p", "5", "--n", "1", "--index", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["residue"] == ["2", "-2"]  # 2 - 2q


def test_hsum_generalized(capsys):
    code, out = run_cli(capsys, "hsum", "--p", "5", "--n", "1", "--index", "2,1", "--s", "s=1,1")
    assert code == 0
    assert json.loads(out)["variant"] == "generalized"


def test_verify_single_and_exit_codes(capsys):
    code, out = run_cli(capsys, "verify", "--id", "wt1", "--p", "5", "--n", "1")
    assert code == 0
    lines = [l for l in out.strip().splitlines() if l and not l.startswith("#")]
    assert json.loads(lines[0])["pass"] is True
    code, _ = run_cli(capsys, "verify", "--id", "duality", "--p", "7", "--n", "2", "--index", "2,1")
    assert code == 0
    code, _ = run_cli(capsys, "verify", "--id", "cyclic", "--p", "5", "--n", "1", "--index", "2,1", "--star")
    assert code == 0
    code, _ = run_cli(capsys, "verify", "--id", "bradley", "--n-upper", "3", "--index", "2")
    assert code == 0
    code, _ = run_cli(capsys, "verify", "--id", "theta", "--l", "1", "--kpow", "2", "--m", "2")
    assert code == 0


def test_dims_csv_and_determinism(capsys, tmp_path):
    args = ["dims", "--family", "O", "--weights", "1..3", "--primes", SMALL,
            "--cache-dir", str(tmp_path), "--jobs", "1"]
    code, out1 = run_cli(capsys, *args)
    assert code == 0
    header, *rows = out1.strip().splitlines()
    assert header.startswith("family,k,rank_full")
    dims = [r.split(",")[4] for r in rows]
    assert dims == ["0", "0", "1"]
    code, out2 = run_cli(capsys, *args)
    assert out1 == out2  # byte-identical on identical config


def test_dims_json(capsys, tmp_path):
    code, out = run_cli(capsys, "dims", "--family", "O", "--weights", "2", "--primes", SMALL,
                        "--format", "json", "--no-cache", "--jobs", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload[0]["dim_tilde"] == 0 and payload[0]["stabilized"] is True


def test_mine_emit(capsys, tmp_path):
    out_file = tmp_path / "rels.json"
    code, _ = run_cli(capsys, "mine", "--family", "O", "--weight", "1", "--primes", SMALL,
                      "--emit", str(out_file), "--no-cache", "--jobs", "1")
    assert code == 0
    rels = json.loads(out_file.read_text())
    assert len(rels) == 1
    assert rels[0]["coeffs"] == ["2/1", "1/1", "-1/1"]


def test_member_command(capsys, tmp_path):
    target = tmp_path / "target.json"
    span = tmp_path / "span.json"
    target.write_text(json.dumps({
        "terms": [{"coeff": "1", "descriptor": {"index": [1], "h": 0, "j": 0}}]
    }))
    span.write_text(json.dumps({"family": "O", "weight": 1, "v_scaled": True}))
    code, out = run_cli(capsys, "member", "--target", str(target), "--span", str(span),
                        "--no-cache", "--jobs", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload["member"] is True
    assert payload["coefficients"] == ["-1/2", "1/2"]


def test_limits_csv(capsys):
    code, out = run_cli(capsys, "limits", "--index", "2", "--m", "40,80", "--order", "1",
                        "--digits", "30")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,l,re_alpha,im_alpha,abs_delta"
    assert len(lines) == 3
    d40, d80 = (float(line.split(",")[4]) for line in lines[1:])
    assert d80 < d40


def test_wordquotient_command(capsys, tmp_path):
    export = tmp_path / "matrix.txt"
    code, out = run_cli(capsys, "wordquotient", "--weight", "3", "--export", str(export))
    assert code == 0
    assert out.strip().splitlines()[-1] == "1"
    assert export.read_text().startswith("1,1,1\t1,2\t2,1\t3")


def test_unknown_subcommand_rejected():
    with pytest.raises(SystemExit):
        main(["nonsense"])
