"""Command-line round trips, determinism, and exit codes."""

import csv
import io

import numpy as np
import pytest

from qpad import qcore
from qpad.cli import main, read_ciphertext, read_key, write_key
from qpad.qcore import DensityMatrix
from qpad.schemes import Key


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _write_plus_state(path, n=2):
    dim = 1 << n
    with open(path, "w") as fh:
        qcore.write_state(fh, DensityMatrix.pure(np.ones(dim)))


# ---------------------------------------------------------------------------
# set building and certification


def test_make_set_and_certify(tmp_path, capsys):
    out = tmp_path / "s.sbset"
    code, text, _ = _run(capsys, ["make-set", "--out", str(out), "--kind", "aghp",
                                  "--bits", "4", "--field", "3"])
    assert code == 0
    assert "bias=0.375" in text
    code, text, _ = _run(capsys, ["certify", "--set", str(out), "--histogram"])
    assert code == 0
    assert "max_bias=0.375" in text
    assert "met" in text


def test_make_set_search_and_full(tmp_path, capsys):
    out = tmp_path / "g.sbset"
    code, text, _ = _run(capsys, ["make-set", "--out", str(out), "--kind", "search",
                                  "--bits", "4", "--size", "8", "--seed", "2"])
    assert code == 0
    code, _, _ = _run(capsys, ["certify", "--set", str(out)])
    assert code == 0
    code, text, _ = _run(capsys, ["make-set", "--out", str(tmp_path / "f.sbset"),
                                  "--kind", "full", "--bits", "3"])
    assert code == 0
    assert "bias=0" in text


def test_make_set_argument_errors(tmp_path, capsys):
    code, _, err = _run(capsys, ["make-set", "--out", str(tmp_path / "x"), "--kind", "aghp"])
    assert code == 2
    assert "error" in err


# ---------------------------------------------------------------------------
# key files


def test_key_file_round_trip(tmp_path):
    path = tmp_path / "k.qkey"
    write_key(path, Key("A", 37), 3)
    key, n = read_key(path)
    assert key == Key("A", 37)
    assert n == 3
    write_key(path, Key("C", (4, 11)), 2)
    key, n = read_key(path)
    assert key == Key("C", (4, 11))
    assert n == 2


def test_key_file_rejects_garbage(tmp_path):
    path = tmp_path / "bad.qkey"
    path.write_text("QKEY v1 scheme=D n=2\n0x0\n")
    with pytest.raises(ValueError):
        read_key(path)
    path.write_text("not a key\n")
    with pytest.raises(ValueError):
        read_key(path)
    path.write_text("QKEY v1 scheme=C n=2\n0x1\n")  # C needs two fields
    with pytest.raises(ValueError):
        read_key(path)


# ---------------------------------------------------------------------------
# encrypt / decrypt round trips through files


@pytest.mark.parametrize("scheme,extra", [
    ("A", []),
    ("B", ["--k", "3"]),
    ("C", []),
])
def test_cli_round_trip(tmp_path, capsys, scheme, extra):
    plain = tmp_path / "in.qs"
    _write_plus_state(plain)
    keyf = tmp_path / "k.qkey"
    ct = tmp_path / "c.qct"
    back = tmp_path / "out.qs"
    code, _, _ = _run(capsys, ["make-key", "--scheme", scheme, "--n", "2",
                               "--seed", "5", "--out", str(keyf)] + extra)
    assert code == 0
    code, _, _ = _run(capsys, ["encrypt", "--scheme", scheme, "--key", str(keyf),
                               "--in", str(plain), "--out", str(ct)] + extra)
    assert code == 0
    code, _, _ = _run(capsys, ["decrypt", "--scheme", scheme, "--key", str(keyf),
                               "--in", str(ct), "--out", str(back)] + extra)
    assert code == 0
    orig = qcore.read_state(str(plain))
    got = qcore.read_state(str(back))
    assert np.max(np.abs(orig.mat - got.mat)) < 1e-12


def test_cli_scheme_b_ciphertext_has_tag(tmp_path, capsys):
    plain = tmp_path / "in.qs"
    _write_plus_state(plain)
    keyf = tmp_path / "k.qkey"
    ct = tmp_path / "c.qct"
    _run(capsys, ["make-key", "--scheme", "B", "--n", "2", "--k", "3",
                  "--seed", "1", "--out", str(keyf)])
    _run(capsys, ["encrypt", "--scheme", "B", "--k", "3", "--key", str(keyf),
                  "--in", str(plain), "--out", str(ct), "--seed", "4"])
    parsed = read_ciphertext(str(ct), "B")
    assert parsed.tag is not None and parsed.tag >= 1
    assert parsed.state.dim == 4


def test_cli_scheme_c_embeds_to_prime_dimension(tmp_path, capsys):
    plain = tmp_path / "in.qs"
    _write_plus_state(plain)
    keyf = tmp_path / "k.qkey"
    ct = tmp_path / "c.qct"
    _run(capsys, ["make-key", "--scheme", "C", "--n", "2", "--seed", "0", "--out", str(keyf)])
    _run(capsys, ["encrypt", "--scheme", "C", "--key", str(keyf),
                  "--in", str(plain), "--out", str(ct)])
    assert qcore.read_state(str(ct), validate=False).dim == 5


def test_cli_wrong_scheme_key_is_an_error(tmp_path, capsys):
    plain = tmp_path / "in.qs"
    _write_plus_state(plain)
    keyf = tmp_path / "k.qkey"
    _run(capsys, ["make-key", "--scheme", "A", "--n", "2", "--seed", "0", "--out", str(keyf)])
    code, _, err = _run(capsys, ["encrypt", "--scheme", "B", "--key", str(keyf),
                                 "--in", str(plain), "--out", str(tmp_path / "c")])
    assert code == 2
    assert "scheme" in err


# ---------------------------------------------------------------------------
# verify


def test_verify_all_schemes_pass(tmp_path, capsys):
    out = tmp_path / "report.txt"
    code, text, _ = _run(capsys, ["verify", "--scheme", "all", "--n", "2",
                                  "--trials", "1", "--seed", "3", "--out", str(out)])
    assert code == 0
    assert "# result: PASS" in text
    assert out.read_text() == text  # --out mirrors stdout exactly


def test_verify_reruns_are_byte_identical(tmp_path, capsys, monkeypatch):
    argv = ["verify", "--scheme", "C", "--n", "2", "--trials", "2", "--seed", "9",
            "--format", "csv"]
    code1, text1, _ = _run(capsys, argv)
    code2, text2, _ = _run(capsys, argv)
    assert code1 == code2 == 0
    assert text1 == text2
    monkeypatch.setenv("QPAD_THREADS", "2")
    code3, text3, _ = _run(capsys, argv)
    assert code3 == 0
    assert text3 == text1  # thread count never changes the report


def test_verify_csv_parses_losslessly(capsys):
    code, text, _ = _run(capsys, ["verify", "--scheme", "A", "--n", "2",
                                  "--trials", "1", "--seed", "0", "--format", "csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows
    for row in rows:
        # every numeric field reads back as a float and the bound holds
        dist = float(row["trace_dist"])
        bound = float(row["bound"])
        assert row["status"] == "PASS"
        assert dist <= bound + 1e-8
        assert float(row["margin"]) == pytest.approx(bound - dist, abs=1e-15)


def test_verify_table_has_config_headers(capsys):
    code, text, _ = _run(capsys, ["verify", "--scheme", "B", "--n", "2",
                                  "--epsilon", "0.5", "--trials", "0", "--seed", "0"])
    assert code == 0
    assert "# scheme B:" in text
    assert "backend=" in text
    assert "k=4" in text  # clamped formula k = min(2n, n + 2 log2(1/eps))


def test_verify_requires_n(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--scheme", "A"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# keylen


def test_keylen_table_and_csv(capsys):
    code, text, _ = _run(capsys, ["keylen", "--n-list", "128", "--epsilon-list", "0.0009765625"])
    assert code == 0
    assert "162" in text
    code, text, _ = _run(capsys, ["keylen", "--n-list", "16,64", "--epsilon-list",
                                  "0.25,0.00390625", "--format", "csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 4
    for row in rows:
        assert int(row["C_min"]) == min(int(row["C_aghp"]), int(row["C_amplified"]))


def test_missing_input_file_is_exit_2(capsys):
    code, _, err = _run(capsys, ["certify", "--set", "/does/not/exist"])
    assert code == 2
    assert "error" in err
