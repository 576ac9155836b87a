import subprocess
import sys

import pytest

from vhss import wire
from vhss.cli import main

SEED = "00" * 31 + "07"


@pytest.fixture(scope="module")
def flow(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    keys = d / "keys"
    assert main(["--seed", SEED, "--profile", "toy:7", "keygen", "--out", str(keys)]) == 0
    for name, v in (("x", "2"), ("z", "3")):
        assert main(["--seed", SEED, "encrypt", "--keys", str(keys), "--value", v,
                     "--out", str(d / f"{name}.ct")]) == 0
    prog = d / "sq.txt"
    prog.write_text("load r0 ct0\nmult r1 r0 ct1\noutput r1\n")
    for b in (1, 2):
        assert main(["eval", "--server", str(b), "--keys", str(keys), "--program", str(prog),
                     "--ct", str(d / "x.ct"), str(d / "z.ct"), "--out", str(d / f"y{b}")]) == 0
    return d


def test_verify_prints_product(flow, capsys):
    d = flow
    assert main(["verify", "--keys", str(d / "keys"), str(d / "y1"), str(d / "y2")]) == 0
    assert capsys.readouterr().out.strip() == "6"


def test_flipped_partial_rejects(flow, capsys, tmp_path):
    d = flow
    data = bytearray((d / "y1").read_bytes())
    data[-1] ^= 1
    bad = tmp_path / "y1bad"
    bad.write_bytes(bytes(data))
    assert main(["verify", "--keys", str(d / "keys"), str(bad), str(d / "y2")]) == 1
    assert "REJECT" in capsys.readouterr().out


def test_digest_mismatch_exit_3(flow, tmp_path):
    other = tmp_path / "keys"
    assert main(["--seed", SEED, "--profile", "toy", "keygen", "--out", str(other)]) == 0
    d = flow
    assert main(["verify", "--keys", str(other), str(d / "y1"), str(d / "y2")]) == 3
    assert main(["verify", "--keys", str(d / "keys"), str(tmp_path / "missing"), str(d / "y2")]) == 3


def test_validation_exit_2(flow, tmp_path):
    d = flow
    prog = tmp_path / "bad.txt"
    prog.write_text("load r0 ct0\nmult r1 r0 r0\noutput r1\n")
    assert main(["eval", "--server", "1", "--keys", str(d / "keys"), "--program", str(prog),
                 "--ct", str(d / "x.ct"), "--out", str(tmp_path / "y")]) == 2
    assert main(["encrypt", "--keys", str(d / "keys"), "--value", "1,2,3,4,5,6,7,8,9",
                 "--out", str(tmp_path / "c")]) == 2


def test_params_derive(capsys, tmp_path):
    assert main(["params", "derive"]) == 0
    out = capsys.readouterr().out
    assert "4096" in out and "673" in out
    path = tmp_path / "p.vhss"
    assert main(["params", "derive", "--bmax", "2^32", "--out", str(path)]) == 0
    prm = wire.read_file(path)
    assert (prm.n, prm.p.bit_length() - 1, prm.q.bit_length() - 1) == (8192, 99, 220)


def test_seeded_keygen_reproducible(tmp_path):
    for sub in ("a", "b"):
        assert main(["--seed", SEED, "keygen", "--out", str(tmp_path / sub)]) == 0
    for name in ("pk", "vk", "ek1", "ek2"):
        assert (tmp_path / "a" / f"{name}.vhss").read_bytes() == \
            (tmp_path / "b" / f"{name}.vhss").read_bytes()


def test_selftest_and_console_entry():
    res = subprocess.run([sys.executable, "-m", "vhss.cli", "--seed", SEED, "selftest"],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert res.stdout.startswith("selftest=ok y=6")


def test_game_command(capsys):
    assert main(["--seed", SEED, "game", "verifiability", "--trials", "8"]) == 0
    assert "pass=true" in capsys.readouterr().out
