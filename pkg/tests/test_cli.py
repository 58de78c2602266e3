import io
import json
import subprocess
import sys

import pytest

from cosphere import cli


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


@pytest.mark.parametrize(
    "argv, code",
    [
        (["sphere", "r7_pair"], cli.EXIT_OK),
        (["taut", "r7_pair"], cli.EXIT_REFUTED),
        (["round", "t7_pair2"], cli.EXIT_OK),
        (["round", "t7_pair1"], cli.EXIT_REFUTED),
        (["classify", "heisenberg"], cli.EXIT_OK),
        (["reeb", "t3"], cli.EXIT_OK),
        (["class", "lie7"], cli.EXIT_OK),
        (["distribution", "heisenberg"], cli.EXIT_REFUTED),
        (["symplectize", "heisenberg", "--name", "s1"], cli.EXIT_OK),
        (["couple", "heisenberg"], cli.EXIT_OK),
        (["couple", "r7_pair"], cli.EXIT_REFUTED),
        (["recursion", "heisenberg"], cli.EXIT_OK),
        (["ac-verify", "lie7"], cli.EXIT_OK),
        (["ac3-verify", "lie7"], cli.EXIT_OK),
        (["ntensors", "t7_quaternionic"], cli.EXIT_OK),
        (["lambda", "lie7"], cli.EXIT_OK),
        (["lambda", "lie7", "--point", "3/5,4/5,0"], cli.EXIT_OK),
        (["hyperholo", "hyperkahler_r4"], cli.EXIT_OK),
        (["sphere", "dim5_random:3"], cli.EXIT_REFUTED),
    ],
)
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_error_exit_codes(tmp_path):
    assert run("lambda", "lie7", "--point", "1,1,0")[0] == cli.EXIT_NOT_ON_SPHERE
    assert run("sphere", "no_such_thing")[0] == cli.EXIT_UNKNOWN_INPUT
    assert run("frobnicate", "t3")[0] == cli.EXIT_USAGE
    assert run("sphere")[0] == cli.EXIT_USAGE
    assert run("sphere", "t3", "--ring", "complex")[0] == cli.EXIT_USAGE
    bad = tmp_path / "bad.frame"
    bad.write_text("basis a b\nbracket a c = 1 b\n")
    assert run("sphere", str(bad))[0] == cli.EXIT_PARSE
    jac = tmp_path / "jac.frame"
    jac.write_text("basis a b c\nbracket a b = 1 c\nbracket b c = 1 b\n")
    assert run("sphere", str(jac))[0] == cli.EXIT_JACOBI
    even = tmp_path / "even.frame"
    even.write_text("basis a b c d\nform eta 1 = 1 a\nform w 2 = 1 b^c\npair s = eta w\n")
    assert run("verify", str(even))[0] == cli.EXIT_DIMENSION
    flat = tmp_path / "flat.frame"
    flat.write_text("basis a b c\nform eta 1 = 1 a\nform w 2 = 1 a^b\npair s = eta w\n")
    assert run("verify", str(flat))[0] == cli.EXIT_STRUCTURE


def test_refuted_product_input(tmp_path):
    path = tmp_path / "commuting.frame"
    path.write_text("basis a b c d\nform w1 2 = 1 a^b 1 c^d\nform w2 2 = 1 a^c -1 b^d\nforms hk = w1 w2 w1\n")
    assert run("hyperholo", str(path))[0] == cli.EXIT_REFUTED


def test_option_placement_is_free():
    a = run("--ring", "lambda:1", "verify", "t7_pair2")
    b = run("verify", "--ring", "lambda:1", "t7_pair2")
    assert a == b and a[0] == cli.EXIT_OK


def test_json_to_stdout_is_valid():
    code, text = run("sphere", "r7_pair", "--json", "-")
    data = json.loads(text)
    assert code == cli.EXIT_OK
    assert data["command"] == "sphere" and data["results"][0]["verdict"] == "VerifiedByIsolation"


def test_json_file_and_determinism(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    run("taut", "t7_pair2", "--json", str(p1))
    run("taut", "t7_pair2", "--json", str(p2))
    a, b = json.loads(p1.read_text()), json.loads(p2.read_text())
    a.pop("timestamp"), b.pop("timestamp")
    assert a == b


def test_text_output_mentions_verdict():
    code, text = run("taut", "r7_pair")
    assert "RefutedWithWitness" in text and "digest" in text


def test_examples_table():
    code, text = run("examples")
    assert code == cli.EXIT_OK
    assert text.rstrip().endswith(f"{len(cli.example_checks())}/{len(cli.example_checks())} checks pass")


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "cosphere.cli", "sphere", "t3"], capture_output=True, text=True)
    assert proc.returncode == 0 and "VerifiedExact" in proc.stdout
