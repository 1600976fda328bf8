import io
import json
import subprocess
import sys

import pytest

from lquot import delta_series, real_character_series, twist, write_coefficients
from lquot.cli import RunConfig, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("coeffs")
    write_coefficients(delta_series(10_000), d / "delta.coeffs")
    write_coefficients(real_character_series(5, 2000), d / "chi5.coeffs")
    write_coefficients(twist(delta_series(3000), 5), d / "delta_x5.coeffs")
    wrong = (d / "chi5.coeffs").read_text().replace("# level: 5", "# level: 7")
    (d / "chi5_level7.coeffs").write_text(wrong)
    (d / "broken.coeffs").write_text("# family: modular\n# weight: 12\n1 1\n2 -24 7\n")
    return d


def test_psi_values():
    code, out, _ = run("psi", "--m", "0", "--z", "1")
    assert code == 0 and out.startswith("-0.5772156649015328606065")
    code, out, _ = run("psi", "--m", "2", "--z", "1", "--exact")
    assert (code, out) == (0, "-2*zeta(3)\n")
    code, out, _ = run("psi", "--z", "0.5+1j", "--prec", "256")
    assert code == 0 and out.strip().endswith("j")


def test_identity_delta(data_dir):
    code, out, _ = run("--format", "jsonl", "identity", "--data", str(data_dir / "delta.coeffs"),
                       "--s0", "6", "--m", "0", "--tol", "1e-8")
    record = json.loads(out)
    assert code == 0 and record["verdict"] == "pass" and record["residual"] < 1e-8
    assert set(record) >= {"command", "inputs", "residual", "verdict", "precision_bits", "assumptions"}


def test_identity_batch_order(data_dir):
    code, out, _ = run("--format", "jsonl", "identity",
                       "--data", str(data_dir / "chi5.coeffs"), "--data", str(data_dir / "delta_x5.coeffs"),
                       "--s0", "0.4")
    lines = [json.loads(line) for line in out.splitlines()]
    assert [r["inputs"]["data"].rsplit("/", 1)[-1] for r in lines] == ["chi5.coeffs", "delta_x5.coeffs"]
    assert all(r["verdict"] == "pass" for r in lines)


def test_identity_fail_exit(data_dir):
    # right coefficients, wrong conductor: the functional equation no longer holds
    code, out, _ = run("identity", "--data", str(data_dir / "chi5_level7.coeffs"), "--s0", "0.4")
    assert code == 1 and out.startswith("FAIL")


def test_certify_commands():
    assert run("certify", "modular", "--N", "1", "--D", "13", "--k", "12", "--s0", "6")[0] == 0
    assert run("certify", "modular", "--N", "1", "--D", "-11", "--k", "12", "--s0", "6")[0] == 1
    assert run("certify", "gld", "--N", "23", "--kappa", "1", "--s0", "1/2")[0] == 0
    assert run("certify", "gld", "--N", "22", "--kappa", "1", "--s0", "1/2")[0] == 1
    assert run("certify", "halfint", "--k", "13/2", "--N", "8")[0] == 0
    assert run("certify", "hilbert", "--k", "10", "--n", "3", "--dF", "49", "--s0", "5")[0] == 0
    # a smaller discriminant is admitted by the override but weakens the bound
    assert run("certify", "hilbert", "--k", "10", "--n", "3", "--dF", "23", "--s0", "5",
               "--min-disc", "3=23")[0] == 1
    assert run("certify", "siegel", "--g", "2", "--k", "20", "--s0", "10")[0] == 0


def test_rank_command():
    code, out, _ = run("rank", "--family", "modular", "--q", "7", "--k", "2", "--N", "1", "--D", "1")
    assert code == 0
    assert "detail.psipair_symbols: psipair(1/7) psipair(2/7) psipair(3/7)" in out
    code, _, _ = run("rank", "--family", "gld", "--kappa", "1", "--J", "2,3,5,7", "--s0", "1/2")
    assert code == 0


def test_closedform_command():
    code, out, _ = run("closedform", "--family", "siegel", "--g", "2", "--k", "20", "--s0", "10", "--exact")
    assert code == 0 and "8*log(2)" in out
    code, out, _ = run("closedform", "--family", "modular", "--k", "12", "--s0", "6", "--m", "1")
    assert (code, out) == (0, "0.0\n")


@pytest.mark.parametrize("argv,expected", [
    (["psi", "--m", "0", "--z", "-1"], 3),
    (["psi", "--m", "0", "--z", "0"], 3),
    (["psi"], 2),
    (["psi", "--z", "1", "--exact", "--m", "-1"], 3),
    (["psi", "--z", "x1"], 2),
    (["psi", "--z", "0.3", "--exact"], 0),
    (["psi", "--z", "1+2j", "--exact"], 2),
    (["--prec", "32", "psi", "--z", "1"], 2),
    (["--prec", "128", "--tol-exp", "100", "psi", "--z", "1"], 2),
    (["frobnicate"], 2),
    (["certify", "siegel", "--g", "3", "--k", "19", "--s0", "19/2"], 3),
    (["certify", "halfint", "--k", "9/2", "--N", "8"], 3),
    (["certify", "modular", "--N", "1", "--D", "12", "--k", "12", "--s0", "6"], 0),
    (["certify", "modular", "--N", "1", "--D", "9", "--k", "12", "--s0", "6"], 3),
    (["certify", "gld", "--N", "23", "--s0", "1/2"], 2),
    (["rank", "--family", "gld", "--kappa", "1", "--J", "2,4", "--s0", "1/2"], 3),
    (["rank", "--family", "modular", "--k", "2", "--q", "5"], 3),
    (["rank", "--family", "modular", "--k", "2"], 2),
    (["rank", "--family", "gld", "--kappa", "1", "--J", "2,x", "--s0", "1/2"], 2),
    (["closedform", "--family", "modular", "--k", "12", "--s0", "13"], 3),
    (["identity", "--data", "/nonexistent/file.coeffs", "--s0", "6"], 4),
])
def test_exit_code_matrix(argv, expected):
    assert run(*argv)[0] == expected


def test_format_error_exit(data_dir):
    code, _, err = run("identity", "--data", str(data_dir / "broken.coeffs"), "--s0", "6")
    assert code == 4 and "line" in err


def test_jsonl_deterministic(data_dir):
    argv = [sys.executable, "-m", "lquot", "--format", "jsonl", "identity",
            "--data", str(data_dir / "chi5.coeffs"), "--s0", "0.4", "--m", "1"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first.endswith(b"\n")
    argv = ["certify", "hilbert", "--k", "10", "--n", "5", "--dF", "14641", "--s0", "5"]
    assert run("--format", "jsonl", *argv)[1] == run("--format", "jsonl", *argv)[1]


def test_options_after_subcommand():
    a = run("--prec", "256", "psi", "--z", "1/3")[1]
    b = run("psi", "--z", "1/3", "--prec", "256")[1]
    assert a == b


def test_run_config():
    cfg = RunConfig(192, 90, ["a"], "jsonl")
    assert cfg.precision.bits == 192
    with pytest.raises(ValueError):
        RunConfig(63)
