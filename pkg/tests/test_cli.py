import subprocess
import sys

import pytest

from preprojective.cli import build_parser, main


def run(*argv):
    lines = []
    code = main(list(argv), out=lines.append)
    return code, lines


def trailers(lines):
    return dict(l[1:].split(":", 1) for l in lines if l.startswith("#"))


def test_hh0_lambda_d4_f2():
    code, lines = run("hh0", "--quiver", "builtin:D4", "--algebra", "mult", "--field", "F2")
    assert code == 0
    assert trailers(lines)["total"] == "4"


def test_hh0_pi_d4_integers():
    code, lines = run("hh0", "--quiver", "builtin:D4", "--field", "Z")
    t = trailers(lines)
    assert code == 0
    assert t["method"] == "integral-SNF"
    assert t["torsion.4"] == "2^1"
    assert t["exponents.4"] == "2"


def test_gb_trailer():
    code, lines = run("gb", "--quiver", "builtin:D4")
    t = trailers(lines)
    assert code == 0 and t["complete"] == "true"
    assert t["dims"] == "0:4,1:6,2:8,3:6,4:4"


def test_gb_capped_is_incomplete():
    code, lines = run("gb", "--quiver", "builtin:E6", "--max-degree", "3")
    t = trailers(lines)
    assert code == 0
    assert t["complete"] == "false"
    assert t["dims"] == "0:6,1:10,2:14,3:18"


def test_nf_and_member():
    code, lines = run("nf", "--quiver", "builtin:D4", "--poly", "a*a* + e_1")
    assert code == 0 and lines[0] == "e_1"
    code, lines = run("member", "--quiver", "builtin:D4", "--poly", "alpha*beta")
    assert trailers(lines)["member"] == "false"
    code, lines = run("member", "--quiver", "builtin:D4", "--relations", "mult", "--field", "F2", "--poly", "alpha + beta + gamma + gamma*beta")
    assert trailers(lines)["member"] == "true"


def test_dims():
    code, lines = run("dims", "--quiver", "builtin:E7")
    assert code == 0 and lines[0] == "N=120 M=61"


def test_verify():
    code, lines = run("verify", "--paper", "E6")
    assert code == 0 and trailers(lines)["status"] == "pass"
    code, lines = run("verify", "--paper", "D5", "--field", "F3")
    assert code == 0


def test_verify_bad_prime_fails_to_load():
    code, lines = run("verify", "--paper", "E8", "--field", "F5")
    assert code == 1
    assert trailers(lines)["load"] == "fail"


def test_apply(tmp_path):
    m = tmp_path / "scale.map"
    m.write_text("arrow a -> 2*a\narrow a* -> 1/2*a*\n")
    code, lines = run("apply", "--quiver", "builtin:D4", "--map", str(m), "--poly", "a*a* + b* * b")
    assert code == 0
    assert lines[0] == "b* * b + a * a*"
    code, lines = run("apply", "--quiver", "builtin:D4", "--map", str(m), "--poly", "a*a*", "--reduce", "add")
    assert trailers(lines)["terms"] == "0"


def test_quiver_file(tmp_path):
    f = tmp_path / "a3.quiver"
    f.write_text("vertex 1\nvertex 2\nvertex 3\narrow x 1 2\narrow y 2 3\n")
    code, lines = run("gb", "--quiver", str(f))
    assert code == 0
    assert sum(int(p.split(":")[1]) for p in trailers(lines)["dims"].split(",")) == 10


@pytest.mark.parametrize(
    "argv",
    [
        ["hh0"],
        ["frobnicate"],
        ["gb", "--quiver", "builtin:D4", "--bogus"],
        ["gb", "--quiver", "builtin:D4", "--field", "F4"],
        ["gb", "--quiver", "builtin:Q9"],
        ["nf", "--quiver", "builtin:D4", "--poly", "a*b"],
        ["verify", "--paper", "F4"],
        ["reproduce-paper", "--only", "nonsense"],
    ],
)
def test_usage_errors_exit_two(argv):
    assert main(argv, out=lambda s: None) == 2


def test_nf_of_letter_is_itself():
    code, lines = run("nf", "--quiver", "builtin:D4", "--poly", "a")
    assert code == 0 and lines[0] == "a"
    assert trailers(lines) == {"zero": "false", "terms": "1"}


def test_help_for_every_subcommand(capsys):
    parser = build_parser()
    subs = next(a for a in parser._actions if a.dest == "command").choices
    assert set(subs) == {"gb", "nf", "member", "hh0", "dims", "verify", "apply", "reproduce-paper"}
    for name in subs:
        assert main([name, "--help"]) == 0
        assert "usage" in capsys.readouterr().out


def test_trailers_are_deterministic():
    a = run("hh0", "--quiver", "builtin:E6", "--algebra", "mult", "--field", "Z")[1]
    b = run("hh0", "--quiver", "builtin:E6", "--algebra", "mult", "--field", "Z")[1]
    assert [l for l in a if l.startswith("#")] == [l for l in b if l.startswith("#")]


def test_reproduce_subset(tmp_path):
    code, lines = run("reproduce-paper", "--only", "relations,arm", "--quiet", "--output-dir", str(tmp_path))
    t = trailers(lines)
    assert code == 0
    assert t["check.relations"] == "pass" and t["check.arm-nilpotency"] == "pass"
    assert "digest" in t and t["status"] == "pass"
    assert (tmp_path / "reproduce-paper.txt").read_text().splitlines() == lines


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "preprojective.cli", "dims", "--quiver", "builtin:D4"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "#N:" in r.stdout
