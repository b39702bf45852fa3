import json
import math
import subprocess
import sys

import numpy as np
import pytest

from vertexical.cli import main
from vertexical.fileformat import (
    ParseError, bundled_names, bundled_path, digest, format_crn, parse_crn, parse_interval,
)
from vertexical.intervals import PositiveInterval as PI
from netgen import random_system


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_interval():
    assert parse_interval("[1, 2]") == PI.closed(1, 2)
    assert parse_interval("(0, inf)") == PI.orthant()
    assert parse_interval(" (1.5e-1,2] ") == PI(0.15, 2, True, False)
    with pytest.raises(ValueError):
        parse_interval("[1, 2")


def test_parse_full_document():
    doc = parse_crn(
        "# comment\nspecies A B\nreaction 2A -> A ; k = [1, 1]\n"
        "reaction 2B -> A + B ; k = [3, 3]  # trailing\nreaction 0 -> B ; k = [1, 2]\n"
        "complex 3A\nallotment B = (1, 2)\nx0 = [1, 1.5]\nrepulsing = {A}\n"
    )
    N = doc.system
    assert N.species == ("A", "B") and N.network.n_reactions == 3
    assert (3.0, 0.0) in N.network.complexes
    assert N.allotment["B"] == PI.open(1, 2) and N.allotment["A"] == PI.orthant()
    assert N.base_point.tolist() == [1, 1.5] and doc.repulsing == {"A"}


@pytest.mark.parametrize("text,line", [
    ("reaction A -> B ; k = [1, 1]\n", 1),
    ("species A\nreaction A -> B ; k = [1, 1]\n", 2),
    ("species A\nreaction A -> 0 ; k = (0, 1)\n", 2),
    ("species A\nreaction A -> 0\n", 2),
    ("species A B\nx0 = [1]\n", 2),
    ("species A\nallotment C = (0, 1)\n", 2),
    ("species A\nfoo bar\n", 2),
    ("species A\nreaction A -> 0 ; k = [1, 1]\nreaction A -> 0 ; k = [2, 2]\n", 3),
    ("species A\nallotment A = [2, 3]\n", 0),
    ("species A\nrepulsing = {Q}\n", 2),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_crn(text)
    assert info.value.line_no == line


@pytest.mark.parametrize("name", bundled_names())
def test_round_trip_bundled(name):
    text = bundled_path(name).read_text()
    doc = parse_crn(text)
    again = parse_crn(format_crn(doc))
    assert again.system == doc.system and again.repulsing == doc.repulsing
    assert format_crn(again) == format_crn(doc)


@pytest.mark.parametrize("seed", range(25))
def test_round_trip_random(seed):
    N = random_system(np.random.default_rng(seed))
    assert parse_crn(format_crn(N)).system == N


def test_check_command(capsys, tmp_path):
    code, out, _ = run(["check", bundled_path("lotka")], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["classification"]["endotactic"] is False
    assert doc["input_digest"] == digest(bundled_path("lotka").read_bytes())
    code, out, _ = run(["check", bundled_path("lv-rev")], capsys)
    assert json.loads(out)["classification"]["strongly_endotactic"] is True
    report = tmp_path / "c.json"
    code, out, _ = run(["check", bundled_path("cycle3"), "--report", report], capsys)
    assert out == "" and json.loads(report.read_text())["classification"]["weakly_reversible"] is True


def test_check_verify_projective(capsys):
    code, out, _ = run(["check", bundled_path("lv-rev"), "--verify-projective"], capsys)
    checks = json.loads(out)["classification"]["projective_checks"]
    assert code == 0 and len(checks) == 2 and all(c["lost"] == [] for c in checks)


def test_reduce_command(capsys, tmp_path):
    out_file = tmp_path / "r.crn"
    code, out, _ = run(["reduce", bundled_path("lv-rev"), "--keep", "A", "--out", out_file], capsys)
    text = out_file.read_text()
    assert code == 0
    reactions = sorted(line.split(";")[0].strip() for line in text.splitlines() if line.startswith("reaction"))
    assert reactions == ["reaction 0 -> 0", "reaction 0 -> A", "reaction 2A -> A"]
    code, out, _ = run(["reduce", bundled_path("lv-rev-k3"), "--keep", "A"], capsys)
    assert "reaction 0 -> A ; k = [3, 12]" in out.splitlines()


def test_reduce_keep_all_is_byte_identical(capsys):
    for name in bundled_names():
        path = bundled_path(name)
        species = parse_crn(path.read_text()).network.species
        code, out, _ = run(["reduce", path, "--keep", *species], capsys)
        assert code == 0 and out == format_crn(parse_crn(path.read_text()))


def test_reduce_not_projectable(capsys):
    code, _, err = run(["reduce", bundled_path("lotka"), "--keep", "A"], capsys)
    assert code == 2 and "B" in err


def test_reduce_report(capsys, tmp_path):
    report = tmp_path / "r.json"
    run(["reduce", bundled_path("lv-rev-k3"), "--keep", "A", "--report", report], capsys)
    doc = json.loads(report.read_text())["reduction"]
    assert doc["removed"] == ["B"] and doc["merge_rule"] == "hull"
    assert {r["reaction"]: r["rate_hull"] for r in doc["reactions"]}["0 -> A"] == "[3, 12]"


def test_simulate_command(capsys, tmp_path):
    csv = tmp_path / "z.csv"
    code, out, _ = run(["simulate", bundled_path("zeroA"), "--t-end", 1, "--out", csv], capsys)
    rows = csv.read_text().splitlines()
    assert code == 0 and rows[0] == "t,x_A"
    assert abs(float(rows[-1].split(",")[1]) - 2) < 1e-9
    assert json.loads(out)["simulation"]["conservation_residual_max"] == 0
    run(["simulate", bundled_path("lv-rev"), "--t-end", 2, "--out", csv], capsys)
    values = np.loadtxt(csv, delimiter=",", skiprows=1)[:, 1:]
    assert np.max(np.abs(values - 1)) < 1e-9


def test_simulate_deterministic_bytes(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", bundled_path("birth-death"), "--scheme", "uniform-random", "--dt", 0.5,
            "--seed", 7, "--t-end", 3, "--h", 1e-2]
    _, out_a, _ = run(args + ["--out", a], capsys)
    _, out_b, _ = run(args + ["--out", b], capsys)
    assert a.read_bytes() == b.read_bytes() and out_a == out_b


def test_simulate_abort_exit_code(capsys):
    code, out, _ = run(["simulate", bundled_path("zeroA"), "--t-end", 2e12, "--h", 1e9], capsys)
    assert code == 1 and json.loads(out)["simulation"]["status"] == "ceiling"


def test_verify_vertexical_command(capsys):
    base = ["verify-vertexical", bundled_path("lv-rev"), "--keep", "A", "--eps", 0.1, "--tol", 1e-4,
            "--t-end", 0.5]
    code, out, _ = run(base + ["--x-init", "0.01,1"], capsys)
    doc = json.loads(out)["factorization"]
    assert code == 0 and doc["pass"] and doc["n_segments"] >= 1
    code, out, _ = run(base, capsys)
    doc = json.loads(out)["factorization"]
    assert code == 0 and doc["pass"] and doc["n_segments"] == 0
    code, out, _ = run(base + ["--x-init", "0.01,1", "--against", bundled_path("lv-rev-keepA-tampered")], capsys)
    doc = json.loads(out)["factorization"]
    assert code == 1 and not doc["pass"] and doc["max_residual"] > 0


def test_usage_errors(capsys, tmp_path):
    bad = tmp_path / "bad.crn"
    bad.write_text("species A\nreaction A -> Q ; k = [1, 1]\n")
    code, _, err = run(["check", bad], capsys)
    assert code == 2 and "line 2" in err
    assert run(["check", tmp_path / "missing.crn"], capsys)[0] == 2
    assert run(["reduce", bundled_path("lv-rev"), "--keep", "Q"], capsys)[0] == 2
    assert run(["verify-vertexical", bundled_path("lv-rev"), "--keep", "A", "B"], capsys)[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2


def test_check_too_many_reactions(capsys, tmp_path):
    big = tmp_path / "big.crn"
    big.write_text("species A\n" + "".join(f"reaction {i}A -> {i + 1}A ; k = [1, 1]\n" for i in range(1, 15)))
    assert run(["check", big], capsys)[0] == 2
    assert run(["check", big, "--max-reactions", 20], capsys)[0] == 0


def test_reports_have_no_timestamp_and_sorted_keys(capsys):
    _, out, _ = run(["check", bundled_path("rev-standin")], capsys)
    doc = json.loads(out)
    assert "timestamp" not in json.dumps(doc)
    assert out == json.dumps(doc, sort_keys=True, indent=2) + "\n"
    assert doc["schema"] == "vertexical.report/1"
    assert doc["classification"]["witnesses"]["strongly_endotactic"][-1] < 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "vertexical.cli", "check", str(bundled_path("cycle3"))],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["command"] == "check"


def test_json_clean_handles_inf(capsys, tmp_path):
    path = tmp_path / "p.json"
    run(["reduce", bundled_path("lv-rev"), "--keep", "A", "B", "--report", path], capsys)
    assert math.isfinite(json.loads(path.read_text())["reduction"]["base_point"][0])
