import json
import subprocess
import sys

import pytest

from meanders.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_examples(capsys):
    assert run(capsys, "gen", "ci", "--d", "3")[1].strip() == "1,6,3,4,5,2,7"
    assert run(capsys, "gen", "threenose", "--r", "1", "--q", "2", "--kappa")[1].strip() == "1,8,5,4,9,10,3,6,7,2,11"
    code, out, _ = run(capsys, "gen", "threenose", "--p", "8", "--q", "4", "--suspend", "1", "--format", "json")
    assert code == 0 and json.loads(out)["n"] == 27
    assert run(capsys, "gen", "sigma", "--sigma", "1,4,3,2,5", "--rho")[1].strip() == "1,4,3,2,5"


def test_gen_errors(capsys):
    code, _, err = run(capsys, "gen", "threenose", "--p", "5", "--q", "3")
    assert code == 1 and "gcd" in err
    with pytest.raises(SystemExit) as exc:
        main(["gen", "ci"])
    assert exc.value.code == 2


def test_check(capsys):
    code, out, _ = run(capsys, "check", "1,2,3")
    assert code == 0 and "morse_counts: (2,1)" in out
    assert run(capsys, "check", "2,1,3")[0] == 1
    _, sigma, _ = run(capsys, "gen", "threenose", "--p", "8", "--q", "4")
    code, out, _ = run(capsys, "check", sigma.strip(), "--format", "json")
    report = json.loads(out)
    assert code == 1 and report["dissipative"] and report["jordan"] and not report["morse"] and report["i_min"] == -1


def test_check_rejects_garbage(capsys):
    assert run(capsys, "check", "1,2")[0] == 1


def test_graph_formats(capsys):
    code, out, _ = run(capsys, "graph", "1,6,3,4,5,2,7", "--pointed", "--format", "json")
    assert code == 0 and len(json.loads(out)["vertices"]) == 8
    code, out, _ = run(capsys, "graph", "1,6,3,4,5,2,7", "--pointed", "--labels")
    assert '"B_3" -> "A_3";' in out


def test_graph_lattice_size(capsys):
    _, sigma, _ = run(capsys, "gen", "threenose", "--r", "5", "--q", "4")
    code, out, _ = run(capsys, "graph", sigma.strip(), "--pointed", "--format", "json", "--labels")
    data = json.loads(out)
    assert code == 0 and len(data["vertices"]) == 60
    assert {"id": "A^0_0", "level": -1, "label": "A^0_0"} in data["vertices"]


def test_graph_reversor(capsys):
    _, sigma, _ = run(capsys, "gen", "threenose", "--p", "8", "--q", "4", "--suspend", "1")
    code, out, _ = run(capsys, "graph", sigma.strip(), "--reversor")
    assert code == 0 and out.strip().endswith("// reversor: none")
    code, out, _ = run(capsys, "graph", "1,6,3,4,5,2,7", "--reversor", "--format", "json")
    assert json.loads(out)["reversor"] != "none"


def test_graph_rejects_non_sturm(capsys):
    _, sigma, _ = run(capsys, "gen", "threenose", "--p", "8", "--q", "4")
    assert run(capsys, "graph", sigma.strip())[0] == 1


def test_round_trip_through_json(capsys):
    _, js, _ = run(capsys, "gen", "threenose", "--r", "2", "--q", "2", "--format", "json")
    assert run(capsys, "check", js.strip())[0] == 0
    assert run(capsys, "graph", js.strip())[0] == 0


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "lattice", "--rmax", "3", "--qmax", "3")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "verify", "equivalence", "--max", "5")
    assert code == 0
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_table(capsys):
    code, out, _ = run(capsys, "table", "7")
    assert code == 0 and '"[1,1,3]"' in out and out.startswith("b,p-1,q+1,d,rev,iso")
    code, out, err = run(capsys, "table", "63", "--golden")
    assert code == 0 and len(out.strip().splitlines()) == 23 and not err


def test_cfrac(capsys):
    code, out, _ = run(capsys, "cfrac", "expand", "63", "8")
    assert json.loads(out)["b"] == "[7,1,7]"
    code, out, _ = run(capsys, "cfrac", "info", "[2,2,2]")
    assert json.loads(out)["morse_counts"] == [1, 3, 6, 8, 6, 3, 1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "meanders", "gen", "ci", "--d", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "1,4,3,2,5"


def test_deterministic_output(capsys):
    first = run(capsys, "graph", "1,8,5,4,9,10,3,6,7,2,11", "--pointed")[1]
    second = run(capsys, "graph", "1,8,5,4,9,10,3,6,7,2,11", "--pointed")[1]
    assert first == second
