import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from allab import catalog
from allab.cli import main, run
from allab.lattice import is_isomorphic, load
from allab.report import Report

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"


def fx(name):
    return str(FIX / name)


def cli(capsys, *argv):
    status = main(list(argv))
    return status, capsys.readouterr().out


def test_m3_adjoint_and_variety(capsys):
    status, out = cli(capsys, "check", "--in", fx("m3.json"), "--adjoint", "--variety")
    assert status == 0
    assert "adjoint: holds (125 triples)" in out
    assert "variety: holds" in out


def test_theta_on_second_table(capsys):
    status, out = cli(capsys, "ideals", "--in", fx("fig2_second.json"), "--theta", "e,1")
    assert status == 0
    line = next(l for l in out.splitlines() if l.startswith("theta blocks"))
    blocks = {frozenset(b.split(",")) for b in line.split(": ", 1)[1].split(" | ")}
    assert blocks == {frozenset(b) for b in (["e", "1"], ["a", "f"], ["b", "g"], ["c", "h"], ["0", "d"])}


def test_n5_not_in_variety(capsys):
    status, out = cli(capsys, "check", "--in", fx("n5.json"), "--variety")
    assert status == 1
    assert "identity (e) fails at x=c, y=a" in out


def test_ideal_identities_file(capsys):
    status, out = cli(capsys, "identities", "--in", fx("fig2_first.json"),
                      "--file", fx("ideal_identities.txt"))
    assert status == 0
    assert out.count(": holds") == 8


def test_identities_failing(tmp_path, capsys):
    f = tmp_path / "ids.txt"
    f.write_text("x = y\np(x, x, z) = z\n")
    status, out = cli(capsys, "identities", "--in", fx("m3.json"), "--file", str(f))
    assert status == 1
    assert "line 1: x = y: fails: fails at x=0, y=a" in out
    assert "line 2: p(x, x, z) = z: holds" in out


@pytest.mark.parametrize("fname", ["conditions.txt", "term_witnesses.txt"])
def test_shipped_identity_files_hold(capsys, fname):
    for lat in ("m3.json", "fig2_first.json", "fig2_second.json", "m5.json"):
        status, _ = cli(capsys, "identities", "--in", fx(lat), "--file", fx(fname))
        assert status == 0, lat


def test_conditions_and_forcing(capsys):
    status, out = cli(capsys, "check", "--in", fx("n5.json"), "--conditions", "--forcing")
    assert status == 1
    assert "condition (e): fails: fails at x=c, y=a" in out
    assert "groups agree: holds" in out
    # N5's complementation is not adjoint, so the implication is vacuous
    assert "forcing: holds (vacuous)" in out
    # spelling kept for compatibility
    status2, out2 = cli(capsys, "check", "--in", fx("n5.json"), "--theorem1", "--lemma1")
    assert (status2, out2.splitlines()[1:]) == (status, out.splitlines()[1:])


def test_check_defaults_to_everything(capsys):
    status, out = cli(capsys, "check", "--in", fx("fig2_first.json"))
    assert status == 0
    for name in ("adjoint", "variety", "condition (a)", "groups agree", "forcing"):
        assert f"\n{name}: holds" in out


def test_conditions_need_complement(tmp_path, capsys):
    L = catalog.m3().with_unary([0] * 5)
    path = tmp_path / "flat.json"
    L.save(path)
    status, out = cli(capsys, "check", "--in", str(path), "--conditions")
    assert status == 2
    status, out = cli(capsys, "check", "--in", str(path), "--variety")
    assert status == 1 and "not a complementation" in out


def test_validate_and_classify(capsys):
    status, out = cli(capsys, "validate", "--in", fx("fig2_first.json"))
    assert status == 0 and "elements: 10" in out and "complemented: yes" in out
    status, out = cli(capsys, "classify", "--in", fx("fig2_first.json"))
    assert status == 0
    assert "unary_is_involution: true" in out
    assert "unary_is_antitone: false at x=a, y=f, x'=g, y'=c" in out


def test_congruences(capsys):
    status, out = cli(capsys, "congruences", "--in", fx("fig2_first.json"), "--list")
    assert status == 0 and "count: 3" in out
    status, out = cli(capsys, "congruences", "--in", fx("fig2_first.json"), "--properties")
    assert status == 0
    assert "subdirectly_irreducible: true" in out and "simple: false" in out
    assert "monolith: 0,a,b,c,e | d,f,g,h,1" in out
    status, out = cli(capsys, "congruences", "--in", fx("m4.json"), "--malcev", "--regularity-terms")
    assert status == 0 and "fails" not in out


def test_congruences_terms_need_variety(capsys):
    status, out = cli(capsys, "congruences", "--in", fx("n5.json"), "--malcev")
    assert status == 2 and "not in the variety" in out


def test_ideals_list_closure_coincidence(capsys):
    status, out = cli(capsys, "ideals", "--in", fx("fig2_second.json"), "--list")
    assert status == 0 and "count: 4" in out
    status, out = cli(capsys, "ideals", "--in", fx("fig2_first.json"), "--closure", "d")
    assert "closure: {d,f,g,h,1}" in out
    status, out = cli(capsys, "ideals", "--in", fx("fig2_first.json"), "--coincidence")
    assert status == 0 and "3 ideals = 3 kernels" in out


def test_theta_rejects_non_ideal(capsys):
    status, out = cli(capsys, "ideals", "--in", fx("fig2_first.json"), "--theta", "e,1")
    assert status == 2 and "not an ideal" in out


def test_generate(tmp_path, capsys):
    out_file = tmp_path / "m4.json"
    status, out = cli(capsys, "generate", "m_n", "--n", "4", "--perm", "(1 2)(3 4)",
                      "--out", str(out_file))
    assert status == 0 and "variety: yes" in out
    assert is_isomorphic(load(out_file), catalog.make_m_n(4, "(1 2)(3 4)"))
    status, out = cli(capsys, "generate", "m_n", "--n", "3", "--perm", "(1)(2 3)")
    assert status == 2 and "fixed point" in out


def test_enumerate(tmp_path, capsys):
    status, out = cli(capsys, "enumerate", "--max-n", "6")
    assert status == 0
    assert "n=4: 2 lattices" in out and "n=5: 5 lattices" in out and "n=6: 15 lattices" in out
    status, out = cli(capsys, "enumerate", "--max-n", "5", "--filter", "variety",
                      "--out-dir", str(tmp_path))
    assert "n=5: 1 lattices admit a complementation in the variety; 8" in out
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "L1_1.json", "L2_1.json", "L4_1.json", "L5_1.json"]
    assert is_isomorphic(load(tmp_path / "L5_1.json"), catalog.m3(), respect_unary=False)
    status, _ = cli(capsys, "enumerate", "--max-n", "9")
    assert status == 2


def test_enumerate_parallel_matches_serial(monkeypatch, capsys):
    monkeypatch.setenv("ALLAB_THREADS", "1")
    _, serial = cli(capsys, "enumerate", "--max-n", "6", "--filter", "complemented")
    monkeypatch.setenv("ALLAB_THREADS", "3")
    _, parallel = cli(capsys, "enumerate", "--max-n", "6", "--filter", "complemented")
    assert serial == parallel


@pytest.mark.parametrize("argv", [
    ["validate", "--in", "no/such/file.json"],
    ["check", "--in", str(ROOT / "pyproject.toml")],
    ["identities", "--in", str(FIX / "m3.json"), "--file", "no/such.txt"],
    ["ideals", "--in", str(FIX / "m3.json"), "--closure", "zz"],
    ["check"],
    ["nosuchcommand"],
])
def test_bad_input_exits_2(argv, capsys):
    assert main(argv) == 2


def test_parse_error_in_identity_file(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("x = x\nx v = y\n")
    status, out = cli(capsys, "identities", "--in", fx("m3.json"), "--file", str(f))
    assert status == 2 and "line 2" in out


def test_json_round_trip_and_determinism(capsys):
    argv = ["check", "--in", fx("n5.json"), "--json"]
    status, out = cli(capsys, *argv)
    again = cli(capsys, *argv)[1]
    assert out == again
    rep = Report.from_json(out)
    assert rep.exit_status == status == 1
    data = json.loads(out)
    variety = next(c for c in data["checks"] if c["name"] == "variety")
    assert variety["witness"]["e"] == {"x": "c", "y": "a"}


def test_run_returns_report():
    rep, status = run(["validate", "--in", fx("m3.json")])
    assert status == 0 and rep.command.startswith("allab validate")


def test_console_script():
    env = dict(os.environ)
    r = subprocess.run([sys.executable, "-m", "allab.cli", "check", "--in", fx("m3.json"), "--adjoint"],
                       capture_output=True, text=True, env=env)
    assert r.returncode == 0
    assert "adjoint: holds (125 triples)" in r.stdout
