import random
import shutil
from pathlib import Path

import pytest

from fhlie import exactalg as ea
from fhlie import frobenius as fb
from fhlie.labcli import dashboards as db
from fhlie.labcli.cli import INPUT_ERROR, main
from fhlie.labcli.report import MAX_EXIT, Report
from fhlie.labcli.scenario import ScenarioError, load_scenario, parse_scenario
from fhlie.liering import LieRing, format_lie_ring

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def verdict_rows(tsv: str) -> list[list[str]]:
    lines = tsv.splitlines()
    i = lines.index("# verdicts")
    return [ln.split("\t") for ln in lines[i + 2:] if ln]


# -- scenario files


def test_parse_minimal():
    sc = parse_scenario("kind = group-report\ngroup = D8  # trailing comment\n")
    assert sc.kind == "group-report" and sc.params == {"group": "D8"}
    assert sc.budget is None and sc.seed == 0


def test_parse_defaults_and_lists():
    sc = parse_scenario("kind = prop2\np=5\nk=1\nq=2\nr=4\nc=1\nindices = 1, 1 4\noracles = no\nseed = 3")
    assert sc.params["indices"] == (1, 1, 4)
    assert sc.params["oracles"] is False and sc.params["wmax"] == 8 and sc.params["f"] is None
    assert sc.seed == 3


@pytest.mark.parametrize("text,needle", [
    ("", "empty scenario"),
    ("# only a comment\n", "empty scenario"),
    ("group = D8", "missing key 'kind'"),
    ("kind = nonsense", "unknown kind"),
    ("kind = group-report\ngroup = D8\ncolour = red", "unknown keys"),
    ("kind = group-report\ngroup = D8\ngroup = Q8", "duplicate key"),
    ("kind = prop2\np = 5", "needs keys"),
    ("kind = example1-sweep\nn_min = two\nn_max = 3", "bad value"),
    ("kind = example1-sweep\nn_min = 2\nn_max = 3\noracle = maybe", "bad value"),
    ("kind group-report", "expected 'key = value'"),
])
def test_parse_errors(text, needle):
    with pytest.raises(ScenarioError, match=needle):
        parse_scenario(text)


def test_empty_scenario_lists_required_keys():
    with pytest.raises(ScenarioError) as e:
        parse_scenario("")
    for kind in ("example1-sweep", "prop2", "theorem2"):
        assert kind in str(e.value)


def test_relative_paths_resolve_against_the_file():
    sc = load_scenario(SCENARIOS / "theorem2_proper_agemo.sc")
    assert sc.path("input") == SCENARIOS / "proper_agemo.module"
    assert sc.path("ell") is None


# -- report rendering


def test_report_tsv_and_exit_code():
    rep = Report("t")
    t = rep.table("tab", ["a", "b"])
    t.add(True, None)
    t.add((1, 2), 3)
    with pytest.raises(ValueError):
        t.add(1)
    rep.check("one", True)
    rep.check("two", False, "why")
    tsv = rep.to_tsv()
    assert "true\tnone" in tsv and "1,2\t3" in tsv
    assert verdict_rows(tsv) == [["one", "pass", ""], ["two", "FAIL", "why"]]
    assert rep.exit_code == 1
    assert "1/2 verdicts passed" in rep.summary()


def test_exit_code_capped():
    rep = Report("many")
    for i in range(300):
        rep.check(str(i), False)
    assert rep.exit_code == MAX_EXIT == 125


# -- subcommands


@pytest.fixture
def ring_files(tmp_path):
    rng = random.Random(4)
    while True:
        L, phi = db.graded_ring_from_blocks(rng, 3, 2, 5, 1)
        if not L.is_abelian_table():
            break
    (tmp_path / "L.txt").write_text(format_lie_ring(L))
    (tmp_path / "phi.txt").write_text(ea.format_matrix(phi, L.modulus))
    return tmp_path


def test_lie_validate_and_series(ring_files, capsys):
    assert main(["lie", "validate", "--input", str(ring_files / "L.txt")]) == 0
    assert main(["lie", "series", "--input", str(ring_files / "L.txt")]) == 0
    out = capsys.readouterr().out
    assert "# series" in out and "nilpotency class" in out


def test_lie_validate_reports_failure(tmp_path, capsys):
    # sl2 over Z/3 is a Lie ring; break Jacobi by changing one constant
    (tmp_path / "bad.txt").write_text("3 1 3\n1 2 0 1 0\n1 3 0 0 1\n2 3 1 0 0\n")
    assert main(["lie", "validate", "--input", str(tmp_path / "bad.txt")]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_lie_components(ring_files, capsys):
    code = main(["lie", "components", "--input", str(ring_files / "L.txt"), "--phi", str(ring_files / "phi.txt"),
                 "--k", "1"])
    assert code == 0
    rows = verdict_rows(capsys.readouterr().out.split("== ")[0])
    assert {r[1] for r in rows} == {"pass"}
    assert "[W_s, W_t] <= W_(s+t)" in [r[0] for r in rows]


def test_lie_components_needs_phi(ring_files, capsys):
    assert main(["lie", "components", "--input", str(ring_files / "L.txt")]) == INPUT_ERROR
    assert "needs --phi" in capsys.readouterr().err


def test_stdin_input(monkeypatch, capsys):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(format_lie_ring(LieRing.abelian(2, 4))))
    assert main(["lie", "validate", "--input", "-"]) == 0


def test_group_example1(capsys):
    assert main(["group", "example1", "--n", "3", "--report"]) == 0
    out = capsys.readouterr().out
    assert "# example1" in out and "derived length agrees with the closure oracle (n=3)" in out


def test_group_report(capsys):
    assert main(["group", "report", "D16"]) == 0
    assert "class L(P) = class P" in capsys.readouterr().out
    assert main(["group", "report", "nonsense"]) == INPUT_ERROR


def test_budget_exceeded():
    assert main(["--budget", "10", "group", "report", "D16"]) == INPUT_ERROR


def test_freelie_prop2(capsys):
    args = ["freelie", "prop2", "--p", "5", "--k", "1", "--q", "2", "--r", "4", "--c", "1", "--indices", "1", "4"]
    assert main(args + ["--f", "2"]) == 0
    out = capsys.readouterr().out
    assert "# witness" in out
    assert main(args + ["--f", "3"]) == INPUT_ERROR
    assert main(args[:-2] + ["0", "1"]) == INPUT_ERROR


def test_fh_validate(capsys):
    assert main(["fh", "validate", "--p", "5", "--k", "1", "--q", "2", "--r", "4"]) == 0
    assert main(["fh", "validate", "--p", "2", "--k", "2", "--q", "2", "--r", "3"]) == 1
    assert "not Frobenius" in capsys.readouterr().out


def test_fh_section_lemma(tmp_path, capsys):
    V = fb.random_fh_module(fb.FHSpec(3, 1, 2, 2), 2, random.Random(1))
    (tmp_path / "V.module").write_text(fb.format_module(V))
    assert main(["fh", "section-lemma", "--input", str(tmp_path / "V.module")]) == 0
    assert "# section" in capsys.readouterr().out
    (tmp_path / "broken.module").write_text("3 1 2 2\n")
    assert main(["fh", "section-lemma", "--input", str(tmp_path / "broken.module")]) == INPUT_ERROR


def test_missing_file_is_input_error(capsys):
    assert main(["lie", "validate", "--input", "/nonexistent/ring.txt"]) == INPUT_ERROR
    assert "error" in capsys.readouterr().err


def test_out_writes_tsv(tmp_path, capsys):
    out = tmp_path / "verdicts.tsv"
    assert main(["--out", str(out), "fh", "validate", "--p", "7", "--k", "1", "--q", "3", "--r", "2"]) == 0
    tsv = out.read_text()
    assert verdict_rows(tsv)[0][1] == "pass"
    printed = capsys.readouterr().out
    assert "# verdicts" not in printed and "1/1 verdicts passed" in printed


def test_out_after_subcommand(tmp_path):
    out = tmp_path / "late.tsv"
    assert main(["fh", "validate", "--p", "7", "--k", "1", "--q", "3", "--r", "2", "--out", str(out)]) == 0
    assert out.exists()


# -- scenarios


FAST_SCENARIOS = sorted(p.name for p in SCENARIOS.glob("*.sc") if p.name != "example1_sweep.sc")


@pytest.mark.parametrize("name", FAST_SCENARIOS)
def test_shipped_scenarios_pass(name, tmp_path, capsys):
    assert main(["--out", str(tmp_path / "out.tsv"), "run", str(SCENARIOS / name)]) == 0
    rows = verdict_rows((tmp_path / "out.tsv").read_text())
    assert rows and all(r[1] == "pass" for r in rows)


def test_scenario_output_key_and_budget(tmp_path):
    shutil.copy(SCENARIOS / "group_report.sc", tmp_path / "g.sc")
    with open(tmp_path / "g.sc", "a") as f:
        f.write("output = g.tsv\nbudget = 10\n")
    assert main(["run", str(tmp_path / "g.sc")]) == INPUT_ERROR  # scenario budget applies
    assert main(["--budget", "100000", "run", str(tmp_path / "g.sc")]) == 0  # command line wins
    assert (tmp_path / "g.tsv").exists()


def test_short_example1_sweep(tmp_path, capsys):
    (tmp_path / "s.sc").write_text("kind = example1-sweep\nn_min = 2\nn_max = 3\n")
    assert main(["run", str(tmp_path / "s.sc")]) == 0
    out = capsys.readouterr().out
    assert "derived length 1 at n=2" in out and "derived length 2 at n=3" in out
    (tmp_path / "bad.sc").write_text("kind = example1-sweep\nn_min = 1\nn_max = 3\n")
    assert main(["run", str(tmp_path / "bad.sc")]) == INPUT_ERROR


def test_bad_scenario_is_input_error(tmp_path, capsys):
    (tmp_path / "e.sc").write_text("")
    assert main(["run", str(tmp_path / "e.sc")]) == INPUT_ERROR
    assert "needs 'kind'" in capsys.readouterr().err


def test_scenario_section_lemma_needs_spec(tmp_path):
    (tmp_path / "s.sc").write_text("kind = section-lemma\np = 3\n")
    assert main(["run", str(tmp_path / "s.sc")]) == INPUT_ERROR


def test_failed_verdicts_set_exit_code(tmp_path):
    # a module whose h is the identity breaks the FH hypotheses
    V = fb.FHModule(fb.abelian_module([3, 3]), [[1, 1], [0, 1]], ea.identity(2), fb.FHSpec(3, 1, 2, 2))
    (tmp_path / "V.module").write_text(fb.format_module(V))
    (tmp_path / "s.sc").write_text("kind = section-lemma\ninput = V.module\n")
    assert main(["run", str(tmp_path / "s.sc")]) == 1


# -- dashboards


def test_proper_agemo_dashboard():
    sc = load_scenario(SCENARIOS / "theorem2_proper_agemo.sc")
    rep = db.run(sc)
    assert not rep.failures
    # (a) is witnessed only below the whole module
    assert "agemo_0" not in db.witnesses(rep, "(a) |Q| <= |C_P(H)|^q")
    assert any(w.startswith("agemo_") for w in db.witnesses(rep, "(a) |Q| <= |C_P(H)|^q"))


def test_theorem2_fpf_dashboard():
    rep = db.theorem2_fpf(3, fb.FHSpec(5, 1, 4, 2), copies=2, seed=1)
    assert not rep.failures
    assert "agemo_0" in db.witnesses(rep, "(a) |Q| <= |C_P(H)|^q")


def test_theorem2_needs_abelian():
    L = LieRing.from_brackets(3, 9, {(0, 1): (0, 0, 3)})
    with pytest.raises(fb.HypothesisError):
        db.theorem2_dashboard(L, ea.identity(3), ea.identity(3), fb.FHSpec(3, 1, 2, 2))


def test_group_dashboard_on_example1():
    from types import SimpleNamespace

    from fhlie.pgroup.example1 import example1_group

    ex = example1_group(2)
    T = ex.T
    # the kernel is Klein four, so only n and q are meaningful for the search
    spec = SimpleNamespace(n=4, q=3)
    rep = db.group_dashboard(T, T.linear_map(ex.f[0]), T.linear_map(ex.h), spec)
    assert rep.tables[0].rows[0][0] == "P"
    assert not rep.failures
    # |C_T(H)| = 4 and |T| = 64 = 4^3, so P itself witnesses (a)
    assert "P" in db.witnesses(rep, "(a) |Q| <= |C_P(H)|^q")


def test_lemma_suite_small():
    rep = db.lemma_suite(["C4", "D8"], seed=2, rank_instances=5)
    assert not rep.failures
    assert len(rep.verdicts) == 4
