import json

import pytest

from teamlogic.automata.dump import parse_automaton
from teamlogic.cli import main
from teamlogic.core_model import parse_kripke, parse_traces
from teamlogic.formula import parse
from teamlogic.semantics import eval_formula
from teamlogic.tef import kcb, parse_tef

TWO = "trace a: {p} {p} | {}\ntrace b: {p} {p} | {}\n"
ONE = "trace a: {p} {p} | {}\n"


@pytest.fixture
def files(tmp_path):
    def put(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return put


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    out = json.loads(capsys.readouterr().out)
    assert out["schema"] == "teamlogic/1"
    return code, out


def test_pathcheck_witness(files, capsys):
    tr = files("t.txt", TWO)
    code, out = run_json(capsys, ["pathcheck", "-f", "X X p", "--traces", tr, "--family", "kctx", "-k", "1"])
    assert code == 0 and out["verdict"] is True
    team = parse_traces(open(tr).read())
    tef = parse_tef(out["tef"], 2)
    assert kcb(1).contains(tef)
    assert eval_formula(team, tef, parse("X X p"))


def test_pathcheck_ksync_uses_automata(files, capsys):
    tr = files("t.txt", TWO)
    code, out = run_json(capsys, ["pathcheck", "-f", "X X p", "--traces", tr, "-k", "2"])
    assert code == 0 and out["engine"] == "automata"
    assert main(["pathcheck", "-f", "X X p", "--traces", files("s.txt", ONE), "-k", "2"]) == 1


def test_pathcheck_forall_counterexample(files, capsys):
    tr = files("t.txt", "trace a: {p} | {}\ntrace b: {} | {p}\n")
    code, out = run_json(capsys, ["pathcheck", "-f", "A1 F p", "--traces", tr, "--mode", "forall",
                                  "--family", "sync"])
    assert code == 0
    code, out = run_json(capsys, ["pathcheck", "-f", "X !p", "--traces", tr, "--mode", "forall",
                                  "--family", "kctx", "-k", "1"])
    assert code == 1 and out["tef_role"] == "counterexample"
    assert not eval_formula(parse_traces(open(tr).read()), parse_tef(out["tef"], 2), parse("X !p"))


def test_pathcheck_cross_check(files, capsys):
    tr = files("t.txt", TWO)
    code, out = run_json(capsys, ["pathcheck", "-f", "p U !p", "--traces", tr, "--family", "sync",
                                  "--cross-check"])
    assert code == 0 and out["engine"] == "evaluator+automata"
    assert main(["pathcheck", "-f", "p", "--traces", tr, "-k", "1", "--cross-check"]) == 3


def test_pathcheck_fixed_tef(files, capsys):
    tr = files("t.txt", TWO)
    tef = files("tef.txt", "tef init=0,0 steps={1} {2} | {1,2}\n")
    code, out = run_json(capsys, ["pathcheck", "-f", "X X p", "--traces", tr, "--tef", tef, "--family", "sync"])
    assert code == 0 and out["verdict"] is True


def test_pathcheck_dump(files, tmp_path, capsys):
    tr = files("t.txt", TWO)
    dump = str(tmp_path / "a.txt")
    assert main(["pathcheck", "-f", "G p", "--traces", tr, "--family", "sync", "--dump-automaton", dump]) == 1
    assert parse_automaton(open(dump).read()).n == 2


@pytest.mark.parametrize("argv", [
    ["pathcheck", "-f", "X X p", "--traces", "MISSING"],
    ["pathcheck", "-f", "X X", "--family", "sync"],
    ["pathcheck", "-f", "p", "--family", "ksync"],
    ["sat", "-f", "p"],
])
def test_input_errors(argv, files):
    argv = [files("t.txt", TWO) if a == "MISSING" else a for a in argv]
    if "--traces" not in argv and argv[0] == "pathcheck":
        argv += ["--traces", files("t.txt", TWO)]
    assert main(argv) == 2


def test_bad_trace_file(files):
    assert main(["pathcheck", "-f", "p", "--traces", files("bad.txt", "trace a {p\n"), "--family", "sync"]) == 2


def test_mc_counterexample(files, tmp_path, capsys):
    k = files("k.txt", "state a {p}\nstate b {}\nroot a\nedge a a\nedge a b\nedge b b\n")
    out = str(tmp_path / "cx.txt")
    code, res = run_json(capsys, ["mc", "--kripke", k, "-f", "A1 G p", "-n", "1", "--mode", "forall",
                                  "--family", "sync", "--out", out])
    assert code == 1 and res["role"] == "counterexample"
    team = parse_traces(open(out).read())
    assert len(team) == 1
    kripke = parse_kripke(open(k).read())
    assert kripke.props() >= {"p"}


def test_sat(capsys):
    code, res = run_json(capsys, ["sat", "-f", "X p & !p", "-n", "1", "--family", "sync"])
    assert code == 0 and res["exact"]
    team = parse_traces(res["traces"])
    assert eval_formula(team, parse_tef(res["tef"], 1), parse("X p & !p"))
    assert main(["sat", "-f", "NE & bot", "-n", "1", "--family", "sync"]) == 1


def test_translate(tmp_path, capsys):
    assert main(["translate", "-f", "p U q", "-n", "1"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("automaton")
    out = str(tmp_path / "d.txt")
    assert main(["translate", "-f", "p U q", "-n", "2", "--degeneralize", "-o", out]) == 0
    assert parse_automaton(open(out).read()).m == 1


def test_embed(capsys):
    code, res = run_json(capsys, ["embed", "-f", "X p", "--variant", "ctl-exists"])
    assert code == 0 and res["in_fragment"]
    assert parse(res["formula"]) is not None
    assert main(["embed", "-f", "X o"]) == 2


def test_encode_n2c(files, tmp_path, capsys):
    m = files("m.txt", "INC L 1 1\nIFZ L 0 1\n")
    fk = str(tmp_path / "k.txt")
    code, res = run_json(capsys, ["encode-n2c", "--machine", m, "-b", "1", "--out-kripke", fk])
    assert code == 0 and res["instructions"] == 2
    assert parse(res["formula"]) is not None
    assert parse_kripke(open(fk).read()).root == "root/0"
    assert main(["encode-n2c", "--machine", m, "-b", "7"]) == 2
    assert main(["encode-n2c", "--machine", files("bad.txt", "JMP 0 0\n")]) == 2


def test_formula_from_file(files, capsys):
    f = files("f.txt", "X p\n")
    assert main(["pathcheck", "-f", "@" + f, "--traces", files("t.txt", TWO), "--family", "sync"]) == 0
