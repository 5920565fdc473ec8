import io
import json
import re
import subprocess
import sys

import pytest

from pathmetric.cfg import Cfg
from pathmetric.cli import EXIT_IO, EXIT_MISMATCH, EXIT_OK, EXIT_SYNTAX, main
from pathmetric.oracle import count_acyclic_paths

from programs import (EXAMPLE_1, EXAMPLE_2, GOTO_INTO_LOOP, SWITCH_INTO_LOOP, do_while_zero)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


@pytest.fixture
def write(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p
    return write


def test_analyze_example_one(write):
    code, out, _ = run("analyze", "--format", "json", write("ex1.c", EXAMPLE_1))
    (r,) = records(out)
    assert code == EXIT_OK
    assert (r["function"], r["acpath"], r["npath"], r["controlled"]) == ("f", "8", "6", True)
    assert r["opt_level"] == 2 and r["verify"] is None


def test_analyze_worst_case_for_npath(write):
    code, out, _ = run("analyze", "--format", "json", write("w.c", do_while_zero(26)))
    (r,) = records(out)
    assert (r["npath"], r["acpath"]) == ("67108864", "1")


def test_single_metric(write):
    _, out, _ = run("analyze", "--format", "json", "--metric", "npath", write("a.c", EXAMPLE_1))
    (r,) = records(out)
    assert r["acpath"] is None and r["npath"] == "6"


def test_empty_file(write):
    assert run("analyze", "--format", "json", write("e.c", "")) == (EXIT_OK, "", "")


def test_parse_error_keeps_good_functions(write):
    p = write("bad.c", "int f(){ if } int g(int x) { return x; }")
    code, out, err = run("analyze", "--format", "json", p)
    assert code == EXIT_SYNTAX
    assert [r["function"] for r in records(out)] == ["g"]
    assert "bad.c:1:13" in err


def test_semantic_error(write):
    code, out, err = run("analyze", write("s.c", "void f(void) { goto nowhere; }"))
    assert code == EXIT_SYNTAX and out == "" and "nowhere" in err


def test_missing_file(tmp_path):
    code, _, err = run("analyze", tmp_path / "absent.c")
    assert code == EXIT_IO and "cannot read" in err


def test_verify_non_controlled_pair(write):
    p = write("fg.c", GOTO_INTO_LOOP + SWITCH_INTO_LOOP)
    code, out, _ = run("verify", "--format", "json", p)
    rows = records(out)
    assert code == EXIT_OK
    assert [(r["acpath"], r["verify"]["alpha"], r["controlled"]) for r in rows] == \
        [("1", "2", False), ("2", "3", False)]


def test_verify_example_two(write):
    code, out, _ = run("verify", "--format", "json", write("ex2.c", EXAMPLE_2))
    (r,) = records(out)
    assert code == EXIT_OK and r["verify"]["match"] is True and r["verify"]["alpha"] == "6"


def test_verify_budget(write):
    code, out, _ = run("verify", "--format", "json", "--max-oracle-nodes", 3,
                       write("ex1.c", EXAMPLE_1))
    (r,) = records(out)
    assert code == EXIT_OK and r["verify"]["alpha"] is None and r["verify"]["match"] is None


def test_controlled_mismatch_exits_three(write):
    p = write("dw.c", "void f(int a, int b) { do { if (a) break; } while (b); }")
    assert run("verify", p)[0] == EXIT_MISMATCH
    assert run("analyze", "--verify", p)[0] == EXIT_MISMATCH
    assert run("analyze", p)[0] == EXIT_OK


def test_unreadable_input_wins_over_mismatch(write, tmp_path):
    p = write("dw.c", "void f(int a, int b) { do { if (a) break; } while (b); }")
    assert run("verify", p, tmp_path / "absent.c")[0] == EXIT_IO


def test_while_return_scaling_flag(write):
    p = write("w.c", "void f(int a, int z) { while (a || z) { return; } }")
    _, out, _ = run("verify", "--format", "json", p)
    assert records(out)[0]["verify"]["quarantined"] is True
    code, out, _ = run("verify", "--format", "json", "--while-return-scaling", p)
    assert code == EXIT_OK and records(out)[0]["verify"]["match"] is True


def test_sorted_output_ignores_argument_order(write):
    a, b = write("a.c", EXAMPLE_1), write("b.c", EXAMPLE_2)
    first = run("analyze", "--format", "json", "--sorted", b, a)[1]
    second = run("analyze", "--format", "json", "--sorted", a, b)[1]
    assert first == second
    assert [r["file"] for r in records(first)] == [str(a), str(b)]


def test_csv_and_text(write):
    p = write("ex1.c", EXAMPLE_1)
    csv = run("analyze", "--format", "csv", p)[1].splitlines()
    assert len(csv) == 2 and csv[0].startswith("file,function,line,acpath")
    text = run("analyze", p)[1]
    assert text == f"{p}:1: f acpath=8 npath=6\n"


def test_corpus_stats(write):
    rows = "".join(json.dumps({"file": "x.c", "function": f"f{k}", "line": k, "acpath": str(v),
                               "npath": str(v), "opt_level": 2, "controlled": True,
                               "verify": None, "thresholds": None}) + "\n"
                   for k, v in enumerate([1, 4, 90, 500, 2 ** 80]))
    code, out, _ = run("corpus-stats", "--format", "json", write("r.jsonl", rows))
    s = json.loads(out)
    assert code == EXIT_OK
    assert (s["n"], s["pearson_r"], s["mean_error"], s["stddev_error"]) == (5, 1.0, 0.0, 0.0)
    assert s["thresholds"]["80"]["both_over"] == 3


def test_corpus_stats_from_analyze(write, tmp_path):
    _, out, _ = run("analyze", "--format", "json", "--npath-clamp",
                    write("a.c", EXAMPLE_1 + EXAMPLE_2.replace("f(", "g(")))
    code, text, _ = run("corpus-stats", write("r.jsonl", out))
    assert code == EXIT_OK and text.startswith("functions           2\n")


def test_corpus_stats_exclusions(write):
    row = {"file": "x.c", "function": "f", "line": 1, "acpath": "3", "npath": "0",
           "opt_level": 2, "controlled": True, "verify": None, "thresholds": None}
    good = dict(row, npath="3")
    p = write("r.jsonl", json.dumps(row) + "\n" + json.dumps(good) + "\n")
    code, _, err = run("corpus-stats", p)
    assert code == EXIT_OK and "excluded 1" in err
    code, _, err = run("corpus-stats", "--strict", p)
    assert code == EXIT_SYNTAX and "1 record" in err


def test_corpus_stats_errors(write, tmp_path):
    assert run("corpus-stats", write("empty.jsonl", ""))[0] == EXIT_SYNTAX
    assert run("corpus-stats", tmp_path / "absent.jsonl")[0] == EXIT_IO
    assert run("corpus-stats", write("junk.jsonl", "{not json"))[0] == EXIT_IO


def dot_graph(text):
    arcs = {(int(a), int(b)) for a, b in re.findall(r"(\d+) -> (\d+);", text)}
    nodes = {int(n) for n in re.findall(r"^  (\d+) \[", text, re.M)}
    (entry,) = [int(n) for n in re.findall(r"^  (\d+) \[shape=diamond", text, re.M)]
    return Cfg(frozenset(nodes), frozenset(arcs), entry)


@pytest.mark.parametrize("source, paths", [
    (EXAMPLE_1, 8),
    ("void f(int a, int b) { while (a) if (b) break; else continue; }", 3),
])
def test_dot(write, source, paths):
    code, out, _ = run("dot", "--opt-level", 0, write("d.c", source), "f")
    assert code == EXIT_OK
    assert count_acyclic_paths(dot_graph(out)) == paths


def test_dot_empty_body(write):
    code, out, _ = run("dot", write("d.c", "void f(void) {}"), "f")
    assert out == 'digraph "f" {\n  0 [shape=diamond, peripheries=2];\n}\n'


def test_dot_unknown_function(write):
    code, _, err = run("dot", write("d.c", EXAMPLE_1), "nope")
    assert code == EXIT_SYNTAX and "nope" in err


def test_module_entry_point(write):
    p = write("ex1.c", EXAMPLE_1)
    done = subprocess.run([sys.executable, "-m", "pathmetric", "analyze", str(p)],
                          capture_output=True, text=True)
    assert done.returncode == 0 and "acpath=8" in done.stdout
