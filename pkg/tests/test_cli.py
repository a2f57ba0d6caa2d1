import io
import json
from pathlib import Path

import pytest

from ultrext import dsl
from ultrext.cli import main, repl
from ultrext.interp import Session, SessionConfig, run

ROOT = Path(__file__).resolve().parent.parent
EXAMPLES = sorted((ROOT / "ux_examples").glob("*.ux"))


def records(text, **cfg):
    return run(dsl.parse(text), SessionConfig(**cfg))


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def write(tmp_path, text, name="s.ux"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_empty_script_has_no_records():
    assert records("") == []


def test_order_script_verdicts():
    recs = [json.loads(l) for l in (ROOT / "ux_examples" / "order.expected.jsonl").read_text().splitlines()]
    assert [r["value"] for r in recs] == [True, False, False, True, False, True]
    assert all(r["status"] == "ok" for r in recs)


def test_pseudoprincipal_script_verdicts():
    recs = records((ROOT / "ux_examples" / "pseudoprincipal.ux").read_text())
    assert [r["value"] for r in recs[:2]] == [True, False]


@pytest.mark.parametrize("path", EXAMPLES, ids=lambda p: p.stem)
def test_golden_outputs(path):
    code, out = cli("run", str(path), "--json")
    assert code == 0
    assert out == path.with_suffix(".expected.jsonl").read_text()


def test_record_fields():
    (rec,) = records("ext* {x, y : x = y} (lim(inf), lim(inf))")
    assert set(rec) == {"query", "value", "label", "precision", "status"}
    assert rec["query"] == "ext* {x, y : x = y} (lim(inf), lim(inf))"
    (rec,) = records("ext~ {x : x = 0 mod 4} (lim(0 mod 2))")
    assert rec["status"] == "undetermined" and rec["precision"] == {"modulus": 4}
    (rec,) = records("show {x, y : x <= y} & {x, y : y <= x}")
    assert rec["value"] == "{x, y : -x + y >= 0, x - y >= 0}"


def test_precision_directive_retags_inf():
    recs = records("ext~ {x : x = 0 mod 2} (lim(inf))\n:precision 2\next~ {x : x = 0 mod 2} (lim(inf))")
    assert recs[0]["precision"] == {"modulus": 2}
    assert recs[1]["value"] is True


def test_errors_do_not_abort():
    recs = records("extmap Nope (pt(1))\nshow {x : x >= 2}")
    assert recs[0]["status"] == "error" and "Nope" in recs[0]["detail"]
    assert recs[1]["status"] == "ok"


def test_finite_backend():
    text = "R := {x, y : x < y}\next~ R (pt(0), pt(2))\ncheck modal-via-ext R\nlift pt(1) into 5\nshow R"
    recs = records(text, backend="finite", universe=3)
    assert [r["value"] for r in recs[:3]] == [True, True, "pt(1)"]
    assert recs[3]["value"] == "table(2) {(0, 1), (0, 2), (1, 2)}"
    (rec,) = records("ext~ {x : x >= 0} (lim(inf))", backend="finite", universe=3)
    assert rec["status"] == "error"


def test_generalized_queries():
    text = (
        "N := genmodel { F := family (x; m) -> x + m at lim(inf); R := family (x; m) -> {x : x <= m} at lim(inf) }\n"
        "e N.F (pt(5))\ncore N.R\npseudo? N.F\nlim i N.R (pt(7))\nE N.R (lim(inf))\n"
        "sat N |= R(F(x)) [x := pt(2)]"
    )
    vals = [r["value"] for r in records(text)]
    assert vals == ["lim(0 mod 1)", "{x : true}", False, True, True, True]


def test_homcheck_labels():
    text = "H := op (x) -> x + 1\nA := model { R := {x, y : x <= y} }\nhomcheck H : A -> A mode=tilde"
    (rec,) = records(text)
    assert rec["value"] is True and rec["label"] == "consistent-with-sample"


def test_expect_failure_sets_exit_code(tmp_path):
    code, out = cli("run", write(tmp_path, "expect ext~ {x : x >= 1} (lim(inf)) = false"), "--json")
    assert code == 1
    assert json.loads(out)["status"] == "fail"


def test_exit_codes(tmp_path):
    assert cli("run", write(tmp_path, "x := lim(3 mod 2)"))[0] == 2
    assert cli("run", str(tmp_path / "missing.ux"))[0] == 2
    assert cli("run", write(tmp_path, "show {x : x >= 1}"), "--backend", "finite")[0] == 2
    assert cli("run", write(tmp_path, "show {x : x >= 1}"))[0] == 0
    assert cli("bogus")[0] == 2
    assert cli("check", "no-such-suite")[0] == 2


def test_parallel_matches_sequential(tmp_path):
    p = str(EXAMPLES[0])
    assert cli("run", p, "--json", "--parallel") == cli("run", p, "--json")


def test_timing_field(tmp_path):
    code, out = cli("run", str(EXAMPLES[0]), "--json", "--timing")
    assert code == 0
    assert all("seconds" in json.loads(l) for l in out.splitlines())


def test_check_command(monkeypatch):
    code, out = cli("check", "ext-map", "--trials", "10", "--seed", "3", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["suite"] == "ext-map" and rep["seed"] == 3 and rep["resolved"] == 10
    monkeypatch.setenv("ULTREXT_SEED", "7")
    _, out = cli("check", "ext-map", "--trials", "5", "--json")
    assert json.loads(out)["seed"] == 7


def test_repl_session(tmp_path):
    script = write(tmp_path, "A := {x : x >= 3}\n")
    inp = io.StringIO(f":load {script}\n:env\next~ A (lim(inf))\nnot valid (\n:quit\nshow A\n")
    out = io.StringIO()
    code = repl(Session(SessionConfig()), inp, out, prompt=False)
    text = out.getvalue()
    assert code == 0
    assert "A : set" in text
    assert "=> true" in text
    assert "!! line 1" in text
    assert "show A" not in text
