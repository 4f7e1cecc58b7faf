import json

import pytest

from hsl.cli import ParseError, SuiteConfig, enumerate_cases, eval_text, parse_expr, run, to_text
from hsl.cli.evaluator import EvalError
from hsl.cli.main import main
from hsl.cli.parser import BinOp, Ctor
from hsl.cli.report import to_json, to_markdown
from hsl.cli.runner import ConfigError, exit_code

CORPUS = [
    "1", "y1", "-y1", "y1 + y2", "y1 - y2 - y3", "y1 - (y2 - y3)", "(y1 + y2) * q", "y1 / y2 / q",
    "y1 / (y2 / q)", "y1^3", "y1^-2", "(y1 + 1)^2", "-(y1 + 1)^2", "(1 - t*y1/y2)/(1 - y1/y2)", "2*s^2 - t",
    "Uy{1,2}", "Uy{1,2} ∘ Uy{2,2}", "Ux{1,3} ∘ Ux{2,3} ∘ Ux{1,3}", "Ua{1,2} ∘ Ua{-1,2}", "Uy{1,2} · (y1/y2)",
    "Q{2}(X)", "Q{3}(X - eps)", "phi(y, 0)", "phi(t*y1/x1, -2)", "chi{Gr,1,2}", "chi{X,1,2,2}",
    "chi{Xdual,2,3,1} - chi{X,2,3,1}", "a1*eps + X", "-(-y1)", "Uy{1,2} @ Uy{1,2} . y1",
]


def test_corpus_size():
    assert len(CORPUS) == 30


@pytest.mark.parametrize("text", CORPUS)
def test_round_trip(text):
    ast = parse_expr(text)
    assert parse_expr(to_text(ast)) == ast


def test_composition_node():
    ast = parse_expr("Uy{1,2} ∘ Uy{2,2}")
    assert ast == BinOp("∘", Ctor("Uy", (1, 2)), Ctor("Uy", (2, 2)))


def test_ascii_spellings():
    assert parse_expr("Uy{1,2} @ Uy{1,2}") == parse_expr("Uy{1,2} ∘ Uy{1,2}")


@pytest.mark.parametrize("text,message,line,col", [
    ("Uy{3,2}", "arity error: k > n", 1, 3),
    ("foo + 1", "unknown identifier 'foo'", 1, 1),
    ("1 +", "unexpected 'end of input'", 1, 4),
    ("y1 +\n  * y2", None, 2, 3),
])
def test_parse_errors(text, message, line, col):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert (info.value.line, info.value.col) == (line, col)
    if message:
        assert info.value.message == message


def test_eval_examples():
    assert eval_text("chi{Gr,1,2}") == "t + 1"
    assert eval_text("Q{2}(X)") == "a1*a2 - a1*X - a2*X + X^2"
    assert eval_text("(1 - t*y1/y2)/(1 - y1/y2) - (1 - t*y1/y2)/(1 - y1/y2)") == "0"


def test_phi_print_is_the_truncated_product():
    # (1 - y)(1 - q y)(1 - q^2 y) through q^2
    assert eval_text("phi(y,0)", 2) == "y^2*q^2 + y^2*q - y*q^2 - y*q - y + 1 + O(q^3)"
    assert eval_text("phi(y,0)", 1) == "y^2*q - y*q - y + 1 + O(q^2)"


def test_eval_type_mismatch():
    with pytest.raises(EvalError):
        eval_text("Uy{1,1} ∘ Ux{1,1}")
    with pytest.raises(EvalError):
        eval_text("y1 ∘ y2")


def test_action_on_a_function():
    # the action is a right action, so q^{D_1} sends f(y1) to f(y1/q)
    assert eval_text("Uy{1,1} · y1") == "y1*q^(-1)"
    # a function in other variables is still accepted
    assert eval_text("Uy{1,1} · (x1*y1)") == "y1*x1*q^(-1)"


# -- runner --------------------------------------------------------------------------


def test_run_flop_n3():
    results = run(SuiteConfig("flop", 3))
    assert len(results) == 10
    assert all(r.status == "pass" for r in results)
    assert exit_code(results) == 0


def test_run_rtt_n1():
    results = run(SuiteConfig("rtt", 1))
    assert [r.status for r in results] == ["pass"]


def test_run_all_n0_skips_degenerate_suites():
    results = run(SuiteConfig("all", 0))
    skipped = {r.suite for r in results if r.status == "skipped"}
    assert {"rtt", "qdet", "macdonald", "mcrel", "gauss", "toda"} <= skipped
    assert all(r.status in ("pass", "skipped") for r in results)
    assert exit_code(results) == 0


def test_filters_restrict_cases():
    cases = enumerate_cases(SuiteConfig("wallcross", 3, k_range=(1, 1), m_range=(0, 0)))
    assert [(c.n, c.k, c.m) for c in cases] == [(1, 1, 0), (2, 1, 0), (3, 1, 0)]


@pytest.mark.parametrize("kwargs", [{"n_max": 7}, {"n_max": -1}, {"n_max": 2, "k_range": (2, 1)},
                                    {"n_max": 2, "jobs": 0}, {"n_max": 2, "fmt": "xml"}])
def test_bad_config(kwargs):
    with pytest.raises(ConfigError):
        SuiteConfig("flop", **kwargs)


def test_parallel_matches_serial():
    a = run(SuiteConfig("wallcross", 3))
    b = run(SuiteConfig("wallcross", 3, jobs=2))
    cfg = SuiteConfig("wallcross", 3).as_dict()
    assert to_json(cfg, a) == to_json(cfg, b)


# -- reports and exit codes ------------------------------------------------------------


def test_json_schema(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "characters", "--n-max", "2", "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"version", "config", "results", "summary"}
    assert doc["version"] == 1
    assert doc["summary"] == {"pass": 6, "fail": 0}
    for r in doc["results"]:
        assert set(r) == {"suite", "params", "status", "elapsed_ms", "terms", "witness"}
        assert set(r["params"]) == {"n", "k", "m"}
        assert r["suite"] == "characters" and r["elapsed_ms"] == 0 and r["witness"] is None
        assert isinstance(r["terms"], int)


def test_timings_flag_records_time(tmp_path):
    out = tmp_path / "r.json"
    main(["verify", "--suite", "qdet", "--n-max", "3", "--format", "json", "--out", str(out), "--timings"])
    doc = json.loads(out.read_text())
    assert doc["config"]["timings"] is True
    assert all(isinstance(r["elapsed_ms"], int) for r in doc["results"])


def test_markdown_has_one_table_per_suite(tmp_path):
    out = tmp_path / "r.md"
    assert main(["verify", "--suite", "all", "--n-max", "1", "--format", "md", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("# Verification report")
    headers = [line for line in text.splitlines() if line.startswith("## ")]
    assert len(headers) == len(set(headers)) == 13
    assert text.count("| n | k | m | status | elapsed_ms | terms | detail | witness |") == 13


def test_failure_report_has_witness():
    from hsl.checks import CheckResult
    bad = CheckResult("flop", {"n": 1, "k": 1, "m": 1}, "fail",
                      witness={"point": {"s": "2"}, "lhs": "1", "rhs": "2"})
    doc = json.loads(to_json({}, [bad]))
    assert doc["results"][0]["witness"] == {"point": {"s": "2"}, "lhs": "1", "rhs": "2"}
    assert "lhs=1; rhs=2; at s=2" in to_markdown({}, [bad])
    assert exit_code([bad]) == 1


def test_exploratory_never_fails_exit_code():
    from hsl.checks import CheckResult
    assert exit_code([CheckResult("residues", {"n": 2}, "exploratory")]) == 0


def test_exit_code_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--suite", "nope", "--n-max", "1", "--format", "json"])
    assert info.value.code == 2
    assert main(["verify", "--suite", "flop", "--n-max", "9", "--format", "json"]) == 2
    assert main(["expr", "Uy{3,2}"]) == 2
    assert "parse error at 1:3: arity error: k > n" in capsys.readouterr().err
    assert main(["expr", "Uy{1,1} ∘ Ux{1,1}"]) == 2


def test_expr_prints(capsys):
    assert main(["expr", "chi{Gr,1,2}"]) == 0
    assert capsys.readouterr().out == "t + 1\n"


def test_seed_precedence(tmp_path, monkeypatch):
    def seed_of(args):
        out = tmp_path / "r.json"
        main(["verify", "--suite", "rtt", "--n-max", "1", "--format", "json", "--out", str(out), *args])
        return json.loads(out.read_text())["config"]["seed"]

    monkeypatch.delenv("HSL_SEED", raising=False)
    assert seed_of([]) == 0
    monkeypatch.setenv("HSL_SEED", "17")
    assert seed_of([]) == 17
    assert seed_of(["--seed", "5"]) == 5
    monkeypatch.setenv("HSL_SEED", "oops")
    assert main(["verify", "--suite", "rtt", "--n-max", "1", "--format", "json"]) == 2
