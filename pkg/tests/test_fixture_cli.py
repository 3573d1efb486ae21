import io
import json

import pytest

from splitfold import cli
from splitfold.errors import ParseError, PropertyViolation, ValidationError
from splitfold.fixture import (corpus_files, corpus_text, emit_fixture, parse_fixture,
                               resolve)


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    return code, json.loads(text)


# --- fixture format ----------------------------------------------------------


def test_empty_text_is_empty_fixture():
    fx = parse_fixture("")
    assert not (fx.splittings or fx.paths or fx.maps or fx.subgroups)
    assert emit_fixture(fx) == ""


def test_comments_and_blank_lines_are_ignored():
    fx = parse_fixture("# only a comment\n\n   \n")
    assert not fx.splittings


@pytest.mark.parametrize("name", corpus_files())
def test_corpus_round_trips(name):
    fx = parse_fixture(corpus_text(name))
    text = emit_fixture(fx)
    again = parse_fixture(text)
    assert emit_fixture(again) == text
    assert again.splittings == fx.splittings and again.maps == fx.maps and again.paths == fx.paths


def test_unknown_splitting_reports_position():
    with pytest.raises(ParseError) as err:
        parse_fixture("path p in Nowhere: a b\n")
    assert err.value.line == 1 and err.value.column > 1


def test_bad_edge_line_reports_line():
    text = "splitting R basis a\n  vertices v\n  edge a v v\n"
    with pytest.raises(ParseError) as err:
        parse_fixture(text)
    assert err.value.line == 3


def test_invalid_splitting_is_a_parse_error():
    # two loops but rank one
    text = "splitting R basis a\n  vertices v\n  edge a: v -> v label a\n  edge b: v -> v label a\n"
    with pytest.raises(ParseError):
        parse_fixture(text)


def test_subgroup_lines():
    fx = parse_fixture("subgroup H in F2: ab, a^-1\n")
    assert fx.subgroups["H"].graph.is_full()


def test_resolve_falls_back_to_corpus():
    assert resolve("examples/new_example.sfd") == corpus_text("new_example.sfd")


def test_conflicting_redefinition_is_rejected():
    rose = "splitting R basis a b\n  vertices v\n  edge a: v -> v label a\n  edge b: v -> v label {}\n"
    a = parse_fixture(rose.format("b"))
    b = parse_fixture(rose.format("b^-1"))
    with pytest.raises(ValidationError):
        a.merge(b)
    assert a.merge(a).splittings == a.splittings


# --- commands ----------------------------------------------------------------


def test_fill_check_new_example():
    code, rep = run_json("fill-check", "examples/new_example.sfd", "--path", "alpha")
    assert code == 0
    assert rep["result"]["fills"] is True and rep["result"]["kurosh_rank"] == 4


def test_fill_check_reports_witness():
    code, rep = run_json("fill-check", "small_paths.sfd", "--path", "aaa")
    assert code == 0
    res = rep["result"]
    assert res["fills"] is False and res["witness"]["kind"] == "uncollapse"
    assert res["witness"]["missed_natural_edge"] == "b"


def test_bool_exponent_command():
    code, rep = run_json("bool-exponent", "--m", "3")
    assert code == 0 and rep["result"]["kappa2"] == 5


def test_tt_analyze_fibonacci():
    code, rep = run_json("tt-analyze", "examples/fibonacci.sfd", "--nu", "1")
    res = rep["result"]
    assert code == 0 and res["kappa"] == 6 and res["omega"] == 4
    assert res["tau_lower"] == "1/22"


def test_tt_analyze_requires_nu():
    with pytest.raises(SystemExit) as err:
        cli.run(["tt-analyze", "fibonacci.sfd"], out=io.StringIO())
    assert err.value.code == 2


def test_fold_factorize_output_parses():
    code, rep = run_json("fold-factorize", "--map", "fibonacci.sfd")
    assert code == 0
    fx = parse_fixture(rep["result"]["fixture"])
    assert "final" in fx.maps


def test_kr_trace_json():
    code, rep = run_json("kr-trace", "fibonacci.sfd", "--edge", "a", "--iterate", "3")
    assert code == 0
    assert [e["kurosh_rank"] for e in rep["result"]["entries"]] == [0, 0, 0, 0, 1, 1, 2, 2]


def test_other_commands_run():
    for argv in (["filling-support", "new_example.sfd"],
                 ["overlap-gens", "small_paths.sfd", "--path", "aaa", "--all"],
                 ["expansion-search", "small_paths.sfd", "--path", "ab", "--budget", "1"],
                 ["blowup-witness", "small_paths.sfd", "--path", "ab"],
                 ["tt-improve", "improve.sfd"]):
        code, text = run(*argv)
        assert code == 0, (argv, text)


def test_json_is_deterministic():
    argv = ("oracle-suite", "--seed", "3", "--count", "5", "--kind", "overlap", "--json")
    assert run(*argv) == run(*argv)
    argv = ("fill-check", "small_paths.sfd", "--path", "ab", "--json")
    assert run(*argv) == run(*argv)


# --- exit codes ----------------------------------------------------------------


def test_exit_code_for_validation_errors(tmp_path):
    bad = tmp_path / "bad.sfd"
    bad.write_text("splitting\n", encoding="utf-8")
    assert run("fill-check", str(bad))[0] == 2
    assert run("fill-check", "missing-file.sfd")[0] == 2
    assert run("blowup-witness", "new_example.sfd")[0] == 2


def test_exit_code_for_resource_limits(monkeypatch):
    assert run("bool-exponent", "--m", "5")[0] == 3
    monkeypatch.setenv("SPLITFOLD_MAX_EDGES", "2")
    assert run("filling-support", "new_example.sfd")[0] == 3


def test_exit_code_for_property_violations(monkeypatch):
    def broken(args, fx):
        raise PropertyViolation("forced")
    monkeypatch.setitem(cli.COMMANDS, "bool-exponent", broken)
    code, text = run("bool-exponent", "--m", "2")
    assert code == 4 and "forced" in text


def test_failed_oracle_suite_exits_with_violation(monkeypatch):
    from splitfold.oracles import SuiteResult
    monkeypatch.setitem(cli.SUITES, "overlap", lambda seed, **kw: SuiteResult("overlap", 1, [{"x": 1}], {}))
    assert run("oracle-suite", "--seed", "1", "--kind", "overlap")[0] == 4
