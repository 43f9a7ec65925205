import csv
import io
from dataclasses import replace

import pytest

from nbwalk import cli
from nbwalk.graph import fixture_path


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_info_diamond():
    code, out, _ = run("info", fixture_path("diamond"))
    assert code == 0
    table = dict(rows(out)[1:])
    assert rows(out)[0] == ["key", "value"]
    assert table["n"] == "4" and table["m"] == "5"
    assert table["classification"] == "General"
    assert table["irreducible"] == "true" and table["aperiodic"] == "true"


def test_info_bowtie_period():
    _, out, _ = run("info", fixture_path("bowtie"))
    table = dict(rows(out)[1:])
    assert table["period"] == "3" and table["aperiodic"] == "false"


def test_spectrum_both_k4():
    code, out, err = run("spectrum", "--method", "both", fixture_path("k4"))
    assert code == 0
    table = rows(out)
    assert table[0] == ["re", "im", "multiplicity", "source"]
    assert {r[3] for r in table[1:]} == {"closed-form", "dense"}
    assert sum(int(r[2]) for r in table[1:] if r[3] == "dense") == 12
    assert "max matching distance" in err and "(match)" in err


def test_spectrum_closed_form_on_general_graph_is_input_error():
    code, _, err = run("spectrum", "--method", "closed-form", fixture_path("diamond"))
    assert code == 1 and "regular" in err


def test_ihara_check_bowtie_unit():
    code, out, _ = run("ihara-check", "--weights", "unit", fixture_path("bowtie"))
    assert code == 0
    table = rows(out)
    assert table[0] == ["identity", "u", "lhs", "rhs", "residual"]
    assert len(table) == 1 + 2 * 21
    assert max(float(r[4]) for r in table[1:]) < 1e-9


def test_u_grid_with_negative_start():
    code, out, _ = run("ihara-check", "--u-grid", "-0.2:0.2:5", fixture_path("k4"))
    assert code == 0
    us = [r[1] for r in rows(out)[1:] if r[0] == "unweighted"]
    assert us == ["-0.2", "-0.1", "0", "0.1", "0.2"]


def test_zero_is_printed_without_sign():
    assert cli.fmt(-0.0) == "0"
    assert cli.fmt(1 / 3) == "0.333333333333"
    assert cli.fmt(True) == "true"
    assert cli.fmt(float("nan")) == ""


def test_decomp_check():
    code, out, _ = run("decomp-check", "--u-grid=-0.3:0.3:3", fixture_path("petersen"))
    assert code == 0
    table = rows(out)
    assert table[0][:2] == ["u", "lower_left"] and len(table) == 4


def test_mix_columns():
    code, out, err = run("mix", "--steps", "20", fixture_path("diamond"))
    assert code == 0
    table = rows(out)
    assert table[0] == ["t", "chi_squared", "max_norm", "rate_estimate"]
    assert len(table) == 22 and table[1][3] == ""
    assert "fitted tail rate" in err


def test_simulate_by_label():
    code, out, _ = run("simulate", "--start", "b1", "--steps", "5", "--walkers", "20000",
                       "--seed", "4", fixture_path("k23"))
    assert code == 0
    table = rows(out)
    assert table[0] == ["vertex", "empirical", "exact", "abs_deviation"]
    assert sorted(r[0] for r in table[1:]) == ["a1", "a2", "a3", "b1", "b2"]
    assert sum(float(r[2]) for r in table[1:]) == pytest.approx(1.0)
    assert max(float(r[3]) for r in table[1:]) < 0.02


def test_simulate_tight_tolerance_fails():
    code, _, err = run("simulate", "--walkers", "50", "--tol", "1e-9", fixture_path("diamond"))
    assert code == 2 and "FAILED" in err


def test_laplacian_compare():
    code, out, _ = run("laplacian-compare", fixture_path("petersen"))
    assert code == 0
    header, values = rows(out)
    assert header == ["lambda1_L", "lambda1_L_nb", "chung_bound", "inequality_ok"]
    assert values[0] == "0.666666666667" and values[3] == "true"


def test_out_file(tmp_path):
    target = tmp_path / "o.csv"
    code, out, _ = run("laplacian-compare", "--out", target, fixture_path("k4"))
    assert code == 0 and out == ""
    assert target.read_text().startswith("lambda1_L,")


def test_weight_file(tmp_path):
    wf = tmp_path / "w.txt"
    wf.write_text("# weights\n1 2.0\n3 0.5\n")
    assert run("ihara-check", "--weight-file", wf, fixture_path("diamond"))[0] == 0
    assert run("decomp-check", "--weights", wf, fixture_path("diamond"))[0] == 0
    wf.write_text("1 -1\n")
    assert run("ihara-check", "--weights", wf, fixture_path("diamond"))[0] == 1
    wf.write_text("nine 1.0\n")
    assert run("ihara-check", "--weights", wf, fixture_path("diamond"))[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus", "x.edges"],
        ["info"],
        ["spectrum", "--method", "exact", "g.edges"],
        ["mix", "--steps", "0", "g.edges"],
        ["simulate", "--walkers", "0", "g.edges"],
        ["ihara-check", "--tol", "-1", "g.edges"],
        ["ihara-check", "--u-grid", "1:2", "g.edges"],
    ],
)
def test_usage_errors_exit_one_and_print_grammar(argv):
    code, out, err = run(*argv)
    assert code == 1 and out == ""
    assert "usage: nbwalk" in err


def test_input_errors_exit_one(tmp_path):
    assert run("info", tmp_path / "missing.edges")[0] == 1
    bad = tmp_path / "bad.edges"
    bad.write_text("a b\nb c\nc c\n")
    code, _, err = run("info", bad)
    assert code == 1 and "line 3" in err
    pendant = tmp_path / "pendant.edges"
    pendant.write_text("a b\nb c\nc a\nc d\n")
    assert run("info", pendant)[0] == 1
    assert run("simulate", "--start", "zz", fixture_path("k4"))[0] == 1


def test_corrupted_operator_gives_exit_two(monkeypatch):
    real = cli.op_weighted

    def corrupted(es, w):
        ops = real(es, w)
        P = ops.P.copy()
        P[0, 3] += 0.1
        return replace(ops, P=P)

    monkeypatch.setattr(cli, "op_weighted", corrupted)
    code, out, err = run("ihara-check", fixture_path("diamond"))
    assert code == 2 and "FAILED" in err
    assert out.startswith("identity,u,lhs,rhs,residual")


SUBCOMMAND_ARGS = [
    ["info"],
    ["ihara-check", "--weights", "degree"],
    ["decomp-check", "--u-grid", "-0.4:0.4:3"],
    ["spectrum", "--method", "dense"],
    ["mix", "--steps", "30"],
    ["simulate", "--steps", "6", "--walkers", "5000", "--seed", "11"],
    ["laplacian-compare"],
]


@pytest.mark.parametrize("args", SUBCOMMAND_ARGS, ids=lambda a: a[0])
def test_repeated_runs_are_byte_identical(args):
    first = run(*args, fixture_path("triangle_pendant"))
    second = run(*args, fixture_path("triangle_pendant"))
    assert first == second
    assert first[0] == 0


def test_main_entry_point(capsys):
    assert cli.main(["info", str(fixture_path("k4"))]) == 0
    assert "Regular(d=3)" in capsys.readouterr().out
