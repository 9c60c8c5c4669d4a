import csv
import io
import json

import pytest

from app import cli
from app.schemas import CheckResult
from app.services import checks, exponents
from app.services.reporting import read_csv_metadata


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows_of(text):
    return list(csv.DictReader(text.splitlines()[1:]))


def test_exponent_command():
    code, out, _ = run("exponent", "--channel", "bec", "--param", "0.5", "--m", "2", "--strategy", "centralized")
    assert code == cli.EXIT_OK
    [row] = rows_of(out)
    assert float(row["value"]) == pytest.approx(0.321928, abs=1e-6)
    assert row["method"] == "scalar-optimize"
    meta = read_csv_metadata(out)
    assert meta["tool"] == "guesswork"
    assert meta["config"]["channel"] == {"family": "bec", "param": 0.5, "px": None, "w": None, "alphabet_x": None, "alphabet_y": None}


def test_bsc_decentralized_at_half_is_one_bit():
    code, out, _ = run("exponent", "--channel", "bsc", "--param", "0.5", "--m", "3", "--strategy", "decentralized")
    assert code == cli.EXIT_OK
    assert float(rows_of(out)[0]["value"]) == pytest.approx(1.0, abs=1e-9)


def test_sweep_command():
    code, out, _ = run("exponent", "--channel", "bsc", "--sweep", "--points", "3")
    assert code == cli.EXIT_OK
    assert len(rows_of(out)) == 3 * 5


def test_moment_command():
    code, out, _ = run("moment", "--channel", "bec", "--param", "0.5", "--n", "1", "--m", "2")
    assert code == cli.EXIT_OK
    assert float(rows_of(out)[0]["moment"]) == pytest.approx(1.125)


def test_moment_grid_in_json():
    code, out, _ = run(
        "moment", "--channel", "bsc", "--param", "0.25", "--n-grid", "1:3", "--strategy", "single", "--output", "json"
    )
    assert code == cli.EXIT_OK
    document = json.loads(out)
    assert [r["n"] for r in document["records"]] == [1, 2, 3]
    assert document["metadata"]["config"]["n_values"] == [1, 2, 3]


def test_simulate_is_reproducible():
    argv = ["simulate", "--channel", "bsc", "--param", "0.25", "--n-grid", "2:4", "--m", "2",
            "--trials", "200", "--seed", "3", "--strategy", "decentralized"]
    first, second = run(*argv), run(*argv)
    assert first[0] == cli.EXIT_OK
    assert first[1] == second[1]
    assert "slope" in read_csv_metadata(first[1])["fit"]


def test_toy_command():
    code, out, _ = run("toy", "--top-k", "20", "--flip-prob", "0.0", "--budgets", "1,2")
    assert code == cli.EXIT_OK
    rows = rows_of(out)
    assert len(rows) == 6
    assert {float(r["fraction_recovered"]) for r in rows} == {1.0}
    assert read_csv_metadata(out)["m"] == 3


def test_rank_command():
    code, out, _ = run("rank", "--channel", "bsc", "--param", "0.1", "--x", "0001", "--y", "0000")
    assert code == cli.EXIT_OK
    [row] = rows_of(out)
    assert row["rank"] == "2"
    assert row["rank_no_side_info"] == "2"


def test_check_command():
    code, out, _ = run("check", "--suite", "soft-elimination")
    assert code == cli.EXIT_OK
    assert all(r["passed"] == "True" for r in rows_of(out))


def test_failed_check_sets_exit_code(monkeypatch):
    monkeypatch.setattr(checks, "run_checks", lambda suite: [CheckResult(suite="demo", name="broken", passed=False)])
    code, _, err = run("check")
    assert code == cli.EXIT_CHECK_FAILED
    assert "demo: broken" in err


def test_output_file(tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = run("moment", "--channel", "bec", "--param", "0.5", "--n", "2", "--out", str(target))
    assert code == cli.EXIT_OK
    assert out == ""
    assert target.read_text(encoding="utf-8").startswith("# meta: ")


@pytest.mark.parametrize(
    "argv",
    [
        ("exponent", "--channel", "bsc"),
        ("exponent", "--bogus"),
        ("moment", "--channel", "bec", "--param", "0.5"),
        ("exponent", "--channel", "bec", "--param", "0.5", "--rho", "0"),
        ("simulate", "--channel", "bec", "--param", "0.5", "--n", "2", "--trials", "1"),
    ],
)
def test_usage_errors(argv):
    code, _, err = run(*argv)
    assert code == cli.EXIT_USAGE
    assert err


def test_cap_exceeded_exit_code():
    code, _, err = run("moment", "--channel", "bsc", "--param", "0.2", "--n", "13", "--strategy", "single")
    assert code == cli.EXIT_GUARD
    assert "enumeration_cap" in err


def test_resolution_guard_exit_code(tmp_path):
    channel = tmp_path / "channel.json"
    channel.write_text(json.dumps({"px": [0.5, 0.5], "w": [[0.9, 0.1], [0.2, 0.8]]}), encoding="utf-8")
    code, _, _ = run(
        "exponent", "--channel", "custom", "--channel-file", str(channel),
        "--strategy", "decentralized", "--m", "2", "--resolution", "0.5",
    )
    assert code == cli.EXIT_GUARD


def test_optimizer_disagreement_exit_code(monkeypatch):
    monkeypatch.setattr(exponents, "legendre_binary", lambda rho, q: 5.0)
    code, out, err = run("exponent", "--channel", "bec", "--param", "0.5", "--m", "2")
    assert code == cli.EXIT_GUARD
    assert out == ""
    assert "disagree" in err


def test_help_lists_exit_codes():
    assert "2 cap exceeded, resolution guard or closed form vs optimizer disagreement" in cli.build_parser().epilog
