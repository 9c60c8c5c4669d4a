import json
import math

import pytest

from app.models import LogBase
from app.schemas import MomentReport
from app.services.reporting import build_metadata, read_csv_metadata, render, to_csv


def test_csv_starts_with_metadata():
    meta = build_metadata({"subcommand": "moment", "base": LogBase.NATS, "rho": 1 / 3})
    text = to_csv([{"n": 1, "value": 2 / 3}], meta)
    lines = text.splitlines()
    assert lines[0].startswith("# meta: ")
    assert lines[1:] == ["n,value", "1,0.666666667"]
    parsed = read_csv_metadata(text)
    assert parsed["config"] == {"subcommand": "moment", "base": "nats", "rho": 0.333333333}
    assert parsed["tool"] == "guesswork"


def test_columns_come_first_and_missing_cells_are_empty():
    text = to_csv([{"b": 1}, {"a": 2, "b": None}], {}, columns=["a"])
    assert text.splitlines()[1:] == ["a,b", ",1", "2,"]


def test_models_and_nested_values():
    report = MomentReport.from_log2(n=2, rho=1.0, log2_moment=1.0)
    text = to_csv([report, {"n": 3, "extra": {"k": [1, 2]}}], {})
    header, first, second = text.splitlines()[1:]
    assert header.split(",")[:3] == ["n", "rho", "m"]
    assert first.startswith("2,1,1,single,2,1,0.5")
    assert '"{""k"":[1,2]}"' in second


def test_json_output_is_stable():
    meta = build_metadata({"seed": 1}, fit={"slope": math.pi})
    text = render([{"x": math.inf}], meta, "json")
    document = json.loads(text)
    assert document["metadata"]["fit"]["slope"] == pytest.approx(3.14159265)
    assert document["records"] == [{"x": "inf"}]
    assert text == render([{"x": math.inf}], meta, "json")


def test_missing_metadata_line():
    with pytest.raises(ValueError):
        read_csv_metadata("n,value\n1,2\n")
