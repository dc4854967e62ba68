import json

import numpy as np
import pandas as pd
import pytest

from projcone.dynamics.devmap import ProjPoint
from projcone.dynamics.geoflow import geodesic_classical
from projcone.errors import InputError
from projcone.utils.report_io import (
    dump_report,
    format_report,
    read_points_csv,
    read_trace_csv,
    to_jsonable,
    write_developed_csv,
    write_trace_csv,
)


def test_to_jsonable_converts_numpy_and_non_finite():
    value = to_jsonable({"a": np.float64(1.5), "b": np.array([1, 2]), "c": np.bool_(True),
                         "d": float("inf"), "e": (np.int64(3),)})
    assert value == {"a": 1.5, "b": [1, 2], "c": True, "d": "inf", "e": [3]}


def test_format_report_is_sorted_and_versioned():
    text = format_report({"zeta": 1, "alpha": [0.1, 2]})
    assert text.endswith("}\n")
    assert json.loads(text) == {"schema": 1, "zeta": 1, "alpha": [0.1, 2]}
    assert text.index('"alpha"') < text.index('"schema"') < text.index('"zeta"')


def test_dump_report_is_byte_deterministic(tmp_path):
    report = {"value": 0.1 + 0.2, "nested": {"b": 2, "a": 1}}
    first = dump_report(report, tmp_path / "a" / "report.json")
    second = dump_report(dict(reversed(list(report.items()))), tmp_path / "b" / "report.json")
    assert first == second
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()


def test_trace_csv_has_metadata_line(tmp_path, nonflat):
    trace = geodesic_classical(nonflat, (0.5, 0.0), (0.0, 1.0), 0.1, 3)
    path = write_trace_csv(trace, tmp_path / "trace.csv")
    first = path.read_text(encoding="utf-8").splitlines()[0]
    assert first == "# integrator=rk4 step=0.1 steps=3 truncated=false"
    frame = read_trace_csv(path)
    assert list(frame.columns) == ["t", "x1", "x2"]
    np.testing.assert_allclose(frame[["x1", "x2"]].to_numpy(), trace.points)


def test_developed_csv_columns(tmp_path):
    points = [ProjPoint.from_homogeneous([1.0, 0.1, -0.2]), ProjPoint.from_homogeneous([1.0, 0.0, 0.0])]
    path = write_developed_csv([[0.3, 0.6], [0.0, 0.0]], points, tmp_path / "dev.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["x1", "x2", "h0", "h1", "h2"]
    assert frame["h1"].tolist() == [0.1, 0.0]


def test_read_points_csv(tmp_path):
    named = tmp_path / "named.csv"
    named.write_text("label,x2,x1\na,0.5,0.25\n", encoding="utf-8")
    np.testing.assert_array_equal(read_points_csv(named, 2), [[0.25, 0.5]])
    plain = tmp_path / "plain.csv"
    plain.write_text("# targets\nu,v\n0.1,0.2\n0.3,0.4\n", encoding="utf-8")
    np.testing.assert_array_equal(read_points_csv(plain, 2), [[0.1, 0.2], [0.3, 0.4]])


@pytest.mark.parametrize("content", ["x1\n0.5\n", "x1,x2\n", "x1,x2\na,b\n"])
def test_read_points_csv_errors(tmp_path, content):
    path = tmp_path / "bad.csv"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(InputError):
        read_points_csv(path, 2)
    with pytest.raises(InputError):
        read_points_csv(tmp_path / "missing.csv", 2)
