import os
import pathlib

import pytest

import qcomplete

DATA = pathlib.Path(os.environ.get("QC_TEST_DATA", pathlib.Path(__file__).resolve().parents[1] / "data"))
EXAMPLE = "SELECT Gender, Salary FROM Employees"
CLUSTERS = [2, 1, 2, 2, 3, 1, 2, 1, 1, 3]


@pytest.fixture
def db():
    d = qcomplete.Database()
    summary = d.load_csv(DATA / "employees.csv", "Employees")
    assert summary["rows"] == 10
    return d


def test_labelled_employees(db):
    result = db.complete(EXAMPLE, 3, labels=CLUSTERS, verify=True)
    rendered = [c["rendered"] for c in result["completions"]]
    assert rendered == [
        EXAMPLE + " WHERE Commission >= 6200",
        EXAMPLE + " WHERE Commission < 6200 AND Gender = 'F'",
        EXAMPLE + " WHERE Commission < 6200 AND Gender <> 'F'",
    ]
    assert [c["row_count"] for c in result["completions"]] == [4, 4, 2]
    assert result["verification"]["ok"] is True


def test_clustering_path(db):
    a = db.complete(EXAMPLE, 2, seed=3)
    b = db.complete(EXAMPLE, 2, seed=3)
    a["diagnostics"].pop("timings_ms")
    b["diagnostics"].pop("timings_ms")
    assert a == b
    assert sum(c["row_count"] for c in a["completions"]) == 10
    assert a["diagnostics"]["inertia"] is not None


def test_query_and_schema(db):
    rows = db.query(EXAMPLE, max_rows=4)
    assert rows["truncated"] is True
    assert rows["rows"][0] == ["F", 41160]
    schema = db.schema()
    assert [r["name"] for r in schema["relations"]] == ["Employees"]
    assert qcomplete.render("select a from t where (a is null or a < 1)") == (
        "SELECT a FROM t WHERE (a IS NULL OR a < 1)"
    )


def test_errors_carry_codes(db):
    with pytest.raises(qcomplete.QueryError) as parse_err:
        db.query("SELECT FROM Employees")
    assert parse_err.value.code == "PARSE_ERROR"
    assert parse_err.value.detail["position"] == 7

    with pytest.raises(qcomplete.QueryError) as k_err:
        db.complete(EXAMPLE, 1)
    assert k_err.value.code == "K_OUT_OF_RANGE"

    with pytest.raises(qcomplete.QueryError) as ragged:
        db.load_csv_text("bad", "a,b\n1\n")
    assert ragged.value.code == "RAGGED_ROW"


def test_demo_packages():
    d = qcomplete.Database()
    d.demo_packages(seed=2, cities=10, packages=300)
    result = d.complete("SELECT package_ID FROM Packages WHERE weight > 200", 3, verify=True)
    assert result["verification"]["ok"] is True
