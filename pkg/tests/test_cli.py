import json
from fractions import Fraction

import pytest

from liefilt.cli import (
    InputError,
    emit,
    main,
    parse_algebra,
    run_pipeline,
    serialize_algebra,
)
from liefilt.liealg import FilteredLieAlgebra, LieAlgebra
from liefilt.models import heisenberg, ode_algebra


def test_serialize_parse_round_trip():
    h = heisenberg(3)
    doc = serialize_algebra(h)
    back = parse_algebra(json.loads(json.dumps(doc)))
    assert back.alg.labels == h.alg.labels
    assert back.alg._table == h.alg._table
    assert back.degrees == h.degrees


def test_parse_malformed_fraction_names_field():
    doc = {
        "basis": [{"label": "a", "degree": -1}, {"label": "b", "degree": -1}, {"label": "c", "degree": -2}],
        "brackets": [{"i": 0, "j": 1, "terms": [{"k": 2, "num": 1, "den": 0}]}],
    }
    with pytest.raises(InputError) as err:
        parse_algebra(doc)
    assert "brackets[0].terms[0]" in str(err.value)


def test_parse_jacobi_violation_reports_witness():
    doc = {
        "basis": [{"label": "x", "degree": -1}, {"label": "y", "degree": -1}, {"label": "z", "degree": -2}],
        "brackets": [
            {"i": 0, "j": 1, "terms": [{"k": 2, "num": 1, "den": 1}]},
            {"i": 0, "j": 2, "terms": [{"k": 0, "num": 1, "den": 1}]},
        ],
    }
    with pytest.raises(InputError) as err:
        parse_algebra(doc)
    assert "(0, 1, 2)" in str(err.value)


def test_pipeline_skips_after_jacobi_failure():
    bad = LieAlgebra(["x", "y", "z"], {(0, 1): {2: Fraction(1)}, (0, 2): {0: Fraction(1)}})
    f = FilteredLieAlgebra(bad, [-1, -1, -2])
    report = run_pipeline(f, {"input": {}})
    statuses = {s["name"]: s["status"] for s in report["stages"]}
    assert statuses["jacobi"] == "fail"
    assert statuses["effectivity"] == "skip"
    assert not report["summary"]["passed"]


def test_pipeline_ode_full_profile():
    report = run_pipeline(ode_algebra(3, 1), {"input": {"model": "ode", "params": {"k": 3, "m": 1}},
                                              "codiff": "ode", "prolong": True, "seed": 0,
                                              "demo_normalize": True})
    statuses = {s["name"]: s["status"] for s in report["stages"]}
    assert report["summary"]["passed"]
    assert statuses["codifferential"] == "pass"
    assert statuses["quotient_vs_second_cohomology"] == "pass"
    h1 = next(s for s in report["stages"] if s["name"] == "first_cohomology")
    assert h1["full_prolongation_pair"] is True
    assert all(h1["table"][str(ell)] == 0 for ell in range(1, 6))


def test_pipeline_mutation_triple_verdict():
    from liefilt.models import mutation_triple

    report = run_pipeline(mutation_triple(2), {"input": {"model": "mutation_triple"}})
    verdict = next(s for s in report["stages"] if s["name"] == "associated_graded_equality")
    assert verdict["status"] == "pass"
    assert report["summary"]["passed"]


def test_emit_json_deterministic():
    report = run_pipeline(heisenberg(3), {"input": {"model": "heisenberg"}})
    a = emit(report, "json")
    b = emit(run_pipeline(heisenberg(3), {"input": {"model": "heisenberg"}}), "json")
    assert a == b
    parsed = json.loads(a)
    assert parsed["summary"]["passed"] is True


def test_emit_text_contains_table():
    report = run_pipeline(ode_algebra(1, 1), {"input": {"model": "ode"}})
    text = emit(report, "text")
    assert "degree | dim" in text
    assert "result:" in text


def test_main_model_run(capsys):
    code = main(["report", "--model", "heisenberg", "--param", "d=3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "result: PASS" in out


def test_main_catalog(capsys):
    code = main(["catalog"])
    out = capsys.readouterr().out
    assert code == 0
    assert "ode" in out and "mutation_triple" in out


def test_main_bad_file_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    code = main(["report", "--file", str(path)])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_main_jacobi_violating_file_exits_two(tmp_path, capsys):
    doc = {
        "basis": [{"label": "x", "degree": -1}, {"label": "y", "degree": -1}, {"label": "z", "degree": -2}],
        "brackets": [
            {"i": 0, "j": 1, "terms": [{"k": 2, "num": 1, "den": 1}]},
            {"i": 0, "j": 2, "terms": [{"k": 0, "num": 1, "den": 1}]},
        ],
    }
    path = tmp_path / "nonjacobi.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code = main(["report", "--file", str(path)])
    assert code == 2
    assert "Jacobi" in capsys.readouterr().err


def test_main_check_failure_exits_one(tmp_path, capsys):
    # a filtration that declares no top level although one is detected
    doc = {
        "basis": [{"label": "e", "filtration_index": 0},
                  {"label": "h", "filtration_index": 0},
                  {"label": "f", "filtration_index": -1}],
        "brackets": [
            {"i": 0, "j": 1, "terms": [{"k": 0, "num": -2, "den": 1}]},
            {"i": 0, "j": 2, "terms": [{"k": 1, "num": 1, "den": 1}]},
            {"i": 1, "j": 2, "terms": [{"k": 2, "num": -2, "den": 1}]},
        ],
    }
    path = tmp_path / "flat_borel.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code = main(["report", "--file", str(path)])
    out = capsys.readouterr().out
    assert code == 1
    assert "condition_B" in out
    assert "result: FAIL" in out


def test_main_round_trip_via_files(tmp_path, capsys):
    model_path = tmp_path / "h3.json"
    code = main(["serialize", "--model", "heisenberg", "--param", "d=3", "--out", str(model_path)])
    assert code == 0
    code = main(["report", "--file", str(model_path), "--format", "json", "--out", str(tmp_path / "rep.json")])
    assert code == 0
    report = json.loads((tmp_path / "rep.json").read_text(encoding="utf-8"))
    assert report["summary"]["passed"] is True


def test_codifferential_from_file(tmp_path, capsys):
    from liefilt.normcond import adjoint_codifferential, ode_inner_product

    c = adjoint_codifferential(ode_inner_product(3, 1))

    def dump(m):
        return [[f"{x.numerator}/{x.denominator}" for x in row] for row in m.data]

    path = tmp_path / "codiff.json"
    path.write_text(json.dumps({"d2": dump(c.d2), "d3": dump(c.d3)}), encoding="utf-8")
    code = main(["report", "--model", "ode", "--param", "k=3", "--param", "m=1",
                 "--codiff", f"file:{path}"])
    out = capsys.readouterr().out
    assert code == 0
    assert "result: PASS" in out


def test_degrees_flag_restricts_table(capsys):
    code = main(["report", "--model", "ode", "--param", "k=1", "--param", "m=1",
                 "--degrees", "1..2", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    report = json.loads(out)
    h1 = next(s for s in report["stages"] if s["name"] == "first_cohomology")
    assert set(h1["table"]) == {"1", "2"}
    # the verdict still scans the full positive range
    assert h1["full_prolongation_pair"] is False
