import json
import math

import pytest

from conftest import ledrappier_shift
from gca.cli import main
from gca.ca import zoo
from gca.language import member
from gca.groups import preset
from gca.problem import ParseError, ValidationError, build, parse_text
from gca.projection import image_shift, kernel_shift, same_shift
from gca.shifts import Pattern, PeriodicConfiguration, torus_member


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def verdicts(report):
    return {v["property"]: v["verdict"] for v in report["verdicts"]}


def write(tmp_path, raw, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw) if not isinstance(raw, str) else raw)
    return str(path)


def test_member_with_oracle(capsys):
    code, rep = run(capsys, "member", "LEDRAPPIER", "SQUARE_1011", "--cross-check")
    assert code == 0 and verdicts(rep) == {"member": True}
    assert rep["stats"]["oracle"] == "found"
    cert = rep["verdicts"][0]["certificate"]["configuration"]
    c = PeriodicConfiguration(preset("Z2"), tuple(cert["periods"]), tuple(int(v) for v in cert["rows"]))
    assert torus_member(c, ledrappier_shift())


def test_member_false_is_still_success(capsys):
    code, rep = run(capsys, "member", "TWOPOINT", "ZERO_ONE")
    assert code == 0 and verdicts(rep) == {"member": False}


def test_budget_exit_code(capsys):
    code, rep = run(capsys, "member", "LEDRAPPIER", "SQUARE_1011", "--budget-period", "1", "--budget-box", "1",
                    "--budget-steps", "5")
    assert code == 2 and rep["error"] == "budget_exceeded" and rep["frontier"]


def test_compare_and_entropy(capsys):
    code, rep = run(capsys, "compare", "TWOPOINT", "FULLZ2")
    assert code == 0 and verdicts(rep) == {"subset_12": True, "subset_21": False, "equal": False}
    code, rep = run(capsys, "entropy", "FULLZ2")
    assert code == 0 and abs(verdicts(rep)["entropy"] - math.log(2)) < 1e-9


def test_presentations_reload(capsys):
    ex = zoo()
    for cmd, name, expect in (("image", "XOR", image_shift(ex["E1"])), ("kernel", "DOUBLE", kernel_shift(ex["E5"])),
                              ("image", "DOUBLE", image_shift(ex["E5"]))):
        code, rep = run(capsys, cmd, name)
        assert code == 0
        pf = build(rep["presentations"])
        (shift,) = pf.shifts.values()
        assert same_shift(shift, expect)


def test_image_routes_cross_checked(capsys):
    code, rep = run(capsys, "image", "XOR3", "--route", "generic", "--cross-check")
    assert code == 0
    assert all(v["verdict"] for v in rep["verdicts"])


def test_project_spacetime_trace_limitset(capsys):
    code, rep = run(capsys, "project", "LEDRAPPIER", "--width", "1")
    assert code == 0 and rep["presentations"]["shifts"]
    code, rep = run(capsys, "spacetime", "XOR")
    (st,) = rep["presentations"]["shifts"].values()
    assert code == 0 and st["dim"] == 2 and len(st["forbidden"]) == 4
    code, rep = run(capsys, "trace", "IDENTITY", "--shape", "[[0]]")
    assert code == 0
    code, rep = run(capsys, "limitset", "DOUBLE", "--cross-check")
    assert code == 0 and all(v["verdict"] for v in rep["verdicts"])
    (lim,) = build(rep["presentations"]).shifts.values()
    assert not member(Pattern(lim.group, ((0,),), (2,)), lim)


def test_analyze_report(capsys):
    code, rep = run(capsys, "analyze", "XOR", "--cross-check")
    assert code == 0
    v = verdicts(rep)
    assert v["injective"] is False and v["surjective"] is True and v["sensitivity_class"] == "sensitive"
    agree = rep["stats"]["oracle_agreement"]
    assert not agree["disagreements"]
    for item in rep["verdicts"]:
        if "certificate_verified" in item.get("stats", {}):
            assert item["stats"]["certificate_verified"]


def test_orbit(capsys, tmp_path):
    code, rep = run(capsys, "orbit", "XOR", "--config", "SEED16", "--steps", "3")
    assert code == 0 and rep["stats"]["picture"][1] == "#" + "." * 14 + "#"
    out = tmp_path / "o.pgm"
    code, _ = run(capsys, "orbit", "XOR", "--config", "SEED16", "--steps", "4", "--format", "pgm", "--out", str(out))
    assert code == 0 and out.read_text().startswith("P2\n16 4\n255\n")


def test_validation_errors(capsys, tmp_path):
    nonhom = {"groups": {"S3": {"preset": "S3"}}, "shifts": {"F": {"group": "S3", "dim": 1, "forbidden": []}},
              "maps": {"M": {"domain": "F", "neighborhood": [[0], [1]], "rule": "x0*x1"}}}
    code, rep = run(capsys, "analyze", "M", "--input", write(tmp_path, nonhom))
    assert code == 3 and "NotGroupHom" in rep["message"] and len(rep["witness"]) == 2
    undefined = {"shifts": {"F": {"group": "Q8", "dim": 1, "forbidden": []}}}
    code, rep = run(capsys, "entropy", "F", "--input", write(tmp_path, undefined))
    assert code == 3
    code, rep = run(capsys, "entropy", "F", "--input", write(tmp_path, '{"groups": {', "broken.json"))
    assert code == 3 and rep["line"] == 1
    code, rep = run(capsys, "member", "NOPE", "ONE")
    assert code == 3


def test_usage_errors_use_validation_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["member"])
    assert exc.value.code == 3


def test_engine_error_code(capsys):
    code, rep = run(capsys, "entropy", "LEDRAPPIER")
    assert code == 4 and rep["error"] == "NotOneDimensional"


def test_problem_parsing_rules():
    with pytest.raises(ValidationError):
        build({"groups": {"G": {"preset": "Z2", "extra": 1}}})
    with pytest.raises(ParseError) as exc:
        parse_text('{\n  "groups": [,]\n}')
    assert exc.value.line == 2
    cyclic = {"groups": {"Z2": {"preset": "Z2"}},
              "shifts": {"A": {"group": "Z2", "dim": 1, "kernel_of": "M"}},
              "maps": {"M": {"domain": "A", "neighborhood": [[0]], "rule": "x0"}}}
    with pytest.raises(ValidationError):
        build(cyclic)


def test_problem_schema_forms():
    raw = {
        "groups": {"Z2": {"preset": "Z2"}, "K": {"product": ["Z2", "Z2"]}, "P": {"power": {"of": "Z2", "cells": 2}}},
        "shifts": {
            "F": {"group": "Z2", "dim": 1, "forbidden": []},
            "T": {"group": "Z2", "dim": 1, "window": {"sizes": [2], "allowed": [["0", "0"], ["1", "1"]]}},
            "S": {"group": "K", "dim": 0, "members": [0, 3]},
            "KER": {"kernel_of": "X"},
        },
        "maps": {
            "X": {"domain": "F", "neighborhood": [[0], [1]],
                  "table": [{"in": [a, b], "out": str((int(a) + int(b)) % 2)} for a in "01" for b in "01"]},
        },
        "configs": {"C": {"shift": "T", "periods": [2], "rows": [["1", "1"]]}},
        "patterns": {"W": {"group": "Z2", "cells": [[0], [1]], "values": ["1", "1"]}},
        "defaults": {"budget": {"max_period": 5}},
    }
    pf = build(raw)
    xor = zoo()["E1"]
    assert (pf.maps["X"].table == xor.table).all()
    assert same_shift(pf.shifts["KER"], kernel_shift(xor))
    assert pf.groups["K"].order == 4 and pf.groups["P"].order == 4
    assert list(pf.shifts["S"].members) == [0, 3]
    assert torus_member(pf.configs["C"], pf.shifts["T"])
    assert member(pf.patterns["W"], pf.shifts["T"])
    assert pf.budget.max_period == 5
