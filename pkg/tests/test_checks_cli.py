import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from qgrass.checks import CATALOG, MUTATIONS, CheckOptions, UnknownCheck, report_json, run_all, run_check
from qgrass.cli import main

ROOT = Path(__file__).resolve().parents[1]
FAST = CheckOptions(confluence_triples=20, degree3_samples=5)


def schema():
    return json.loads(resources.files("qgrass").joinpath("report_schema.json").read_text())


def test_shipped_schema_matches_docs():
    assert json.loads((ROOT / "docs" / "report_schema.json").read_text()) == schema()


def test_catalog_has_the_required_ids():
    required = {
        "lemma-how-u-commutes", "lemma-to-and-fro", "cor-belonging", "prop-k-nk", "diagram-tau",
        "h0-in-h1", "example-no-h0", "prop-hdash-kernel", "theta-antiauto", "sec6-commutation",
        "sec6-gradings", "sec6-membership", "thm-reduced-auto-instance", "dq-central",
        "pbw-confluence", "standard-basis-deg2",
    }
    assert required <= set(CATALOG)
    assert all(c.statement for c in CATALOG.values())


def test_run_check_examples():
    r = run_check("lemma-how-u-commutes", (2, 4))
    assert r.status == "pass" and r.cases == 6 and r.witnesses == []
    r = run_check("example-no-h0", (2, 4))
    assert r.status == "pass"
    assert r.evidence[0].startswith("none returned; infeasible prime-2 subsystem")
    r = run_check("diagram-tau", (2, 5))
    assert r.status == "skipped" and r.reason == "requires 2k = n"


def test_unknown_id():
    with pytest.raises(UnknownCheck):
        run_check("no-such-check", (2, 4))


def test_mutation_flips_core_checks():
    rel = MUTATIONS["row"]
    for cid, shape in (("pbw-confluence", (2, 2)), ("dq-central", (3, 3)),
                       ("lemma-how-u-commutes", (2, 4))):
        r = run_check(cid, shape, FAST, rel)
        assert r.status == "fail" and r.witnesses
    # the mutation does not leak into later runs
    assert run_check("dq-central", (2, 2)).status == "pass"


def test_crash_is_a_failure(monkeypatch):
    from qgrass import checks

    def boom(*_):
        raise RuntimeError("kaboom")

    monkeypatch.setitem(checks.CATALOG, "h0-in-h1",
                        checks.CheckDef("h0-in-h1", "grass", "x", boom, True))
    r = run_check("h0-in-h1", (2, 4))
    assert r.status == "fail" and "kaboom" in r.witnesses[0]


def test_small_shape_skips_automorphism_checks():
    rep = run_all([(1, 3)], FAST)
    by_id = {}
    for r in rep["checks"]:
        by_id.setdefault(r.id, []).append(r)
    assert all(r.status == "skipped" and r.reason == "requires k > 1" for r in by_id["prop-k-nk"])
    assert all(r.status == "pass" for r in by_id["lemma-how-u-commutes"])
    assert all(r.status == "pass" for r in by_id["pbw-confluence"])
    jsonschema.validate(json.loads(report_json(rep)), schema())


def test_reports_validate_and_are_deterministic():
    ids = ["example-no-h0", "prop-hdash-kernel", "pbw-confluence", "diagram-tau", "sec6-membership"]
    a = run_all([(2, 4), (2, 5)], FAST, ids=ids)
    b = run_all([(2, 4), (2, 5)], FAST, ids=ids)
    jsonschema.validate(json.loads(report_json(a)), schema())
    assert report_json(a, elapsed=False) == report_json(b, elapsed=False)
    assert [r.id for r in a["checks"]] == sorted(r.id for r in a["checks"])


def test_failing_report_validates():
    rep = run_all([(2, 4)], FAST, mutate="row", ids=["lemma-how-u-commutes"])
    data = json.loads(report_json(rep))
    jsonschema.validate(data, schema())
    assert data["summary"]["fail"] == 1 and data["mutation"] == "row"


# -- command line ---------------------------------------------------------------


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_nf(capsys):
    code, out, _ = run(capsys, "nf", "--m", "2", "--n", "2", "--expr", "x[2,2]*x[1,1]")
    assert code == 0
    assert out.strip() == "x[1,1]*x[2,2] - (q - q^-1)*x[1,2]*x[2,1]"
    code, out, _ = run(capsys, "nf", "--ring", "scalar", "--expr", "q^-1*(q - q^-1)")
    assert out.strip() == "1 - q^-2"
    code, out, _ = run(capsys, "nf", "--ring", "t", "--k", "2", "--n", "4", "--expr", "[34]")
    assert out.strip() == "x[1,1]*x[2,2]*y - q*x[1,2]*x[2,1]*y"


def test_cli_det_and_minor(capsys):
    assert run(capsys, "det", "--m", "2")[1].strip() == "x[1,1]*x[2,2] - q*x[1,2]*x[2,1]"
    code, out, _ = run(capsys, "minor", "--m", "2", "--n", "3", "--rows", "1,2", "--cols", "1,3")
    assert out.strip() == "x[1,1]*x[2,3] - q*x[1,3]*x[2,1]"
    assert run(capsys, "det", "--m", "2", "--n", "3")[0] == 2


def test_cli_straighten(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, out, _ = run(capsys, "straighten", "--k", "2", "--n", "4", "--expr", "[34][12]",
                       "--json", str(path))
    assert code == 0 and out.strip() == "q^-2 * [1,2][3,4]"
    data = json.loads(path.read_text())
    assert data["terms"] == [{"word": [[1, 2], [3, 4]], "coefficient": "(1)/(q^2)"}]


def test_cli_straighten_cap(capsys, monkeypatch):
    expr = "[24][13][12][12]"
    code, _, err = run(capsys, "straighten", "--k", "2", "--n", "4", "--expr", expr)
    assert code == 2 and "cap" in err
    monkeypatch.setenv("QGRASS_MAX_DEGREE", "4")
    assert run(capsys, "straighten", "--k", "2", "--n", "4", "--expr", expr)[0] == 0


def test_cli_apply_auto(capsys, tmp_path):
    spec = '{"alpha": [1, 1, 1], "beta": [1, 1, 1], "diagram": true}'
    code, out, _ = run(capsys, "apply-auto", "--k", "3", "--n", "6", "--auto", spec, "--expr", "[126]")
    assert code == 0 and out.strip() == "[2,3,4]"
    f = tmp_path / "spec.json"
    f.write_text('{"alpha0": 1, "alpha": [2, 1], "beta": [1, 1]}')
    code, out, _ = run(capsys, "apply-auto", "--k", "2", "--n", "4", "--auto", str(f), "--expr", "[13]")
    assert out.strip() == "2 * [1,3]"
    code, out, _ = run(capsys, "apply-auto", "--k", "2", "--n", "4", "--map", "theta", "--expr", "[12]")
    assert out.strip() == "[3,4]"
    code, _, err = run(capsys, "apply-auto", "--k", "2", "--n", "5", "--auto", spec, "--expr", "[12]")
    assert code == 2


def test_cli_check(capsys):
    code, out, _ = run(capsys, "check", "--id", "diagram-tau", "--k", "2", "--n", "5")
    assert code == 0 and out.startswith("SKIPPED diagram-tau")
    code, out, _ = run(capsys, "check", "--id", "dq-central", "--m", "2", "--n", "2", "--mutate", "row")
    assert code == 1 and out.startswith("FAIL")
    code, out, _ = run(capsys, "check", "--id", "example-no-h0", "--k", "2", "--n", "4", "--json", "-")
    data = json.loads(out)
    jsonschema.validate(data, schema())
    assert data["checks"][0]["status"] == "pass"
    assert run(capsys, "check", "--id", "bogus", "--k", "2", "--n", "4")[0] == 2


def test_cli_parse_error(capsys):
    code, _, err = run(capsys, "nf", "--m", "2", "--n", "2", "--expr", "x[1,1]+*")
    assert code == 2 and "line 1, column 8" in err


def test_cli_unwritable_output(capsys, tmp_path):
    target = tmp_path / "missing" / "out.json"
    code, _, err = run(capsys, "det", "--m", "2", "--json", str(target))
    assert code == 2 and "cannot write" in err


def test_cli_check_all_small(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "check-all", "--shapes", "1,3", "--json", str(path))
    assert code == 0
    jsonschema.validate(json.loads(path.read_text()), schema())
