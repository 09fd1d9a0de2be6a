from __future__ import annotations

import json
from importlib import resources

import jsonschema
import pytest

from spherica import corpus
from spherica.cli import main
from spherica.io import dumps_system, load_system


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


def schema(name):
    return json.loads(resources.files("spherica").joinpath("schemas", name).read_text())


def test_validate_exit_codes(capsys, fixtures_dir):
    assert run(capsys, "validate", fixtures_dir / "sl3_unipotent.json")[0] == 0
    code, out, _ = run(capsys, "validate", fixtures_dir / "sl3_unipotent_broken_a6.json")
    assert code == 1
    failed = [line.split()[0] for line in out.splitlines() if line[:1] == "A" and " fail " in line]
    assert failed == ["A6"]
    code, _, err = run(capsys, "validate", fixtures_dir / "does_not_exist.json")
    assert code == 2 and "cannot read" in err


def test_validate_parse_error_names_field(capsys, tmp_path, fixtures_dir):
    d = json.loads((fixtures_dir / "schalke_so4.json").read_text())
    d["colors"][0]["delta"][0] = 0.5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(d))
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and "colors[0].delta[0]" in err


def test_validate_json_matches_schema(capsys, fixtures_dir):
    s = schema("report.schema.json")
    for path in sorted(fixtures_dir.glob("*.json")):
        if "dim" in json.loads(path.read_text()):
            continue
        code, out, _ = run(capsys, "validate", path, "--json")
        report = json.loads(out)
        jsonschema.validate(report, s)
        assert code == (0 if report["ok"] else 1)


def test_fixture_files_match_schemas(fixtures_dir):
    sys_s, fan_s = schema("system.schema.json"), schema("fan.schema.json")
    for path in fixtures_dir.glob("*.json"):
        d = json.loads(path.read_text())
        jsonschema.validate(d, fan_s if "dim" in d else sys_s)


def test_catalog_sources(capsys, fixtures_dir, tmp_path, monkeypatch):
    sys = load_system(fixtures_dir / "schalke_so4.json").replace(catalog_path=None)
    f = tmp_path / "s.json"
    f.write_text(dumps_system(sys))
    code, out, _ = run(capsys, "validate", f, "--json")
    assert json.loads(out)["axioms"][2]["status"] == "skipped"
    monkeypatch.setenv("SPHERICA_CATALOG", str(fixtures_dir / "catalog_mini.txt"))
    code, out, _ = run(capsys, "validate", f, "--json")
    assert json.loads(out)["axioms"][2]["status"] == "pass"
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    code, out, _ = run(capsys, "validate", f, "--json", "--catalog", empty)
    assert code == 1 and json.loads(out)["axioms"][2]["status"] == "fail"


def test_p2_mode_flag(capsys, fixtures_dir):
    _, out, _ = run(capsys, "validate", fixtures_dir / "sl3_unipotent.json", "--p2-mode", "on", "--json")
    assert json.loads(out)["p2_mode"] is True


def test_roots_to_cone_and_back(capsys, fixtures_dir, tmp_path):
    code, out, _ = run(capsys, "roots", fixtures_dir / "schalke_so4.json", "--to-cone")
    assert code == 0 and "4 facet(s)" in out
    for name in ("schalke_so4.json", "sl3_unipotent.json", "frobenius_diag.json", "a1a1_mixed.json"):
        cone = tmp_path / f"cone_{name}"
        assert run(capsys, "roots", fixtures_dir / name, "--to-cone", "-o", cone)[0] == 0
        code, out, _ = run(capsys, "roots", cone, "--from-cone", "--json")
        assert code == 0
        sys = load_system(fixtures_dir / name)
        assert sorted(map(tuple, json.loads(out)["sigma"])) == sorted(sys.sigma)
    code, out, _ = run(capsys, "roots", cone, "--from-cone")
    assert "primitive in ZS cap Xi_p" in out


def test_roots_empty_sigma(capsys, fixtures_dir, tmp_path):
    cone = tmp_path / "flag_cone.json"
    run(capsys, "roots", fixtures_dir / "wenzel_flag_a2.json", "--to-cone", "-o", cone)
    d = json.loads(cone.read_text())
    assert d["sigma"] == [] and d["valuation_cone"]["facets"] == []
    code, out, _ = run(capsys, "roots", cone, "--from-cone", "--json")
    assert code == 0 and json.loads(out)["sigma"] == []


def test_from_cone_requires_cone_block(capsys, fixtures_dir):
    assert run(capsys, "roots", fixtures_dir / "schalke_so4.json", "--from-cone")[0] == 2


def test_localize_at_sigma(capsys, fixtures_dir, tmp_path):
    out_path = tmp_path / "loc.json"
    code, _, err = run(capsys, "localize", fixtures_dir / "schalke_so4.json",
                       "--at-sigma", "a1,a1+a2", "-o", out_path)
    assert code == 0 and "warning" in err
    derived = load_system(out_path)
    assert sorted(derived.sigma) == [(1, 0, 0), (1, 1, 0)]
    assert "provenance" in derived.meta
    assert run(capsys, "validate", out_path)[0] in (0, 1)
    code, _, err = run(capsys, "localize", fixtures_dir / "schalke_so4.json", "--at-sigma", "a1,a2+a3")
    assert code == 1 and "not a set of neighbors" in err
    code, out, _ = run(capsys, "localize", fixtures_dir / "schalke_so4.json", "--at-sigma", "s1,s2")
    assert code == 0


def test_localize_at_full_s_is_identity(capsys, fixtures_dir):
    code, out, _ = run(capsys, "localize", fixtures_dir / "sl3_unipotent.json", "--at-s", "a1,a2")
    assert code == 0
    d = json.loads(out)
    src = json.loads((fixtures_dir / "sl3_unipotent.json").read_text())
    for k in ("group", "p", "xi", "sigma", "sp", "colors"):
        assert d[k] == src[k]


def test_localize_at_s_lineage(capsys, fixtures_dir):
    code, out, err = run(capsys, "localize", fixtures_dir / "sl3_unipotent.json", "--at-s", "a1")
    assert code == 0
    d = json.loads(out)
    shared = [c for c in d["colors"] if c["name"] == "D0"]
    assert len(shared) == 1 and shared[0]["moved_by"] == ["a1"]
    assert "D2" in err


def test_localize_fan_mode(capsys, fixtures_dir):
    code, out, _ = run(capsys, "localize", fixtures_dir / "sl3_unipotent_fan.json", "--at-s", "a1",
                       "--mode", "fan", "--lambda", "1,2")
    assert code == 0 and json.loads(out)["fan"]
    assert run(capsys, "localize", fixtures_dir / "sl3_unipotent_fan.json", "--at-s", "a1",
               "--mode", "fan", "--lambda", "0,1")[0] == 1


def test_neighbors(capsys, fixtures_dir):
    code, out, _ = run(capsys, "neighbors", fixtures_dir / "schalke_so4.json", "--json")
    assert code == 0
    d = json.loads(out)
    pairs = {tuple(sorted(p)) for p in d["neighbor_pairs"]}
    assert len(pairs) == 4
    assert tuple(sorted(["a1", "a2+a3"])) not in pairs and tuple(sorted(["a1+a2", "a3"])) not in pairs
    _, text, _ = run(capsys, "neighbors", fixtures_dir / "sl3_unipotent.json")
    assert "simplicial: all subsets" in text


def test_example_verbs(capsys, tmp_path):
    code, out, _ = run(capsys, "example", "frobenius-diag", "-p", 3, "--q", 3)
    d = json.loads(out)
    assert code == 0 and d["sigma"] == [[1, 3]] and len(d["colors"]) == 1
    assert d["colors"][0]["q"] == {"g1.a1": 1, "g2.a1": 3}
    code, out, _ = run(capsys, "example", "wenzel-flag", "--group", "A2", "--f", "inf,2", "-p", 5)
    d = json.loads(out)
    assert d["sp"] == ["a1"] and d["xi"] == [] and len(d["colors"]) == 1
    assert d["colors"][0]["q"] == {"a2": 25}
    code, out, _ = run(capsys, "example", "sl3-unipotent", "-p", 2, "--q", 4)
    d = json.loads(out)
    assert d["meta"]["delta_on_simple_roots"] == {"D0": ["1/4", "1"], "D1": ["1", "-5"], "D2": ["-5/4", "1"]}
    assert run(capsys, "example", "frobenius-diag", "-p", 3, "--q", 4)[0] == 2
    for argv in (["schalke-so4"], ["sl3-unipotent", "-p", 5, "--q", 25], ["frobenius-diag", "-p", 2, "--q", 8],
                 ["wenzel-flag", "--group", "A3", "--f", "0,1,inf", "-p", 3]):
        path = tmp_path / "ex.json"
        assert run(capsys, "example", *argv, "--catalog-path", corpus.CATALOG_NAME, "-o", path)[0] == 0
        path.with_name(corpus.CATALOG_NAME).write_text(corpus.CATALOG_MINI)
        assert run(capsys, "validate", path)[0] == 0, argv


def test_fan_localize(capsys, fixtures_dir):
    code, out, _ = run(capsys, "fan-localize", fixtures_dir / "quadrant_fan.json", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["dim"] == 1 and d["cones"] == [[[-1]]]
    assert d["v_lambda"] == [[1, 0]] and d["c_lambda"]["rays"] == [[-1, 0]]
    jsonschema.validate(d, schema("fan.schema.json"))
    code, out, _ = run(capsys, "fan-localize", fixtures_dir / "quadrant_fan.json", "--lambda", "1,1")
    assert code == 0 and "Q^0" in out
    assert run(capsys, "fan-localize", fixtures_dir / "overlapping_fan.json")[0] == 1


def test_fixtures_are_regenerated_identically(fixtures_dir, tmp_path):
    written = corpus.write_fixtures(tmp_path)
    for name in written:
        assert (tmp_path / name).read_text() == (fixtures_dir / name).read_text(), name


def test_usage_errors(capsys, fixtures_dir):
    with pytest.raises(SystemExit) as e:
        main(["nonsense"])
    assert e.value.code == 2
    capsys.readouterr()
    assert run(capsys, "localize", fixtures_dir / "schalke_so4.json")[0] == 2
