import argparse
import json
import zipfile

import pytest

from nakajima_curves import config
from nakajima_curves.__main__ import _k_value, _power_of_two, build_parser, main
from nakajima_curves.census_controller import CensusController
from nakajima_curves.data_manager import database, report_export


def test_default_settings(temp_db):
    settings = database.get_all_settings()
    assert set(settings) == set(database.DEFAULT_SETTINGS)
    assert settings["default_field"] == config.DEFAULT_FIELD
    assert database.get_int_setting("torsion_max_extension") == config.TORSION_MAX_EXTENSION
    assert database.get_int_setting("default_seed") is None
    assert database.get_int_setting("default_seed", 7) == 7


def test_update_setting_validation(temp_db):
    assert database.update_setting("census_workers", "3")
    assert database.get_int_setting("census_workers") == 3
    assert not database.update_setting("census_workers", "many")
    assert not database.update_setting("no_such_key", "1")
    assert database.get_setting("no_such_key") is None
    assert database.update_setting("default_field", "gf2^8")
    assert database.get_setting("default_field") == "gf2^8"


def test_runs_and_claims(temp_db):
    run_id = database.create_run("census", {"examples": ["6.3"], "q": 4})
    assert run_id is not None
    run = database.get_run(run_id)
    assert run["status"] == "running"
    assert run["params"] == {"examples": ["6.3"], "q": 4}

    claims = [
        {"claim": "group order", "expected": 8, "computed": 8, "status": "matched"},
        {"claim": "genus", "expected": 3, "computed": 4, "status": "mismatched", "detail": "off by one"},
        {"claim": "2-rank", "expected": 9, "computed": None, "status": "not-computed"},
    ]
    assert database.add_claims(run_id, "6.3", claims) == 3
    stored = database.get_claims_for_run(run_id)
    assert [c["claim"] for c in stored] == ["group order", "genus", "2-rank"]
    assert json.loads(stored[1]["computed"]) == 4
    assert stored[1]["detail"] == "off by one"
    assert database.get_claim_counts(run_id) == {"matched": 1, "mismatched": 1, "not-computed": 1}

    assert database.finish_run(run_id, "mismatched", {"ok": False})
    run = database.get_run(run_id)
    assert run["status"] == "mismatched"
    assert run["report_json"] == {"ok": False}
    assert run["finished_at"]

    other = database.create_run("construct", {"n": 8})
    assert database.get_latest_run()["run_id"] == other
    assert database.get_latest_run("census")["run_id"] == run_id
    assert database.get_run(other + 100) is None


def test_report_files(temp_db, tmp_path):
    path = report_export.write_report_json({"a": [1, 2]}, tmp_path / "out" / "r.json")
    assert json.loads(path.read_text(encoding="utf-8")) == {"a": [1, 2]}

    saved = report_export.save_run_report(5, [{"example": "6.3"}])
    assert saved.parent == report_export.REPORTS_DIR
    assert saved.name.startswith("run-5-")

    archive = report_export.create_reports_archive()
    assert archive is not None
    with zipfile.ZipFile(archive) as zf:
        names = zf.namelist()
    assert f"reports/{saved.name}" in names
    assert any(n.endswith(".db") for n in names)
    assert not list(report_export.REPORTS_DIR.glob("nakajima-*.db"))


def test_archive_without_database(tmp_path, monkeypatch):
    monkeypatch.setattr(database, "DB_FILE", tmp_path / "missing.db")
    monkeypatch.setattr(report_export, "REPORTS_DIR", tmp_path / "reports")
    assert report_export.create_reports_archive() is None


def test_controller_settings(temp_db):
    controller = CensusController()
    assert controller.update_setting("census_workers=2")["status"] == "success"
    assert controller.update_setting("census_workers")["status"] == "error"
    assert controller.update_setting("census_workers=two")["status"] == "error"
    assert database.get_int_setting("census_workers") == 2


def test_controller_census_stores_run(temp_db, tmp_path):
    controller = CensusController()
    result = controller.census(["6.6q"], workers=1)
    assert result["status"] == "success"
    run_id = result["run_id"]
    assert database.get_run(run_id)["kind"] == "census"
    claims = database.get_claims_for_run(run_id)
    assert {c["example"] for c in claims} == {"6.6q"}
    assert len(claims) == len(result["reports"][0]["claims"])
    assert database.get_claim_counts(run_id)["not-computed"] == 3

    exported = controller.export_report(tmp_path / "census.json")
    assert exported["status"] == "success"
    payload = json.loads((tmp_path / "census.json").read_text(encoding="utf-8"))
    assert payload["run_id"] == run_id
    assert len(payload["claims"]) == len(claims)


def test_controller_rejects_unknown_example(temp_db):
    result = CensusController().census(["9.9"])
    assert result["status"] == "error"
    assert database.get_latest_run() is None


def test_export_without_runs(temp_db, tmp_path):
    assert CensusController().export_report(tmp_path / "x.json")["status"] == "error"


def test_argument_types():
    assert _power_of_two("8") == 8
    assert _k_value("auto") == "auto"
    assert _k_value("3") == 3
    for bad in ("6", "1", "x"):
        with pytest.raises(argparse.ArgumentTypeError):
            _power_of_two(bad)
    for bad in ("4", "odd"):
        with pytest.raises(argparse.ArgumentTypeError):
            _k_value(bad)


def test_parser():
    args = build_parser().parse_args(["census", "--example", "6.3", "--q", "8"])
    assert (args.command, args.example, args.q) == ("census", "6.3", 8)
    args = build_parser().parse_args(["report", "--json", "out.json", "--archive"])
    assert args.path == "out.json" and args.archive
    with pytest.raises(SystemExit):
        build_parser().parse_args(["construct", "--n", "12"])


def test_main_settings(temp_db, monkeypatch):
    monkeypatch.setattr(config, "TORSION_MAX_EXTENSION", config.TORSION_MAX_EXTENSION)
    monkeypatch.setattr(config, "VALUATION_START_PRECISION", config.VALUATION_START_PRECISION)
    monkeypatch.setattr(config, "CENSUS_WORKERS", config.CENSUS_WORKERS)
    assert main(["settings", "--set", "default_seed=11"]) == 0
    assert database.get_int_setting("default_seed") == 11
    assert main(["settings"]) == 0
    assert main(["settings", "--set", "bogus=1"]) == 1
