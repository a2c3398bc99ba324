import pytest

from nakajima_curves.data_manager import database, report_export
from nakajima_curves.modules.autcheck import main_family_with_data
from nakajima_curves.modules.ellcurve import CurveE
from nakajima_curves.modules.gf2m import get_field


@pytest.fixture(scope="session")
def gf16():
    return get_field(4)


@pytest.fixture(scope="session")
def curve16(gf16):
    # y^2 + xy = x^3 + mu over GF(16)
    return CurveE(gf16, 2)


@pytest.fixture(scope="session")
def main_family():
    """(report, WittData) of X_k for a point of order 16, k chosen automatically."""
    return main_family_with_data(8)


@pytest.fixture()
def temp_db(tmp_path, monkeypatch):
    db_file = tmp_path / "nakajima.db"
    monkeypatch.setattr(database, "DB_FILE", db_file)
    monkeypatch.setattr(report_export, "REPORTS_DIR", tmp_path / "reports")
    database.initialize_db()
    return db_file
