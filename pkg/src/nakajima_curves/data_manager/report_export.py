import json
import logging
import sqlite3
import zipfile
from datetime import datetime
from pathlib import Path

from nakajima_curves import config
from . import database

logger = logging.getLogger(__name__)

REPORTS_DIR: Path = config.REPORTS_DIR


def _timestamp() -> str:
    return datetime.now().strftime("%Y%m%d-%H%M%S")


def write_report_json(report: dict | list, path: Path | str) -> Path | None:
    """Пишет отчёт в JSON. Возвращает путь к файлу или None при ошибке."""
    try:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report, ensure_ascii=False, indent=2, default=str), encoding="utf-8")
        logger.info(f"Отчёт: записан файл {path}")
        return path
    except (OSError, TypeError, ValueError) as e:
        logger.error(f"Отчёт: не удалось записать {path}: {e}", exc_info=True)
        return None


def save_run_report(run_id: int, report: dict | list) -> Path | None:
    return write_report_json(report, REPORTS_DIR / f"run-{run_id}-{_timestamp()}.json")


def create_reports_archive(keep_reports: int = 20) -> Path | None:
    """
    Zip-архив с консистентной копией SQLite-БД и последними JSON-отчётами.
    Возвращает путь к архиву или None при ошибке.
    """
    db_file = database.DB_FILE
    try:
        if not db_file.exists():
            logger.error(f"Архив: файл БД не найден: {db_file}")
            return None
        REPORTS_DIR.mkdir(parents=True, exist_ok=True)
        ts = _timestamp()
        tmp_db_copy = REPORTS_DIR / f"nakajima-{ts}.db"
        zip_path = REPORTS_DIR / f"reports-{ts}.zip"

        with sqlite3.connect(db_file) as src:
            with sqlite3.connect(tmp_db_copy) as dst:
                src.backup(dst)

        reports = sorted(REPORTS_DIR.glob("run-*.json"), key=lambda p: p.stat().st_mtime, reverse=True)
        with zipfile.ZipFile(zip_path, "w", compression=zipfile.ZIP_DEFLATED) as zf:
            zf.write(tmp_db_copy, arcname=tmp_db_copy.name)
            for report in reports[:keep_reports]:
                zf.write(report, arcname=f"reports/{report.name}")

        try:
            tmp_db_copy.unlink(missing_ok=True)
        except OSError:
            pass

        logger.info(f"Архив: создан файл {zip_path}")
        return zip_path
    except (OSError, sqlite3.Error, zipfile.BadZipFile) as e:
        logger.error(f"Архив: не удалось создать: {e}", exc_info=True)
        return None


def cleanup_old_archives(keep: int = 7) -> None:
    """Хранить только N последних архивов."""
    try:
        files = sorted(REPORTS_DIR.glob("reports-*.zip"), key=lambda p: p.stat().st_mtime, reverse=True)
        for f in files[keep:]:
            try:
                f.unlink(missing_ok=True)
            except OSError:
                pass
    except OSError as e:
        logger.warning(f"Архив: не удалось очистить старые архивы: {e}")
