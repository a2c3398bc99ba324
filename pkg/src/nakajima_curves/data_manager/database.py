import json
import logging
import sqlite3
from datetime import datetime

from nakajima_curves import config

logger = logging.getLogger(__name__)

DB_FILE = config.DB_FILE

# runtime settings that override config.py; values are stored as text
DEFAULT_SETTINGS = {
    "default_field": config.DEFAULT_FIELD,
    "torsion_max_extension": str(config.TORSION_MAX_EXTENSION),
    "valuation_start_precision": str(config.VALUATION_START_PRECISION),
    "census_workers": str(config.CENSUS_WORKERS),
    "default_seed": None,
}

INT_SETTINGS = ("torsion_max_extension", "valuation_start_precision", "census_workers", "default_seed")


def _now() -> str:
    return datetime.now().isoformat(timespec="seconds")


def initialize_db():
    try:
        DB_FILE.parent.mkdir(parents=True, exist_ok=True)
        with sqlite3.connect(DB_FILE) as conn:
            cursor = conn.cursor()
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS settings (
                    key TEXT PRIMARY KEY,
                    value TEXT
                )
            ''')
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS runs (
                    run_id INTEGER PRIMARY KEY AUTOINCREMENT,
                    kind TEXT NOT NULL, -- 'construct' | 'verify-lemmas' | 'census'
                    params TEXT,
                    status TEXT NOT NULL DEFAULT 'running',
                    started_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    finished_at TIMESTAMP,
                    report_json TEXT
                )
            ''')
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS claims (
                    claim_id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER NOT NULL,
                    example TEXT NOT NULL,
                    claim TEXT NOT NULL,
                    expected TEXT,
                    computed TEXT,
                    status TEXT NOT NULL, -- 'matched' | 'mismatched' | 'not-computed' | 'error'
                    detail TEXT,
                    FOREIGN KEY (run_id) REFERENCES runs (run_id)
                )
            ''')
            cursor.execute("CREATE INDEX IF NOT EXISTS idx_claims_run ON claims(run_id, example)")
            for key, value in DEFAULT_SETTINGS.items():
                cursor.execute("INSERT OR IGNORE INTO settings (key, value) VALUES (?, ?)", (key, value))
            conn.commit()
        run_migration()
        logging.info("База данных успешно инициализирована.")
    except sqlite3.Error as e:
        logging.error(f"Ошибка базы данных при инициализации: {e}")


def run_migration():
    if not DB_FILE.exists():
        logging.error(f"Файл базы данных {DB_FILE} не найден. Мигрировать нечего.")
        return
    try:
        with sqlite3.connect(DB_FILE) as conn:
            cursor = conn.cursor()
            cursor.execute("PRAGMA table_info(runs)")
            columns = [row[1] for row in cursor.fetchall()]
            for column, ddl in (("finished_at", "TIMESTAMP"), ("report_json", "TEXT")):
                if column not in columns:
                    cursor.execute(f"ALTER TABLE runs ADD COLUMN {column} {ddl}")
                    logging.info(f" -> Столбец '{column}' добавлен в 'runs'.")
            cursor.execute("PRAGMA table_info(claims)")
            if "detail" not in [row[1] for row in cursor.fetchall()]:
                cursor.execute("ALTER TABLE claims ADD COLUMN detail TEXT")
                logging.info(" -> Столбец 'detail' добавлен в 'claims'.")
            conn.commit()
    except sqlite3.Error as e:
        logging.error(f"Ошибка миграции базы данных: {e}")


def get_setting(key: str) -> str | None:
    try:
        with sqlite3.connect(DB_FILE) as conn:
            cursor = conn.cursor()
            cursor.execute("SELECT value FROM settings WHERE key = ?", (key,))
            result = cursor.fetchone()
            return result[0] if result else None
    except sqlite3.Error as e:
        logging.error(f"Failed to get setting '{key}': {e}")
        return None


def get_int_setting(key: str, default: int | None = None) -> int | None:
    raw = get_setting(key)
    if raw in (None, ""):
        return default
    try:
        return int(raw)
    except ValueError:
        logging.warning(f"Настройка '{key}' не является целым числом: {raw!r}")
        return default


def get_all_settings() -> dict:
    settings = {}
    try:
        with sqlite3.connect(DB_FILE) as conn:
            conn.row_factory = sqlite3.Row
            cursor = conn.cursor()
            cursor.execute("SELECT key, value FROM settings ORDER BY key")
            for row in cursor.fetchall():
                settings[row["key"]] = row["value"]
    except sqlite3.Error as e:
        logging.error(f"Failed to get all settings: {e}")
    return settings


def update_setting(key: str, value: str | None) -> bool:
    if key not in DEFAULT_SETTINGS:
        logging.warning(f"Неизвестная настройка '{key}'")
        return False
    if key in INT_SETTINGS and value not in (None, ""):
        try:
            int(value)
        except ValueError:
            logging.warning(f"Настройка '{key}' ожидает целое число, получено {value!r}")
            return False
    try:
        with sqlite3.connect(DB_FILE) as conn:
            cursor = conn.cursor()
            cursor.execute("INSERT OR REPLACE INTO settings (key, value) VALUES (?, ?)", (key, value))
            conn.commit()
            logging.info(f"Setting '{key}' updated.")
            return True
    except sqlite3.Error as e:
        logging.error(f"Failed to update setting '{key}': {e}")
        return False


def create_run(kind: str, params: dict) -> int | None:
    try:
        with sqlite3.connect(DB_FILE) as conn:
            cursor = conn.cursor()
            cursor.execute(
                "INSERT INTO runs (kind, params, status, started_at) VALUES (?, ?, 'running', ?)",
                (kind, json.dumps(params, ensure_ascii=False), _now()),
            )
            conn.commit()
            return cursor.lastrowid
    except sqlite3.Error as e:
        logging.error(f"Failed to create run '{kind}': {e}")
        return None


def finish_run(run_id: int, status: str, report: dict | list | None = None) -> bool:
    try:
        with sqlite3.connect(DB_FILE) as conn:
            cursor = conn.cursor()
            cursor.execute(
                "UPDATE runs SET status = ?, finished_at = ?, report_json = ? WHERE run_id = ?",
                (status, _now(), json.dumps(report, ensure_ascii=False, default=str) if report is not None else None, run_id),
            )
            conn.commit()
            return cursor.rowcount == 1
    except sqlite3.Error as e:
        logging.error(f"Failed to finish run {run_id}: {e}")
        return False


def add_claims(run_id: int, example: str, claims: list[dict]) -> int:
    """Store claim dicts (as produced by Claim.to_json); returns the number of rows written."""
    rows = [
        (
            run_id,
            example,
            c["claim"],
            json.dumps(c.get("expected"), ensure_ascii=False, default=str),
            json.dumps(c.get("computed"), ensure_ascii=False, default=str),
            c["status"],
            c.get("detail", ""),
        )
        for c in claims
    ]
    try:
        with sqlite3.connect(DB_FILE) as conn:
            cursor = conn.cursor()
            cursor.executemany(
                """
                INSERT INTO claims (run_id, example, claim, expected, computed, status, detail)
                VALUES (?, ?, ?, ?, ?, ?, ?)
                """,
                rows,
            )
            conn.commit()
            return len(rows)
    except sqlite3.Error as e:
        logging.error(f"Failed to store claims for run {run_id}: {e}")
        return 0


def get_run(run_id: int) -> dict | None:
    try:
        with sqlite3.connect(DB_FILE) as conn:
            conn.row_factory = sqlite3.Row
            cursor = conn.cursor()
            cursor.execute("SELECT * FROM runs WHERE run_id = ?", (run_id,))
            row = cursor.fetchone()
            return _run_row(row) if row else None
    except sqlite3.Error as e:
        logging.error(f"Failed to get run {run_id}: {e}")
        return None


def get_latest_run(kind: str | None = None) -> dict | None:
    try:
        with sqlite3.connect(DB_FILE) as conn:
            conn.row_factory = sqlite3.Row
            cursor = conn.cursor()
            if kind:
                cursor.execute("SELECT * FROM runs WHERE kind = ? ORDER BY run_id DESC LIMIT 1", (kind,))
            else:
                cursor.execute("SELECT * FROM runs ORDER BY run_id DESC LIMIT 1")
            row = cursor.fetchone()
            return _run_row(row) if row else None
    except sqlite3.Error as e:
        logging.error(f"Failed to get latest run: {e}")
        return None


def _run_row(row: sqlite3.Row) -> dict:
    run = dict(row)
    for key in ("params", "report_json"):
        if run.get(key):
            try:
                run[key] = json.loads(run[key])
            except json.JSONDecodeError:
                logging.warning(f"Запуск {run['run_id']}: поле {key} не является JSON")
    return run


def get_claims_for_run(run_id: int) -> list[dict]:
    try:
        with sqlite3.connect(DB_FILE) as conn:
            conn.row_factory = sqlite3.Row
            cursor = conn.cursor()
            cursor.execute("SELECT * FROM claims WHERE run_id = ? ORDER BY claim_id", (run_id,))
            return [dict(r) for r in cursor.fetchall()]
    except sqlite3.Error as e:
        logging.error(f"Failed to get claims for run {run_id}: {e}")
        return []


def get_claim_counts(run_id: int) -> dict[str, int]:
    try:
        with sqlite3.connect(DB_FILE) as conn:
            cursor = conn.cursor()
            cursor.execute("SELECT status, COUNT(*) FROM claims WHERE run_id = ? GROUP BY status", (run_id,))
            return {status: count for status, count in cursor.fetchall()}
    except sqlite3.Error as e:
        logging.error(f"Failed to count claims for run {run_id}: {e}")
        return {}
