import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# defining polynomials of GF(2^m) as bit masks; other degrees fall back to Conway polynomials
DEFAULT_DEFINING_POLYS = {2: 0x7, 3: 0xB, 4: 0x13, 8: 0x11D}
DEFAULT_FIELD = os.getenv("NAKAJIMA_DEFAULT_FIELD") or "gf2^4:0x13"

TORSION_MAX_EXTENSION = 8
TORSION_SEARCH_SEED = 0
POINT_COUNT_LIMIT_BITS = 20
VALUATION_START_PRECISION = 8
VALUATION_MAX_PRECISION = 4096
CANDIDATE_MAX_DEGREE = 24
GROUP_CLOSURE_FACTOR = 8
CENSUS_WORKERS = int(os.getenv("NAKAJIMA_CENSUS_WORKERS") or 1)
PLANE_SCAN_EXTENSIONS = (1, 2)
SAMPLE_POINTS = 24
GOLDEN_DIFF_LIMIT = 12
CENSUS_DEFAULT_Q = {"6.3": 8, "6.4": 4}

PROJECT_ROOT = Path(os.getenv("NAKAJIMA_HOME") or Path.cwd())
DB_FILE = Path(os.getenv("NAKAJIMA_DB_FILE") or PROJECT_ROOT / "nakajima.db")
REPORTS_DIR = Path(os.getenv("NAKAJIMA_REPORTS_DIR") or PROJECT_ROOT / "reports")

STATUS_MARKS = {"matched": "✅", "mismatched": "❌", "error": "⚠️", "not-computed": "⏭"}


def get_claim_line_text(example: str, claim: str, expected, computed, status: str) -> str:
    mark = STATUS_MARKS.get(status, "?")
    return f"{mark} [{example}] {claim}: ожидалось {expected}, получено {computed}"


def get_construction_summary_text(n: int, k: int, field_spec: str, genus: int, prank: int, group: str) -> str:
    return (
        f"Кривая X_k: n={n}, k={k}, поле {field_spec}\n"
        f"  род: {genus}, 2-ранг: {prank}\n"
        f"  группа: {group}"
    )


def get_run_summary_text(run_id: int, kind: str, counts: dict) -> str:
    parts = ", ".join(f"{status}: {counts.get(status, 0)}" for status in STATUS_MARKS)
    return f"Запуск #{run_id} ({kind}): {parts}"
