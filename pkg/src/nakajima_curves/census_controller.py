import logging
from pathlib import Path

from nakajima_curves import config
from nakajima_curves.data_manager import database, report_export
from nakajima_curves.modules.autcheck import find_good_k, main_family_with_data, setup_torsion, verify_lemmas
from nakajima_curves.modules.errors import AlgebraError
from nakajima_curves.modules.tower import ELLIPTIC, ASExt
from nakajima_curves.reproduce.bivar import eliminate_to_plane
from nakajima_curves.reproduce.census import EXAMPLES, run_census

logger = logging.getLogger(__name__)


class CensusController:
    """Runs constructions and census jobs, stores them as runs and answers with status dictionaries."""

    def __init__(self):
        self._settings: dict = {}

    def apply_settings(self) -> dict:
        self._settings = database.get_all_settings()
        config.TORSION_MAX_EXTENSION = database.get_int_setting("torsion_max_extension", config.TORSION_MAX_EXTENSION)
        config.VALUATION_START_PRECISION = database.get_int_setting(
            "valuation_start_precision", config.VALUATION_START_PRECISION
        )
        config.CENSUS_WORKERS = database.get_int_setting("census_workers", config.CENSUS_WORKERS)
        logger.debug(f"Настройки применены: {self._settings}")
        return self._settings

    def _field(self, field_spec: str | None) -> str:
        return field_spec or self._settings.get("default_field") or config.DEFAULT_FIELD

    def _seed(self, seed: int | None) -> int | None:
        return seed if seed is not None else database.get_int_setting("default_seed")

    def _finish(self, run_id: int | None, status: str, report) -> None:
        if run_id is None:
            return
        database.finish_run(run_id, status, report)
        report_export.save_run_report(run_id, report)

    def construct(
        self,
        n: int,
        k: int | str = "auto",
        alternative: bool = False,
        field_spec: str | None = None,
        seed: int | None = None,
        mu_exp: int = 1,
    ) -> dict:
        params = {
            "n": n,
            "k": k,
            "d_variant": "alternative" if alternative else "standard",
            "field": self._field(field_spec),
            "seed": self._seed(seed),
            "mu_exp": mu_exp,
        }
        run_id = database.create_run("construct", params)
        try:
            report, _ = main_family_with_data(
                n,
                field_spec=params["field"],
                k=k,
                d_variant=params["d_variant"],
                seed=params["seed"],
                mu_exp=mu_exp,
            )
        except (AlgebraError, ValueError) as e:
            logger.error(f"Построение n={n} не удалось: {e}", exc_info=True)
            self._finish(run_id, "error", {"params": params, "error": str(e)})
            return {"status": "error", "message": f"Построение не удалось: {e}", "run_id": run_id}
        self._finish(run_id, report["status"], report)
        summary = config.get_construction_summary_text(
            n, report["k"], report["field"], report["genus"], report["prank"], report["group_type"]
        )
        if report["status"] != "success":
            return {
                "status": "error",
                "message": f"{summary}\nНе выполнено: {', '.join(report['failed'])}",
                "run_id": run_id,
                "report": report,
            }
        return {"status": "success", "message": summary, "run_id": run_id, "report": report}

    def verify_lemmas(self, n: int, k: int | str = "auto", field_spec: str | None = None, seed: int | None = None) -> dict:
        params = {"n": n, "k": k, "field": self._field(field_spec), "seed": self._seed(seed)}
        run_id = database.create_run("verify-lemmas", params)
        try:
            action = setup_torsion(n, params["field"], seed=params["seed"])
            if k == "auto":
                k, _ = find_good_k(action)
            claims = verify_lemmas(action, int(k))
        except (AlgebraError, ValueError) as e:
            logger.error(f"Проверка лемм n={n} не удалась: {e}", exc_info=True)
            self._finish(run_id, "error", {"params": params, "error": str(e)})
            return {"status": "error", "message": f"Проверка лемм не удалась: {e}", "run_id": run_id}
        failed = [name for name, ok in claims.items() if not ok]
        status = "error" if failed else "success"
        if run_id is not None:
            database.add_claims(
                run_id,
                f"lemmas-n{n}",
                [
                    {"claim": name, "expected": True, "computed": ok, "status": "matched" if ok else "mismatched"}
                    for name, ok in claims.items()
                ],
            )
        self._finish(run_id, status, {"params": {**params, "k": k}, "claims": claims})
        message = f"Леммы n={n}, k={k}: выполнено {len(claims) - len(failed)} из {len(claims)}"
        if failed:
            message += f"\nНе выполнено: {', '.join(failed)}"
        return {"status": status, "message": message, "run_id": run_id, "claims": claims}

    def census(
        self,
        examples: list[str] | None = None,
        q: int | None = None,
        workers: int | None = None,
        field_spec: str | None = None,
    ) -> dict:
        examples = examples or list(EXAMPLES)
        unknown = [ex for ex in examples if ex not in EXAMPLES]
        if unknown:
            return {"status": "error", "message": f"Неизвестные примеры: {', '.join(unknown)}"}
        params = {"examples": examples, "q": q, "workers": workers or config.CENSUS_WORKERS, "field": field_spec}
        run_id = database.create_run("census", params)
        try:
            reports = run_census(examples, q=q, workers=params["workers"], field_spec=field_spec)
        except Exception as e:
            logger.error(f"Перепроверка завершилась ошибкой: {e}", exc_info=True)
            self._finish(run_id, "error", {"params": params, "error": str(e)})
            return {"status": "error", "message": f"Перепроверка не удалась: {e}", "run_id": run_id}
        payload = [rep.to_json() for rep in reports]
        if run_id is not None:
            for rep in reports:
                database.add_claims(run_id, rep.example, [c.to_json() for c in rep.claims])
        has_mismatch = any(rep.has_mismatch() for rep in reports)
        self._finish(run_id, "mismatched" if has_mismatch else "success", payload)
        counts: dict[str, int] = {}
        for rep in reports:
            for status, count in rep.counts().items():
                counts[status] = counts.get(status, 0) + count
        return {
            "status": "success",
            "message": config.get_run_summary_text(run_id or 0, "census", counts),
            "run_id": run_id,
            "has_mismatch": has_mismatch,
            "reports": payload,
        }

    def plane_model(
        self, n: int, k: int | str = "auto", alternative: bool = False, field_spec: str | None = None, mu_exp: int = 1
    ) -> dict:
        try:
            report, W = main_family_with_data(
                n,
                field_spec=self._field(field_spec),
                k=k,
                d_variant="alternative" if alternative else "standard",
                seed=self._seed(None),
                mu_exp=mu_exp,
            )
            F = eliminate_to_plane(ASExt(ELLIPTIC, W.e))
        except (AlgebraError, ValueError) as e:
            logger.error(f"Плоская модель n={n} не построена: {e}", exc_info=True)
            return {"status": "error", "message": f"Плоская модель не построена: {e}"}
        header = f"# field: {F.ctx.spec}\n# vars: {' '.join(F.names)}\n# n={n} k={report['k']} d={report['d_variant']}"
        return {"status": "success", "message": f"{header}\n{F.to_text()}", "degree": F.total_degree}

    def export_report(self, path: Path | str, run_id: int | None = None) -> dict:
        run = database.get_run(run_id) if run_id is not None else database.get_latest_run()
        if run is None:
            return {"status": "error", "message": "Запуск не найден."}
        run["claims"] = database.get_claims_for_run(run["run_id"])
        written = report_export.write_report_json(run, path)
        if written is None:
            return {"status": "error", "message": f"Не удалось записать отчёт в {path}"}
        return {"status": "success", "message": f"Отчёт по запуску #{run['run_id']} записан в {written}"}

    def update_setting(self, assignment: str) -> dict:
        key, sep, value = assignment.partition("=")
        if not sep or not key.strip():
            return {"status": "error", "message": f"Ожидалось key=value, получено {assignment!r}"}
        if not database.update_setting(key.strip(), value.strip() or None):
            return {"status": "error", "message": f"Настройка '{key.strip()}' не обновлена."}
        return {"status": "success", "message": f"Настройка '{key.strip()}' обновлена."}
