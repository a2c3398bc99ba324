import argparse
import logging
import sys

try:
    # ANSI colors on Windows terminals
    import colorama  # type: ignore
    colorama_available = True
except Exception:
    colorama_available = False

from nakajima_curves.data_manager import database


class ColoredFormatter(logging.Formatter):
    COLORS = {
        'DEBUG': '\x1b[36m',    # Cyan
        'INFO': '\x1b[32m',     # Green
        'WARNING': '\x1b[33m',  # Yellow
        'ERROR': '\x1b[31m',    # Red
        'CRITICAL': '\x1b[41m', # Red background
    }
    RESET = '\x1b[0m'

    def __init__(self):
        super().__init__(fmt="%(asctime)s [%(levelname)s] %(message)s", datefmt="%H:%M:%S")

    def format(self, record: logging.LogRecord) -> str:
        level = record.levelname
        color = self.COLORS.get(level, '')
        msg = super().format(record)
        if color:
            # only the [LEVEL] tag
            msg = msg.replace(f"[{level}]", f"{color}[{level}]{self.RESET}", 1)
        return msg


def setup_logging(verbose: bool = False) -> None:
    if colorama_available:
        try:
            colorama.just_fix_windows_console()
        except Exception:
            pass
    level = logging.DEBUG if verbose else logging.INFO
    root = logging.getLogger()
    root.setLevel(level)
    for h in list(root.handlers):
        root.removeHandler(h)
    ch = logging.StreamHandler()
    ch.setLevel(level)
    ch.setFormatter(ColoredFormatter())
    root.addHandler(ch)
    logging.getLogger('galois').setLevel(logging.WARNING)
    logging.getLogger('numba').setLevel(logging.WARNING)


def _k_value(text: str) -> int | str:
    if text == "auto":
        return text
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"k must be 'auto' or an odd integer, got {text!r}")
    if k % 2 == 0:
        raise argparse.ArgumentTypeError(f"k must be odd, got {k}")
    return k


def _power_of_two(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a power of two, got {text!r}")
    if n < 2 or n & (n - 1):
        raise argparse.ArgumentTypeError(f"expected a power of two, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nakajima-curves", description="Bielliptic curves in characteristic 2 with large 2-groups of automorphisms")
    parser.add_argument("--verbose", action="store_true", help="DEBUG-level logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build X_k for a point of order 2n and report genus, 2-rank and <rho, psi>")
    p.add_argument("--n", type=_power_of_two, required=True)
    p.add_argument("--k", type=_k_value, default="auto")
    p.add_argument("--alt-d", action="store_true", help="use the alternative d")
    p.add_argument("--field")
    p.add_argument("--seed", type=int)
    p.add_argument("--mu-exp", type=int, default=1, help="curve constant mu = gen^J")

    p = sub.add_parser("verify-lemmas", help="check every identity and divisor statement behind the construction")
    p.add_argument("--n", type=_power_of_two, required=True)
    p.add_argument("--k", type=_k_value, default="auto")
    p.add_argument("--field")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("census", help="recompute the worked examples")
    p.add_argument("--example", default="all", help="example id or 'all'")
    p.add_argument("--q", type=_power_of_two)
    p.add_argument("--workers", type=int)
    p.add_argument("--field")

    p = sub.add_parser("plane-model", help="print the plane model F(X, Z) of X_k")
    p.add_argument("--n", type=_power_of_two, required=True)
    p.add_argument("--k", type=_k_value, default="auto")
    p.add_argument("--alt-d", action="store_true")
    p.add_argument("--field")
    p.add_argument("--mu-exp", type=int, default=1)

    p = sub.add_parser("report", help="export a stored run as JSON")
    p.add_argument("--json", required=True, dest="path")
    p.add_argument("--run-id", type=int)
    p.add_argument("--archive", action="store_true", help="also zip the database with recent reports")

    p = sub.add_parser("settings", help="show or change runtime settings")
    p.add_argument("--set", dest="assignment", metavar="KEY=VALUE")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    logger = logging.getLogger(__name__)

    database.initialize_db()
    logger.debug("Проверка инициализации базы данных завершена.")

    # the controller pulls in galois; import after logging is configured
    from nakajima_curves.census_controller import CensusController
    from nakajima_curves.data_manager import report_export

    controller = CensusController()
    controller.apply_settings()

    if args.command == "construct":
        result = controller.construct(args.n, args.k, args.alt_d, args.field, args.seed, args.mu_exp)
    elif args.command == "verify-lemmas":
        result = controller.verify_lemmas(args.n, args.k, args.field, args.seed)
    elif args.command == "census":
        examples = None if args.example == "all" else [args.example]
        result = controller.census(examples, q=args.q, workers=args.workers, field_spec=args.field)
    elif args.command == "plane-model":
        result = controller.plane_model(args.n, args.k, args.alt_d, args.field, args.mu_exp)
        if result["status"] == "success":
            print(result["message"])
            return 0
    elif args.command == "report":
        result = controller.export_report(args.path, args.run_id)
        if result["status"] == "success" and args.archive:
            archive = report_export.create_reports_archive()
            if archive is None:
                result = {"status": "error", "message": "Не удалось создать архив отчётов."}
            else:
                result["message"] += f"\nАрхив: {archive}"
    else:
        if args.assignment:
            result = controller.update_setting(args.assignment)
        else:
            settings = database.get_all_settings()
            result = {"status": "success", "message": "\n".join(f"{k} = {v}" for k, v in settings.items())}

    if result["status"] == "success":
        logger.info(result["message"])
    else:
        logger.error(result["message"])
    if result["status"] != "success" or result.get("has_mismatch"):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
