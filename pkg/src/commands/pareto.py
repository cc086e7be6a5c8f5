from src.commands.common import emit
from src.services.trial_service import TrialService
from src.utils.log import report_error, report_success, report_warning


def register(sub):
    p = sub.add_parser("pareto", help="write the loss/complexity Pareto front of a ledger")
    p.add_argument("ledger", help="trial ledger (.jsonl)")
    p.add_argument("out_csv", help="front as CSV; a gnuplot .dat file is written next to it")
    p.set_defaults(func=run)


def run(args) -> int:
    result = TrialService().export_pareto(args.ledger, args.out_csv)
    for warning in result.get("warnings", []):
        report_warning(warning)
    if not result["success"]:
        report_error(result["error"])
        return 1
    report_success(f"{result['rows']} front points -> {result['csv']}")
    emit(result)
    return 0
