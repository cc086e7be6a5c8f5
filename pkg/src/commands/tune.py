from src.commands.common import emit
from src.config import load_experiment
from src.services.trial_service import TrialService
from src.utils.log import report_error, report_success, report_warning


def register(sub):
    p = sub.add_parser(
        "tune",
        help="grid-refine lr and l2 for the architectures on a search ledger's Pareto front",
    )
    p.add_argument("config", help="experiment config; the [tune] section sets the (lr, l2) grid")
    p.add_argument("--ledger", default=None, help="search ledger to refine and append to")
    p.add_argument("--points", type=int, default=None, help="grid points per dimension (overrides [tune] n)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument(
        "--stub-evaluator",
        action="store_true",
        help="score points by parameter count plus a fixed bowl instead of training",
    )
    p.set_defaults(func=run)


def run(args) -> int:
    config = load_experiment(args.config)
    if args.points is not None:
        config = config.model_copy(update={"tune": config.tune.model_copy(update={"n": args.points})})
    if args.seed is not None:
        config = config.model_copy(update={"search": config.search.model_copy(update={"seed": args.seed})})

    result = TrialService().tune(config, stub=args.stub_evaluator, ledger=args.ledger)
    if "error" in result:
        report_error(result["error"])
        return 1
    for warning in result["warnings"]:
        report_warning(warning)
    emit(result)
    if not result["success"]:
        report_error("every refinement point failed")
        return 2
    for refined in result["refined"]:
        best = refined["best"]
        if best:
            report_success(f"{refined['arch']}: lr={best['lr']:g} l2={best['l2']:g} loss={best['loss']:.6g}")
    return 0
