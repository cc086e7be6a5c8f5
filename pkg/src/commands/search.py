from src.commands.common import emit
from src.config import load_experiment
from src.services.trial_service import TrialService
from src.utils.log import report_error, report_success, report_warning


def register(sub):
    p = sub.add_parser("search", help="exhaustive architecture search driven by a TOML config")
    p.add_argument("config", help="experiment config with [space], [train], [data] and [search] sections")
    p.add_argument("--jobs", type=int, default=None, help="parallel trial evaluations")
    p.add_argument("--budget", type=int, default=None, help="evaluate only the first N points")
    p.add_argument("--ledger", default=None, help="trial ledger (.jsonl); resumed if it exists")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument(
        "--stub-evaluator",
        action="store_true",
        help="score trials by parameter count instead of training",
    )
    p.set_defaults(func=run)


def run(args) -> int:
    config = load_experiment(args.config)
    overrides = {k: v for k, v in (("budget", args.budget), ("seed", args.seed)) if v is not None}
    if overrides:
        config = config.model_copy(update={"search": config.search.model_copy(update=overrides)})

    result = TrialService().run_search(config, stub=args.stub_evaluator, jobs=args.jobs, ledger=args.ledger)
    for warning in result["warnings"]:
        report_warning(warning)
    for key in result["failed"]:
        report_warning(f"trial {key} failed")
    emit(result)
    if not result["success"]:
        report_error("no trial completed")
        return 2
    best = result["best"]
    report_success(f"{result['evaluated']} trials, best {best['arch']} loss={best['loss']:.6g}")
    return 0
