"""demosaic-nas command line.

Reports go to stdout as JSON; progress and errors go to stderr. Exit codes:
0 success, 1 usage or I/O error, 2 numerical failure.
"""
import argparse
import logging
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.commands import demosaic, evaluate, mosaic, pareto, patches, search, synth, train, tune
from src.config import settings
from src.exceptions import DemosaicError
from src.utils.log import report_error, setup_logging

logger = logging.getLogger(__name__)

COMMANDS = [mosaic, demosaic, evaluate, train, search, tune, pareto, synth, patches]


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Bayer demosaicing baselines, CNN training and architecture search.",
        epilog="DEMOSAIC_NAS_SEED overrides the default seed (0).",
    )
    p.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default from settings)")
    sub = p.add_subparsers(dest="cmd", required=True)
    for command in COMMANDS:
        command.register(sub)
    return p


def main(argv=None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level.upper() if args.log_level else None)
    try:
        return int(args.func(args))
    except DemosaicError as exc:
        report_error(str(exc))
        return exc.exit_code
    except KeyboardInterrupt:
        report_error("interrupted")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
