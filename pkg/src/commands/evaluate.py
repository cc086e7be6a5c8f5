from pathlib import Path

from src.commands.common import emit
from src.exceptions import DimensionMismatchError, EmptyDatasetError
from src.imaging.ppm import load_ppm
from src.metrics.scores import cpsnr_report
from src.utils.log import report_success


def pair_files(refs_dir, ests_dir) -> list[tuple[Path, Path]]:
    """Match references and estimates by file name."""
    refs = {p.name: p for p in sorted(Path(refs_dir).glob("*.ppm"))}
    ests = {p.name: p for p in sorted(Path(ests_dir).glob("*.ppm"))}
    if not refs:
        raise EmptyDatasetError(f"no .ppm files in {refs_dir}")
    missing = sorted(set(refs) ^ set(ests))
    if missing:
        raise DimensionMismatchError(f"unpaired images: {', '.join(missing)}")
    return [(refs[name], ests[name]) for name in refs]


def register(sub):
    p = sub.add_parser("evaluate", aliases=["eval"], help="CPSNR of estimates against references")
    p.add_argument("refs_dir", help="directory of reference .ppm images")
    p.add_argument("ests_dir", help="directory of estimates with the same file names")
    p.add_argument("--peak", type=float, default=1.0, help="peak signal value (default 1.0)")
    p.set_defaults(func=run)


def run(args) -> int:
    pairs = pair_files(args.refs_dir, args.ests_dir)
    report = cpsnr_report([load_ppm(r) for r, _ in pairs], [load_ppm(e) for _, e in pairs], args.peak)
    report_success(f"{report.n_images} images: CPSNR {report.cpsnr:.4f} dB +/- {report.std_error:.4f}")
    emit(report.to_json())
    return 0
