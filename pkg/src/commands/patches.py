from pathlib import Path

from src.commands.common import add_seed_arg, emit, resolve_seed
from src.config import settings
from src.imaging.patches import sample_patches
from src.imaging.ppm import load_ppm
from src.storage.repositories.patch_repo import PatchRepository
from src.utils.log import report_success


def register(sub):
    p = sub.add_parser("patches", help="sample a reproducible patch set from source images")
    p.add_argument("sources", nargs="+", help="source .ppm images")
    p.add_argument("--count", type=int, required=True, help="number of patches")
    p.add_argument("--size", type=int, default=settings.PATCH_SIZE, help="patch side (default 32)")
    p.add_argument("--out", required=True, help="output directory")
    add_seed_arg(p)
    p.set_defaults(func=run)


def run(args) -> int:
    seed = resolve_seed(args)
    paths = [Path(s) for s in args.sources]
    patch_set = sample_patches([load_ppm(p) for p in paths], args.count, args.size, seed, [p.name for p in paths])
    PatchRepository(args.out).save(patch_set)
    report_success(f"{len(patch_set)} patches of {args.size}x{args.size} -> {args.out}")
    emit({"success": True, "count": len(patch_set), "size": args.size, "seed": seed, "out": args.out})
    return 0
