from src.commands.common import add_pattern_arg, emit
from src.imaging.bayer import BayerPattern, mosaic
from src.imaging.ppm import load_ppm, save_ppm
from src.utils.log import report_success


def register(sub):
    p = sub.add_parser("mosaic", help="sample a full-colour PPM through a Bayer CFA")
    p.add_argument("input", help="full-colour P6 image")
    p.add_argument("output", help="zero-filled mosaic P6 image")
    add_pattern_arg(p)
    p.set_defaults(func=run)


def run(args) -> int:
    img = load_ppm(args.input)
    pattern = BayerPattern.parse(args.pattern)
    save_ppm(mosaic(img, pattern), args.output)
    report_success(f"mosaiced {args.input} ({pattern.value}) -> {args.output}")
    emit({"success": True, "output": args.output, "pattern": pattern.value, "height": img.height, "width": img.width})
    return 0
