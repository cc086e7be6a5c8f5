from src.baseline.bilinear import demosaic_bilinear
from src.commands.common import add_pattern_arg, emit
from src.config import settings
from src.exceptions import ConfigError
from src.imaging.bayer import DEFAULT_PATTERN, BayerPattern
from src.imaging.ppm import load_ppm, save_ppm
from src.neuralnet.inference import demosaic_net, plan_tiles
from src.storage.repositories.checkpoint_repo import CheckpointRepository
from src.utils.log import report_success


def parse_method(text: str) -> tuple[str, str | None]:
    """`bilinear` or `net:<checkpoint path>`."""
    if text == "bilinear":
        return "bilinear", None
    name, sep, checkpoint = text.partition(":")
    if name == "net" and sep and checkpoint:
        return "net", checkpoint
    raise ConfigError(f"bad --method {text!r}: use 'bilinear' or 'net:<checkpoint>'")


def register(sub):
    p = sub.add_parser("demosaic", help="reconstruct a full-colour image from a mosaic")
    p.add_argument("input", help="mosaic P6 image (zero-filled channels)")
    p.add_argument("output", help="reconstructed P6 image")
    p.add_argument(
        "--method",
        default="bilinear",
        help="'bilinear' or 'net:<checkpoint>'; the network path tiles the image into 32x32 cores",
    )
    add_pattern_arg(
        p,
        default=None,
        help="CFA layout of the input (default RGGB for bilinear, the checkpoint's pattern for net)",
    )
    p.set_defaults(func=run)


def run(args) -> int:
    method, checkpoint = parse_method(args.method)
    mosaic_img = load_ppm(args.input)
    report = {"success": True, "output": args.output, "method": method}
    if method == "bilinear":
        pattern = BayerPattern.parse(args.pattern or DEFAULT_PATTERN)
        out = demosaic_bilinear(mosaic_img, pattern)
    else:
        net = CheckpointRepository(checkpoint).load()
        pattern = net.pattern
        if args.pattern is not None and BayerPattern.parse(args.pattern) is not pattern:
            raise ConfigError(f"{checkpoint} was trained on {pattern.value} mosaics, not {args.pattern}")
        out = demosaic_net(net, mosaic_img)
        report["arch"] = net.arch.key
        report["tiles"] = len(plan_tiles(mosaic_img.height, mosaic_img.width, settings.PATCH_SIZE))
    report["pattern"] = pattern.value
    save_ppm(out, args.output)
    report_success(f"demosaiced {args.input} ({method}) -> {args.output}")
    emit(report)
    return 0
