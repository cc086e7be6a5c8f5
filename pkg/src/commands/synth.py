from src.commands.common import emit
from src.imaging.ppm import save_ppm
from src.imaging.synth import parse_kind, synth_image


def register(sub):
    p = sub.add_parser("synth", help="render a synthetic test image")
    p.add_argument(
        "kind",
        help="constant:<v>, zoneplate:<freq>, checker:<period> or affine:<a0,a1,a2>:<b0,b1,b2>:<c0,c1,c2>",
    )
    p.add_argument("output", help="P6 output image")
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--width", type=int, default=64)
    p.set_defaults(func=run)


def run(args) -> int:
    img = synth_image(parse_kind(args.kind), args.height, args.width)
    save_ppm(img, args.output)
    emit({"success": True, "output": args.output, "height": img.height, "width": img.width})
    return 0
