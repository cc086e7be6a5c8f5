from src.commands.common import add_pattern_arg, add_seed_arg, emit, resolve_seed, validated
from src.config import DataSection
from src.neuralnet.arch import PRESETS, ArchDescriptor, ConvKind, Schedule
from src.neuralnet.train import TrainConfig
from src.services.trial_service import TrialService
from src.utils.log import report_success


def arch_from_args(args) -> ArchDescriptor:
    if args.preset:
        return PRESETS[args.preset]
    return ArchDescriptor(
        filters=args.filters,
        blocks=args.blocks,
        conv_kind=ConvKind.parse(args.conv_kind),
        skip_length=args.skip_length,
        schedule=Schedule.parse(args.schedule),
    )


def register(sub):
    p = sub.add_parser("train", help="train one architecture end to end and save a checkpoint")
    arch = p.add_argument_group("architecture")
    arch.add_argument("--preset", choices=sorted(PRESETS), default=None, help="named reference architecture")
    arch.add_argument("--filters", type=int, default=16)
    arch.add_argument("--blocks", type=int, default=3)
    arch.add_argument("--conv-kind", default="standard", help="standard or depthwise_separable")
    arch.add_argument("--skip-length", type=int, default=1)
    arch.add_argument("--schedule", default="fixed", help="fixed or cosine")

    data = p.add_argument_group("data")
    data.add_argument("--train-patches", default=None, help="patch directory written by `patches`")
    data.add_argument("--valid-patches", default=None)
    data.add_argument("--source-dir", default=None, help="directory of .ppm sources to sample from")
    data.add_argument("--synthetic", action="store_true", help="sample from built-in synthetic images")
    data.add_argument("--n-train", type=int, default=64)
    data.add_argument("--n-valid", type=int, default=16)
    add_pattern_arg(data)

    opt = p.add_argument_group("optimization")
    opt.add_argument("--epochs", type=int, default=1)
    opt.add_argument("--lr", type=float, default=1e-4)
    opt.add_argument("--l2", type=float, default=1e-8)
    opt.add_argument("--batch-size", type=int, default=16)
    opt.add_argument("--optimizer", choices=["sgd", "adam"], default="sgd")
    opt.add_argument("--momentum", type=float, default=0.0)
    opt.add_argument("--max-steps", type=int, default=None)
    add_seed_arg(opt)

    p.add_argument("--out", required=True, help="checkpoint path")
    p.add_argument("--history", default=None, help="per-epoch history (.jsonl)")
    p.set_defaults(func=run)


def run(args) -> int:
    arch = arch_from_args(args)
    seed = resolve_seed(args)
    data = validated(
        DataSection,
        train_patches=args.train_patches,
        valid_patches=args.valid_patches,
        source_dir=args.source_dir,
        synthetic=args.synthetic,
        n_train=args.n_train,
        n_valid=args.n_valid,
        pattern=args.pattern,
    )
    cfg = validated(
        TrainConfig,
        lr=args.lr,
        l2=args.l2,
        epochs=args.epochs,
        batch_size=args.batch_size,
        seed=seed,
        optimizer=args.optimizer,
        momentum=args.momentum,
        max_steps=args.max_steps,
    )
    result = TrialService().train_one(arch, data, cfg, args.out, args.history)
    report_success(
        f"{arch.key}: CPSNR {result['initial_cpsnr']:.3f} -> {result['valid_cpsnr']:.3f} dB, saved {args.out}"
    )
    emit(result)
    return 0
