import logging
import math
from pathlib import Path
from typing import Optional

from src.config import DataSection, ExperimentConfig, settings
from src.exceptions import ConfigError, DemosaicError, EmptyDatasetError
from src.imaging.bayer import BayerPattern
from src.imaging.patches import PatchSet, sample_patches
from src.imaging.ppm import load_ppm
from src.imaging.synth import Affine, Checkerboard, ZonePlate, synth_image
from src.neuralnet.arch import ArchDescriptor, count_params
from src.neuralnet.network import build
from src.neuralnet.train import TrainConfig, evaluate_patches, train
from src.search.exhaustive import best_from_ledger, exhaustive_search
from src.search.pareto import pareto_front
from src.search.space import enumerate_space
from src.search.tune import rate_grid, refine
from src.storage.repositories.checkpoint_repo import CheckpointRepository
from src.storage.repositories.history_repo import HistoryRepository
from src.storage.repositories.patch_repo import PatchRepository
from src.storage.repositories.trial_repo import TrialRepository

logger = logging.getLogger(__name__)


def stub_evaluate(arch: ArchDescriptor, lr: Optional[float] = None, l2: Optional[float] = None) -> tuple[float, float]:
    """Training-free evaluator: loss is the parameter count.

    Given lr or l2, a bowl in log10 space centred on lr 1e-4 and l2 1e-8 is
    added, so refinement has a known optimum.
    """
    loss = float(count_params(arch))
    if lr is not None:
        loss += (math.log10(lr) + 4.0) ** 2
    if l2 is not None:
        loss += (math.log10(l2) + 8.0) ** 2
    return loss, 0.0


def synthetic_sources(size: int) -> list:
    """Test-pattern images with edges, gradients and high frequencies."""
    return [
        synth_image(ZonePlate(0.02), size, size),
        synth_image(ZonePlate(0.08), size, size),
        synth_image(Checkerboard(4, 0.1, 0.9), size, size),
        synth_image(Affine((0.004, 0.001, 0.002), (0.002, 0.006, 0.001), (0.2, 0.3, 0.1)), size, size),
        synth_image(Affine((0.0, 0.005, -0.003), (0.007, 0.0, 0.004), (0.1, 0.4, 0.7)), size, size),
    ]


class TrialService:
    """Glue between the experiment config, the data on disk and the search."""

    # Data
    def load_data(self, data: DataSection, seed: int) -> tuple[PatchSet, PatchSet]:
        if data.train_patches and data.valid_patches:
            return (
                PatchRepository(data.train_patches).load(),
                PatchRepository(data.valid_patches).load(),
            )
        if data.source_dir:
            files = sorted(Path(data.source_dir).glob("*.ppm"))
            if not files:
                raise EmptyDatasetError(f"no .ppm files in {data.source_dir}")
            sources = [load_ppm(f) for f in files]
            names = [f.name for f in files]
        elif data.synthetic:
            sources = synthetic_sources(data.image_size)
            names = [f"synthetic{i}" for i in range(len(sources))]
        else:
            raise ConfigError("[data] needs train_patches/valid_patches, source_dir or synthetic = true")
        size = settings.PATCH_SIZE
        return (
            sample_patches(sources, data.n_train, size, seed, names),
            sample_patches(sources, data.n_valid, size, seed + 1, names),
        )

    # Evaluation
    def make_evaluator(self, train_set: PatchSet, valid_set: PatchSet, cfg: TrainConfig, pattern: BayerPattern):
        """(arch, lr, l2) -> (-CPSNR, standard error) after training from scratch.

        lr and l2 default to the ones in `cfg`.
        """

        def evaluate(arch: ArchDescriptor, lr: Optional[float] = None, l2: Optional[float] = None):
            overrides = {k: v for k, v in (("lr", lr), ("l2", l2)) if v is not None}
            run_cfg = cfg.model_copy(update=overrides) if overrides else cfg
            net = build(arch, run_cfg.seed)
            net, _ = train(net, train_set, valid_set, run_cfg, pattern)
            report = evaluate_patches(net, valid_set, pattern, run_cfg.batch_size)
            return -report.cpsnr, report.std_error

        return evaluate

    def _evaluator(self, config: ExperimentConfig, stub: bool):
        if stub or config.search.stub:
            return stub_evaluate
        cfg = TrainConfig(**config.train.model_dump(), seed=config.seed)
        pattern = BayerPattern.parse(config.data.pattern)
        train_set, valid_set = self.load_data(config.data, config.seed)
        return self.make_evaluator(train_set, valid_set, cfg, pattern)

    def _ledger(self, config: ExperimentConfig, ledger: Optional[str]) -> TrialRepository:
        return TrialRepository(ledger or config.search.ledger or settings.LEDGER_PATH)

    # Search
    def run_search(
        self,
        config: ExperimentConfig,
        stub: bool = False,
        jobs: Optional[int] = None,
        ledger: Optional[str] = None,
    ) -> dict:
        space = enumerate_space(
            config.space.filters,
            config.space.blocks,
            config.space.conv_kinds,
            config.space.skip_lengths,
            config.space.schedules,
        )
        repo = self._ledger(config, ledger)
        logger.info("searching %d architectures, ledger %s", len(space), repo.path)
        evaluate = self._evaluator(config, stub)

        incumbent, trials = exhaustive_search(
            space,
            evaluate,
            budget=config.search.budget,
            repo=repo,
            jobs=jobs or config.search.jobs,
            seed=config.seed,
        )
        warnings = list(repo.warnings)
        # selection re-scans the ledger, independent of completion order
        best = best_from_ledger(repo, [t.key for t in trials])
        if best is not None and incumbent is not None and best.key != incumbent.key:
            logger.warning("ledger best %s differs from running incumbent %s", best.key, incumbent.key)
        return {
            "success": best is not None,
            "best": best.to_dict() if best else None,
            "evaluated": len(trials),
            "failed": [t.key for t in trials if not t.ok],
            "ledger": str(repo.path),
            "ledger_stats": self.get_stats(repo.path),
            "warnings": warnings,
        }

    def tune(self, config: ExperimentConfig, stub: bool = False, ledger: Optional[str] = None) -> dict:
        """Grid-refine lr and l2 for every architecture on the ledger's Pareto front."""
        repo = self._ledger(config, ledger)
        if not repo.exists():
            return {"success": False, "error": f"ledger {repo.path} not found; run search first"}
        searched = [t for t in repo.get_latest_by_key().values() if not t.refined]
        try:
            front = pareto_front(searched)
        except DemosaicError as exc:
            return {"success": False, "error": str(exc)}
        spec = rate_grid(config.tune.lr, config.tune.l2, config.tune.n, config.tune.log)
        logger.info("refining %d front architectures over %d (lr, l2) points each", len(front), spec.size)
        evaluate = self._evaluator(config, stub)
        refinements = refine([t.arch for t in front], spec, evaluate, repo=repo, seed=config.seed)
        return {
            "success": any(r.best is not None for r in refinements),
            "refined": [r.to_dict() for r in refinements],
            "ledger": str(repo.path),
            "ledger_stats": self.get_stats(repo.path),
            "warnings": list(repo.warnings),
        }

    def export_pareto(self, ledger: str, out_csv: str) -> dict:
        repo = TrialRepository(ledger)
        if not repo.exists():
            return {"success": False, "error": f"ledger {ledger} not found"}
        trials = list(repo.get_latest_by_key().values())
        try:
            front = pareto_front(trials)
        except DemosaicError as exc:
            return {"success": False, "error": str(exc)}
        out = Path(out_csv)
        front.to_csv(out)
        dat = out.with_suffix(".dat")
        front.to_gnuplot(dat)
        return {
            "success": True,
            "rows": len(front),
            "csv": str(out),
            "dat": str(dat),
            "warnings": list(repo.warnings),
        }

    # Single trial
    def train_one(
        self,
        arch: ArchDescriptor,
        data: DataSection,
        cfg: TrainConfig,
        checkpoint: str,
        history: Optional[str] = None,
    ) -> dict:
        pattern = BayerPattern.parse(data.pattern)
        train_set, valid_set = self.load_data(data, cfg.seed)
        net = build(arch, cfg.seed)
        initial = evaluate_patches(net, valid_set, pattern, cfg.batch_size)
        history_repo = HistoryRepository(history) if history else None
        net, records = train(
            net, train_set, valid_set, cfg, pattern,
            on_epoch=history_repo.append if history_repo else None,
        )
        final = evaluate_patches(net, valid_set, pattern, cfg.batch_size)
        CheckpointRepository(checkpoint).save(net)
        return {
            "success": True,
            "arch": arch.key,
            "pattern": pattern.value,
            "complexity": count_params(arch),
            "initial_cpsnr": initial.cpsnr,
            "valid_cpsnr": final.cpsnr,
            "std_error": final.std_error,
            "epochs": len(records),
            "checkpoint": str(checkpoint),
        }

    # Ledger stats
    def get_stats(self, ledger) -> dict:
        latest = TrialRepository(ledger).get_latest_by_key()
        ok = [t for t in latest.values() if t.ok]
        return {
            "trials": len(latest),
            "completed": len(ok),
            "failed": len(latest) - len(ok),
            "refined": sum(1 for t in latest.values() if t.refined),
        }
