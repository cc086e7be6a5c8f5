import numpy as np
import pytest

from src.exceptions import DivergenceError, EmptyDatasetError
from src.imaging.bayer import BayerPattern
from src.imaging.patches import PatchSet, sample_patches
from src.neuralnet.arch import ArchDescriptor, ConvKind, Schedule
from src.neuralnet.network import build
from src.neuralnet.train import TrainConfig, mosaic_batch, train
from src.services.trial_service import synthetic_sources


def test_zero_epochs_returns_net_unchanged(small_patch_sets):
    train_set, valid_set = small_patch_sets
    net = build(ArchDescriptor(4, 3), seed=0)
    before = {k: v.copy() for k, v in net.state().items()}
    out, history = train(net, train_set, valid_set, TrainConfig(epochs=0))
    assert out is net
    assert len(history) == 0
    for k, v in net.state().items():
        np.testing.assert_array_equal(v, before[k])


def test_training_is_deterministic(small_patch_sets):
    train_set, valid_set = small_patch_sets
    cfg = TrainConfig(epochs=2, batch_size=4, lr=1e-3, seed=3)
    arch = ArchDescriptor(4, 3, ConvKind.SEPARABLE, 1, Schedule.COSINE)
    net_a, hist_a = train(build(arch, 1), train_set, valid_set, cfg)
    net_b, hist_b = train(build(arch, 1), train_set, valid_set, cfg)
    assert [r.to_dict() for r in hist_a] == [r.to_dict() for r in hist_b]
    for k, v in net_a.state().items():
        np.testing.assert_array_equal(v, net_b.state()[k])


def test_history_records(small_patch_sets):
    train_set, valid_set = small_patch_sets
    seen = []
    cfg = TrainConfig(epochs=3, batch_size=4, validate_every=2)
    _, history = train(build(ArchDescriptor(4, 3), 0), train_set, valid_set, cfg, on_epoch=seen.append)
    assert [r.epoch for r in history] == [1, 2, 3]
    assert seen == history.records
    assert history.records[0].valid_cpsnr is None
    assert history.records[1].valid_cpsnr is not None
    assert history.records[2].valid_cpsnr is not None
    assert history.last_valid_cpsnr == history.records[2].valid_cpsnr


def test_max_steps_stops_early(small_patch_sets):
    train_set, valid_set = small_patch_sets
    cfg = TrainConfig(epochs=10, batch_size=4, max_steps=3)
    _, history = train(build(ArchDescriptor(4, 3), 0), train_set, valid_set, cfg)
    # 8 patches in batches of 4: two steps per epoch
    assert len(history) == 2


def test_divergence_is_reported(small_patch_sets):
    train_set, valid_set = small_patch_sets
    cfg = TrainConfig(epochs=50, batch_size=4, lr=1e8)
    with pytest.raises(DivergenceError) as info:
        train(build(ArchDescriptor(4, 3), 0), train_set, valid_set, cfg)
    assert info.value.exit_code == 2


def test_empty_training_set(small_patch_sets):
    _, valid_set = small_patch_sets
    empty = PatchSet(patches=[], source_ids=[], seed=0, size=8)
    with pytest.raises(EmptyDatasetError):
        train(build(ArchDescriptor(4, 3), 0), empty, valid_set, TrainConfig())


def test_mosaic_batch_matches_pattern_masks(small_patch_sets):
    train_set, _ = small_patch_sets
    targets = train_set.stack()
    inputs = mosaic_batch(targets, BayerPattern.GRBG)
    mask = BayerPattern.GRBG.masks(8, 8).transpose(2, 0, 1)
    np.testing.assert_array_equal(inputs[0][mask], targets[0][mask])
    assert np.all(inputs[0][~mask] == 0.0)


@pytest.mark.slow
def test_smallest_network_overfits_eight_patches():
    """Adam at the default lr 1e-4 and l2 1e-8, not plain SGD: SGD at that rate
    barely moves a fresh network within 2000 steps."""
    patches = sample_patches(synthetic_sources(64), 8, size=32, seed=0)
    arch = ArchDescriptor(16, 3, ConvKind.SEPARABLE, 1, Schedule.FIXED)
    net = build(arch, seed=0)
    targets = patches.stack()
    inputs = mosaic_batch(targets)

    def training_mse():
        out = net.forward(inputs, "train", update_stats=False)
        return float(np.mean((out - targets) ** 2))

    initial = training_mse()
    cfg = TrainConfig(lr=1e-4, l2=1e-8, epochs=2000, batch_size=8, optimizer="adam", seed=0, validate_every=2000)
    train(net, patches, patches, cfg)
    assert training_mse() * 10 <= initial


def test_training_records_the_mosaic_pattern(small_patch_sets):
    train_set, valid_set = small_patch_sets
    net = build(ArchDescriptor(4, 3), seed=0)
    train(net, train_set, valid_set, TrainConfig(epochs=0), BayerPattern.BGGR)
    assert net.pattern is BayerPattern.BGGR
