import logging
from pathlib import Path

from src.exceptions import ImageFormatError
from src.imaging.patches import PatchSet, PatchSource
from src.imaging.ppm import load_ppm, save_ppm

logger = logging.getLogger(__name__)

MANIFEST = "manifest.txt"


class PatchRepository:
    """A PatchSet on disk: patch_00000.ppm, ... plus manifest.txt holding
    `seed <n>`, `size <n>` and one `file,row,col` provenance line per patch."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def save(self, patches: PatchSet):
        self.directory.mkdir(parents=True, exist_ok=True)
        lines = [f"seed {patches.seed}", f"size {patches.size}"]
        for i, (patch, source) in enumerate(zip(patches.patches, patches.source_ids)):
            save_ppm(patch, self.directory / f"patch_{i:05d}.ppm")
            lines.append(source.to_line())
        (self.directory / MANIFEST).write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.info("wrote %d patches to %s", len(patches), self.directory)

    def load(self) -> PatchSet:
        manifest = self.directory / MANIFEST
        try:
            lines = [ln for ln in manifest.read_text(encoding="utf-8").splitlines() if ln.strip()]
        except OSError as exc:
            raise ImageFormatError(f"cannot read {manifest}: {exc.strerror or exc}") from exc
        seed, size, body = 0, 32, []
        for line in lines:
            if line.startswith("seed "):
                seed = int(line.split()[1])
            elif line.startswith("size "):
                size = int(line.split()[1])
            else:
                body.append(PatchSource.from_line(line))
        patches = [load_ppm(self.directory / f"patch_{i:05d}.ppm") for i in range(len(body))]
        return PatchSet(patches=patches, source_ids=body, seed=seed, size=size)
