import logging
import os
import threading
from contextlib import contextmanager
from pathlib import Path
from typing import Generator, TextIO

# One lock per ledger path so concurrent writers in a process serialize.
_locks: dict[str, threading.Lock] = {}
_locks_guard = threading.Lock()

logger = logging.getLogger(__name__)


def _lock_for(path: Path) -> threading.Lock:
    key = str(path.resolve())
    with _locks_guard:
        return _locks.setdefault(key, threading.Lock())


def repair_torn_tail(path: Path) -> bool:
    """Drop an unterminated final line left by an interrupted write."""
    if not path.exists() or path.stat().st_size == 0:
        return False
    with open(path, "r+b") as fh:
        fh.seek(-1, os.SEEK_END)
        if fh.read(1) == b"\n":
            return False
        fh.seek(0)
        data = fh.read()
        keep = data.rfind(b"\n") + 1
        fh.truncate(keep)
    logger.warning("%s: dropped torn final record (%d bytes)", path, len(data) - keep)
    return True


@contextmanager
def open_ledger(path) -> Generator[TextIO, None, None]:
    """Append handle on a line-delimited ledger.

    Commits (flush + fsync) on clean exit; on error the file is truncated back
    to its size on entry so a half-written record never survives.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with _lock_for(path):
        repair_torn_tail(path)
        fh = open(path, "a", encoding="utf-8", newline="\n")
        start = fh.tell()
        try:
            yield fh
            fh.flush()
            os.fsync(fh.fileno())
        except Exception:
            fh.flush()
            fh.truncate(start)
            raise
        finally:
            fh.close()
