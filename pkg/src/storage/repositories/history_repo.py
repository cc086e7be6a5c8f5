import json
from pathlib import Path
from typing import List

from src.storage.connection import open_ledger
from src.storage.models import HistoryRecord


class HistoryRepository:
    def __init__(self, path):
        self.path = Path(path)

    def append(self, record: HistoryRecord):
        with open_ledger(self.path) as fh:
            fh.write(record.to_json() + "\n")

    def get_all(self) -> List[HistoryRecord]:
        if not self.path.exists():
            return []
        with open(self.path, encoding="utf-8") as fh:
            return [HistoryRecord.from_dict(json.loads(line)) for line in fh if line.strip()]
