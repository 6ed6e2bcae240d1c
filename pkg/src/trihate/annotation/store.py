"""Append-only annotation record store.

Submissions append a JSON line per record; the live view applies
last-write-wins per (tweet, annotator) by timestamp. Writes and snapshot
reads are guarded by a lock so concurrent annotators cannot interleave a
partial line or observe a torn state.
"""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path
from typing import Optional

from ..corpus import Label
from .agreement import AnnotationRecord, live_records


class AnnotationStore:
    def __init__(self, path: Optional[str | Path] = None):
        self._path = Path(path) if path else None
        self._lock = threading.Lock()
        self._records: list[AnnotationRecord] = []
        if self._path and self._path.exists():
            self._replay()

    def _replay(self) -> None:
        with self._path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                self._records.append(
                    AnnotationRecord(
                        tweet_id=obj["tweet_id"],
                        annotator_id=obj["annotator_id"],
                        label=Label.parse(obj["label"]),
                        timestamp=float(obj["timestamp"]),
                    )
                )

    def submit(self, tweet_id: str, annotator_id: str, label: Label, timestamp: Optional[float] = None) -> AnnotationRecord:
        record = AnnotationRecord(
            tweet_id=tweet_id,
            annotator_id=annotator_id,
            label=label,
            timestamp=time.time() if timestamp is None else timestamp,
        )
        with self._lock:
            self._records.append(record)
            if self._path:
                self._path.parent.mkdir(parents=True, exist_ok=True)
                with self._path.open("a", encoding="utf-8") as fh:
                    fh.write(
                        json.dumps(
                            {
                                "tweet_id": record.tweet_id,
                                "annotator_id": record.annotator_id,
                                "label": record.label.value,
                                "timestamp": record.timestamp,
                            },
                            ensure_ascii=False,
                        )
                        + "\n"
                    )
        return record

    def snapshot(self) -> list[AnnotationRecord]:
        """Consistent copy of all appended records (superseded ones included)."""
        with self._lock:
            return list(self._records)

    def live(self) -> list[AnnotationRecord]:
        return live_records(self.snapshot())

    def labeled_ids(self, annotator_id: str) -> set[str]:
        return {r.tweet_id for r in self.snapshot() if r.annotator_id == annotator_id}

    def progress(self) -> dict[str, int]:
        counts: dict[str, set[str]] = {}
        for rec in self.snapshot():
            counts.setdefault(rec.annotator_id, set()).add(rec.tweet_id)
        return {annotator: len(ids) for annotator, ids in sorted(counts.items())}
