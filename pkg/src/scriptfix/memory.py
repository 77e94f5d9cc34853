"""Growing key-value memory of feedback, keyed by script embeddings.

Keys are unit-norm vectors from a deterministic bag-of-features hashing
embedder (or an external HTTP embedding service); values carry the source
script, the feedback text, and optionally the gold edit. The store is
append-only: records are never mutated or removed, ids are monotone.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass

import numpy as np
import requests

from .edits import EditCommand, parse_edit, serialize_edit
from .graph import Script, linearize, parse_dot, serialize_dot


class MemoryError_(ValueError):
    pass


def _stable_hash(feature: str) -> int:
    # hash() is salted per process; persistence needs process-stable indices
    return int.from_bytes(hashlib.blake2b(feature.encode("utf-8"), digest_size=8).digest(), "big")


def _unit_features(unit: str) -> list[str]:
    """Word unigrams and char trigrams of one text unit (goal or one label).

    Features never cross unit boundaries, so swapping two labels (a reorder
    edit) leaves the feature bag, and hence the embedding, unchanged.
    """
    text = " ".join(unit.lower().split())
    feats = [f"w:{w}" for w in text.split()]
    feats += [f"c:{text[i:i + 3]}" for i in range(len(text) - 2)]
    return feats


class HashingEmbedder:
    """Signed feature hashing into a fixed-dimension unit vector."""

    name = "hashing"

    def __init__(self, dimension: int = 1024):
        if dimension < 2:
            raise ValueError("dimension must be at least 2")
        self.dimension = dimension

    def script_units(self, s: Script) -> list[str]:
        units = [s.goal] if s.goal else []
        return units + linearize(s)

    def embed_script(self, s: Script) -> np.ndarray:
        vec = np.zeros(self.dimension, dtype=np.float64)
        for unit in self.script_units(s):
            for feat in _unit_features(unit):
                h = _stable_hash(feat)
                idx = h % self.dimension
                sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
                vec[idx] += sign
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise MemoryError_("cannot embed an empty script (no goal, no steps)")
        return vec / norm


class HttpEmbedder:
    """Client for an external embedding service (POST /embed)."""

    name = "http"

    def __init__(self, url: str, dimension: int, timeout: float = 10.0):
        self.url = url.rstrip("/")
        self.dimension = dimension
        self.timeout = timeout

    def embed_script(self, s: Script) -> np.ndarray:
        text = "\n".join(([s.goal] if s.goal else []) + linearize(s))
        resp = requests.post(f"{self.url}/embed", json={"texts": [text]}, timeout=self.timeout)
        resp.raise_for_status()
        vectors = resp.json()["vectors"]
        vec = np.asarray(vectors[0], dtype=np.float64)
        if vec.shape != (self.dimension,):
            raise MemoryError_(f"embedding service returned shape {vec.shape}, expected ({self.dimension},)")
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise MemoryError_("embedding service returned a zero vector")
        return vec / norm

    def healthy(self) -> bool:
        try:
            requests.post(f"{self.url}/embed", json={"texts": ["ping"]}, timeout=self.timeout).raise_for_status()
            return True
        except requests.RequestException:
            return False


@dataclass(frozen=True)
class MemoryRecord:
    id: int
    key_vector: np.ndarray
    source_script: Script
    feedback: str
    gold_edit: EditCommand | None
    created_at: float


@dataclass(frozen=True)
class LookupResult:
    record: MemoryRecord
    similarity: float


class FeedbackMemory:
    """Append-only feedback store with cosine-similarity lookup.

    Many readers, one writer: writes take a lock and, when a path is
    configured, append one JSON line and flush before returning, so every
    acknowledged write is on disk. Lookups scan a snapshot of the records.
    """

    def __init__(self, embedder=None, threshold: float = 0.9, path: str | None = None):
        self.embedder = embedder if embedder is not None else HashingEmbedder()
        self.threshold = threshold
        self.path = path
        self._records: list[MemoryRecord] = []
        self._lock = threading.Lock()
        if path and os.path.exists(path):
            self._replay(path)

    def __len__(self) -> int:
        return len(self._records)

    def records(self) -> list[MemoryRecord]:
        return list(self._records)

    def get(self, record_id: int) -> MemoryRecord:
        for rec in self._records:
            if rec.id == record_id:
                return rec
        raise KeyError(record_id)

    def write(
        self,
        script: Script,
        feedback: str,
        gold_edit: EditCommand | None = None,
        *,
        key_vector: np.ndarray | None = None,
    ) -> int:
        if not feedback.strip():
            raise MemoryError_("feedback must be non-empty")
        if key_vector is None:
            key_vector = self.embedder.embed_script(script)
        else:
            key_vector = np.asarray(key_vector, dtype=np.float64)
            if key_vector.shape != (self.embedder.dimension,):
                raise MemoryError_(
                    f"key vector has shape {key_vector.shape}, store dimension is {self.embedder.dimension}"
                )
        with self._lock:
            rec = MemoryRecord(
                id=len(self._records),
                key_vector=key_vector,
                source_script=script,
                feedback=feedback,
                gold_edit=gold_edit,
                created_at=time.time(),
            )
            self._records.append(rec)
            if self.path:
                self._append_line(rec)
            return rec.id

    def lookup(self, query: Script, threshold: float | None = None) -> LookupResult | None:
        """Best record with cosine similarity >= threshold; ties keep the
        lowest id. None when nothing clears the bar."""
        bar = self.threshold if threshold is None else threshold
        qvec = self.embedder.embed_script(query)
        best: LookupResult | None = None
        for rec in list(self._records):
            sim = float(np.dot(rec.key_vector, qvec))
            if sim >= bar and (best is None or sim > best.similarity):
                best = LookupResult(rec, sim)
        return best

    def lookup_k(self, query: Script, k: int) -> list[LookupResult]:
        """Top-k by similarity regardless of threshold (id breaks ties)."""
        if k < 1:
            raise ValueError("k must be positive")
        qvec = self.embedder.embed_script(query)
        scored = [LookupResult(rec, float(np.dot(rec.key_vector, qvec))) for rec in list(self._records)]
        scored.sort(key=lambda r: (-r.similarity, r.record.id))
        return scored[:k]

    # --- persistence: one JSON object per line, vectors included ---

    def _append_line(self, rec: MemoryRecord) -> None:
        line = json.dumps(
            {
                "id": rec.id,
                "created_at": rec.created_at,
                "script_dot": serialize_dot(rec.source_script),
                "feedback": rec.feedback,
                "edit": serialize_edit(rec.gold_edit) if rec.gold_edit else None,
                "vector": [float(v) for v in rec.key_vector],
            },
            ensure_ascii=False,
        )
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def save(self, path: str) -> None:
        with self._lock:
            old, self.path = self.path, path
            try:
                if os.path.exists(path):
                    os.remove(path)
                for rec in self._records:
                    self._append_line(rec)
            finally:
                self.path = old if old is not None else path

    def _replay(self, path: str) -> None:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    rec = MemoryRecord(
                        id=int(obj["id"]),
                        key_vector=np.asarray(obj["vector"], dtype=np.float64),
                        source_script=parse_dot(obj["script_dot"]),
                        feedback=obj["feedback"],
                        gold_edit=parse_edit(obj["edit"]) if obj.get("edit") else None,
                        created_at=float(obj["created_at"]),
                    )
                except (KeyError, ValueError) as exc:
                    raise MemoryError_(f"{path}:{lineno}: bad memory record: {exc}") from exc
                if rec.key_vector.shape != (self.embedder.dimension,):
                    raise MemoryError_(
                        f"{path}:{lineno}: vector dimension {rec.key_vector.shape[0]} != store dimension {self.embedder.dimension}"
                    )
                self._records.append(rec)

    @classmethod
    def load(cls, path: str, embedder=None, threshold: float = 0.9) -> "FeedbackMemory":
        """Open an existing store without re-embedding (vectors are stored)."""
        store = cls(embedder=embedder, threshold=threshold)
        store._replay(path)
        store.path = path
        return store
