"""Runtime configuration.

One flat key=value file ('#' comments, blank lines ignored); every key can
also be set by environment variable as SCRIPTFIX_<KEY-uppercased>, which wins
over the file. Unknown keys in the file are rejected so typos surface.

Keys (all optional):
    memory_path            JSONL file backing the feedback memory
    similarity_threshold   lookup acceptance bar (default 0.9)
    embedding_backend      hashing | http (default hashing)
    embedding_dim          vector width (default 1024)
    embedding_url          base URL of the external embedding service
    external_corrector_url base URL of the external model corrector
    default_corrector      noop | keyword | retrieval | external
    distractor_k           neighbor rank for distractor feedback (default 4)
    host, port             bind address for serve (default 127.0.0.1:8517)
    cors                   true | false (default true)
    http_timeout           seconds for outbound calls (default 15)
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields


@dataclass
class Config:
    memory_path: str | None = None
    similarity_threshold: float = 0.9
    embedding_backend: str = "hashing"
    embedding_dim: int = 1024
    embedding_url: str | None = None
    external_corrector_url: str | None = None
    default_corrector: str = "keyword"
    distractor_k: int = 4
    host: str = "127.0.0.1"
    port: int = 8517
    cors: bool = True
    http_timeout: float = 15.0


_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def _coerce(name: str, kind: type, raw: str):
    raw = raw.strip()
    if kind is bool or name == "cors":
        if raw.lower() not in _BOOL:
            raise ValueError(f"config key {name!r}: {raw!r} is not a boolean")
        return _BOOL[raw.lower()]
    if name in ("port", "embedding_dim", "distractor_k"):
        return int(raw)
    if name in ("similarity_threshold", "http_timeout"):
        return float(raw)
    return raw or None


def load_config(path: str | None = None, env: dict | None = None) -> Config:
    """Build a Config from defaults, then the file, then the environment."""
    env = os.environ if env is None else env
    cfg = Config()
    known = {f.name: f.type for f in fields(Config)}
    if path:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key = value")
                key, _, value = line.partition("=")
                key = key.strip().lower()
                if key not in known:
                    raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
                setattr(cfg, key, _coerce(key, known[key], value))
    for key in known:
        var = f"SCRIPTFIX_{key.upper()}"
        if var in env:
            setattr(cfg, key, _coerce(key, known[key], env[var]))
    return cfg
