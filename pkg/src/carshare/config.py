"""Runtime configuration from defaults, an optional JSON file, and environment.

Precedence: environment variables override the config file, which
overrides defaults. All recognized keys and their ``CARSHARE_*`` variables
are documented in the README.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

_ENV_PREFIX = "CARSHARE_"

_ENV_KEYS = {
    "db_path": "CARSHARE_DB",
    "host": "CARSHARE_HOST",
    "port": "CARSHARE_PORT",
    "scrypt_n": "CARSHARE_SCRYPT_N",
    "scrypt_r": "CARSHARE_SCRYPT_R",
    "scrypt_p": "CARSHARE_SCRYPT_P",
    "session_ttl_hours": "CARSHARE_SESSION_TTL_HOURS",
    "confirm_ttl_hours": "CARSHARE_CONFIRM_TTL_HOURS",
    "admin_token": "CARSHARE_ADMIN_TOKEN",
}


@dataclass(frozen=True)
class Config:
    db_path: str = "carshare.db"
    host: str = "127.0.0.1"
    port: int = 8000
    # scrypt cost parameters; memory use is 128 * n * r bytes per hash
    scrypt_n: int = 16384
    scrypt_r: int = 8
    scrypt_p: int = 1
    session_ttl_hours: float = 24.0
    confirm_ttl_hours: float = 24.0
    admin_token: str | None = None

    @classmethod
    def load(cls, config_file: str | Path | None = None, env=os.environ) -> "Config":
        cfg = cls()
        if config_file is not None:
            data = json.loads(Path(config_file).read_text("utf-8"))
            unknown = set(data) - {f.name for f in fields(cls)}
            if unknown:
                raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
            cfg = replace(cfg, **data)
        overrides = {}
        for field_name, env_key in _ENV_KEYS.items():
            raw = env.get(env_key)
            if raw is None:
                continue
            overrides[field_name] = _coerce(cls, field_name, raw)
        return replace(cfg, **overrides) if overrides else cfg


def _coerce(cls, field_name: str, raw: str):
    target = {f.name: f.type for f in fields(cls)}[field_name]
    if field_name in ("port", "scrypt_n", "scrypt_r", "scrypt_p"):
        return int(raw)
    if field_name in ("session_ttl_hours", "confirm_ttl_hours"):
        return float(raw)
    return raw
