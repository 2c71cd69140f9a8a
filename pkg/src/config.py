import json
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

ROOT = Path(__file__).resolve().parent.parent
DEFAULT_SETTINGS_FILE = ROOT / "config" / "settings.json"


@dataclass(frozen=True)
class Settings:
    max_n: int = 9
    bound: int = 9
    jobs: int = 1
    cache_dir: Optional[str] = ".princrep-cache"
    max_partition_elements: int = 8
    log_level: str = "INFO"
    log_format: str = "%(levelname)s %(name)s: %(message)s"
    trace_dir: str = "traces"


def _env_int(name: str, fallback: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return fallback
    return int(raw)


@lru_cache(maxsize=None)
def load_settings(path: Optional[str] = None) -> Settings:
    """Read config/settings.json, then let PRINCREP_* environment variables win."""
    load_dotenv()

    settings_file = Path(path) if path else DEFAULT_SETTINGS_FILE
    data: Dict[str, Any] = {}
    if settings_file.exists():
        with open(settings_file, "r") as f:
            data = json.load(f)

    enumeration = data.get("enumeration", {})
    oracle = data.get("oracle", {})
    logging_cfg = data.get("logging", {})

    cache_dir = os.getenv("PRINCREP_CACHE_DIR", enumeration.get("cache_dir"))
    if cache_dir is not None and cache_dir.strip() == "":
        cache_dir = None

    return Settings(
        max_n=_env_int("PRINCREP_MAX_N", enumeration.get("max_n", 9)),
        bound=enumeration.get("bound", 9),
        jobs=_env_int("PRINCREP_JOBS", enumeration.get("jobs", 1)),
        cache_dir=cache_dir,
        max_partition_elements=oracle.get("max_partition_elements", 8),
        log_level=os.getenv("PRINCREP_LOG_LEVEL", logging_cfg.get("level", "INFO")).upper(),
        log_format=logging_cfg.get("format", Settings.log_format),
        trace_dir=os.getenv("PRINCREP_TRACE_DIR", data.get("trace_dir", "traces")),
    )
