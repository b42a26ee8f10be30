"""
GIANTWAVE Utility Helpers
=========================
Serialization, hashing and file output shared by the CLI and the library.
"""

import enum
import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from giantwave.common.errors import OutputError, ValidationError
from giantwave.common.logger import get_logger

log = get_logger(__file__)


# ============================================
# JSON Encoding
# ============================================

class GiantWaveJSONEncoder(json.JSONEncoder):
    """
    Custom JSON encoder that handles:
    - numpy scalars and arrays
    - complex numbers (as {"re", "im"})
    - enums, datetimes and sets
    """
    def default(self, obj):
        if isinstance(obj, (complex, np.complexfloating)):
            return {"re": float(obj.real), "im": float(obj.imag)}
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, enum.Enum):
            return obj.value
        if isinstance(obj, datetime):
            return obj.isoformat()
        if isinstance(obj, set):
            return sorted(obj)
        if hasattr(obj, "model_dump"):
            return obj.model_dump(mode="json")
        return super().default(obj)


def json_dumps(obj: Any, indent: int = 2) -> str:
    """Serialize object to JSON string with custom encoder (stable key order)."""
    return json.dumps(obj, cls=GiantWaveJSONEncoder, indent=indent, sort_keys=True)


def load_json_file(path: str | Path) -> dict:
    """
    Read a flat JSON object from disk.

    Raises:
        ValidationError: If the file is missing or not a JSON object
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ValidationError(f"Config file not found: {path}", handler="utility_helpers",
                              function="load_json_file", field="config")
    except json.JSONDecodeError as err:
        raise ValidationError(f"Config file {path} is not valid JSON: {err}", handler="utility_helpers",
                              function="load_json_file", field="config")

    if not isinstance(data, dict):
        raise ValidationError(f"Config file {path} must hold a JSON object", handler="utility_helpers",
                              function="load_json_file", field="config")
    return data


def require_fields(data: dict, *fields: str, function: str = "require_fields") -> None:
    """
    Raise ValidationError if any required fields are missing.

    Usage:
        require_fields(payload, 'n_points', 'omega0_tau0_pi')
    """
    missing = [f for f in fields if f not in data or data[f] is None]
    if missing:
        raise ValidationError(
            message=f"Missing required fields: {', '.join(missing)}",
            handler="utility_helpers",
            function=function,
            field=missing[0]
        )


# ============================================
# Hashing / Timestamps
# ============================================

def config_hash(payload: Any) -> str:
    """SHA-256 of the canonical JSON form of a payload."""
    canonical = json.dumps(payload, cls=GiantWaveJSONEncoder, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def get_iso_timestamp() -> str:
    """Get current UTC timestamp in ISO format."""
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


# ============================================
# File Output
# ============================================

def ensure_dir(path: str | Path) -> Path:
    """Create an output directory, raising OutputError when it is not writable."""
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise OutputError(f"Cannot create output directory: {err}", function="ensure_dir", path=str(path))
    return path


def write_csv(frame: pd.DataFrame, path: str | Path, index: bool = False) -> Path:
    """Write a DataFrame as CSV with round-trip float precision."""
    path = Path(path)
    try:
        frame.to_csv(path, index=index, float_format="%.17g")
    except OSError as err:
        raise OutputError(f"Failed to write CSV: {err}", function="write_csv", path=str(path))
    log.info(f"Wrote {len(frame)} rows to {path.name}")
    return path


def write_json(obj: Any, path: str | Path) -> Path:
    """Write an object as pretty JSON."""
    path = Path(path)
    try:
        path.write_text(json_dumps(obj) + "\n")
    except OSError as err:
        raise OutputError(f"Failed to write JSON: {err}", function="write_json", path=str(path))
    log.info(f"Wrote {path.name}")
    return path
