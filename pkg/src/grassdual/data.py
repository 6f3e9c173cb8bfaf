"""Access to the versioned JSON data files shipped in ``grassdual/data``."""
from __future__ import annotations

import json
import os
from pathlib import Path

DEFAULT_DIR = Path(__file__).with_name("data")


def data_dir(override=None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get("GRASSDUAL_DATA_DIR")
    return Path(env) if env else DEFAULT_DIR


def load(name: str, override=None) -> dict:
    path = data_dir(override) / name
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
