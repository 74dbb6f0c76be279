"""Search ceilings, overridable through ``FINALG_<NAME>_CEILING`` environment variables."""

import os

DEFAULTS = {
    "ENUMERATE": 8,
    "CONGRUENCE": 16,
    "SIP": 16,
    "AMALGAM_BOOLEAN": 16,
    "AMALGAM": 12,
    "FREE_DIM": 4096,
    "FREE_SIZE": 512,
    "SECTIONS": 200_000,
}


def ceiling(name, default=None):
    raw = os.environ.get(f"FINALG_{name}_CEILING")
    if raw is not None:
        return int(raw)
    return DEFAULTS.get(name, default)
