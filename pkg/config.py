"""Configuration for the QAP solver: environment overrides and algorithm defaults."""
import os
import re

from dotenv import load_dotenv

load_dotenv()

QAP_WORKERS = os.getenv("QAP_WORKERS", "")
QAP_MEM_CAP = os.getenv("QAP_MEM_CAP", "")
QAP_LOG_LEVEL = os.getenv("QAP_LOG_LEVEL", "WARNING")
QAP_CHECKPOINT_INTERVAL = float(os.getenv("QAP_CHECKPOINT_INTERVAL", "300"))

# Dual ascent (K is a fraction of UB; progress = LB'/UB)
DEFAULT_K = 1e-5
DEFAULT_MAX_ITERS = 200
NONNEG_TOL = 1e-9
PRUNE_EPS = 1e-6

# Branch-and-bound
DEFAULT_SB_ITERS = 1
DEFAULT_WARM_DEPTH = 2

# Linear assignment: auction scales integral-multiple-of-2^-20 costs to integers
AUCTION_SCALE = 2 ** 20

# Entries per LAP batch and per D complement-transfer chunk
LAP_CHUNK_ENTRIES = 2 ** 20
TRANSFER_CHUNK_ENTRIES = 2 ** 18

# Chunk-sized float/index arrays alive at once during a LAP batch or a D transfer
LAP_CHUNK_ARRAYS = 4
TRANSFER_CHUNK_ARRAYS = 24

# One 8-byte value per tensor entry, plus bookkeeping
MEMORY_OVERHEAD_FACTOR = 1.25

CHECKPOINT_FORMAT_VERSION = 1
REPORT_SCHEMA_VERSION = 1

_UNITS = {"": 1, "B": 1, "K": 1024, "KB": 1024, "M": 1024 ** 2, "MB": 1024 ** 2,
          "G": 1024 ** 3, "GB": 1024 ** 3, "T": 1024 ** 4, "TB": 1024 ** 4}


def parse_bytes(text: str) -> int:
    """Parse '1GB', '512M', '2048' into a byte count."""
    m = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*([A-Za-z]*)\s*", text or "")
    if not m or m.group(2).upper() not in _UNITS:
        raise ValueError(f"invalid byte size: {text!r}")
    return int(float(m.group(1)) * _UNITS[m.group(2).upper()])


def get_workers() -> int:
    """Worker threads for branch-and-bound (QAP_WORKERS, else all cores)."""
    if QAP_WORKERS.strip():
        return max(1, int(QAP_WORKERS))
    return os.cpu_count() or 1


def get_mem_cap() -> int | None:
    """Tensor memory cap in bytes (QAP_MEM_CAP), or None when unlimited."""
    return parse_bytes(QAP_MEM_CAP) if QAP_MEM_CAP.strip() else None
