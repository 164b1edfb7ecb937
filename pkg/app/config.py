import os
from dotenv import load_dotenv
load_dotenv()


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


PIECE_CAP = _positive_int("SHARKTOWER_PIECE_CAP", 2 ** 20)
SWEEP_PIECE_CAP = _positive_int("SHARKTOWER_SWEEP_PIECE_CAP", 2 ** 16)
ITERATE_CACHE_PIECES = _positive_int("SHARKTOWER_ITERATE_CACHE_PIECES", 2 ** 21)
RESULT_CACHE_ENTRIES = _positive_int("SHARKTOWER_RESULT_CACHE_ENTRIES", 4096)
RANDOM_SEED = _positive_int("SHARKTOWER_SEED", 20240601)

LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
LOG_JSON = os.getenv("LOG_JSON", "").strip().lower() in ("1", "true", "yes", "on")
LOG_DIR = os.getenv("SHARKTOWER_LOG_DIR", "logs")

if SWEEP_PIECE_CAP > PIECE_CAP:
    raise ValueError("SHARKTOWER_SWEEP_PIECE_CAP must not exceed SHARKTOWER_PIECE_CAP")
